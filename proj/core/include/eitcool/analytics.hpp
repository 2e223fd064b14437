#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "eitcool/nv_model.hpp"
#include "eitcool/operator_core.hpp"

namespace eitcool {

struct RateReport {
    double a_plus = 0.0;
    double a_minus = 0.0;
    double w = 0.0;
    double n_ss = 0.0;  // NaN when W + γ_m <= 0
    double thermal_n = 0.0;
};

enum class SpectrumKind { complex_response, absorption };

struct SpectrumSeries {
    std::vector<double> omegas;
    std::vector<cplx> values;
    SpectrumKind kind = SpectrumKind::complex_response;

    // Throws DomainError unless omegas is strictly increasing and sizes match.
    void validate() const;
};

// Bose occupation of a mode at omega (rad/s) and temperature (K).
double thermal_occupation(double omega, double temperature);

// ∫dt e^{iωt} <σ_y(t) σ_y(0)> for the A2-dark coherence, closed form.
cplx correlation_transform(const ModelParams& params, double omega);
cplx fluctuation_spectrum(const ModelParams& params, double omega);
SpectrumSeries fluctuation_spectrum(const ModelParams& params, std::span<const double> omegas);

RateReport rates(const ModelParams& params);
RateReport rates_at_optimum(double m_r, double gamma_total, double eta);

struct SteadyPhonon {
    double n_ss;
    // Split valid at the optimum detuning: back-action (Γ/4Δ)² plus N γ_m / W.
    std::optional<double> backaction;
    std::optional<double> thermal;
};

SteadyPhonon steady_phonon(const ModelParams& params, const RateReport& rates);

double analytic_trajectory(const RateReport& rates, double gamma_m, double thermal_n, double t);

struct RateTrajectory {
    std::vector<double> times;
    std::vector<double> mean_n;
    std::vector<std::vector<double>> probabilities;  // [time][n]
    double max_top_population = 0.0;
};

struct RateEquationOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    double leakage_limit = 1e-6;
};

RateTrajectory rate_equation_evolve(double a_plus, double a_minus, double gamma_m, double thermal_n,
                                    std::span<const double> p0, std::span<const double> t_grid,
                                    std::size_t n_max, const RateEquationOptions& options = {});

// Stationary distribution by a direct solve of the birth-death generator.
std::vector<double> rate_equation_stationary(double a_plus, double a_minus, double gamma_m, double thermal_n,
                                             std::size_t n_max);

// Bloch variables (ρ_bb, ρ_dd, σx^{bd}, σy^{bd}, σx^{A2,b}, σy^{A2,b}, σx^{A2,d}, σy^{A2,d}):
// dx/dt = M x + c for the internal three-level system in the bright/dark basis.
struct BlochSystem {
    Eigen::Matrix<double, 8, 8> m;
    Eigen::Matrix<double, 8, 1> c;
};

BlochSystem bloch_system(const ModelParams& params);
// Three-level internal state on {+1, -1, A2}.
DensityMatrix bloch_steady_state(const ModelParams& params);
// Internal density matrix from Bloch variables, basis {+1, -1, A2}.
Matrix bloch_to_density(const Eigen::Matrix<double, 8, 1>& x);

enum class TransformMethod { resolvent, quadrature };

struct QuadratureReport {
    cplx value;
    double tail_bound;
    double t_end;
    std::size_t steps;
};

cplx correlation_transform_numeric(const ModelParams& params, double omega,
                                   TransformMethod method = TransformMethod::resolvent);
std::vector<cplx> correlation_transform_numeric(const ModelParams& params, std::span<const double> omegas,
                                                TransformMethod method = TransformMethod::resolvent);
// Quadrature path with its tail diagnostics.
std::vector<QuadratureReport> correlation_transform_quadrature(const ModelParams& params,
                                                               std::span<const double> omegas, double step = 2e-3,
                                                               double tail_tol = 1e-12);

// Weak-probe absorption of the σ⁺ transition against probe detuning, normalized
// so an isolated two-level line peaks at 1.
SpectrumSeries absorption_spectrum(const ModelParams& params, std::span<const double> probe_detunings);

}  // namespace eitcool
