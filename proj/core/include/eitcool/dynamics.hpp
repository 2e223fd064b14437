#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eitcool/nv_model.hpp"
#include "eitcool/operator_core.hpp"

namespace eitcool {

struct SolverStats {
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    std::size_t steps = 0;
    std::size_t rhs_evaluations = 0;
    double max_hermiticity_residual = 0.0;
    double max_trace_error = 0.0;
    double max_leakage = 0.0;
    std::optional<double> min_eigenvalue;  // over positivity checkpoints
    double wall_seconds = 0.0;
};

class TimeSeries {
public:
    TimeSeries(std::vector<double> times, std::vector<std::string> names, std::vector<std::vector<double>> records,
               std::vector<double> leakage, SolverStats meta = {});

    const std::vector<double>& times() const noexcept { return times_; }
    const std::vector<std::string>& names() const noexcept { return names_; }
    // records()[i][k] is observable names()[k] at times()[i]; includes "trace".
    const std::vector<std::vector<double>>& records() const noexcept { return records_; }
    const std::vector<double>& leakage() const noexcept { return leakage_; }
    const SolverStats& meta() const noexcept { return meta_; }
    SolverStats& meta() noexcept { return meta_; }

    std::size_t size() const noexcept { return times_.size(); }
    std::size_t column_index(std::string_view name) const;
    std::vector<double> column(std::string_view name) const;
    double value(std::size_t sample, std::string_view name) const;

private:
    std::vector<double> times_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> records_;
    std::vector<double> leakage_;
    SolverStats meta_;
};

struct EvolveOptions {
    double rel_tol = 1e-7;
    double abs_tol = 1e-9;
    double leakage_threshold = 1e-4;
    // Number of evenly spaced samples at which the spectrum of ρ is checked.
    std::size_t positivity_checkpoints = 0;
    double positivity_floor = -1e-6;
    // Smallest admissible step relative to max(1, t_final).
    double min_step_fraction = 1e-12;
    std::size_t max_steps = 50'000'000;
};

struct Evolution {
    TimeSeries series;
    DensityMatrix final_state;
};

// Uniform grid of sample_count points on [0, t_final].
Evolution evolve_full(const LindbladModel& model, const DensityMatrix& rho0, double t_final, std::size_t sample_count,
                      const EvolveOptions& options = {});
TimeSeries evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_final, std::size_t sample_count,
                  double rel_tol, double abs_tol);
TimeSeries evolve(const LindbladModel& model, const DensityMatrix& rho0, double t_final, std::size_t sample_count,
                  const EvolveOptions& options = {});

struct SteadyStateOptions {
    double uniqueness_ratio = 1e-10;
    double residual_limit = 1e-10;
};

DensityMatrix steady_state(const LindbladModel& model, const SteadyStateOptions& options = {});

struct CoolingFit {
    double w_fit = 0.0;
    double n_ss_fit = 0.0;
    double n0_fit = 0.0;  // a + c at the window start
    std::pair<double, double> fit_window{0.0, 0.0};
    double residual_rms = 0.0;
    double amplitude = 0.0;  // c
};

struct FitOptions {
    double t_start = 0.0;
    double t_end = std::numeric_limits<double>::infinity();
    // Rejects the fit when residual_rms > max_relative_residual * |c|.
    double max_relative_residual = 0.05;
    double min_efolds = 3.0;
};

// Default window start 5/Γ discards the fast internal transient.
FitOptions default_fit_options(const ModelParams& params);

// Least-squares fit of n(t) = a + c e^{-w t}, times measured from the window start.
CoolingFit extract_cooling_rate(const TimeSeries& series, std::string_view observable, const FitOptions& options = {});

struct MonteCarloOptions {
    std::size_t sample_count = 201;
    EvolveOptions evolve;
    InitialStateSpec initial;
    unsigned threads = 1;
};

struct MonteCarloResult {
    TimeSeries mean;
    double n_ss_mean;
    std::optional<double> cooling_time;  // first t with mean <n> <= 1.1 n_ss_mean
    std::vector<double> deltas;
};

// Uniform δ_n on [-delta_max, delta_max] drawn from a seeded mt19937_64 stream.
std::vector<double> draw_detunings(double delta_max, std::size_t samples, std::uint64_t seed);

MonteCarloResult monte_carlo_detuning(const ModelParams& base, double delta_max, std::size_t samples,
                                      std::uint64_t seed, std::size_t fock_dim, double t_final,
                                      const MonteCarloOptions& options = {});

}  // namespace eitcool
