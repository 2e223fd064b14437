#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eitcool/constants.hpp"
#include "eitcool/operator_core.hpp"

namespace eitcool {

namespace level {
inline constexpr const char* plus = "+1";
inline constexpr const char* minus = "-1";
inline constexpr const char* excited = "A2";
inline constexpr const char* zero = "0";
inline constexpr const char* pump = "Ey";
inline constexpr const char* singlet = "1A1";
}  // namespace level

enum class Bath { zero, thermal };

// Rotating-frame offsets of the auxiliary levels, units of ω_m.
struct LevelEnergies {
    double omega_a = 0.0;
    double omega_e = 0.0;
    double omega_p1 = 0.0;
    double omega_m1 = 0.0;
    double omega_0 = 0.0;
    double omega_s = 0.0;
};

struct PhysicalParams {
    double mass = 0.0;  // kg
    double mfg = 0.0;   // magnetic field gradient, T/m
    double bias = 0.0;  // T
    std::optional<double> x0;  // m; zero-point amplitude override
    double g_e = constants::electron_g;
    double mu_b = constants::bohr_magneton;
};

// Everything except omega_m (rad/s) and temperature (K) is in units of ω_m.
struct ModelParams {
    double omega_m = constants::two_pi * 1e6;
    double rabi_omega0 = 8.0;
    double detuning = 31.0;
    double gamma_total = 15.0;
    double gamma_plus = 7.5;
    double gamma_minus = 7.5;
    double gamma_p1 = 7.5;
    double gamma_m1 = 7.5;
    double gamma_0 = 0.0;
    double gamma_dark = 0.0;
    double gamma_s = 0.0;
    double Gamma_0 = 0.0;
    double Gamma_p1 = 0.0;
    double Gamma_m1 = 0.0;
    double rabi_pump = 0.0;
    double pump_detuning = 0.0;
    double eta = 0.115;
    double gamma_mech = 1e-5;
    double temperature = 0.0;
    Bath bath = Bath::zero;
    // Quasi-static energy shift of |-1>, breaks two-photon resonance.
    double nuclear_shift = 0.0;
    // Effective repump rates for the four-level model; unset means "not provided".
    std::optional<double> gamma_op_p1;
    std::optional<double> gamma_op_m1;
    LevelEnergies level_energies;
    std::optional<PhysicalParams> physical;

    // λ in units of ω_m coincides with η.
    double lambda_coupling() const noexcept { return eta; }
    double quality_q() const noexcept;
    void set_quality_q(double q);
    double thermal_n() const;

    // Ω₀ = m_R, Δ = (m_R² - 2)/2 (red-sideband resonance of the dressed state).
    void set_optimum(double m_r);
    // γ₊ = γ₋ = γ_{±1} = Γ/2.
    void set_symmetric_decay(double gamma);

    // Throws DomainError on an invariant violation.
    void validate() const;
};

double optimum_detuning(double m_r);

struct DressedStateReport {
    double E_plus;
    double E_minus;
    double phi;
    double linewidth_plus;
    double linewidth_minus;
};

DressedStateReport dressed_states(const ModelParams& params);

struct LambDicke {
    double x0;      // m
    double lambda;  // rad/s
    double eta;
};

LambDicke lamb_dicke_from_physical(double mass, double omega_m, double mfg, double g_e = constants::electron_g,
                                   std::optional<double> x0_override = std::nullopt);

std::vector<std::string> three_level_labels();
std::vector<std::string> four_level_labels();
std::vector<std::string> seven_level_labels();

// Internal-factor vectors of the bright and dark superpositions of |±1>.
Vector bright_vector(const HilbertSpace& space);
Vector dark_vector(const HilbertSpace& space);

Operator build_h_rot(const ModelParams& params, const HilbertSpace& space);

struct EffectiveHamiltonian {
    Operator h0;
    Operator v;
};

EffectiveHamiltonian build_effective_h(const ModelParams& params, const HilbertSpace& space);

// fock_dim = 1 gives the internal-only model (b = 0).
LindbladModel build_model_three_level(const ModelParams& params, std::size_t fock_dim);
LindbladModel build_model_four_level(const ModelParams& params, std::size_t fock_dim);
LindbladModel build_model_seven_level(const ModelParams& params, std::size_t fock_dim);

std::size_t default_fock_dim(double initial_mean_n);

struct InitialStateSpec {
    std::string nv = "dark";  // "dark", "bright" or a level label
    std::optional<std::size_t> fock;
    std::optional<double> thermal_n;
};

DensityMatrix make_initial_state(const HilbertSpace& space, const InitialStateSpec& spec);

}  // namespace eitcool
