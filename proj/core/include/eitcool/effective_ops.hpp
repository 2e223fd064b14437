#pragma once

#include <optional>
#include <string>

#include "eitcool/nv_model.hpp"

namespace eitcool {

// Pump subsystem |0> <-> |E_y> -> {|0>, |±1>}; all quantities in units of ω_m.
struct PumpSystem {
    double rabi_pump = 0.0;
    double pump_detuning = 0.0;
    double Gamma_0 = 0.0;
    double Gamma_p1 = 0.0;
    double Gamma_m1 = 0.0;

    double total_linewidth() const noexcept { return Gamma_0 + Gamma_p1 + Gamma_m1; }
    static PumpSystem from(const ModelParams& params);
};

struct EffectiveRates {
    double gamma_op_p1 = 0.0;
    double gamma_op_m1 = 0.0;
    double gamma_op_0 = 0.0;
    double stark_shift_0 = 0.0;
    double gamma_plus_eff = 0.0;
    double gamma_minus_eff = 0.0;
};

struct RenormalizedDecays {
    double gamma_plus;
    double gamma_minus;
    double gamma_total;
};

// Second-order elimination of E_y: Γ_op^k = Γ_k Ω_p² / (4Δ_e² + Γ_t²).
EffectiveRates effective_pump_rates(const PumpSystem& pump);
double stark_shift(const PumpSystem& pump);
RenormalizedDecays renormalized_decays(double gamma_p1, double gamma_m1, const EffectiveRates& rates);

// Warning text when the pump is outside the perturbative regime (Ω_p > Γ_t).
std::optional<std::string> perturbative_warning(const PumpSystem& pump);

// Fills the repump rates and renormalized γ_± of params from its pump fields.
ModelParams with_effective_pump(ModelParams params);

}  // namespace eitcool
