#include "eitcool/effective_ops.hpp"

#include <cmath>
#include <sstream>

#include "eitcool/errors.hpp"

namespace eitcool {

namespace {

double lorentz_factor(const PumpSystem& p) {
    for (double r : {p.Gamma_0, p.Gamma_p1, p.Gamma_m1}) {
        if (!std::isfinite(r) || r < 0.0) throw DomainError("pump system: decay rates must be >= 0");
    }
    if (!std::isfinite(p.rabi_pump) || !std::isfinite(p.pump_detuning)) {
        throw DomainError("pump system: drive parameters must be finite");
    }
    const double gt = p.total_linewidth();
    const double denom = 4.0 * p.pump_detuning * p.pump_detuning + gt * gt;
    if (denom == 0.0) throw DomainError("pump system is degenerate: zero linewidth with zero detuning");
    return p.rabi_pump * p.rabi_pump / denom;
}

}  // namespace

PumpSystem PumpSystem::from(const ModelParams& params) {
    return {params.rabi_pump, params.pump_detuning, params.Gamma_0, params.Gamma_p1, params.Gamma_m1};
}

EffectiveRates effective_pump_rates(const PumpSystem& pump) {
    const double f = lorentz_factor(pump);
    EffectiveRates r;
    r.gamma_op_p1 = pump.Gamma_p1 * f;
    r.gamma_op_m1 = pump.Gamma_m1 * f;
    r.gamma_op_0 = pump.Gamma_0 * f;
    r.stark_shift_0 = -pump.pump_detuning * f;
    return r;
}

double stark_shift(const PumpSystem& pump) { return -pump.pump_detuning * lorentz_factor(pump); }

RenormalizedDecays renormalized_decays(double gamma_p1, double gamma_m1, const EffectiveRates& rates) {
    if (!(gamma_p1 >= 0.0) || !(gamma_m1 >= 0.0)) throw DomainError("renormalized_decays: decays must be >= 0");
    RenormalizedDecays d{};
    d.gamma_plus = gamma_p1 + rates.gamma_op_p1;
    d.gamma_minus = gamma_m1 + rates.gamma_op_m1;
    d.gamma_total = d.gamma_plus + d.gamma_minus;
    return d;
}

std::optional<std::string> perturbative_warning(const PumpSystem& pump) {
    const double gt = pump.total_linewidth();
    if (std::abs(pump.rabi_pump) <= gt) return std::nullopt;
    std::ostringstream ss;
    ss << "pump Rabi frequency " << pump.rabi_pump << " exceeds the E_y linewidth " << gt
       << "; effective repump rates are outside their perturbative regime";
    return ss.str();
}

ModelParams with_effective_pump(ModelParams params) {
    EffectiveRates rates = effective_pump_rates(PumpSystem::from(params));
    const RenormalizedDecays d = renormalized_decays(params.gamma_p1, params.gamma_m1, rates);
    params.gamma_op_p1 = rates.gamma_op_p1;
    params.gamma_op_m1 = rates.gamma_op_m1;
    params.gamma_plus = d.gamma_plus;
    params.gamma_minus = d.gamma_minus;
    params.gamma_total = d.gamma_total;
    return params;
}

}  // namespace eitcool
