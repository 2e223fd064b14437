#include "eitcool/nv_model.hpp"

#include <cmath>
#include <limits>

#include "eitcool/analytics.hpp"
#include "eitcool/errors.hpp"

namespace eitcool {

namespace {

void require_rate(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0) throw DomainError(std::string("ModelParams: ") + name + " must be a finite rate >= 0");
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw DomainError(std::string("ModelParams: ") + name + " must be finite");
}

void require_levels(const HilbertSpace& space, const std::vector<std::string>& labels) {
    for (const auto& l : labels) {
        if (!space.has(l)) throw DomainError("space lacks required level '" + l + "'");
    }
}

HilbertSpace model_space(std::vector<std::string> labels, std::size_t fock_dim) {
    if (fock_dim == 1) return HilbertSpace(std::move(labels), 1);
    return compose_space(std::move(labels), fock_dim);
}

void add_mechanical_channels(const ModelParams& p, const HilbertSpace& space, std::vector<Channel>& channels) {
    const Operator b = annihilation(space);
    if (p.bath == Bath::zero) {
        channels.push_back({p.gamma_mech, b, "mechanical"});
        return;
    }
    const double n_th = p.thermal_n();
    channels.push_back({p.gamma_mech * (n_th + 1.0), b, "mechanical_down"});
    channels.push_back({p.gamma_mech * n_th, b.adjoint(), "mechanical_up"});
}

std::vector<NamedOperator> standard_observables(const HilbertSpace& space) {
    std::vector<NamedOperator> obs;
    obs.push_back({"n", number_operator(space)});
    const Vector d = dark_vector(space);
    const Vector b = bright_vector(space);
    obs.push_back({"dark", outer(space, d, d)});
    obs.push_back({"bright", outer(space, b, b)});
    for (const auto& l : space.labels()) obs.push_back({"p_" + l, projector(space, l)});
    return obs;
}

}  // namespace

double ModelParams::quality_q() const noexcept {
    return gamma_mech > 0.0 ? 1.0 / gamma_mech : std::numeric_limits<double>::infinity();
}

void ModelParams::set_quality_q(double q) {
    if (!(q > 0.0)) throw DomainError("ModelParams: quality factor must be > 0");
    gamma_mech = std::isinf(q) ? 0.0 : 1.0 / q;
}

double ModelParams::thermal_n() const { return thermal_occupation(omega_m, temperature); }

void ModelParams::set_optimum(double m_r) {
    rabi_omega0 = m_r;
    detuning = optimum_detuning(m_r);
}

void ModelParams::set_symmetric_decay(double gamma) {
    gamma_total = gamma;
    gamma_plus = gamma_minus = gamma / 2.0;
    gamma_p1 = gamma_m1 = gamma / 2.0;
}

void ModelParams::validate() const {
    if (!std::isfinite(omega_m) || omega_m <= 0.0) throw DomainError("ModelParams: omega_m must be > 0");
    require_finite(rabi_omega0, "rabi_omega0");
    require_finite(detuning, "detuning");
    require_finite(pump_detuning, "pump_detuning");
    require_finite(rabi_pump, "rabi_pump");
    require_finite(nuclear_shift, "nuclear_shift");
    require_rate(gamma_total, "gamma_total");
    require_rate(gamma_plus, "gamma_plus");
    require_rate(gamma_minus, "gamma_minus");
    require_rate(gamma_p1, "gamma_p1");
    require_rate(gamma_m1, "gamma_m1");
    require_rate(gamma_0, "gamma_0");
    require_rate(gamma_dark, "gamma_dark");
    require_rate(gamma_s, "gamma_s");
    require_rate(Gamma_0, "Gamma_0");
    require_rate(Gamma_p1, "Gamma_p1");
    require_rate(Gamma_m1, "Gamma_m1");
    require_rate(gamma_mech, "gamma_mech");
    if (gamma_op_p1) require_rate(*gamma_op_p1, "gamma_op_p1");
    if (gamma_op_m1) require_rate(*gamma_op_m1, "gamma_op_m1");
    if (!std::isfinite(eta) || eta < 0.0) throw DomainError("ModelParams: eta must be >= 0");
    if (!std::isfinite(temperature) || temperature < 0.0) throw DomainError("ModelParams: temperature must be >= 0");
    if (gamma_plus + gamma_minus > gamma_total * (1.0 + 1e-9)) {
        throw DomainError("ModelParams: gamma_plus + gamma_minus exceeds gamma_total");
    }
    const auto& e = level_energies;
    for (double v : {e.omega_a, e.omega_e, e.omega_p1, e.omega_m1, e.omega_0, e.omega_s}) {
        require_finite(v, "level_energies");
    }
}

double optimum_detuning(double m_r) { return (m_r * m_r - 2.0) / 2.0; }

DressedStateReport dressed_states(const ModelParams& p) {
    const double root = std::sqrt(2.0 * p.rabi_omega0 * p.rabi_omega0 + p.detuning * p.detuning);
    if (root == 0.0) throw DomainError("dressed_states: Ω₀ = Δ = 0 leaves the mixing angle undefined");
    DressedStateReport r{};
    r.E_plus = (-p.detuning + root) / 2.0;
    r.E_minus = (-p.detuning - root) / 2.0;
    r.phi = 0.5 * std::acos(-p.detuning / root);
    const double c2 = std::cos(r.phi) * std::cos(r.phi);
    r.linewidth_plus = p.gamma_total * c2;
    r.linewidth_minus = p.gamma_total - r.linewidth_plus;
    return r;
}

LambDicke lamb_dicke_from_physical(double mass, double omega_m, double mfg, double g_e,
                                   std::optional<double> x0_override) {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw DomainError("lamb_dicke_from_physical: mass must be > 0");
    if (!(omega_m > 0.0) || !std::isfinite(omega_m)) throw DomainError("lamb_dicke_from_physical: omega_m must be > 0");
    if (!(mfg >= 0.0) || !std::isfinite(mfg)) throw DomainError("lamb_dicke_from_physical: field gradient must be >= 0");
    if (!(g_e > 0.0)) throw DomainError("lamb_dicke_from_physical: g factor must be > 0");
    if (x0_override && !(*x0_override > 0.0)) throw DomainError("lamb_dicke_from_physical: x0 override must be > 0");
    LambDicke r{};
    r.x0 = x0_override ? *x0_override : std::sqrt(constants::hbar / (2.0 * mass * omega_m));
    r.lambda = g_e * constants::bohr_magneton * mfg * r.x0 / constants::hbar;
    r.eta = r.lambda / omega_m;
    return r;
}

std::vector<std::string> three_level_labels() { return {level::plus, level::minus, level::excited}; }

std::vector<std::string> four_level_labels() { return {level::plus, level::minus, level::excited, level::zero}; }

std::vector<std::string> seven_level_labels() {
    return {level::plus, level::minus, level::excited, level::zero, level::pump, level::singlet};
}

Vector bright_vector(const HilbertSpace& space) {
    const double s = 1.0 / std::sqrt(2.0);
    return internal_vector(space, {{level::plus, s}, {level::minus, s}});
}

Vector dark_vector(const HilbertSpace& space) {
    const double s = 1.0 / std::sqrt(2.0);
    return internal_vector(space, {{level::plus, s}, {level::minus, -s}});
}

Operator build_h_rot(const ModelParams& p, const HilbertSpace& space) {
    require_levels(space, three_level_labels());
    const Operator b = annihilation(space);
    const Operator drive = transition(space, level::excited, level::plus) + transition(space, level::excited, level::minus);
    const Operator sz = projector(space, level::plus) - projector(space, level::minus);
    Operator h = number_operator(space);
    h -= p.detuning * projector(space, level::excited);
    h += (p.rabi_omega0 / 2.0) * (drive + drive.adjoint());
    h += p.lambda_coupling() * (sz * (b + b.adjoint()));
    if (p.nuclear_shift != 0.0) h += p.nuclear_shift * projector(space, level::minus);
    return h;
}

EffectiveHamiltonian build_effective_h(const ModelParams& p, const HilbertSpace& space) {
    require_levels(space, three_level_labels());
    const Vector excited = internal_vector(space, {{level::excited, 1.0}});
    const Vector bright = bright_vector(space);
    const Vector dark = dark_vector(space);
    const double coupling = p.rabi_omega0 / std::sqrt(2.0);

    const Operator ab = outer(space, excited, bright);
    Operator h0 = number_operator(space);
    h0 -= p.detuning * projector(space, level::excited);
    h0 += coupling * (ab + ab.adjoint());

    const Operator b = annihilation(space);
    const Operator ad = outer(space, excited, dark);
    Operator v = (p.eta * coupling) * ((b - b.adjoint()) * (ad - ad.adjoint()));
    return {std::move(h0), std::move(v)};
}

LindbladModel build_model_three_level(const ModelParams& p, std::size_t fock_dim) {
    p.validate();
    HilbertSpace space = model_space(three_level_labels(), fock_dim);
    Operator h = build_h_rot(p, space);
    std::vector<Channel> channels;
    add_mechanical_channels(p, space, channels);
    channels.push_back({p.gamma_plus, transition(space, level::plus, level::excited), "decay_plus"});
    channels.push_back({p.gamma_minus, transition(space, level::minus, level::excited), "decay_minus"});
    auto obs = standard_observables(space);
    return LindbladModel(std::move(space), std::move(h), std::move(channels), std::move(obs));
}

LindbladModel build_model_four_level(const ModelParams& p, std::size_t fock_dim) {
    p.validate();
    if (!p.gamma_op_p1 || !p.gamma_op_m1) {
        throw DomainError("build_model_four_level: effective repump rates gamma_op_p1/gamma_op_m1 not provided");
    }
    HilbertSpace space = model_space(four_level_labels(), fock_dim);
    Operator h = build_h_rot(p, space);
    h -= p.level_energies.omega_0 * projector(space, level::zero);
    std::vector<Channel> channels;
    add_mechanical_channels(p, space, channels);
    channels.push_back({p.gamma_p1, transition(space, level::plus, level::excited), "decay_plus"});
    channels.push_back({p.gamma_m1, transition(space, level::minus, level::excited), "decay_minus"});
    channels.push_back({p.gamma_0, transition(space, level::zero, level::excited), "decay_zero"});
    channels.push_back({*p.gamma_op_p1, transition(space, level::plus, level::zero), "repump_plus"});
    channels.push_back({*p.gamma_op_m1, transition(space, level::minus, level::zero), "repump_minus"});
    auto obs = standard_observables(space);
    return LindbladModel(std::move(space), std::move(h), std::move(channels), std::move(obs));
}

LindbladModel build_model_seven_level(const ModelParams& p, std::size_t fock_dim) {
    p.validate();
    HilbertSpace space = model_space(seven_level_labels(), fock_dim);
    Operator h = build_h_rot(p, space);
    h -= p.level_energies.omega_s * projector(space, level::singlet);
    h += p.pump_detuning * projector(space, level::pump);
    const Operator pump = transition(space, level::pump, level::zero);
    h += p.rabi_pump * (pump + pump.adjoint());
    std::vector<Channel> channels;
    add_mechanical_channels(p, space, channels);
    channels.push_back({p.gamma_p1, transition(space, level::plus, level::excited), "decay_plus"});
    channels.push_back({p.gamma_m1, transition(space, level::minus, level::excited), "decay_minus"});
    channels.push_back({p.gamma_dark, transition(space, level::singlet, level::excited), "decay_singlet"});
    channels.push_back({p.gamma_s, transition(space, level::zero, level::singlet), "singlet_to_zero"});
    channels.push_back({p.Gamma_0, transition(space, level::zero, level::pump), "pump_decay_zero"});
    channels.push_back({p.Gamma_p1, transition(space, level::plus, level::pump), "pump_decay_plus"});
    channels.push_back({p.Gamma_m1, transition(space, level::minus, level::pump), "pump_decay_minus"});
    auto obs = standard_observables(space);
    return LindbladModel(std::move(space), std::move(h), std::move(channels), std::move(obs));
}

std::size_t default_fock_dim(double initial_mean_n) {
    if (!(initial_mean_n >= 0.0)) throw DomainError("default_fock_dim: mean occupation must be >= 0");
    return static_cast<std::size_t>(std::ceil(4.0 * initial_mean_n)) + 10;
}

DensityMatrix make_initial_state(const HilbertSpace& space, const InitialStateSpec& spec) {
    Vector internal;
    if (spec.nv == "dark") {
        internal = dark_vector(space);
    } else if (spec.nv == "bright") {
        internal = bright_vector(space);
    } else {
        internal = internal_vector(space, {{spec.nv, 1.0}});
    }
    if (spec.fock && spec.thermal_n) throw DomainError("initial state: give either a Fock level or a thermal mean, not both");
    Matrix fock;
    if (spec.thermal_n) {
        fock = thermal_fock_state(space.fock_dim(), *spec.thermal_n);
    } else {
        fock = fock_state(space.fock_dim(), spec.fock.value_or(0));
    }
    return DensityMatrix::product(space, internal * internal.adjoint(), fock);
}

}  // namespace eitcool
