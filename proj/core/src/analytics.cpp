#include "eitcool/analytics.hpp"

#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "eitcool/constants.hpp"
#include "eitcool/errors.hpp"

namespace eitcool {

namespace odeint = boost::numeric::odeint;

void SpectrumSeries::validate() const {
    if (omegas.size() != values.size()) throw DomainError("SpectrumSeries: size mismatch");
    for (std::size_t i = 1; i < omegas.size(); ++i) {
        if (!(omegas[i] > omegas[i - 1])) throw DomainError("SpectrumSeries: frequencies must be strictly increasing");
    }
}

double thermal_occupation(double omega, double temperature) {
    if (!(temperature >= 0.0)) throw DomainError("thermal_occupation: temperature must be >= 0");
    if (!(omega > 0.0)) throw DomainError("thermal_occupation: frequency must be > 0");
    if (temperature == 0.0) return 0.0;
    const double x = constants::hbar * omega / (constants::boltzmann * temperature);
    return 1.0 / std::expm1(x);
}

cplx correlation_transform(const ModelParams& p, double omega) {
    const double g = p.gamma_total;
    const cplx denom{2.0 * p.detuning * omega + 2.0 * omega * omega - p.rabi_omega0 * p.rabi_omega0, g * omega};
    if (std::abs(denom) < 1e-14) {
        throw DomainError("correlation_transform: pole of the spectrum at omega = " + std::to_string(omega));
    }
    return cplx{0.0, 2.0 * omega} / denom;
}

cplx fluctuation_spectrum(const ModelParams& p, double omega) {
    return p.eta * p.eta * (p.rabi_omega0 * p.rabi_omega0 / 2.0) * correlation_transform(p, omega);
}

SpectrumSeries fluctuation_spectrum(const ModelParams& p, std::span<const double> omegas) {
    SpectrumSeries s;
    s.kind = SpectrumKind::complex_response;
    s.omegas.assign(omegas.begin(), omegas.end());
    s.values.reserve(omegas.size());
    for (double w : omegas) s.values.push_back(fluctuation_spectrum(p, w));
    s.validate();
    return s;
}

namespace {

double eq8_quotient(double a_plus, double w, double gamma_m, double n_th) {
    const double denom = w + gamma_m;
    if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return (a_plus + n_th * gamma_m) / denom;
}

}  // namespace

RateReport rates(const ModelParams& p) {
    const double g = p.gamma_total;
    if (!(g > 0.0)) throw DomainError("rates: gamma_total must be > 0");
    const double o2 = p.rabi_omega0 * p.rabi_omega0;
    const double num = 2.0 * g * p.eta * p.eta * o2;
    const double dp = o2 / 2.0 + p.detuning - 1.0;
    const double dm = o2 / 2.0 - p.detuning - 1.0;
    RateReport r;
    r.a_plus = num / (g * g + 4.0 * dp * dp);
    r.a_minus = num / (g * g + 4.0 * dm * dm);
    r.w = r.a_minus - r.a_plus;
    r.thermal_n = p.thermal_n();
    r.n_ss = eq8_quotient(r.a_plus, r.w, p.gamma_mech, r.thermal_n);
    return r;
}

RateReport rates_at_optimum(double m_r, double gamma_total, double eta) {
    if (!(m_r > 0.0)) throw DomainError("rates_at_optimum: m_R must be > 0");
    if (!(gamma_total > 0.0)) throw DomainError("rates_at_optimum: gamma_total must be > 0");
    const double m2 = m_r * m_r;
    const double e2 = eta * eta;
    RateReport r;
    r.a_minus = e2 * 2.0 * m2 / gamma_total;
    r.a_plus = e2 * 2.0 * m2 * gamma_total / (4.0 * (m2 - 2.0) * (m2 - 2.0) + gamma_total * gamma_total);
    r.w = r.a_minus - r.a_plus;
    r.thermal_n = 0.0;
    r.n_ss = eq8_quotient(r.a_plus, r.w, 0.0, 0.0);
    return r;
}

SteadyPhonon steady_phonon(const ModelParams& p, const RateReport& r) {
    const double denom = r.w + p.gamma_mech;
    if (!(denom > 0.0)) {
        throw DomainError("steady_phonon: net heating, W + gamma_m = " + std::to_string(denom) + " <= 0");
    }
    SteadyPhonon s{(r.a_plus + r.thermal_n * p.gamma_mech) / denom, std::nullopt, std::nullopt};
    const double opt = optimum_detuning(p.rabi_omega0);
    if (std::abs(p.detuning - opt) <= 1e-12 * std::max(1.0, std::abs(opt)) && p.detuning != 0.0 && r.w > 0.0) {
        const double q = p.gamma_total / (4.0 * p.detuning);
        s.backaction = q * q;
        s.thermal = r.thermal_n * p.gamma_mech / r.w;
    }
    return s;
}

double analytic_trajectory(const RateReport& r, double gamma_m, double thermal_n, double t) {
    if (!(t >= 0.0)) throw DomainError("analytic_trajectory: t must be >= 0");
    const double k = r.w + gamma_m;
    const double n_ss = (r.a_plus + thermal_n * gamma_m) / k;
    return n_ss + std::exp(-k * t) * (thermal_n - n_ss);
}

namespace {

struct BirthDeath {
    double down;  // A₋ + (N+1)γ_m
    double up;    // A₊ + N γ_m

    void operator()(const std::vector<double>& p, std::vector<double>& dp, double) const {
        const std::size_t top = p.size() - 1;
        for (std::size_t n = 0; n <= top; ++n) {
            const double nn = static_cast<double>(n);
            double v = -down * nn * p[n];
            if (n < top) v += down * (nn + 1.0) * p[n + 1] - up * (nn + 1.0) * p[n];
            if (n > 0) v += up * nn * p[n - 1];
            dp[n] = v;
        }
    }
};

BirthDeath make_chain(double a_plus, double a_minus, double gamma_m, double thermal_n) {
    for (double v : {a_plus, a_minus, gamma_m, thermal_n}) {
        if (!std::isfinite(v) || v < 0.0) throw DomainError("rate equation: rates and occupation must be >= 0");
    }
    return {a_minus + (thermal_n + 1.0) * gamma_m, a_plus + thermal_n * gamma_m};
}

}  // namespace

RateTrajectory rate_equation_evolve(double a_plus, double a_minus, double gamma_m, double thermal_n,
                                    std::span<const double> p0, std::span<const double> t_grid, std::size_t n_max,
                                    const RateEquationOptions& options) {
    const BirthDeath chain = make_chain(a_plus, a_minus, gamma_m, thermal_n);
    if (n_max < 1) throw DomainError("rate_equation_evolve: n_max must be >= 1");
    if (p0.size() > n_max + 1) throw DomainError("rate_equation_evolve: initial distribution longer than n_max + 1");
    double total = 0.0;
    for (double v : p0) {
        if (!(v >= 0.0)) throw DomainError("rate_equation_evolve: negative initial probability");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("rate_equation_evolve: initial distribution not normalized");
    if (t_grid.empty()) throw DomainError("rate_equation_evolve: empty time grid");
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("rate_equation_evolve: time grid must be strictly increasing");
    }

    std::vector<double> state(n_max + 1, 0.0);
    std::copy(p0.begin(), p0.end(), state.begin());

    RateTrajectory out;
    auto observe = [&](const std::vector<double>& p, double t) {
        double mean = 0.0;
        for (std::size_t n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p[n];
        out.times.push_back(t);
        out.mean_n.push_back(mean);
        out.probabilities.push_back(p);
        out.max_top_population = std::max(out.max_top_population, std::abs(p.back()));
        if (std::abs(p.back()) > options.leakage_limit) {
            throw SolverError("rate_equation_evolve: population " + std::to_string(p.back()) + " at n_max = " +
                              std::to_string(n_max) + " exceeds leakage limit; increase n_max");
        }
    };

    using stepper_t = odeint::runge_kutta_dopri5<std::vector<double>>;
    auto stepper = odeint::make_dense_output(options.abs_tol, options.rel_tol, stepper_t());
    const double span = t_grid.back() - t_grid.front();
    const double dt0 = span > 0.0 ? span * 1e-6 : 1e-6;
    try {
        odeint::integrate_times(stepper, chain, state, t_grid.begin(), t_grid.end(), dt0, observe,
                                odeint::max_step_checker(10'000'000));
    } catch (const odeint::no_progress_error& e) {
        throw SolverError(std::string("rate_equation_evolve: ") + e.what());
    } catch (const odeint::step_adjustment_error& e) {
        throw SolverError(std::string("rate_equation_evolve: ") + e.what());
    }
    return out;
}

std::vector<double> rate_equation_stationary(double a_plus, double a_minus, double gamma_m, double thermal_n,
                                             std::size_t n_max) {
    const BirthDeath chain = make_chain(a_plus, a_minus, gamma_m, thermal_n);
    if (n_max < 1) throw DomainError("rate_equation_stationary: n_max must be >= 1");
    if (!(chain.down > 0.0)) throw DomainError("rate_equation_stationary: no relaxation channel");
    const auto d = static_cast<Eigen::Index>(n_max + 1);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index n = 0; n < d; ++n) {
        const double nn = static_cast<double>(n);
        g(n, n) -= chain.down * nn;
        if (n + 1 < d) {
            g(n, n + 1) += chain.down * (nn + 1.0);
            g(n, n) -= chain.up * (nn + 1.0);
            g(n + 1, n) += chain.up * (nn + 1.0);
        }
    }
    g.row(0).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d);
    rhs(0) = 1.0;
    Eigen::VectorXd p = g.partialPivLu().solve(rhs);
    return std::vector<double>(p.data(), p.data() + p.size());
}

}  // namespace eitcool
