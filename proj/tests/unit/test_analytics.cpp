#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"

#include "eitcool/analytics.hpp"
#include "eitcool/constants.hpp"
#include "eitcool/dynamics.hpp"
#include "eitcool/errors.hpp"
#include "oracles.hpp"

using namespace eitcool;

namespace {
ModelParams fig2() {
    ModelParams p;
    p.rabi_omega0 = 8.0;
    p.detuning = 31.0;
    p.set_symmetric_decay(15.0);
    p.eta = 0.115;
    return p;
}

ModelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ModelParams p;
    p.rabi_omega0 = 0.5 + 15.0 * u(rng);
    p.detuning = -40.0 + 80.0 * u(rng);
    p.gamma_total = 0.5 + 30.0 * u(rng);
    const double split = 0.1 + 0.8 * u(rng);
    p.gamma_plus = split * p.gamma_total;
    p.gamma_minus = p.gamma_total - p.gamma_plus;
    p.eta = 0.01 + 0.2 * u(rng);
    return p;
}

double closed_transform_re(double omega0, double delta, double gamma, double w) {
    const cplx den(2 * delta * w + 2 * w * w - omega0 * omega0, gamma * w);
    return (cplx(0, 2 * w) / den).real();
}
}  // namespace

TEST_CASE("thermal occupation") {
    const double omega = constants::two_pi * 1e6;
    const double x = constants::hbar * omega / (constants::boltzmann * 0.02);
    const double n = thermal_occupation(omega, 0.02);
    CHECK(n == doctest::Approx(oracle::bose_occupation(x)).epsilon(1e-10));
    CHECK(n == doctest::Approx(416.23258269033346).epsilon(1e-12));
    CHECK(std::abs(n - 1.0 / x) / n < 2e-3);
    CHECK(thermal_occupation(omega, 0.0) == 0.0);
    CHECK_THROWS_AS(thermal_occupation(omega, -1.0), DomainError);
}

TEST_CASE("fluctuation spectrum closed form") {
    const ModelParams p = fig2();
    const cplx t1 = correlation_transform(p, 1.0);
    CHECK(t1.real() == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
    CHECK(std::abs(t1.imag()) < 1e-15);
    CHECK(fluctuation_spectrum(p, 1.0).real() == doctest::Approx(0.013225 * 32 * 2 / 15).epsilon(1e-13));
    CHECK(std::abs(fluctuation_spectrum(p, 0.0)) == 0.0);
    const cplx sm = fluctuation_spectrum(p, -1.0);
    CHECK(sm.real() == doctest::Approx(0.4232 * 30 / 15601).epsilon(1e-13));
    CHECK(sm.imag() == doctest::Approx(0.4232 * 248 / 15601).epsilon(1e-13));

    ModelParams pole;
    pole.rabi_omega0 = std::sqrt(2.0);
    pole.detuning = 0.0;
    pole.gamma_total = pole.gamma_plus = pole.gamma_minus = 0.0;
    CHECK_THROWS_AS(correlation_transform(pole, 1.0), DomainError);

    const std::vector<double> grid{-1.0, 0.0, 1.0};
    const SpectrumSeries s = fluctuation_spectrum(p, grid);
    CHECK(s.values.size() == 3);
    CHECK(s.values[2] == fluctuation_spectrum(p, 1.0));
    SpectrumSeries bad = s;
    bad.omegas = {0.0, 0.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("heating and cooling coefficients") {
    const RateReport r = rates(fig2());
    CHECK(r.a_minus == doctest::Approx(25.392 / 225).epsilon(1e-13));
    CHECK(r.a_plus == doctest::Approx(25.392 / 15601).epsilon(1e-13));
    CHECK(r.w == r.a_minus - r.a_plus);
    CHECK(r.a_minus == doctest::Approx(oracle::cooling_coefficient(8, 31, 15, 0.115)).epsilon(1e-14));
    CHECK(r.a_plus == doctest::Approx(oracle::heating_coefficient(8, 31, 15, 0.115)).epsilon(1e-14));
    ModelParams z = fig2();
    z.eta = 0.0;
    CHECK(rates(z).a_plus == 0.0);
    CHECK(rates(z).a_minus == 0.0);

    std::mt19937_64 rng(17);
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = random_params(rng);
        const RateReport q = rates(p);
        const double sp = 2.0 * fluctuation_spectrum(p, -1.0).real();
        const double sm = 2.0 * fluctuation_spectrum(p, 1.0).real();
        CHECK(std::abs(q.a_plus - sp) <= 1e-12 * std::abs(sp));
        CHECK(std::abs(q.a_minus - sm) <= 1e-12 * std::abs(sm));
        CHECK(q.a_plus >= 0.0);
        CHECK(q.a_minus >= 0.0);
    }
}

TEST_CASE("coefficients at the optimum detuning") {
    for (double m : {1.5, 3.0, 8.0, 11.0}) {
        ModelParams p = fig2();
        p.set_optimum(m);
        const RateReport a = rates(p), b = rates_at_optimum(m, 15.0, 0.115);
        CHECK(std::abs(a.a_plus - b.a_plus) <= 1e-14 * a.a_plus);
        CHECK(std::abs(a.a_minus - b.a_minus) <= 1e-14 * a.a_minus);
        CHECK(b.a_minus == doctest::Approx(2 * 0.115 * 0.115 * m * m / 15.0).epsilon(1e-14));
        CHECK(rates_at_optimum(2 * m, 15, 0.115).a_minus / b.a_minus == doctest::Approx(4.0).epsilon(1e-14));
    }
    const RateReport edge = rates_at_optimum(std::sqrt(2.0), 15.0, 0.115);
    CHECK(edge.a_plus == doctest::Approx(edge.a_minus).epsilon(1e-14));

    // Shape scan: A₋ strictly increasing, A₊ has one interior maximum at m⁴ = 4 + Γ²/4.
    double prev = 0.0;
    std::size_t argmax = 0;
    double best = 0.0;
    const double step = 1e-4;
    for (std::size_t i = 1; i <= 120000; ++i) {
        const double m = i * step;
        const RateReport r = rates_at_optimum(m, 15.0, 0.115);
        CHECK(r.a_minus > prev);
        prev = r.a_minus;
        if (r.a_plus > best) {
            best = r.a_plus;
            argmax = i;
        }
    }
    const double hump = std::pow(4.0 + 225.0 / 4.0, 0.25);
    CHECK(std::abs(argmax * step - hump) <= step);
    CHECK(argmax < 120000);
}

TEST_CASE("steady phonon number") {
    ModelParams p = fig2();
    const SteadyPhonon zero_bath = steady_phonon(p, rates(p));
    CHECK(zero_bath.n_ss == doctest::Approx(rates(p).a_plus / (rates(p).w + p.gamma_mech)).epsilon(1e-14));
    REQUIRE(zero_bath.backaction);
    CHECK(*zero_bath.backaction == doctest::Approx(std::pow(15.0 / 124.0, 2)).epsilon(1e-14));

    p.bath = Bath::thermal;
    p.temperature = 0.02;
    p.set_quality_q(1e5);
    const RateReport r = rates(p);
    CHECK(r.thermal_n == doctest::Approx(416.23258269033346).epsilon(1e-12));
    const SteadyPhonon sp = steady_phonon(p, r);
    CHECK(sp.n_ss == doctest::Approx((r.a_plus + r.thermal_n * 1e-5) / (r.w + 1e-5)).epsilon(1e-14));
    CHECK(sp.n_ss == doctest::Approx(0.052).epsilon(0.01));
    CHECK(*sp.backaction + *sp.thermal == doctest::Approx(0.0146 + 0.0374).epsilon(0.01));

    ModelParams heat = fig2();
    heat.detuning = -31.0;
    heat.gamma_mech = 0.0;
    CHECK_THROWS_AS(steady_phonon(heat, rates(heat)), DomainError);
    CHECK(std::isnan(rates(heat).n_ss));
}

TEST_CASE("analytic trajectory") {
    const RateReport r{0.01, 0.2, 0.19, 0.0, 0.0};
    const double gm = 1e-3, n = 5.0;
    const double nss = (r.a_plus + n * gm) / (r.w + gm);
    CHECK(analytic_trajectory(r, gm, n, 0.0) == doctest::Approx(n));
    CHECK(analytic_trajectory(r, gm, n, 1e4) == doctest::Approx(nss).epsilon(1e-12));
    CHECK(analytic_trajectory(r, gm, n, std::log(2.0) / (r.w + gm)) == doctest::Approx(nss + (n - nss) / 2).epsilon(1e-12));
}

TEST_CASE("phonon rate equation") {
    SUBCASE("thermal bath alone relaxes to Bose-Einstein") {
        const double n = 1.7;
        const auto p = rate_equation_stationary(0.0, 0.0, 0.05, n, 80);
        double mean = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            CHECK(p[k] == doctest::Approx(std::pow(n, double(k)) / std::pow(n + 1, double(k) + 1)).epsilon(1e-9));
            mean += double(k) * p[k];
        }
        CHECK(mean == doctest::Approx(n).epsilon(1e-6));
    }
    SUBCASE("mean follows the analytic trajectory from a thermal start") {
        const double ap = 0.004, am = 0.11, gm = 0.01, n = 2.0;
        const std::size_t nmax = 90;
        std::vector<double> p0(nmax + 1);
        for (std::size_t k = 0; k <= nmax; ++k) p0[k] = std::pow(n, double(k)) / std::pow(n + 1, double(k) + 1);
        const double norm = std::accumulate(p0.begin(), p0.end(), 0.0);
        for (double& v : p0) v /= norm;
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(i * 1.5);
        const RateTrajectory tr = rate_equation_evolve(ap, am, gm, n, p0, grid, nmax);
        const RateReport r{ap, am, am - ap, 0.0, n};
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(tr.mean_n[i] == doctest::Approx(analytic_trajectory(r, gm, n, grid[i])).epsilon(1e-6));
    }
    SUBCASE("probability leaking through the truncation is an error") {
        std::vector<double> p0(11, 0.0);
        p0[10] = 1.0;
        const std::vector<double> grid{0.0, 1.0, 2.0};
        CHECK_THROWS_AS(rate_equation_evolve(1.0, 0.0, 0.0, 0.0, p0, grid, 10), SolverError);
    }
}

TEST_CASE("Bloch system") {
    SUBCASE("dark steady state") {
        std::mt19937_64 rng(23);
        for (int i = 0; i < 30; ++i) {
            const ModelParams p = random_params(rng);
            const DensityMatrix rho = bloch_steady_state(p);
            const HilbertSpace& s = rho.space();
            const Vector d = dark_vector(s);
            CHECK(1.0 - (d.adjoint() * rho.matrix() * d)(0).real() < 1e-10);
            const double r = 1.0 / std::sqrt(2.0);
            const Operator y = r * (sigma_y(s, "A2", "+1") - sigma_y(s, "A2", "-1"));
            CHECK(std::abs(expectation(rho, y)) < 1e-12);
        }
    }
    SUBCASE("vector field agrees with the master equation") {
        std::mt19937_64 rng(29);
        std::normal_distribution<double> g;
        for (int i = 0; i < 20; ++i) {
            ModelParams p = random_params(rng);
            p.eta = 0.0;
            const BlochSystem sys = bloch_system(p);
            const auto model = build_model_three_level(p, 1);
            Eigen::Matrix<double, 8, 1> x;
            for (int k = 0; k < 8; ++k) x(k) = g(rng);
            const Matrix rho = bloch_to_density(x);
            const Eigen::Matrix<double, 8, 1> dx = sys.m * x + sys.c;
            const Matrix lhs = bloch_to_density(dx) - bloch_to_density(Eigen::Matrix<double, 8, 1>::Zero());
            CHECK((lhs - lindblad_rhs(model, rho)).cwiseAbs().maxCoeff() < 1e-11 * (1 + dx.norm()));
        }
    }
    SUBCASE("domain errors") {
        ModelParams p = fig2();
        p.rabi_omega0 = 0.0;
        CHECK_THROWS_AS(bloch_steady_state(p), DomainError);
    }
}

TEST_CASE("regression transform oracles") {
    const ModelParams p = fig2();
    CHECK(std::abs(correlation_transform_numeric(p, 1.0) - 2.0 / 15.0) < 1e-6);
    CHECK(std::abs(correlation_transform_numeric(p, 0.0)) < 1e-8);

    std::mt19937_64 rng(31);
    for (int i = 0; i < 10; ++i) {
        const ModelParams q = random_params(rng);
        for (double w : {-2.5, -1.0, 0.3, 1.0, 2.2}) {
            const cplx closed = correlation_transform(q, w);
            const cplx full = oracle::regression_transform(q, w);
            const cplx res = correlation_transform_numeric(q, w);
            CHECK(std::abs(full - closed) <= 1e-9 * std::abs(closed));
            CHECK(std::abs(res - closed) <= 1e-9 * std::abs(closed));
        }
    }

    std::vector<double> grid;
    for (int i = -30; i <= 30; ++i) grid.push_back(i * 0.1);
    const auto quad = correlation_transform_quadrature(p, grid);
    const auto res = correlation_transform_numeric(p, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(quad[i].tail_bound < 1e-12);
        CHECK(std::abs(quad[i].value - res[i]) < 1e-6 * std::max(1.0, std::abs(res[i])));
    }
}

TEST_CASE("absorption spectrum") {
    const ModelParams p = fig2();
    std::vector<double> grid;
    const double step = 0.025;
    for (int i = -1600; i <= 400; ++i) grid.push_back(i * step);
    const SpectrumSeries s = absorption_spectrum(p, grid);
    CHECK(s.kind == SpectrumKind::absorption);
    double peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a = s.values[i].real();
        CHECK(a >= -1e-14);
        peak = std::max(peak, a);
        // Weak-probe absorption equals (Γ/4) Re T for symmetric decay.
        CHECK(std::abs(a - 15.0 / 4.0 * closed_transform_re(8, 31, 15, grid[i])) < 1e-9);
    }
    const double at_zero = absorption_spectrum(p, std::vector<double>{0.0}).values[0].real();
    CHECK(at_zero < 1e-8 * peak);
    CHECK(peak == doctest::Approx(0.5).epsilon(1e-3));

    std::vector<std::size_t> maxima;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (s.values[i].real() > s.values[i - 1].real() && s.values[i].real() >= s.values[i + 1].real()) maxima.push_back(i);
    }
    REQUIRE(maxima.size() == 2);
    const DressedStateReport d = dressed_states(p);
    CHECK(std::abs(grid[maxima[0]] - d.E_minus) <= step);
    CHECK(std::abs(grid[maxima[1]] - d.E_plus) <= step);
    CHECK_THROWS_AS(absorption_spectrum(p, std::vector<double>{}), DomainError);
}
