#include <cmath>
#include <random>

#include "doctest.h"

#include "eitcool/analytics.hpp"
#include "eitcool/constants.hpp"
#include "eitcool/dynamics.hpp"
#include "eitcool/errors.hpp"

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

LindbladModel damped_oscillator(double gamma, std::size_t fock) {
    const HilbertSpace s({"g"}, fock);
    return LindbladModel(s, zero_operator(s), {{gamma, annihilation(s), "b"}}, {{"n", number_operator(s)}});
}

TimeSeries synthetic(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<std::vector<double>> rec;
    for (double v : y) rec.push_back({v, 1.0});
    return TimeSeries(t, {"n", "trace"}, rec, std::vector<double>(t.size(), 0.0));
}
}  // namespace

TEST_CASE("time series invariants") {
    CHECK_THROWS_AS(synthetic({0.0, 0.0}, {1.0, 1.0}), DomainError);
    std::vector<std::vector<double>> rec{{1.0, 1.0}, {1.0, 1.1}};
    CHECK_THROWS_AS(TimeSeries({0.0, 1.0}, {"n", "trace"}, rec, {0.0, 0.0}), SolverError);
    CHECK_THROWS_AS(TimeSeries({0.0, 1.0}, {"n"}, {{1.0}, {1.0}}, {0.0, 0.0}), DomainError);
    const TimeSeries ok = synthetic({0.0, 1.0}, {2.0, 3.0});
    CHECK(ok.value(1, "n") == 3.0);
    CHECK_THROWS_AS(ok.column("p"), DomainError);
}

TEST_CASE("integration against closed forms") {
    SUBCASE("phonon decay") {
        const auto m = damped_oscillator(0.4, 4);
        const DensityMatrix rho0(m.space(), fock_state(4, 1));
        const TimeSeries ts = evolve(m, rho0, 10.0, 51, 1e-9, 1e-12);
        for (std::size_t i = 0; i < ts.size(); ++i)
            CHECK(std::abs(ts.value(i, "n") - std::exp(-0.4 * ts.times()[i])) <= 1e-6 * std::exp(-0.4 * ts.times()[i]));
        CHECK(ts.names().back() == "trace");
        CHECK(ts.meta().steps > 0);
    }
    SUBCASE("detuned Rabi oscillation") {
        const HilbertSpace s({"g", "e"}, 1);
        const double omega = 2.0, delta = 1.5;
        Operator h = (omega / 2.0) * sigma_x(s, "e", "g");
        h -= delta * projector(s, "e");
        const LindbladModel m(s, h, {}, {{"pe", projector(s, "e")}});
        const TimeSeries ts = evolve(m, DensityMatrix::pure(s, internal_vector(s, {{"g", 1.0}})), 10.0, 101, 1e-10, 1e-12);
        const double gen = std::hypot(omega, delta);
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double expected = omega * omega / (gen * gen) * std::pow(std::sin(gen * ts.times()[i] / 2.0), 2);
            CHECK(std::abs(ts.value(i, "pe") - expected) < 1e-6);
        }
    }
}

TEST_CASE("integrator error paths") {
    const auto m = damped_oscillator(0.4, 4);
    const DensityMatrix rho0(m.space(), fock_state(4, 1));
    CHECK_THROWS_AS(evolve(m, rho0, 1.0, 11, 0.1, 1e-9), DomainError);
    CHECK_THROWS_AS(evolve(m, rho0, -1.0, 11, 1e-6, 1e-9), DomainError);
    CHECK_THROWS_AS(evolve(m, rho0, 1.0, 1, 1e-6, 1e-9), DomainError);

    // Heating pushes population into the top Fock levels.
    const HilbertSpace s({"g"}, 5);
    const LindbladModel hot(s, zero_operator(s), {{1.0, creation(s), "up"}}, {{"n", number_operator(s)}});
    CHECK_THROWS_AS(evolve(hot, DensityMatrix(s, fock_state(5, 0)), 5.0, 11, 1e-6, 1e-9), SolverError);

    EvolveOptions tight;
    tight.max_steps = 3;
    CHECK_THROWS_AS(evolve(m, rho0, 100.0, 3, tight), SolverError);
}

TEST_CASE("tolerance refinement converges toward a tight reference") {
    const LindbladModel m = build_model_three_level(fig2(), 5);
    const DensityMatrix rho0 = make_initial_state(m.space(), {"dark", 2, std::nullopt});
    // Convergence of the truncated model itself; truncation leakage is irrelevant here.
    EvolveOptions o{1e-12, 1e-14, 1.0};
    const TimeSeries ref = evolve(m, rho0, 6.0, 13, o);
    double prev = std::numeric_limits<double>::infinity();
    for (double tol : {1e-4, 1e-6, 1e-8}) {
        o.rel_tol = tol;
        o.abs_tol = tol * 1e-2;
        const TimeSeries ts = evolve(m, rho0, 6.0, 13, o);
        double err = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) err = std::max(err, std::abs(ts.value(i, "n") - ref.value(i, "n")));
        CHECK(err < prev);
        CHECK(err < 100 * tol);
        prev = err;
    }
}

TEST_CASE("trajectory invariants with positivity checkpoints") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
        ModelParams p = fig2();
        p.rabi_omega0 = 2.0 + 8.0 * u(rng);
        p.set_optimum(p.rabi_omega0);
        p.gamma_plus = 15.0 * u(rng);
        p.gamma_minus = 15.0 - p.gamma_plus;
        p.gamma_mech = 0.01 * u(rng);
        const auto m = build_model_three_level(p, 6);
        EvolveOptions o;
        o.leakage_threshold = 1.0;
        o.positivity_checkpoints = 5;
        const Evolution ev = evolve_full(m, make_initial_state(m.space(), {"+1", 2, std::nullopt}), 4.0, 21, o);
        CHECK(ev.series.meta().max_hermiticity_residual < 1e-9);
        CHECK(ev.series.meta().max_trace_error < 1e-6);
        REQUIRE(ev.series.meta().min_eigenvalue);
        CHECK(*ev.series.meta().min_eigenvalue >= -1e-6);
    }
}

TEST_CASE("steady state") {
    SUBCASE("pure damping relaxes to vacuum") {
        const auto m = damped_oscillator(0.3, 6);
        const DensityMatrix rho = steady_state(m);
        CHECK(std::abs(rho.matrix()(0, 0) - 1.0) < 1e-10);
    }
    SUBCASE("internal three-level system is dark") {
        const auto m = build_model_three_level(fig2(), 1);
        const DensityMatrix rho = steady_state(m);
        CHECK(std::abs(expectation(rho, m.observable("dark")) - 1.0) < 1e-8);
    }
    SUBCASE("detailed balance of the thermal channels") {
        const HilbertSpace s({"g"}, 30);
        const double n = 0.5, g = 0.2;
        const LindbladModel m(s, number_operator(s),
                              {{g * (n + 1), annihilation(s), "down"}, {g * n, creation(s), "up"}},
                              {{"n", number_operator(s)}});
        CHECK(expectation(steady_state(m), m.observable("n")).real() == doctest::Approx(n).epsilon(1e-6));
    }
    SUBCASE("degenerate generator") {
        const HilbertSpace s({"a", "b"}, 2);
        const LindbladModel m(s, zero_operator(s), {}, {});
        CHECK_THROWS_AS(steady_state(m), SolverError);
    }
    SUBCASE("coupled model: steady state is the long-time limit and sits near the rate-equation value") {
        ModelParams p = fig2();
        p.bath = Bath::thermal;
        p.temperature = 0.02;
        p.set_quality_q(1e5);
        const auto m = build_model_three_level(p, 10);
        const DensityMatrix ss = steady_state(m);
        // Same truncated generator on both sides, so transient leakage is tolerated.
        const Evolution ev = evolve_full(m, make_initial_state(m.space(), {"dark", 3, std::nullopt}), 600.0, 51,
                                         EvolveOptions{1e-10, 1e-12, 1e-2});
        for (const auto& o : m.observables()) {
            CHECK(std::abs(expectation(ss, o.op) - expectation(ev.final_state, o.op)) < 1e-5);
        }
        const double n_num = expectation(ss, m.observable("n")).real();
        const double n_rate = rates(p).n_ss;
        CHECK(n_num / n_rate > 1.0);
        CHECK(n_num / n_rate < 3.0);
        // monotone-trending: the later half never rises above the earlier samples by more than noise
        const auto n = ev.series.column("n");
        CHECK(n.front() == doctest::Approx(3.0));
        CHECK(n[25] < n[5]);
        CHECK(n.back() < n[25]);
    }
}

TEST_CASE("exponential fit") {
    std::vector<double> t, y;
    for (int i = 0; i <= 400; ++i) {
        t.push_back(i * 0.25);
        y.push_back(0.5 + 2.5 * std::exp(-0.1 * t.back()));
    }
    const CoolingFit f = extract_cooling_rate(synthetic(t, y), "n");
    CHECK(f.w_fit == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(f.n_ss_fit == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(f.n0_fit == doctest::Approx(3.0).epsilon(1e-6));

    const RateReport r = rates(fig2());
    const double gm = 1e-3, n = 4.0;
    std::vector<double> ta, ya;
    for (int i = 0; i <= 300; ++i) {
        ta.push_back(i * 0.2);
        ya.push_back(analytic_trajectory(r, gm, n, ta.back()));
    }
    const CoolingFit g = extract_cooling_rate(synthetic(ta, ya), "n");
    CHECK(std::abs(g.w_fit - (r.w + gm)) < 1e-8 * (r.w + gm));

    SUBCASE("window covering too few e-folds") {
        FitOptions o;
        o.t_end = 10.0;
        CHECK_THROWS_AS(extract_cooling_rate(synthetic(t, y), "n", o), FitError);
    }
    SUBCASE("oscillating tail is rejected") {
        std::vector<double> yo;
        for (double tt : t) yo.push_back(0.5 + 2.5 * std::exp(-0.1 * tt) + 0.5 * std::sin(0.7 * tt));
        CHECK_THROWS_AS(extract_cooling_rate(synthetic(t, yo), "n"), FitError);
    }
    CHECK(default_fit_options(fig2()).t_start == doctest::Approx(5.0 / 15.0));
}

TEST_CASE("random detuning ensembles") {
    const auto d = draw_detunings(0.3, 1000, 42);
    CHECK(d == draw_detunings(0.3, 1000, 42));
    CHECK(d != draw_detunings(0.3, 1000, 43));
    for (double v : d) CHECK(std::abs(v) <= 0.3);
    CHECK_THROWS_AS(draw_detunings(-1.0, 3, 1), DomainError);

    ModelParams p = fig2();
    p.bath = Bath::thermal;
    p.temperature = 0.02;
    p.set_quality_q(1e5);
    MonteCarloOptions mc;
    mc.sample_count = 41;
    mc.initial = {"dark", 3, std::nullopt};
    mc.threads = 2;
    mc.evolve.leakage_threshold = 1e-2;

    SUBCASE("zero spread reproduces the deterministic run") {
        const MonteCarloResult r = monte_carlo_detuning(p, 0.0, 3, 42, 8, 40.0, mc);
        const auto m = build_model_three_level(p, 8);
        const TimeSeries single = evolve(m, make_initial_state(m.space(), mc.initial), 40.0, 41, mc.evolve);
        for (std::size_t i = 0; i < single.size(); ++i) CHECK(r.mean.value(i, "n") == doctest::Approx(single.value(i, "n")).epsilon(1e-12));
    }
    SUBCASE("steady mean degrades with the spread, independent of thread count") {
        double prev = 0.0;
        for (double mhz : {0.0, 0.05, 0.1, 0.5}) {
            const double delta = mhz * 1e6 * constants::two_pi / p.omega_m;
            const MonteCarloResult r = monte_carlo_detuning(p, delta, 6, 42, 12, 60.0, mc);
            CHECK(r.n_ss_mean >= prev);
            prev = r.n_ss_mean;
            if (mhz == 0.1) {
                MonteCarloOptions serial = mc;
                serial.threads = 1;
                const MonteCarloResult s = monte_carlo_detuning(p, delta, 6, 42, 12, 60.0, serial);
                CHECK(s.mean.column("n") == r.mean.column("n"));
                CHECK(s.deltas == r.deltas);
            }
        }
    }
    SUBCASE("a failing realization is named") {
        MonteCarloOptions bad = mc;
        bad.initial = {"dark", 2, std::nullopt};
        try {
            monte_carlo_detuning(p, 0.1, 2, 42, 3, 5.0, bad);
            FAIL("expected a solver error");
        } catch (const SolverError& e) {
            CHECK(std::string(e.what()).find("realization 0") != std::string::npos);
        }
    }
}
