#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"

#include "eitcool/constants.hpp"
#include "eitcool/dynamics.hpp"
#include "eitcool/errors.hpp"
#include "eitcool/nv_model.hpp"

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

std::vector<double> sorted_eigenvalues(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(v.begin(), v.end());
    return v;
}
}  // namespace

TEST_CASE("rotating-frame Hamiltonian spectrum") {
    SUBCASE("no drive, no coupling is diagonal") {
        ModelParams p = fig2();
        p.rabi_omega0 = 0.0;
        p.eta = 0.0;
        const HilbertSpace s = compose_space(three_level_labels(), 4);
        const Matrix h = build_h_rot(p, s).matrix();
        Matrix off = h;
        off.diagonal().setZero();
        CHECK(off.norm() == 0.0);
        for (std::size_t n = 0; n < 4; ++n) {
            const auto a = static_cast<Eigen::Index>(s.index(s.level("A2"), n));
            const auto g = static_cast<Eigen::Index>(s.index(s.level("+1"), n));
            CHECK(h(a, a).real() == doctest::Approx(n - 31.0));
            CHECK(h(g, g).real() == doctest::Approx(double(n)));
        }
    }
    SUBCASE("vacuum block gives the dressed energies and the dark state") {
        const auto ev = sorted_eigenvalues(build_h_rot(fig2(), HilbertSpace(three_level_labels(), 1)).matrix());
        CHECK(ev[0] == doctest::Approx(-32.0).epsilon(1e-12));
        CHECK(std::abs(ev[1]) < 1e-12);
        CHECK(ev[2] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("decoupled spectrum is the union over Fock levels") {
        ModelParams p = fig2();
        p.eta = 0.0;
        const std::size_t f = 8;
        const auto ev = sorted_eigenvalues(build_h_rot(p, compose_space(three_level_labels(), f)).matrix());
        std::vector<double> expected;
        for (std::size_t n = 0; n < f; ++n)
            for (double e : {1.0, -32.0, 0.0}) expected.push_back(double(n) + e);
        std::sort(expected.begin(), expected.end());
        for (std::size_t i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i] - expected[i]) < 1e-11);
    }
    SUBCASE("Hermitian for random parameters") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-20.0, 20.0);
        for (int i = 0; i < 20; ++i) {
            ModelParams p;
            p.rabi_omega0 = std::abs(u(rng));
            p.detuning = u(rng);
            p.eta = std::abs(u(rng)) / 100.0;
            p.nuclear_shift = u(rng) / 10.0;
            CHECK(build_h_rot(p, compose_space(three_level_labels(), 5)).hermiticity_residual() < 1e-12);
        }
    }
    SUBCASE("missing levels") {
        CHECK_THROWS_AS(build_h_rot(fig2(), compose_space({"+1", "A2"}, 3)), DomainError);
    }
}

TEST_CASE("polaron-frame Hamiltonian") {
    SUBCASE("zero coupling leaves only the dressed part") {
        ModelParams p = fig2();
        p.eta = 0.0;
        const HilbertSpace s = compose_space(three_level_labels(), 5);
        const auto eff = build_effective_h(p, s);
        CHECK(eff.v.matrix().norm() == 0.0);
        const auto a = sorted_eigenvalues(eff.h0.matrix());
        const auto b = sorted_eigenvalues(build_h_rot(p, s).matrix());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-11);
    }
    SUBCASE("coupling matrix element") {
        ModelParams p = fig2();
        const HilbertSpace s = compose_space(three_level_labels(), 6);
        const Matrix v = build_effective_h(p, s).v.matrix();
        const Vector dark = dark_vector(s);
        const Eigen::Index a2 = static_cast<Eigen::Index>(s.level("A2"));
        for (std::size_t n = 0; n + 1 < 6; ++n) {
            cplx elem = 0.0;
            for (Eigen::Index k = 0; k < 3; ++k) {
                elem += std::conj(dark(k)) * v(static_cast<Eigen::Index>(s.index(std::size_t(k), n)),
                                               static_cast<Eigen::Index>(s.index(std::size_t(a2), n + 1)));
            }
            CHECK(std::abs(elem) == doctest::Approx(p.eta * 8.0 / std::sqrt(2.0) * std::sqrt(n + 1.0)));
        }
    }
    SUBCASE("first-order residual of the displacement transform scales as the square of the coupling") {
        const HilbertSpace s = compose_space(three_level_labels(), 5);
        std::vector<double> ratios;
        for (double eta : {0.1, 0.05, 0.025}) {
            ModelParams p = fig2();
            p.eta = eta;
            const Matrix sz = (projector(s, "+1") - projector(s, "-1")).matrix();
            const Matrix bm = (annihilation(s) - creation(s)).matrix();
            const Matrix gen = -eta * sz * bm;  // -iS with S = -iη σz (b - b†)
            const Matrix u = gen.exp();
            const Matrix transformed = u * build_h_rot(p, s).matrix() * u.adjoint();
            const auto eff = build_effective_h(p, s);
            const double residual = (transformed - eff.h0.matrix() - eff.v.matrix()).cwiseAbs().maxCoeff();
            ratios.push_back(residual / (eta * eta));
        }
        const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
        CHECK((*hi - *lo) / *lo < 0.2);
    }
}

TEST_CASE("dressed states") {
    const DressedStateReport r = dressed_states(fig2());
    CHECK(r.E_plus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.E_minus == doctest::Approx(-32.0).epsilon(1e-14));
    CHECK(std::pow(std::cos(r.phi), 2) == doctest::Approx(1.0 / 33.0).epsilon(1e-12));
    CHECK(r.linewidth_plus == doctest::Approx(15.0 / 33.0).epsilon(1e-12));
    CHECK(r.linewidth_plus + r.linewidth_minus == doctest::Approx(15.0).epsilon(1e-14));

    ModelParams sym = fig2();
    sym.detuning = 0.0;
    const DressedStateReport z = dressed_states(sym);
    CHECK(z.phi == doctest::Approx(constants::pi / 4));
    CHECK(z.E_plus == doctest::Approx(8.0 / std::sqrt(2.0)));
    CHECK(z.linewidth_plus == doctest::Approx(7.5));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 20.0);
    for (int i = 0; i < 50; ++i) {
        ModelParams p = fig2();
        p.rabi_omega0 = u(rng);
        p.detuning = u(rng) - 10.0;
        const DressedStateReport d = dressed_states(p);
        CHECK(d.E_plus >= d.E_minus);
        CHECK(std::abs(d.E_plus * d.E_minus + p.rabi_omega0 * p.rabi_omega0 / 2) < 1e-12 * p.rabi_omega0 * p.rabi_omega0);
        CHECK(std::abs(d.E_plus + d.E_minus + p.detuning) < 1e-12 * (1 + std::abs(p.detuning)));
        CHECK(std::abs(d.linewidth_plus + d.linewidth_minus - p.gamma_total) < 1e-12);
        p.set_optimum(p.rabi_omega0);
        CHECK(dressed_states(p).E_plus == doctest::Approx(1.0).epsilon(1e-12));
    }
    ModelParams zero = fig2();
    zero.rabi_omega0 = 0.0;
    zero.detuning = 0.0;
    CHECK_THROWS_AS(dressed_states(zero), DomainError);
}

TEST_CASE("model variants") {
    ModelParams p = fig2();
    CHECK(build_model_three_level(p, 4).channels().size() == 3);
    p.bath = Bath::thermal;
    p.temperature = 0.02;
    CHECK(build_model_three_level(p, 4).channels().size() == 4);

    ModelParams q = fig2();
    CHECK_THROWS_AS(build_model_four_level(q, 4), DomainError);
    q.gamma_op_p1 = 0.1;
    q.gamma_op_m1 = 0.1;
    q.gamma_0 = 1.5;
    CHECK(build_model_four_level(q, 4).channels().size() == 6);
    q.rabi_pump = 15.0;
    q.Gamma_0 = 15.0;
    q.Gamma_p1 = q.Gamma_m1 = 0.1;
    q.gamma_dark = 15.0 / 130;
    q.gamma_s = 15.0 / 33;
    CHECK(build_model_seven_level(q, 4).channels().size() == 8);

    const auto m = build_model_three_level(fig2(), 4);
    for (const char* name : {"n", "dark", "bright", "p_A2", "p_+1", "p_-1"}) CHECK_NOTHROW(m.observable(name));
    for (const auto& c : m.channels()) CHECK(c.rate >= 0.0);
}

TEST_CASE("four-level model reduces to three levels when the extra channels vanish") {
    ModelParams p = fig2();
    p.gamma_p1 = 6.0;
    p.gamma_m1 = 9.0;
    p.gamma_0 = 0.0;
    p.gamma_op_p1 = 0.0;
    p.gamma_op_m1 = 0.0;
    ModelParams p3 = p;
    p3.gamma_plus = p.gamma_p1;
    p3.gamma_minus = p.gamma_m1;
    const std::size_t f = 4;
    const auto m3 = build_model_three_level(p3, f);
    const auto m4 = build_model_four_level(p, f);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    const auto d3 = static_cast<Eigen::Index>(m3.space().dim());
    Matrix a(d3, d3);
    for (Eigen::Index i = 0; i < d3; ++i)
        for (Eigen::Index j = 0; j < d3; ++j) a(i, j) = cplx(g(rng), g(rng));
    Matrix rho3 = a * a.adjoint();
    rho3 /= rho3.trace();
    Matrix rho4 = Matrix::Zero(4 * f, 4 * f);
    rho4.topLeftCorner(d3, d3) = rho3;
    const Matrix r3 = lindblad_rhs(m3, rho3);
    const Matrix r4 = lindblad_rhs(m4, rho4);
    CHECK((r4.topLeftCorner(d3, d3) - r3).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(r4.bottomRows(f).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("seven-level model without pump traps population in |0>") {
    ModelParams p = fig2();
    p.rabi_pump = 0.0;
    p.Gamma_0 = 15.0;
    p.gamma_dark = 0.1;
    p.gamma_s = 0.4;
    p.gamma_mech = 0.01;
    const auto m = build_model_seven_level(p, 5);
    const DensityMatrix rho = DensityMatrix::product(m.space(), projector(HilbertSpace(seven_level_labels(), 1), "0").matrix(),
                                                     fock_state(5, 2));
    const Matrix d = lindblad_rhs(m, rho);
    CHECK(std::abs(trace_product(m.observable("p_0").matrix(), d)) < 1e-14);
    CHECK(trace_product(m.observable("n").matrix(), d).real() == doctest::Approx(-0.02).epsilon(1e-12));
    for (const char* l : {"+1", "-1", "A2", "Ey", "1A1"}) {
        CHECK(std::abs(trace_product(m.observable(std::string("p_") + l).matrix(), d)) < 1e-14);
    }
}

TEST_CASE("optical decay and mechanical decay in isolation") {
    SUBCASE("excited population decays at the total rate") {
        ModelParams p = fig2();
        p.rabi_omega0 = 0.0;
        p.eta = 0.0;
        p.gamma_mech = 0.0;
        const auto m = build_model_three_level(p, 2);
        const DensityMatrix rho0 = make_initial_state(m.space(), {"A2", 0, std::nullopt});
        const TimeSeries ts = evolve(m, rho0, 0.4, 21, 1e-10, 1e-12);
        for (std::size_t i = 0; i < ts.size(); ++i)
            CHECK(ts.value(i, "p_A2") == doctest::Approx(std::exp(-15.0 * ts.times()[i])).epsilon(1e-6));
    }
    SUBCASE("zero coupling: phonon number relaxes at the mechanical rate") {
        ModelParams p = fig2();
        p.eta = 0.0;
        p.gamma_mech = 0.3;
        const auto m = build_model_three_level(p, 6);
        const TimeSeries ts = evolve(m, make_initial_state(m.space(), {"dark", 2, std::nullopt}), 5.0, 11, 1e-10, 1e-12);
        for (std::size_t i = 0; i < ts.size(); ++i)
            CHECK(ts.value(i, "n") == doctest::Approx(2.0 * std::exp(-0.3 * ts.times()[i])).epsilon(1e-6));
    }
}

TEST_CASE("Lamb-Dicke parameter from physical inputs") {
    const double omega = constants::two_pi * 1e6;
    const LambDicke ld = lamb_dicke_from_physical(1.22e-14, omega, 2.4e7);
    CHECK(ld.x0 == doctest::Approx(std::sqrt(constants::hbar / (2 * 1.22e-14 * omega))).epsilon(1e-14));
    CHECK(ld.x0 == doctest::Approx(2.62e-14).epsilon(0.01));
    const LambDicke over = lamb_dicke_from_physical(1.22e-14, omega, 2.4e7, constants::electron_g, 1.6e-13);
    CHECK(over.lambda / constants::two_pi == doctest::Approx(107.6e3).epsilon(0.001));
    CHECK(std::abs(over.lambda / constants::two_pi - 115e3) / 115e3 < 0.1);
    CHECK(over.eta == doctest::Approx(over.lambda / omega));
    const LambDicke flat = lamb_dicke_from_physical(1.22e-14, omega, 0.0);
    CHECK(flat.lambda == 0.0);
    CHECK(flat.eta == 0.0);
    CHECK_THROWS_AS(lamb_dicke_from_physical(0.0, omega, 1.0), DomainError);
    CHECK_THROWS_AS(lamb_dicke_from_physical(1e-14, -1.0, 1.0), DomainError);
}

TEST_CASE("parameter invariants and helpers") {
    ModelParams p = fig2();
    CHECK_NOTHROW(p.validate());
    p.gamma_plus = 10.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = fig2();
    p.gamma_s = -1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = fig2();
    p.temperature = -1.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = fig2();
    p.set_quality_q(1e5);
    CHECK(p.gamma_mech == doctest::Approx(1e-5));
    CHECK(p.quality_q() == doctest::Approx(1e5));
    CHECK_THROWS_AS(p.set_quality_q(0.0), DomainError);
    p.set_optimum(8.0);
    CHECK(p.detuning == 31.0);
    CHECK(optimum_detuning(std::sqrt(2.0)) == doctest::Approx(0.0));
    CHECK(default_fock_dim(3.0) == 22);
    CHECK(default_fock_dim(0.0) == 10);
    const HilbertSpace s = compose_space(three_level_labels(), 3);
    CHECK_THROWS_AS(make_initial_state(s, {"Ey", 0, std::nullopt}), DomainError);
    CHECK_THROWS_AS(make_initial_state(s, {"dark", 3, std::nullopt}), DomainError);
}
