#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "eitcool/analytics.hpp"
#include "eitcool/errors.hpp"
#include "eitcool/generator.hpp"

namespace eitcool {

namespace {

using Mat3 = Eigen::Matrix3cd;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using CVec8 = Eigen::Matrix<cplx, 8, 1>;

// Columns are |b>, |d>, |A2> expressed on {+1, -1, A2}.
Mat3 bright_dark_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    Mat3 u;
    u << s, s, 0,
         s, -s, 0,
         0, 0, 1;
    return u;
}

Mat3 ket_bra(int m, int n) {
    Mat3 k = Mat3::Zero();
    k(m, n) = 1.0;
    return k;
}

Mat3 sx(int m, int n) { return ket_bra(m, n) + ket_bra(n, m); }
Mat3 sy(int m, int n) { return cplx{0.0, -1.0} * (ket_bra(m, n) - ket_bra(n, m)); }

// The eight Bloch observables in the {b, d, A2} basis.
std::array<Mat3, 8> bloch_observables() {
    constexpr int b = 0, d = 1, a = 2;
    return {ket_bra(b, b), ket_bra(d, d), sx(b, d), sy(b, d), sx(a, b), sy(a, b), sx(a, d), sy(a, d)};
}

void require_bloch_domain(const ModelParams& p) {
    if (!(p.rabi_omega0 > 0.0)) throw DomainError("Bloch system: rabi_omega0 must be > 0");
    if (!(p.gamma_plus + p.gamma_minus > 0.0)) throw DomainError("Bloch system: excited-state decay must be > 0");
    if (p.nuclear_shift != 0.0) throw DomainError("Bloch system: requires two-photon resonance (nuclear_shift = 0)");
}

}  // namespace

BlochSystem bloch_system(const ModelParams& p) {
    p.validate();
    require_bloch_domain(p);
    const double a = p.rabi_omega0 / std::sqrt(2.0);
    const double decay = p.gamma_plus + p.gamma_minus;
    const double feed = decay / 2.0;                  // into each of |b>, |d>
    const double skew = p.gamma_plus - p.gamma_minus;  // feeds the b-d coherence
    const double dl = p.detuning;

    BlochSystem s;
    s.m.setZero();
    s.c.setZero();
    // populations, with ρ_AA = 1 - ρ_bb - ρ_dd eliminated
    s.m(0, 5) = -a;
    s.m(0, 0) = -feed;
    s.m(0, 1) = -feed;
    s.c(0) = feed;
    s.m(1, 0) = -feed;
    s.m(1, 1) = -feed;
    s.c(1) = feed;
    // b-d coherence
    s.m(2, 7) = -a;
    s.m(2, 0) = -skew;
    s.m(2, 1) = -skew;
    s.c(2) = skew;
    s.m(3, 6) = a;
    // A2-b coherence
    s.m(4, 4) = -decay / 2.0;
    s.m(4, 5) = dl;
    s.m(5, 5) = -decay / 2.0;
    s.m(5, 4) = -dl;
    s.m(5, 0) = 4.0 * a;
    s.m(5, 1) = 2.0 * a;
    s.c(5) = -2.0 * a;
    // A2-d coherence
    s.m(6, 6) = -decay / 2.0;
    s.m(6, 7) = dl;
    s.m(6, 3) = -a;
    s.m(7, 7) = -decay / 2.0;
    s.m(7, 6) = -dl;
    s.m(7, 2) = a;
    return s;
}

Matrix bloch_to_density(const Vec8& x) {
    constexpr int b = 0, d = 1, a = 2;
    Mat3 r = Mat3::Zero();
    r(b, b) = x(0);
    r(d, d) = x(1);
    r(a, a) = 1.0 - x(0) - x(1);
    // <σx^{m,n}> = 2 Re ρ_nm, <σy^{m,n}> = 2 Im ρ_nm
    r(d, b) = cplx{x(2), x(3)} / 2.0;
    r(b, a) = cplx{x(4), x(5)} / 2.0;
    r(d, a) = cplx{x(6), x(7)} / 2.0;
    r(b, d) = std::conj(r(d, b));
    r(a, b) = std::conj(r(b, a));
    r(a, d) = std::conj(r(d, a));
    const Mat3 u = bright_dark_basis();
    return u * r * u.adjoint();
}

DensityMatrix bloch_steady_state(const ModelParams& p) {
    const BlochSystem s = bloch_system(p);
    Eigen::FullPivLU<Eigen::Matrix<double, 8, 8>> lu(s.m);
    if (!lu.isInvertible()) throw SolverError("bloch_steady_state: singular Bloch matrix");
    const Vec8 x = lu.solve(-s.c);
    Matrix rho = bloch_to_density(x);
    rho = (rho + rho.adjoint()) / 2.0;
    return DensityMatrix(HilbertSpace(three_level_labels(), 1), std::move(rho));
}

namespace {

// Quantum-regression initial vector x0_k = Tr(X_k Y ρ_ss), Y = σy^{A2,d}.
CVec8 regression_initial(const ModelParams& p) {
    const Mat3 u = bright_dark_basis();
    const Mat3 rho = u.adjoint() * bloch_steady_state(p).matrix() * u;
    const auto obs = bloch_observables();
    const Mat3 y_rho = obs[7] * rho;
    CVec8 x0;
    for (int k = 0; k < 8; ++k) x0(k) = (obs[k] * y_rho).trace();
    return x0;
}

}  // namespace

std::vector<cplx> correlation_transform_numeric(const ModelParams& p, std::span<const double> omegas,
                                                TransformMethod method) {
    if (method == TransformMethod::quadrature) {
        std::vector<cplx> out;
        for (const auto& r : correlation_transform_quadrature(p, omegas)) out.push_back(r.value);
        return out;
    }
    const BlochSystem s = bloch_system(p);
    const CVec8 x0 = regression_initial(p);
    const Eigen::Matrix<cplx, 8, 8> mc = s.m.cast<cplx>();
    std::vector<cplx> out;
    out.reserve(omegas.size());
    for (double w : omegas) {
        const Eigen::Matrix<cplx, 8, 8> a = cplx{0.0, -w} * Eigen::Matrix<cplx, 8, 8>::Identity() - mc;
        Eigen::FullPivLU<Eigen::Matrix<cplx, 8, 8>> lu(a);
        if (!lu.isInvertible()) throw SolverError("correlation_transform_numeric: singular resolvent");
        out.push_back(lu.solve(x0)(7));
    }
    return out;
}

cplx correlation_transform_numeric(const ModelParams& p, double omega, TransformMethod method) {
    return correlation_transform_numeric(p, std::span<const double>(&omega, 1), method).front();
}

std::vector<QuadratureReport> correlation_transform_quadrature(const ModelParams& p, std::span<const double> omegas,
                                                               double step, double tail_tol) {
    if (!(step > 0.0)) throw DomainError("correlation quadrature: step must be > 0");
    const BlochSystem s = bloch_system(p);
    const CVec8 x0 = regression_initial(p);

    Eigen::EigenSolver<Eigen::Matrix<double, 8, 8>> es(s.m);
    const double abscissa = es.eigenvalues().real().maxCoeff();
    if (!(abscissa < 0.0)) {
        throw SolverError("correlation quadrature: correlation does not decay (spectral abscissa " +
                          std::to_string(abscissa) + ")");
    }
    const Eigen::Matrix<cplx, 8, 8> v = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::Matrix<cplx, 8, 8>> svd(v);
    const double kappa = svd.singularValues()(0) / svd.singularValues()(7);
    // ‖y(t)‖ <= κ ‖x0‖ e^{αt}; integrate until the remaining tail is below tail_tol.
    const double scale = kappa * x0.norm() / (-abscissa);
    double t_end = scale > tail_tol ? std::log(scale / tail_tol) / (-abscissa) : step * 2;
    auto steps = static_cast<std::size_t>(std::ceil(t_end / step));
    if (steps % 2) ++steps;
    t_end = static_cast<double>(steps) * step;

    const Eigen::Matrix<double, 8, 8> prop = (s.m * step).exp();
    const Eigen::Matrix<cplx, 8, 8> propc = prop.cast<cplx>();

    const std::size_t nw = omegas.size();
    std::vector<cplx> sum(nw, cplx{}), phase(nw, cplx{1.0, 0.0}), rot(nw);
    for (std::size_t j = 0; j < nw; ++j) rot[j] = std::exp(cplx{0.0, omegas[j] * step});

    CVec8 y = x0;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double weight = (k == 0 || k == steps) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        const cplx f = weight * y(7);
        for (std::size_t j = 0; j < nw; ++j) {
            sum[j] += f * phase[j];
            phase[j] *= rot[j];
        }
        if (k < steps) y = propc * y;
    }
    const double tail = kappa * x0.norm() * std::exp(abscissa * t_end) / (-abscissa);
    std::vector<QuadratureReport> out;
    out.reserve(nw);
    for (std::size_t j = 0; j < nw; ++j) out.push_back({sum[j] * (step / 3.0), tail, t_end, steps});
    return out;
}

SpectrumSeries absorption_spectrum(const ModelParams& p, std::span<const double> probe_detunings) {
    if (probe_detunings.empty()) throw DomainError("absorption_spectrum: empty probe grid");
    const LindbladModel model = build_model_three_level(p, 1);
    const LindbladGenerator gen(model);
    const Matrix l0 = gen.dense_liouvillian();
    const DensityMatrix rho0 = bloch_steady_state(p);
    const auto& space = model.space();
    const auto d = static_cast<Eigen::Index>(space.dim());

    // Weak σ⁺ probe, H₁ = V e^{-iωt} + h.c. with V = ½|A2><+1|.
    const Matrix v = 0.5 * transition(space, level::excited, level::plus).matrix();
    const Matrix rhs_m = cplx{0.0, 1.0} * (v * rho0.matrix() - rho0.matrix() * v);
    const Vector rhs = Eigen::Map<const Vector>(rhs_m.data(), d * d);
    // Rank-one trace term removes the zero mode of L0 without changing traceless solutions.
    const Vector vec_rho0 = Eigen::Map<const Vector>(rho0.matrix().data(), d * d);
    const Matrix id = Matrix::Identity(d, d);
    const Vector vec_id = Eigen::Map<const Vector>(id.data(), d * d);
    const Matrix pinned = l0 + vec_rho0 * vec_id.transpose();

    const auto row = static_cast<Eigen::Index>(space.level(level::excited));
    const auto col = static_cast<Eigen::Index>(space.level(level::plus));
    const double decay = p.gamma_plus + p.gamma_minus;

    SpectrumSeries s;
    s.kind = SpectrumKind::absorption;
    s.omegas.assign(probe_detunings.begin(), probe_detunings.end());
    s.values.reserve(probe_detunings.size());
    for (double w : probe_detunings) {
        Matrix a = pinned;
        a.diagonal().array() += cplx{0.0, w};
        Eigen::PartialPivLU<Matrix> lu(a);
        const Vector x = lu.solve(rhs);
        if (!x.allFinite()) throw SolverError("absorption_spectrum: singular linear response at omega = " + std::to_string(w));
        const cplx coh = x(col * d + row);
        s.values.emplace_back(-decay * coh.imag(), 0.0);
    }
    s.validate();
    return s;
}

}  // namespace eitcool
