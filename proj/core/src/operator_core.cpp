#include "eitcool/operator_core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eitcool/errors.hpp"

namespace eitcool {

namespace {

void require_same_space(const HilbertSpace& a, const HilbertSpace& b, const char* what) {
    if (!(a == b)) throw DimensionError(std::string(what) + ": operands live on different spaces");
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace

HilbertSpace::HilbertSpace(std::vector<std::string> internal_labels, std::size_t fock_dim)
    : labels_(std::move(internal_labels)), fock_dim_(fock_dim) {
    if (labels_.empty()) throw DomainError("HilbertSpace: at least one internal level required");
    if (fock_dim_ < 1) throw DomainError("HilbertSpace: fock_dim must be >= 1");
    std::set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) throw DomainError("HilbertSpace: duplicate level label '" + l + "'");
    }
    if (dim() > max_dense_dimension) {
        throw DomainError("HilbertSpace: dimension " + std::to_string(dim()) + " exceeds dense limit " +
                          std::to_string(max_dense_dimension));
    }
}

bool HilbertSpace::has(std::string_view label) const noexcept {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t HilbertSpace::level(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw DomainError("unknown level label '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

HilbertSpace compose_space(std::vector<std::string> internal_labels, std::size_t fock_dim) {
    if (fock_dim < 2) throw DomainError("compose_space: fock_dim must be >= 2, got " + std::to_string(fock_dim));
    return HilbertSpace(std::move(internal_labels), fock_dim);
}

Operator::Operator(HilbertSpace space, Matrix matrix) : space_(std::move(space)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(space_.dim());
    if (matrix_.rows() != d || matrix_.cols() != d) {
        throw DimensionError("Operator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                             std::to_string(matrix_.cols()) + ", space dimension is " + std::to_string(d));
    }
}

Operator Operator::adjoint() const { return Operator(space_, matrix_.adjoint()); }

double Operator::hermiticity_residual() const {
    if (matrix_.size() == 0) return 0.0;
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

Operator& Operator::operator+=(const Operator& other) {
    require_same_space(space_, other.space_, "operator+");
    matrix_ += other.matrix_;
    return *this;
}

Operator& Operator::operator-=(const Operator& other) {
    require_same_space(space_, other.space_, "operator-");
    matrix_ -= other.matrix_;
    return *this;
}

Operator& Operator::operator*=(cplx factor) {
    matrix_ *= factor;
    return *this;
}

Operator operator*(const Operator& a, const Operator& b) {
    require_same_space(a.space(), b.space(), "operator*");
    return Operator(a.space(), a.matrix() * b.matrix());
}

Operator zero_operator(const HilbertSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    return Operator(space, Matrix::Zero(d, d));
}

Operator identity(const HilbertSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dim());
    return Operator(space, Matrix::Identity(d, d));
}

Operator embed_internal(const HilbertSpace& space, const Matrix& internal) {
    const auto ni = static_cast<Eigen::Index>(space.internal_dim());
    const auto nf = static_cast<Eigen::Index>(space.fock_dim());
    if (internal.rows() != ni || internal.cols() != ni) throw DimensionError("embed_internal: wrong block size");
    Matrix m = Matrix::Zero(ni * nf, ni * nf);
    for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index j = 0; j < ni; ++j) {
            if (internal(i, j) == cplx{}) continue;
            for (Eigen::Index n = 0; n < nf; ++n) m(i * nf + n, j * nf + n) = internal(i, j);
        }
    return Operator(space, std::move(m));
}

Operator embed_fock(const HilbertSpace& space, const Matrix& fock) {
    const auto ni = static_cast<Eigen::Index>(space.internal_dim());
    const auto nf = static_cast<Eigen::Index>(space.fock_dim());
    if (fock.rows() != nf || fock.cols() != nf) throw DimensionError("embed_fock: wrong block size");
    Matrix m = Matrix::Zero(ni * nf, ni * nf);
    for (Eigen::Index i = 0; i < ni; ++i) m.block(i * nf, i * nf, nf, nf) = fock;
    return Operator(space, std::move(m));
}

Operator annihilation(const HilbertSpace& space) {
    const auto nf = static_cast<Eigen::Index>(space.fock_dim());
    Matrix b = Matrix::Zero(nf, nf);
    for (Eigen::Index n = 1; n < nf; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
    return embed_fock(space, b);
}

Operator creation(const HilbertSpace& space) { return annihilation(space).adjoint(); }

Operator number_operator(const HilbertSpace& space) {
    const auto nf = static_cast<Eigen::Index>(space.fock_dim());
    Matrix n = Matrix::Zero(nf, nf);
    for (Eigen::Index k = 0; k < nf; ++k) n(k, k) = static_cast<double>(k);
    return embed_fock(space, n);
}

Operator transition(const HilbertSpace& space, std::string_view ket, std::string_view bra) {
    const auto ni = static_cast<Eigen::Index>(space.internal_dim());
    Matrix a = Matrix::Zero(ni, ni);
    a(static_cast<Eigen::Index>(space.level(ket)), static_cast<Eigen::Index>(space.level(bra))) = 1.0;
    return embed_internal(space, a);
}

Operator projector(const HilbertSpace& space, std::string_view label) { return transition(space, label, label); }

Vector internal_vector(const HilbertSpace& space, const LabelAmplitudes& amplitudes) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.internal_dim()));
    for (const auto& [label, amp] : amplitudes) v(static_cast<Eigen::Index>(space.level(label))) += amp;
    return v;
}

Operator outer(const HilbertSpace& space, const Vector& ket, const Vector& bra) {
    return embed_internal(space, ket * bra.adjoint());
}

Operator sigma_x(const HilbertSpace& space, std::string_view m, std::string_view n) {
    return transition(space, m, n) + transition(space, n, m);
}

Operator sigma_y(const HilbertSpace& space, std::string_view m, std::string_view n) {
    return cplx{0.0, -1.0} * (transition(space, m, n) - transition(space, n, m));
}

DensityMatrix::DensityMatrix(HilbertSpace space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    const auto d = static_cast<Eigen::Index>(space_.dim());
    if (matrix_.rows() != d || matrix_.cols() != d) throw DimensionError("DensityMatrix: shape does not match space");
    const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > hermiticity_tol) {
        throw DomainError("DensityMatrix: not Hermitian (residual " + format_double(herm) + ")");
    }
    const cplx tr = matrix_.trace();
    if (std::abs(tr - 1.0) > trace_tol) {
        throw DomainError("DensityMatrix: trace " + format_double(tr.real()) + " differs from 1");
    }
}

DensityMatrix DensityMatrix::pure(HilbertSpace space, const Vector& ket) {
    const double norm = ket.norm();
    if (norm == 0.0) throw DomainError("DensityMatrix::pure: zero vector");
    Vector v = ket / norm;
    return DensityMatrix(std::move(space), v * v.adjoint());
}

DensityMatrix DensityMatrix::product(HilbertSpace space, const Matrix& internal, const Matrix& fock) {
    const auto ni = static_cast<Eigen::Index>(space.internal_dim());
    const auto nf = static_cast<Eigen::Index>(space.fock_dim());
    if (internal.rows() != ni || internal.cols() != ni || fock.rows() != nf || fock.cols() != nf) {
        throw DimensionError("DensityMatrix::product: factor shapes do not match space");
    }
    Matrix m(ni * nf, ni * nf);
    for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index j = 0; j < ni; ++j) m.block(i * nf, j * nf, nf, nf) = internal(i, j) * fock;
    return DensityMatrix(std::move(space), std::move(m));
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::check_positivity(double floor) const {
    const double lo = min_eigenvalue();
    if (lo < floor) {
        throw DomainError("DensityMatrix: eigenvalue " + format_double(lo) + " below positivity floor " +
                          format_double(floor));
    }
}

Matrix DensityMatrix::internal_state() const {
    const auto ni = static_cast<Eigen::Index>(space_.internal_dim());
    const auto nf = static_cast<Eigen::Index>(space_.fock_dim());
    Matrix r(ni, ni);
    for (Eigen::Index i = 0; i < ni; ++i)
        for (Eigen::Index j = 0; j < ni; ++j) r(i, j) = matrix_.block(i * nf, j * nf, nf, nf).trace();
    return r;
}

Matrix DensityMatrix::fock_populations() const {
    const auto ni = static_cast<Eigen::Index>(space_.internal_dim());
    const auto nf = static_cast<Eigen::Index>(space_.fock_dim());
    Matrix r = Matrix::Zero(nf, nf);
    for (Eigen::Index i = 0; i < ni; ++i) r += matrix_.block(i * nf, i * nf, nf, nf);
    return r;
}

Matrix fock_state(std::size_t fock_dim, std::size_t n) {
    if (n >= fock_dim) throw DomainError("fock_state: level " + std::to_string(n) + " outside truncation");
    const auto d = static_cast<Eigen::Index>(fock_dim);
    Matrix m = Matrix::Zero(d, d);
    m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) = 1.0;
    return m;
}

Matrix thermal_fock_state(std::size_t fock_dim, double nbar) {
    if (!(nbar >= 0.0)) throw DomainError("thermal_fock_state: mean occupation must be >= 0");
    const auto d = static_cast<Eigen::Index>(fock_dim);
    Matrix m = Matrix::Zero(d, d);
    const double q = nbar / (nbar + 1.0);
    double p = 1.0, total = 0.0;
    for (Eigen::Index n = 0; n < d; ++n) {
        m(n, n) = p;
        total += p;
        p *= q;
    }
    return m / total;
}

LindbladModel::LindbladModel(HilbertSpace space, Operator hamiltonian, std::vector<Channel> channels,
                             std::vector<NamedOperator> observables)
    : space_(std::move(space)),
      hamiltonian_(std::move(hamiltonian)),
      channels_(std::move(channels)),
      observables_(std::move(observables)) {
    require_same_space(space_, hamiltonian_.space(), "LindbladModel hamiltonian");
    if (!hamiltonian_.is_hermitian(1e-10)) {
        throw DomainError("LindbladModel: Hamiltonian not Hermitian (residual " +
                          format_double(hamiltonian_.hermiticity_residual()) + ")");
    }
    for (const auto& c : channels_) {
        if (!(c.rate >= 0.0) || !std::isfinite(c.rate)) {
            throw DomainError("LindbladModel: channel '" + c.name + "' has invalid rate " + format_double(c.rate));
        }
        require_same_space(space_, c.jump.space(), "LindbladModel channel");
    }
    std::set<std::string> names;
    for (const auto& o : observables_) {
        require_same_space(space_, o.op.space(), "LindbladModel observable");
        if (!names.insert(o.name).second) throw DomainError("LindbladModel: duplicate observable '" + o.name + "'");
    }
}

const Operator& LindbladModel::observable(std::string_view name) const {
    for (const auto& o : observables_)
        if (o.name == name) return o.op;
    throw DomainError("LindbladModel: no observable named '" + std::string(name) + "'");
}

Matrix lindblad_rhs(const LindbladModel& model, const Matrix& rho) {
    const auto d = static_cast<Eigen::Index>(model.space().dim());
    if (rho.rows() != d || rho.cols() != d) throw DimensionError("lindblad_rhs: state shape does not match model");
    const Matrix& h = model.hamiltonian().matrix();
    Matrix out = cplx{0.0, -1.0} * (h * rho - rho * h);
    for (const auto& c : model.channels()) {
        if (c.rate == 0.0) continue;
        const Matrix& l = c.jump.matrix();
        const Matrix ldl = l.adjoint() * l;
        out += (c.rate / 2.0) * (2.0 * l * rho * l.adjoint() - ldl * rho - rho * ldl);
    }
    return out;
}

Matrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho) {
    require_same_space(model.space(), rho.space(), "lindblad_rhs");
    return lindblad_rhs(model, rho.matrix());
}

cplx trace_product(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) throw DimensionError("trace_product: shape mismatch");
    return a.cwiseProduct(b.transpose()).sum();
}

cplx expectation(const DensityMatrix& rho, const Operator& op) {
    require_same_space(rho.space(), op.space(), "expectation");
    return trace_product(op.matrix(), rho.matrix());
}

void write_triplets(std::ostream& out, const Matrix& m, double threshold) {
    out << "row,col,re,im\n";
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const cplx v = m(i, j);
            if (v == cplx{} || std::abs(v) < threshold) continue;
            out << i << ',' << j << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
        }
}

Matrix read_triplets(std::istream& in, std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix m = Matrix::Zero(d, d);
    std::string line;
    if (!std::getline(in, line)) throw IoError("read_triplets: empty input");
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string f[4];
        for (auto& s : f)
            if (!std::getline(ss, s, ',')) throw IoError("read_triplets: malformed line " + std::to_string(lineno));
        const long r = std::stol(f[0]), c = std::stol(f[1]);
        if (r < 0 || c < 0 || r >= d || c >= d) throw IoError("read_triplets: index out of range on line " + std::to_string(lineno));
        m(r, c) = cplx{std::stod(f[2]), std::stod(f[3])};
    }
    return m;
}

}  // namespace eitcool
