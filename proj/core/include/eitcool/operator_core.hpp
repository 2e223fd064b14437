#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace eitcool {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Largest composite dimension accepted by the dense kernels.
inline constexpr std::size_t max_dense_dimension = 1024;

// Composite space internal ⊗ Fock. Basis index = internal * fock_dim + n,
// so the internal index varies slowest.
class HilbertSpace {
public:
    HilbertSpace(std::vector<std::string> internal_labels, std::size_t fock_dim);

    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t fock_dim() const noexcept { return fock_dim_; }
    std::size_t internal_dim() const noexcept { return labels_.size(); }
    std::size_t dim() const noexcept { return labels_.size() * fock_dim_; }

    bool has(std::string_view label) const noexcept;
    std::size_t level(std::string_view label) const;  // throws DomainError
    std::size_t index(std::size_t internal, std::size_t n) const noexcept {
        return internal * fock_dim_ + n;
    }

    friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;

private:
    std::vector<std::string> labels_;
    std::size_t fock_dim_;
};

// Space with a genuine phonon mode: fock_dim >= 2 and unique labels.
HilbertSpace compose_space(std::vector<std::string> internal_labels, std::size_t fock_dim);

class Operator {
public:
    Operator(HilbertSpace space, Matrix matrix);

    const HilbertSpace& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return space_.dim(); }

    Operator adjoint() const;
    double hermiticity_residual() const;
    bool is_hermitian(double tol = 1e-10) const { return hermiticity_residual() <= tol; }

    Operator& operator+=(const Operator& other);
    Operator& operator-=(const Operator& other);
    Operator& operator*=(cplx factor);

    friend Operator operator+(Operator a, const Operator& b) { return a += b; }
    friend Operator operator-(Operator a, const Operator& b) { return a -= b; }
    friend Operator operator*(Operator a, cplx s) { return a *= s; }
    friend Operator operator*(cplx s, Operator a) { return a *= s; }
    friend Operator operator*(const Operator& a, const Operator& b);

private:
    HilbertSpace space_;
    Matrix matrix_;
};

Operator zero_operator(const HilbertSpace& space);
Operator identity(const HilbertSpace& space);
Operator annihilation(const HilbertSpace& space);
Operator creation(const HilbertSpace& space);
Operator number_operator(const HilbertSpace& space);

// |ket><bra| on the internal factor, identity on the Fock factor.
Operator transition(const HilbertSpace& space, std::string_view ket, std::string_view bra);
Operator projector(const HilbertSpace& space, std::string_view label);

// Internal-factor operator A ⊗ 1 and Fock-factor operator 1 ⊗ F.
Operator embed_internal(const HilbertSpace& space, const Matrix& internal);
Operator embed_fock(const HilbertSpace& space, const Matrix& fock);

// Internal vector in label coordinates, e.g. {{"+1", 1/√2}, {"-1", -1/√2}}.
using LabelAmplitudes = std::vector<std::pair<std::string, cplx>>;
Vector internal_vector(const HilbertSpace& space, const LabelAmplitudes& amplitudes);
Operator outer(const HilbertSpace& space, const Vector& ket, const Vector& bra);

Operator sigma_x(const HilbertSpace& space, std::string_view m, std::string_view n);
Operator sigma_y(const HilbertSpace& space, std::string_view m, std::string_view n);

class DensityMatrix {
public:
    static constexpr double hermiticity_tol = 1e-10;
    static constexpr double trace_tol = 1e-9;
    static constexpr double positivity_floor = -1e-8;

    DensityMatrix(HilbertSpace space, Matrix matrix);

    static DensityMatrix pure(HilbertSpace space, const Vector& ket);
    // ρ_internal ⊗ ρ_fock.
    static DensityMatrix product(HilbertSpace space, const Matrix& internal, const Matrix& fock);

    const HilbertSpace& space() const noexcept { return space_; }
    const Matrix& matrix() const noexcept { return matrix_; }

    double min_eigenvalue() const;
    // Throws DomainError when an eigenvalue falls below floor.
    void check_positivity(double floor = positivity_floor) const;

    // Partial traces onto the two factors.
    Matrix internal_state() const;
    Matrix fock_populations() const;

private:
    HilbertSpace space_;
    Matrix matrix_;
};

Matrix fock_state(std::size_t fock_dim, std::size_t n);
// Geometric distribution with mean nbar, truncated and renormalized.
Matrix thermal_fock_state(std::size_t fock_dim, double nbar);

struct Channel {
    double rate;
    Operator jump;
    std::string name;
};

struct NamedOperator {
    std::string name;
    Operator op;
};

class LindbladModel {
public:
    LindbladModel(HilbertSpace space, Operator hamiltonian, std::vector<Channel> channels,
                  std::vector<NamedOperator> observables);

    const HilbertSpace& space() const noexcept { return space_; }
    const Operator& hamiltonian() const noexcept { return hamiltonian_; }
    const std::vector<Channel>& channels() const noexcept { return channels_; }
    const std::vector<NamedOperator>& observables() const noexcept { return observables_; }

    const Operator& observable(std::string_view name) const;

private:
    HilbertSpace space_;
    Operator hamiltonian_;
    std::vector<Channel> channels_;
    std::vector<NamedOperator> observables_;
};

// Reference dense evaluation of
// -i[H,ρ] + Σ_k (r_k/2)(2 L ρ L† - L†L ρ - ρ L†L).
Matrix lindblad_rhs(const LindbladModel& model, const DensityMatrix& rho);
Matrix lindblad_rhs(const LindbladModel& model, const Matrix& rho);

cplx expectation(const DensityMatrix& rho, const Operator& op);
// Tr(A B) without forming the product.
cplx trace_product(const Matrix& a, const Matrix& b);

// Debug dump: one "row,col,re,im" line per nonzero element.
void write_triplets(std::ostream& out, const Matrix& m, double threshold = 0.0);
Matrix read_triplets(std::istream& in, std::size_t dim);

}  // namespace eitcool
