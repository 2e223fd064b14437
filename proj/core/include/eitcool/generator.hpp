#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>

#include "eitcool/operator_core.hpp"

namespace eitcool {

// Precompiled form of a LindbladModel used by the integrators:
//   dρ = -i(K ρ - ρ K†) + Σ r L ρ L†,   K = H - (i/2) Σ r L†L.
// Operators stay dense in LindbladModel; this kernel keeps the vectorized
// superoperator in sparse form and applies it as a single mat-vec.
class LindbladGenerator {
public:
    using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

    explicit LindbladGenerator(const LindbladModel& model);

    std::size_t dim() const noexcept { return dim_; }

    // rho and out point to dim*dim column-major storage; they must not alias.
    void apply(const cplx* rho, cplx* out) const;
    Matrix apply(const Matrix& rho) const;

    // Column-major vectorized superoperator, vec(AXB) = (Bᵀ ⊗ A) vec X.
    SparseMatrix liouvillian() const;
    Matrix dense_liouvillian() const;

private:
    std::size_t dim_;
    SparseMatrix k_;
    std::vector<SparseMatrix> jumps_;  // pre-scaled by sqrt(rate)
    SparseMatrix superop_;
};

}  // namespace eitcool
