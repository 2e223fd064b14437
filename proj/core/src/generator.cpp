#include "eitcool/generator.hpp"

#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "eitcool/errors.hpp"

namespace eitcool {

namespace {

LindbladGenerator::SparseMatrix to_sparse(const Matrix& m) {
    return m.sparseView(cplx{0.0}, 0.0);
}

}  // namespace

LindbladGenerator::LindbladGenerator(const LindbladModel& model) : dim_(model.space().dim()) {
    Matrix k = model.hamiltonian().matrix();
    for (const auto& c : model.channels()) {
        if (c.rate == 0.0) continue;
        const Matrix& l = c.jump.matrix();
        if (l.cwiseAbs().maxCoeff() == 0.0) continue;
        k -= cplx{0.0, 0.5 * c.rate} * (l.adjoint() * l);
        jumps_.push_back(to_sparse(std::sqrt(c.rate) * l));
        jumps_.back().makeCompressed();
    }
    k_ = to_sparse(k);
    k_.makeCompressed();
    superop_ = liouvillian();
}

void LindbladGenerator::apply(const cplx* rho, cplx* out) const {
    const auto n = static_cast<Eigen::Index>(dim_ * dim_);
    Eigen::Map<const Vector> r(rho, n);
    Eigen::Map<Vector> o(out, n);
    o.noalias() = superop_ * r;
}

Matrix LindbladGenerator::apply(const Matrix& rho) const {
    const auto d = static_cast<Eigen::Index>(dim_);
    if (rho.rows() != d || rho.cols() != d) throw DimensionError("LindbladGenerator::apply: shape mismatch");
    Matrix out(d, d);
    apply(rho.data(), out.data());
    return out;
}

LindbladGenerator::SparseMatrix LindbladGenerator::liouvillian() const {
    const auto d = static_cast<Eigen::Index>(dim_);
    SparseMatrix id(d, d);
    id.setIdentity();
    const cplx mi{0.0, -1.0};
    SparseMatrix kconj = k_.conjugate();
    SparseMatrix left = Eigen::kroneckerProduct(id, k_);
    SparseMatrix right = Eigen::kroneckerProduct(kconj, id);
    SparseMatrix lv = mi * left - mi * right;
    for (const auto& l : jumps_) {
        SparseMatrix lc = l.conjugate();
        SparseMatrix term = Eigen::kroneckerProduct(lc, l);
        lv += term;
    }
    lv.makeCompressed();
    return lv;
}

Matrix LindbladGenerator::dense_liouvillian() const {
    if (dim_ * dim_ > max_dense_dimension) {
        throw DomainError("dense Liouvillian of dimension " + std::to_string(dim_ * dim_) +
                          " exceeds the dense limit " + std::to_string(max_dense_dimension));
    }
    return Matrix(liouvillian());
}

}  // namespace eitcool
