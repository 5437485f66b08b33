#include "hybridcast/kpca.hpp"

#include <cmath>
#include <string>

#include "hybridcast/error.hpp"

namespace hybridcast {

CenteredKernel center_kernel(const Matrix& k) {
    require_symmetric(k);
    const Eigen::Index n = k.rows();
    CenteredKernel out;
    if (n == 0) return out;
    out.stats.column_means = k.colwise().mean().transpose();
    out.stats.grand_mean = out.stats.column_means.mean();
    const Vector& m = out.stats.column_means;
    out.k.resize(n, n);
    // K is symmetric, so row means equal column means.
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i < n; ++i) {
            const double v = k(i, j) - m(i) - m(j) + out.stats.grand_mean;
            out.k(i, j) = v;
            out.k(j, i) = v;
        }
    }
    return out;
}

Matrix center_kernel_rows(const Matrix& rows, const CenteringStats& stats) {
    if (rows.cols() != stats.column_means.size()) {
        throw ValidationError("kernel row length does not match the training sample count");
    }
    Matrix out = rows;
    const Vector row_means = rows.rowwise().mean();
    out.rowwise() -= stats.column_means.transpose();
    out.colwise() -= row_means;
    out.array() += stats.grand_mean;
    return out;
}

KpcaModel kpca_fit(const Matrix& x, const Kernel& kernel, const ComponentSelection& selection) {
    const Eigen::Index n = x.rows();
    if (n < 2) throw ValidationError("kpca: need at least 2 samples, got " + std::to_string(n));
    if (selection.components && (*selection.components < 1 || *selection.components > n)) {
        throw ValidationError("kpca: component count " + std::to_string(*selection.components) +
                              " outside [1, " + std::to_string(n) + "]");
    }
    if (selection.variance_fraction &&
        !(*selection.variance_fraction > 0.0 && *selection.variance_fraction <= 1.0)) {
        throw ValidationError("kpca: variance fraction must lie in (0, 1]");
    }

    KpcaModel model;
    model.train = x;
    model.kernel = kernel;
    CenteredKernel centered = center_kernel(kernel_matrix(x, kernel));
    model.stats = std::move(centered.stats);
    SymmetricEigen eig = sym_eig(centered.k);
    model.spectrum = eig.values;

    const double top = eig.values(0);
    const double floor = kEigenFloor * top;
    Eigen::Index rank = 0;
    if (top > 0.0) {
        while (rank < n && eig.values(rank) > floor) ++rank;
    }
    if (rank == 0) throw NumericalError("kpca: degenerate kernel, every eigenvalue is at or below the floor");

    Eigen::Index keep = rank;
    if (selection.components) {
        keep = std::min<Eigen::Index>(*selection.components, rank);
    } else {
        const double theta = selection.variance_fraction.value_or(0.95);
        const double total = eig.values.head(rank).sum();
        double acc = 0.0;
        keep = 0;
        while (keep < rank) {
            acc += eig.values(keep++);
            if (acc >= theta * total * (1.0 - 1e-12)) break;
        }
    }

    model.eigenvalues = eig.values.head(keep);
    model.alphas = eig.vectors.leftCols(keep);
    for (Eigen::Index j = 0; j < keep; ++j) model.alphas.col(j) /= std::sqrt(model.eigenvalues(j));
    return model;
}

Matrix kpca_transform(const KpcaModel& model, const Matrix& x) {
    if (x.cols() != model.train.cols()) {
        throw ValidationError("kpca_transform: sample dimension " + std::to_string(x.cols()) +
                              " does not match training dimension " + std::to_string(model.train.cols()));
    }
    const Matrix rows = center_kernel_rows(cross_kernel(x, model.train, model.kernel), model.stats);
    return rows * model.alphas;
}

Vector kpca_transform(const KpcaModel& model, std::span<const double> x) {
    const auto d = static_cast<Eigen::Index>(x.size());
    const Matrix row = Eigen::Map<const Vector>(x.data(), d).transpose();
    return kpca_transform(model, row).row(0).transpose();
}

Matrix kpca_training_projection(const KpcaModel& model) {
    return center_kernel(kernel_matrix(model.train, model.kernel)).k * model.alphas;
}

}  // namespace hybridcast
