#pragma once

#include <optional>
#include <span>

#include "hybridcast/kernel.hpp"
#include "hybridcast/numerics.hpp"

namespace hybridcast {

/// Column means of the training Gram matrix and its grand mean; enough to
/// center kernel rows of unseen samples consistently with training.
struct CenteringStats {
    Vector column_means;
    double grand_mean = 0.0;
};

struct CenteredKernel {
    Matrix k;
    CenteringStats stats;
};

/// Double-centers a symmetric Gram matrix: K - 1K - K1 + 1K1 with 1 = ones/N.
CenteredKernel center_kernel(const Matrix& k);

/// Centers raw kernel rows (one row per new sample, one column per training
/// sample) with training statistics.
Matrix center_kernel_rows(const Matrix& rows, const CenteringStats& stats);

/// How many components to keep: a fixed count, or the smallest count whose
/// eigenvalue sum reaches `variance_fraction` of the total. Neither set means
/// variance_fraction = 0.95.
struct ComponentSelection {
    std::optional<int> components;
    std::optional<double> variance_fraction;

    static ComponentSelection count(int n) { return {n, std::nullopt}; }
    static ComponentSelection fraction(double theta) { return {std::nullopt, theta}; }
};

/// Eigenvalues at or below this fraction of the largest are never kept.
inline constexpr double kEigenFloor = 1e-10;

struct KpcaModel {
    Matrix train;  // N x d
    Kernel kernel;
    CenteringStats stats;
    Vector eigenvalues;  // retained, descending, of the centered Gram matrix
    Matrix alphas;       // N x n', column j scaled so eigenvalues(j) * |alphas.col(j)|^2 = 1
    Vector spectrum;     // every eigenvalue of the centered Gram matrix, descending

    int components() const { return static_cast<int>(alphas.cols()); }
};

KpcaModel kpca_fit(const Matrix& x, const Kernel& kernel, const ComponentSelection& selection = {});

/// Projection of one sample onto the retained components.
Vector kpca_transform(const KpcaModel& model, std::span<const double> x);

/// Row-wise projection of several samples.
Matrix kpca_transform(const KpcaModel& model, const Matrix& x);

/// Projections of the training samples, computed from the centered Gram matrix.
Matrix kpca_training_projection(const KpcaModel& model);

}  // namespace hybridcast
