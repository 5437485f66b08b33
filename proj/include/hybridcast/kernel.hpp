#pragma once

#include <span>

#include "hybridcast/numerics.hpp"

namespace hybridcast {

enum class KernelKind {
    gaussian,  // exp(-|x - z|^2 / (2 sigma^2))
    linear,    // x . z, used to check kernel code against its linear-algebra equivalent
};

struct Kernel {
    KernelKind kind = KernelKind::gaussian;
    double sigma = 1.0;

    static Kernel gaussian(double sigma);
    static Kernel linear() { return {KernelKind::linear, 0.0}; }

    double operator()(std::span<const double> x, std::span<const double> z) const;
    bool operator==(const Kernel&) const = default;
};

/// Gram matrix of the rows of x. Exactly symmetric.
Matrix kernel_matrix(const Matrix& x, const Kernel& kernel);

/// K(i, j) = k(a_i, b_j) for rows a_i of a and b_j of b.
Matrix cross_kernel(const Matrix& a, const Matrix& b, const Kernel& kernel);

/// Median of the pairwise Euclidean distances between rows; the default
/// Gaussian width. Throws NumericalError if every pair coincides.
double median_pairwise_distance(const Matrix& x);

}  // namespace hybridcast
