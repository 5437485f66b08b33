#include "hybridcast/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hybridcast/error.hpp"

namespace hybridcast {

namespace {

void check_kernel(const Kernel& kernel) {
    if (kernel.kind == KernelKind::gaussian && (!(kernel.sigma > 0.0) || !std::isfinite(kernel.sigma))) {
        throw ValidationError("gaussian kernel width must be positive, got " + std::to_string(kernel.sigma));
    }
}

double entry(const Kernel& kernel, const auto& a, const auto& b) {
    if (kernel.kind == KernelKind::linear) return a.dot(b);
    return std::exp(-(a - b).squaredNorm() / (2.0 * kernel.sigma * kernel.sigma));
}

}  // namespace

Kernel Kernel::gaussian(double sigma) {
    Kernel k{KernelKind::gaussian, sigma};
    check_kernel(k);
    return k;
}

double Kernel::operator()(std::span<const double> x, std::span<const double> z) const {
    if (x.size() != z.size()) throw ValidationError("kernel: dimension mismatch");
    check_kernel(*this);
    const auto n = static_cast<Eigen::Index>(x.size());
    return entry(*this, Eigen::Map<const Vector>(x.data(), n), Eigen::Map<const Vector>(z.data(), n));
}

Matrix kernel_matrix(const Matrix& x, const Kernel& kernel) {
    check_kernel(kernel);
    const Eigen::Index n = x.rows();
    Matrix k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = entry(kernel, x.row(i), x.row(i));
        for (Eigen::Index j = i + 1; j < n; ++j) {
            k(i, j) = entry(kernel, x.row(i), x.row(j));
            k(j, i) = k(i, j);
        }
    }
    return k;
}

Matrix cross_kernel(const Matrix& a, const Matrix& b, const Kernel& kernel) {
    check_kernel(kernel);
    if (a.cols() != b.cols()) {
        throw ValidationError("kernel: sample dimension " + std::to_string(a.cols()) +
                              " does not match training dimension " + std::to_string(b.cols()));
    }
    Matrix k(a.rows(), b.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.rows(); ++j) k(i, j) = entry(kernel, a.row(i), b.row(j));
    }
    return k;
}

double median_pairwise_distance(const Matrix& x) {
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(x.rows() * (x.rows() - 1) / 2));
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < x.rows(); ++j) d.push_back((x.row(i) - x.row(j)).norm());
    }
    if (d.empty()) throw NumericalError("median heuristic needs at least two samples");
    const auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
    std::nth_element(d.begin(), mid, d.end());
    double med = *mid;
    if (d.size() % 2 == 0) med = 0.5 * (med + *std::max_element(d.begin(), mid));
    if (!(med > 0.0)) throw NumericalError("median pairwise distance is zero; cannot pick a kernel width");
    return med;
}

}  // namespace hybridcast
