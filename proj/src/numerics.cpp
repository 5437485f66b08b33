#include "hybridcast/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hybridcast/error.hpp"

namespace hybridcast {

namespace {

// In-place lower Cholesky factor. Returns the index of the first non-positive
// pivot, or -1 on success.
Eigen::Index cholesky_in_place(Matrix& l) {
    const Eigen::Index n = l.rows();
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = l(j, j);
        for (Eigen::Index k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
        if (!(pivot > 0.0)) return j;
        const double d = std::sqrt(pivot);
        l(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double s = l(i, j);
            for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / d;
        }
    }
    return -1;
}

Matrix cholesky_solve(const Matrix& l, const Matrix& b) {
    const auto tri = l.triangularView<Eigen::Lower>();
    Matrix x = tri.solve(b);
    tri.transpose().solveInPlace(x);
    return x;
}

}  // namespace

double max_abs(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_symmetric(const Matrix& a) {
    if (a.rows() != a.cols()) {
        throw ValidationError("matrix is not square (" + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + ")");
    }
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(a(i, j))) {
                throw ValidationError("non-finite matrix entry at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
            }
        }
    }
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - a(j, i)) > kSymmetryTolerance) {
                throw ValidationError("matrix is not symmetric at (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ")");
            }
        }
    }
}

SymmetricEigen sym_eig(const Matrix& a) {
    require_symmetric(a);
    const Eigen::Index n = a.rows();
    if (n == 0) return {};

    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symmetric eigensolver did not converge");
    }

    // Eigen returns ascending order.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return solver.eigenvalues()(x) > solver.eigenvalues()(y);
    });

    SymmetricEigen out{Vector(n), Matrix(n, n)};
    for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index src = order[static_cast<std::size_t>(c)];
        out.values(c) = solver.eigenvalues()(src);
        Vector v = solver.eigenvectors().col(src);
        Eigen::Index arg = 0;
        for (Eigen::Index i = 1; i < n; ++i) {
            if (std::abs(v(i)) > std::abs(v(arg))) arg = i;
        }
        if (v(arg) < 0.0) v = -v;
        out.vectors.col(c) = v;
    }
    return out;
}

Matrix solve_spd(const Matrix& a, const Matrix& b) {
    require_symmetric(a);
    if (b.rows() != a.rows()) {
        throw ValidationError("solve_spd: right-hand side has " + std::to_string(b.rows()) +
                              " rows, system has " + std::to_string(a.rows()));
    }
    Matrix l = a;
    if (const auto bad = cholesky_in_place(l); bad >= 0) {
        throw NumericalError("not positive definite (pivot " + std::to_string(bad) + ")");
    }
    Matrix x = cholesky_solve(l, b);
    const Matrix residual = b - a * x;
    x += cholesky_solve(l, residual);
    return x;
}

Matrix ridge_pinv(const Matrix& h, const Matrix& y, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw ValidationError("ridge penalty C must be positive and finite");
    }
    if (h.rows() != y.rows()) {
        throw ValidationError("ridge_pinv: H has " + std::to_string(h.rows()) + " rows but Y has " +
                              std::to_string(y.rows()));
    }
    Matrix gram = h * h.transpose();
    gram = 0.5 * (gram + gram.transpose()).eval();
    gram.diagonal().array() += 1.0 / c;
    return h.transpose() * solve_spd(gram, y);
}

}  // namespace hybridcast
