#pragma once

#include <Eigen/Dense>

namespace hybridcast {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest allowed |A(i,j) - A(j,i)| for inputs to the symmetric routines.
inline constexpr double kSymmetryTolerance = 1e-10;

/// Throws ValidationError naming the first offending index pair if `a` is not
/// square, has non-finite entries, or is asymmetric beyond kSymmetryTolerance.
void require_symmetric(const Matrix& a);

struct SymmetricEigen {
    Vector values;   // descending
    Matrix vectors;  // orthonormal columns, same order as values
};

/// Eigendecomposition of a symmetric matrix. Each eigenvector is oriented so
/// that its largest-magnitude entry (first one on ties) is positive.
SymmetricEigen sym_eig(const Matrix& a);

/// Solves A X = B for symmetric positive-definite A by Cholesky factorization
/// followed by one step of iterative refinement. A non-positive pivot raises
/// NumericalError("not positive definite ...") carrying the pivot index.
Matrix solve_spd(const Matrix& a, const Matrix& b);

/// Ridge-regularized output weights H^T (I/C + H H^T)^{-1} Y.
/// Large C approaches the minimum-norm least-squares solution H^+ Y.
Matrix ridge_pinv(const Matrix& h, const Matrix& y, double c);

/// Entrywise max |x|; 0 for an empty matrix.
double max_abs(const Matrix& m);

}  // namespace hybridcast
