#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "helpers.hpp"
#include "hybridcast/error.hpp"
#include "hybridcast/kernel.hpp"
#include "hybridcast/kpca.hpp"

using namespace hybridcast;

namespace {

double sign_aligned_gap(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        worst = std::max(worst, std::min((a.col(j) - b.col(j)).cwiseAbs().maxCoeff(),
                                         (a.col(j) + b.col(j)).cwiseAbs().maxCoeff()));
    }
    return worst;
}

}  // namespace

TEST_CASE("gaussian kernel matrix examples") {
    Matrix same(2, 2);
    same << 0.3, -1.0, 0.3, -1.0;
    CHECK(max_abs(kernel_matrix(same, Kernel::gaussian(0.7)) - Matrix::Ones(2, 2)) == 0.0);

    Matrix pair(2, 1);
    pair << 0.0, 1.0;
    const Matrix k = kernel_matrix(pair, Kernel::gaussian(1.0));
    CHECK(k(0, 1) == doctest::Approx(std::exp(-0.5)));
    CHECK(k(0, 1) == doctest::Approx(0.6065).epsilon(1e-4));

    std::mt19937_64 gen(1);
    const Matrix x = testutil::gaussian(gen, 12, 4);
    const Matrix g = kernel_matrix(x, Kernel::gaussian(2.0));
    CHECK(g == g.transpose());
    for (int i = 0; i < 12; ++i) CHECK(g(i, i) == 1.0);

    CHECK_THROWS_AS(Kernel::gaussian(0.0), ValidationError);
    CHECK_THROWS_AS(Kernel::gaussian(-1.0), ValidationError);
}

TEST_CASE("cross kernel agrees with the Gram matrix") {
    std::mt19937_64 gen(2);
    const Matrix x = testutil::gaussian(gen, 7, 3);
    const Kernel k = Kernel::gaussian(1.3);
    CHECK(max_abs(cross_kernel(x, x, k) - kernel_matrix(x, k)) < 1e-15);
    CHECK_THROWS_AS(cross_kernel(x, testutil::gaussian(gen, 2, 4), k), ValidationError);
}

TEST_CASE("median pairwise distance") {
    Matrix x(3, 1);
    x << 0.0, 1.0, 3.0;  // distances 1, 3, 2
    CHECK(median_pairwise_distance(x) == doctest::Approx(2.0));
    CHECK_THROWS_AS(median_pairwise_distance(Matrix::Ones(4, 2)), NumericalError);
}

TEST_CASE("center_kernel") {
    SUBCASE("all-ones Gram centers to zero") {
        CHECK(max_abs(center_kernel(Matrix::Ones(5, 5)).k) < 1e-15);
    }
    SUBCASE("linear Gram of mean-centered data is unchanged; centering is idempotent") {
        std::mt19937_64 gen(3);
        Matrix x = testutil::gaussian(gen, 10, 3);
        x = x.rowwise() - x.colwise().mean();
        const Matrix g = x * x.transpose();
        const Matrix c = center_kernel(g).k;
        CHECK(max_abs(c - g) < 1e-10);
        CHECK(max_abs(center_kernel(c).k - c) < 1e-12);
    }
    SUBCASE("rows and columns sum to zero; PSD within tolerance") {
        std::mt19937_64 gen(4);
        const Matrix x = testutil::gaussian(gen, 25, 4);
        const Matrix c = center_kernel(kernel_matrix(x, Kernel::gaussian(1.5))).k;
        CHECK(c.rowwise().sum().cwiseAbs().maxCoeff() < 1e-9);
        CHECK(c.colwise().sum().cwiseAbs().maxCoeff() < 1e-9);
        const auto e = sym_eig(c);
        CHECK(e.values.minCoeff() >= -1e-8 * e.values.maxCoeff());
    }
    SUBCASE("out-of-sample rows of training samples reproduce the centered Gram") {
        std::mt19937_64 gen(5);
        const Matrix x = testutil::gaussian(gen, 9, 2);
        const Kernel k = Kernel::gaussian(0.9);
        const CenteredKernel c = center_kernel(kernel_matrix(x, k));
        CHECK(max_abs(center_kernel_rows(cross_kernel(x, x, k), c.stats) - c.k) < 1e-12);
    }
}

TEST_CASE("linear-kernel KPCA equals PCA (covariance eigendecomposition oracle)") {
    std::mt19937_64 gen(6);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix x = testutil::gaussian(gen, 30, 6);
        const Matrix test = testutil::gaussian(gen, 5, 6);
        const Eigen::RowVectorXd mean = x.colwise().mean();
        const Matrix centered = x.rowwise() - mean;
        Eigen::SelfAdjointEigenSolver<Matrix> cov(centered.transpose() * centered);
        const Matrix axes = cov.eigenvectors().rowwise().reverse().leftCols(3);  // top 3 principal axes

        const KpcaModel m = kpca_fit(x, Kernel::linear(), ComponentSelection::count(3));
        REQUIRE(m.components() == 3);
        CHECK(sign_aligned_gap(kpca_training_projection(m), centered * axes) < 1e-8);
        CHECK(sign_aligned_gap(kpca_transform(m, test), (test.rowwise() - mean) * axes) < 1e-8);
    }
}

TEST_CASE("KPCA invariants on a Gaussian kernel") {
    std::mt19937_64 gen(7);
    const Matrix x = testutil::gaussian(gen, 40, 5);
    const KpcaModel m = kpca_fit(x, Kernel::gaussian(median_pairwise_distance(x)));
    const Matrix p = kpca_training_projection(m);
    const double n = static_cast<double>(x.rows());
    for (int j = 0; j < m.components(); ++j) {
        CHECK(m.eigenvalues(j) * m.alphas.col(j).squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(p.col(j).mean()) < 1e-8);
        CHECK(p.col(j).squaredNorm() / n == doctest::Approx(m.eigenvalues(j) / n).epsilon(1e-8));
        if (j > 0) CHECK(m.eigenvalues(j - 1) >= m.eigenvalues(j));
    }
    // theta = 0.95: the smallest count reaching 95% of the positive spectrum
    const double total = m.spectrum.cwiseMax(0.0).sum();
    CHECK(m.eigenvalues.sum() >= 0.95 * total * (1 - 1e-12));
    CHECK(m.eigenvalues.head(m.components() - 1).sum() < 0.95 * total);
    // transform of a training sample is that sample's training projection
    CHECK(max_abs(kpca_transform(m, x) - p) < 1e-9);
    const Vector row = x.row(4).transpose();
    CHECK(kpca_transform(m, std::span<const double>(row.data(), 5)).size() == m.components());
}

TEST_CASE("KPCA component selection") {
    std::mt19937_64 gen(8);
    const Matrix x = testutil::gaussian(gen, 15, 3);
    const KpcaModel linear_all = kpca_fit(x, Kernel::linear(), ComponentSelection::fraction(1.0));
    CHECK(linear_all.components() == 3);  // rank of the centered linear Gram
    const KpcaModel gauss_all = kpca_fit(x, Kernel::gaussian(1.0), ComponentSelection::fraction(1.0));
    CHECK(gauss_all.components() == 14);  // centering removes one dimension
    CHECK(kpca_fit(x, Kernel::gaussian(1.0), ComponentSelection::count(2)).components() == 2);
    CHECK(kpca_fit(x, Kernel::linear(), ComponentSelection::count(10)).components() == 3);
    CHECK_THROWS_AS(kpca_fit(x, Kernel::linear(), ComponentSelection::count(0)), ValidationError);
    CHECK_THROWS_AS(kpca_fit(x, Kernel::linear(), ComponentSelection::fraction(0.0)), ValidationError);
    CHECK_THROWS_AS(kpca_fit(x, Kernel::linear(), ComponentSelection::fraction(1.5)), ValidationError);
}

TEST_CASE("KPCA rejects degenerate input") {
    Matrix dup(4, 2);
    dup.rowwise() = Eigen::RowVector2d(1.0, -2.0);
    CHECK_THROWS_WITH_AS(kpca_fit(dup, Kernel::gaussian(1.0)), doctest::Contains("degenerate kernel"), NumericalError);
    CHECK_THROWS_AS(kpca_fit(Matrix::Ones(1, 3), Kernel::linear()), ValidationError);
    std::mt19937_64 gen(9);
    const KpcaModel m = kpca_fit(testutil::gaussian(gen, 6, 3), Kernel::linear());
    CHECK_THROWS_AS(kpca_transform(m, Matrix::Ones(2, 4)), ValidationError);
}
