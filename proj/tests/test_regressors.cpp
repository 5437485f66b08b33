#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "hybridcast/error.hpp"
#include "hybridcast/kernel.hpp"
#include "hybridcast/regressors.hpp"

using namespace hybridcast;

TEST_CASE("ELM with a zero target") {
    std::mt19937_64 gen(1);
    const Matrix x = testutil::gaussian(gen, 10, 3);
    const ElmModel m = elm_fit(x, Matrix::Zero(10, 1), {20, 10.0, 1});
    CHECK(max_abs(m.beta) == 0.0);
    CHECK(max_abs(elm_predict(m, x)) == 0.0);
}

TEST_CASE("ELM weights, determinism and the defining linear system") {
    std::mt19937_64 gen(2);
    const Matrix x = testutil::gaussian(gen, 25, 4);
    const Matrix y = testutil::gaussian(gen, 25, 1);
    const ElmModel a = elm_fit(x, y, {30, 50.0, 9});
    const ElmModel b = elm_fit(x, y, {30, 50.0, 9});
    CHECK(a.beta == b.beta);
    CHECK(a.input_weights == b.input_weights);
    CHECK(a.input_weights.rows() == 30);
    CHECK(a.input_weights.cwiseAbs().maxCoeff() <= 1.0);
    CHECK(a.biases.cwiseAbs().maxCoeff() <= 1.0);
    CHECK(elm_fit(x, y, {30, 50.0, 10}).input_weights != a.input_weights);

    // beta = H^T u with (I/C + H H^T) u = Y
    const Matrix h = a.hidden(x);
    const Matrix u = (Matrix::Identity(25, 25) / 50.0 + h * h.transpose()).ldlt().solve(y);
    CHECK(max_abs(a.beta - h.transpose() * u) < 1e-8);
}

TEST_CASE("ELM fits a well-conditioned problem closely") {
    // Wide-range inputs give distinct sigmoid features; with L > N the ridge fit interpolates.
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    Matrix x(20, 1), y(20, 1);
    for (int i = 0; i < 20; ++i) {
        x(i, 0) = u(gen);
        y(i, 0) = std::tanh(x(i, 0) / 4.0);
    }
    const ElmModel m = elm_fit(x, y, {50, 1e6, 1});
    CHECK(max_abs(elm_predict(m, x) - y) < 1e-2);
}

TEST_CASE("ELM prediction is continuous and checks dimensions") {
    std::mt19937_64 gen(4);
    const Matrix x = testutil::gaussian(gen, 15, 2);
    const ElmModel m = elm_fit(x, testutil::gaussian(gen, 15, 1), {40, 100.0, 2});
    const std::vector<double> p{0.3, -0.2}, q{0.3 + 1e-9, -0.2};
    CHECK(std::abs(elm_predict(m, p)(0) - elm_predict(m, q)(0)) < 1e-6);
    CHECK_THROWS_AS(elm_predict(m, std::vector<double>{1.0}), ValidationError);
    CHECK_THROWS_AS(elm_fit(x, Matrix::Zero(15, 1), {40, 0.0, 2}), ValidationError);
    CHECK_THROWS_AS(elm_fit(x, Matrix::Zero(15, 1), {0, 1.0, 2}), ValidationError);
}

TEST_CASE("KELM single training point") {
    Matrix x(1, 2);
    x << 0.4, 0.1;
    const Matrix y = Matrix::Constant(1, 1, 5.0);
    const KelmModel m = kelm_fit(x, y, Kernel::gaussian(1.0), 1e8);
    CHECK(m.dual(0, 0) == doctest::Approx(5.0 / (1e-8 + 1.0)));
    CHECK(kelm_predict(m, std::vector<double>{0.4, 0.1})(0) == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("KELM residual identity and constant targets") {
    std::mt19937_64 gen(5);
    const Matrix x = testutil::gaussian(gen, 30, 3);
    const Matrix y = testutil::gaussian(gen, 30, 1);
    const Kernel k = Kernel::gaussian(1.2);
    const KelmModel m = kelm_fit(x, y, k, 20.0);
    const Matrix omega = kernel_matrix(x, k);
    CHECK((omega * m.dual + m.dual / 20.0 - y).norm() <= 1e-8 * y.norm());

    const KelmModel flat = kelm_fit(x, Matrix::Constant(30, 1, 2.5), k, 1e8);
    CHECK(max_abs(kelm_predict(flat, x).array() - 2.5) < 1e-4);
}

TEST_CASE("KELM far from the data predicts zero") {
    std::mt19937_64 gen(6);
    const Matrix x = testutil::gaussian(gen, 10, 2);
    const KelmModel m = kelm_fit(x, testutil::gaussian(gen, 10, 1), Kernel::gaussian(0.5), 100.0);
    CHECK(std::abs(kelm_predict(m, std::vector<double>{1e3, -1e3})(0)) < 1e-12);
}

TEST_CASE("KELM with a very wide kernel on constant data") {
    // Omega -> all ones, so A = (I/C + 11^T)^{-1} y and f(x) = 1^T A = C sum(y) / (1 + C N).
    std::mt19937_64 gen(7);
    const Matrix x = testutil::gaussian(gen, 12, 2);
    const Matrix y = Matrix::Constant(12, 1, 3.0);
    const double c = 10.0;
    const KelmModel m = kelm_fit(x, y, Kernel::gaussian(1e6), c);
    const double expected = c * y.sum() / (1.0 + c * 12.0);
    CHECK(kelm_predict(m, std::vector<double>{0.2, 0.7})(0) == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("linear-kernel KELM equals primal ridge from the normal equations") {
    std::mt19937_64 gen(8);
    const double c = 1e8;
    for (int trial = 0; trial < 3; ++trial) {
        const Matrix x = testutil::gaussian(gen, 50, 5);
        const Matrix y = testutil::gaussian(gen, 50, 1);
        const Matrix w = (x.transpose() * x + Matrix::Identity(5, 5) / c).ldlt().solve(x.transpose() * y);
        const Matrix t = testutil::gaussian(gen, 10, 5);
        CHECK(max_abs(kelm_predict(kelm_fit(x, y, Kernel::linear(), c), t) - t * w) < 1e-4);
    }
}

TEST_CASE("KELM training MSE is non-increasing in C") {
    std::mt19937_64 gen(9);
    const Matrix x = testutil::gaussian(gen, 40, 3);
    const Matrix y = testutil::gaussian(gen, 40, 1);
    double previous = INFINITY;
    for (double c : {0.01, 0.1, 1.0, 10.0, 100.0, 1e3, 1e5}) {
        const double mse = (kelm_predict(kelm_fit(x, y, Kernel::gaussian(1.0), c), x) - y).squaredNorm();
        CHECK(mse <= previous * (1.0 + 1e-10));
        previous = mse;
    }
}

TEST_CASE("KELM input validation") {
    std::mt19937_64 gen(10);
    const Matrix x = testutil::gaussian(gen, 5, 2);
    CHECK_THROWS_AS(kelm_fit(x, Matrix::Zero(5, 1), Kernel::gaussian(1.0), 0.0), ValidationError);
    CHECK_THROWS_AS(kelm_fit(x, Matrix::Zero(4, 1), Kernel::gaussian(1.0), 1.0), ValidationError);
    const KelmModel m = kelm_fit(x, Matrix::Zero(5, 1), Kernel::gaussian(1.0), 1.0);
    CHECK_THROWS_AS(kelm_predict(m, std::vector<double>{1, 2, 3}), ValidationError);
}
