#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "hybridcast/error.hpp"
#include "hybridcast/numerics.hpp"

using namespace hybridcast;

TEST_CASE("sym_eig on hand-solvable matrices") {
    SUBCASE("identity") {
        const auto e = sym_eig(Matrix::Identity(2, 2));
        CHECK(e.values(0) == doctest::Approx(1.0));
        CHECK(e.values(1) == doctest::Approx(1.0));
        CHECK(max_abs(e.vectors.transpose() * e.vectors - Matrix::Identity(2, 2)) < 1e-12);
    }
    SUBCASE("[[2,1],[1,2]]") {
        Matrix a(2, 2);
        a << 2, 1, 1, 2;
        const auto e = sym_eig(a);
        CHECK(e.values(0) == doctest::Approx(3.0));
        CHECK(e.values(1) == doctest::Approx(1.0));
        const double r = 1.0 / std::sqrt(2.0);
        CHECK(e.vectors(0, 0) == doctest::Approx(r));
        CHECK(e.vectors(1, 0) == doctest::Approx(r));
        // (1, -1)/sqrt 2 with its first (tied) largest entry made positive
        CHECK(e.vectors(0, 1) == doctest::Approx(r));
        CHECK(e.vectors(1, 1) == doctest::Approx(-r));
    }
    SUBCASE("diagonal") {
        const Matrix a = Vector{{5.0, 2.0, 1.0}}.asDiagonal();
        const auto e = sym_eig(a);
        CHECK(e.values(0) == 5.0);
        CHECK(e.values(1) == 2.0);
        CHECK(e.values(2) == 1.0);
        CHECK(max_abs(e.vectors - Matrix::Identity(3, 3)) < 1e-14);
    }
    SUBCASE("unsorted diagonal is sorted descending") {
        const Matrix a = Vector{{1.0, 5.0, 2.0}}.asDiagonal();
        const auto e = sym_eig(a);
        CHECK(e.values(0) == 5.0);
        CHECK(e.vectors(1, 0) == 1.0);
    }
}

TEST_CASE("sym_eig reconstructs random symmetric matrices") {
    std::mt19937_64 gen(7);
    for (int n : {1, 2, 5, 17, 50}) {
        const Matrix a = testutil::random_symmetric(gen, n);
        const auto e = sym_eig(a);
        const double scale = std::max(1.0, max_abs(a));
        CHECK(max_abs(e.vectors * e.values.asDiagonal() * e.vectors.transpose() - a) <= 1e-8 * scale);
        CHECK(max_abs(e.vectors.transpose() * e.vectors - Matrix::Identity(n, n)) <= 1e-8);
        for (int j = 0; j < n; ++j) {
            CHECK((a * e.vectors.col(j) - e.values(j) * e.vectors.col(j)).cwiseAbs().maxCoeff() <= 1e-8 * scale);
            if (j > 0) CHECK(e.values(j - 1) >= e.values(j));
            Eigen::Index at = 0;
            e.vectors.col(j).cwiseAbs().maxCoeff(&at);
            CHECK(e.vectors(at, j) > 0.0);
        }
    }
}

TEST_CASE("symmetric routines reject bad input") {
    Matrix a(2, 2);
    a << 1, 2, 2.1, 1;
    try {
        sym_eig(a);
        FAIL("asymmetric input accepted");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("(0, 1)") != std::string::npos);
    }
    Matrix b = Matrix::Identity(2, 2);
    b(1, 1) = std::nan("");
    CHECK_THROWS_AS(sym_eig(b), ValidationError);
    CHECK_THROWS_AS(sym_eig(Matrix(2, 3)), ValidationError);
}

TEST_CASE("solve_spd examples") {
    std::mt19937_64 gen(3);
    const Matrix b = testutil::gaussian(gen, 4, 2);
    CHECK(max_abs(solve_spd(Matrix::Identity(4, 4), b) - b) < 1e-14);

    Matrix d(2, 2);
    d << 4, 0, 0, 9;
    const Matrix x = solve_spd(d, Vector{{8.0, 27.0}});
    CHECK(x(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x(1, 0) == doctest::Approx(3.0).epsilon(1e-14));

    Matrix a(2, 2);
    a << 2, 1, 1, 2;
    const Matrix y = solve_spd(a, Vector{{3.0, 3.0}});
    CHECK(y(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(y(1, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("solve_spd multiply-back on random SPD systems") {
    std::mt19937_64 gen(11);
    for (int n : {1, 3, 10, 40}) {
        const Matrix g = testutil::gaussian(gen, n, n);
        const Matrix a = g * g.transpose() + 0.1 * Matrix::Identity(n, n);
        const Matrix b = testutil::gaussian(gen, n, 3);
        const Matrix x = solve_spd((a + a.transpose()) / 2.0, b);
        CHECK(max_abs(a * x - b) <= 1e-8 * max_abs(b));
    }
}

TEST_CASE("solve_spd reports the failing pivot") {
    Matrix a(3, 3);
    a << 1, 0, 0, 0, -1, 0, 0, 0, 1;
    try {
        solve_spd(a, Vector::Ones(3));
        FAIL("indefinite matrix accepted");
    } catch (const NumericalError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("not positive definite") != std::string::npos);
        CHECK(msg.find("pivot 1") != std::string::npos);
    }
}

TEST_CASE("ridge_pinv examples") {
    const Matrix h = Matrix::Identity(2, 2);
    const Matrix y = Vector{{1.0, 2.0}};
    const Matrix beta = ridge_pinv(h, y, 1.0);
    CHECK(beta(0, 0) == doctest::Approx(0.5));
    CHECK(beta(1, 0) == doctest::Approx(1.0));
    CHECK(max_abs(ridge_pinv(h, Matrix::Zero(2, 1), 3.0)) == 0.0);
    CHECK(max_abs(ridge_pinv(h, y, 1e8) - y) < 1e-6);

    CHECK_THROWS_AS(ridge_pinv(h, y, 0.0), ValidationError);
    CHECK_THROWS_AS(ridge_pinv(h, y, -1.0), ValidationError);
    CHECK_THROWS_AS(ridge_pinv(h, Matrix::Zero(3, 1), 1.0), ValidationError);
}

TEST_CASE("ridge_pinv matches the primal ridge solution and tends to the pseudo-inverse") {
    std::mt19937_64 gen(5);
    const Matrix h = testutil::gaussian(gen, 8, 20);
    const Matrix y = testutil::gaussian(gen, 8, 1);
    const double c = 10.0;
    const Matrix primal = (h.transpose() * h + Matrix::Identity(20, 20) / c).ldlt().solve(h.transpose() * y);
    CHECK(max_abs(ridge_pinv(h, y, c) - primal) < 1e-10);
    const Matrix pinv = h.completeOrthogonalDecomposition().pseudoInverse() * y;
    CHECK(max_abs(ridge_pinv(h, y, 1e10) - pinv) < 1e-6);
}

TEST_CASE("ridge training residual is non-increasing in C") {
    std::mt19937_64 gen(9);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix h = testutil::gaussian(gen, 30, 10);
        const Matrix y = testutil::gaussian(gen, 30, 1);
        double previous = INFINITY;
        for (double c : {1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0, 1e4, 1e6}) {
            const double residual = (h * ridge_pinv(h, y, c) - y).norm();
            CHECK(residual <= previous * (1.0 + 1e-12));
            previous = residual;
        }
    }
}
