#pragma once

#include <cstdint>
#include <span>

#include "hybridcast/kernel.hpp"
#include "hybridcast/numerics.hpp"

namespace hybridcast {

struct ElmOptions {
    int hidden = 100;  // L
    double c = 100.0;  // ridge penalty; the regularizer is I/C
    std::uint64_t seed = 42;
};

/// Single-hidden-layer network with random, fixed input weights and biases
/// drawn uniformly from [-1, 1], logistic sigmoid activation, and closed-form
/// ridge output weights.
struct ElmModel {
    Matrix input_weights;  // L x n
    Vector biases;         // L
    Matrix beta;           // L x m
    double c = 0.0;

    /// Sigmoid hidden-layer outputs, one row per sample.
    Matrix hidden(const Matrix& x) const;
};

ElmModel elm_fit(const Matrix& x, const Matrix& y, const ElmOptions& options = {});
Vector elm_predict(const ElmModel& model, std::span<const double> x);
Matrix elm_predict(const ElmModel& model, const Matrix& x);

/// Kernel ELM: f(x) = [k(x, x_1) ... k(x, x_N)] (I/C + Omega)^{-1} Y with the
/// raw (uncentered) training Gram matrix Omega.
struct KelmModel {
    Matrix train;  // N x n
    Kernel kernel;
    double c = 0.0;
    Matrix dual;  // N x m, (I/C + Omega)^{-1} Y
};

KelmModel kelm_fit(const Matrix& x, const Matrix& y, const Kernel& kernel, double c);
Vector kelm_predict(const KelmModel& model, std::span<const double> x);
Matrix kelm_predict(const KelmModel& model, const Matrix& x);

}  // namespace hybridcast
