#include "hybridcast/regressors.hpp"

#include <cmath>
#include <string>

#include "hybridcast/error.hpp"
#include "hybridcast/rng.hpp"

namespace hybridcast {

namespace {

void check_penalty(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw ValidationError("penalty C must be positive and finite, got " + std::to_string(c));
    }
}

void check_training(const Matrix& x, const Matrix& y) {
    if (x.rows() < 1) throw ValidationError("need at least one training sample");
    if (x.rows() != y.rows()) {
        throw ValidationError("inputs have " + std::to_string(x.rows()) + " rows but targets have " +
                              std::to_string(y.rows()));
    }
}

Matrix as_row(std::span<const double> x) {
    return Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size())).transpose();
}

}  // namespace

Matrix ElmModel::hidden(const Matrix& x) const {
    if (x.cols() != input_weights.cols()) {
        throw ValidationError("elm: input dimension " + std::to_string(x.cols()) + " does not match model dimension " +
                              std::to_string(input_weights.cols()));
    }
    Matrix pre = x * input_weights.transpose();
    pre.rowwise() += biases.transpose();
    return (1.0 + (-pre.array()).exp()).inverse().matrix();
}

ElmModel elm_fit(const Matrix& x, const Matrix& y, const ElmOptions& options) {
    check_training(x, y);
    check_penalty(options.c);
    if (options.hidden < 1) throw ValidationError("elm: hidden count must be at least 1");

    ElmModel model;
    model.c = options.c;
    Rng rng(options.seed);
    model.input_weights.resize(options.hidden, x.cols());
    for (Eigen::Index i = 0; i < model.input_weights.rows(); ++i) {
        for (Eigen::Index j = 0; j < model.input_weights.cols(); ++j) {
            model.input_weights(i, j) = rng.uniform(-1.0, 1.0);
        }
    }
    model.biases.resize(options.hidden);
    for (Eigen::Index i = 0; i < model.biases.size(); ++i) model.biases(i) = rng.uniform(-1.0, 1.0);

    model.beta = ridge_pinv(model.hidden(x), y, options.c);
    return model;
}

Matrix elm_predict(const ElmModel& model, const Matrix& x) { return model.hidden(x) * model.beta; }

Vector elm_predict(const ElmModel& model, std::span<const double> x) {
    return elm_predict(model, as_row(x)).row(0).transpose();
}

KelmModel kelm_fit(const Matrix& x, const Matrix& y, const Kernel& kernel, double c) {
    check_training(x, y);
    check_penalty(c);
    KelmModel model{x, kernel, c, {}};
    Matrix system = kernel_matrix(x, kernel);
    system.diagonal().array() += 1.0 / c;
    model.dual = solve_spd(system, y);
    return model;
}

Matrix kelm_predict(const KelmModel& model, const Matrix& x) {
    return cross_kernel(x, model.train, model.kernel) * model.dual;
}

Vector kelm_predict(const KelmModel& model, std::span<const double> x) {
    return kelm_predict(model, as_row(x)).row(0).transpose();
}

}  // namespace hybridcast
