#include "hybridcast/granger.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>
#include <string>

#include "hybridcast/error.hpp"
#include "hybridcast/numerics.hpp"

namespace hybridcast {

namespace {

struct OlsFit {
    double sse = 0.0;
    bool full_rank = true;
};

OlsFit ols(const Matrix& design, const Vector& y) {
    Eigen::ColPivHouseholderQR<Matrix> qr(design);
    const Vector beta = qr.solve(y);
    return {(y - design * beta).squaredNorm(), qr.rank() == design.cols()};
}

}  // namespace

std::string_view to_string(GrangerResult::Status s) {
    switch (s) {
        case GrangerResult::Status::retained: return "retained";
        case GrangerResult::Status::rejected: return "rejected";
        case GrangerResult::Status::inconclusive: return "inconclusive";
    }
    return "?";
}

GrangerResult granger_test(std::span<const double> y, std::span<const double> x, int max_lag,
                           double p_threshold) {
    if (max_lag < 1) throw ValidationError("granger: max_lag must be at least 1");
    if (x.size() != y.size()) throw ValidationError("granger: series lengths differ");
    const auto n = static_cast<int>(y.size());
    const int t = n - max_lag;  // usable observations
    const int df_den = t - 2 * max_lag - 1;
    if (df_den < 1) {
        throw ValidationError("granger: " + std::to_string(n) + " rows are too few for max_lag " +
                              std::to_string(max_lag));
    }

    Matrix restricted(t, 1 + max_lag);
    Matrix unrestricted(t, 1 + 2 * max_lag);
    Vector target(t);
    for (int r = 0; r < t; ++r) {
        const int at = r + max_lag;
        target(r) = y[static_cast<std::size_t>(at)];
        restricted(r, 0) = 1.0;
        unrestricted(r, 0) = 1.0;
        for (int l = 1; l <= max_lag; ++l) {
            const double ylag = y[static_cast<std::size_t>(at - l)];
            restricted(r, l) = ylag;
            unrestricted(r, l) = ylag;
            unrestricted(r, max_lag + l) = x[static_cast<std::size_t>(at - l)];
        }
    }

    const OlsFit fr = ols(restricted, target);
    const OlsFit fu = ols(unrestricted, target);

    GrangerResult out;
    out.sse_restricted = fr.sse;
    out.sse_unrestricted = fu.sse;
    out.df_num = max_lag;
    out.df_den = df_den;
    const double gain = std::max(0.0, fr.sse - fu.sse);
    if (fu.sse > 0.0) {
        out.f_statistic = (gain / max_lag) / (fu.sse / df_den);
        boost::math::fisher_f_distribution<double> dist(max_lag, df_den);
        out.p_value = boost::math::cdf(boost::math::complement(dist, out.f_statistic));
    } else {
        out.f_statistic = gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        out.p_value = gain > 0.0 ? 0.0 : 1.0;
    }
    if (!fu.full_rank) {
        out.status = GrangerResult::Status::inconclusive;
    } else {
        out.status = out.p_value <= p_threshold ? GrangerResult::Status::retained : GrangerResult::Status::rejected;
    }
    return out;
}

GrangerFilter granger_filter(const Panel& panel, std::span<const std::string> candidates,
                             const GrangerOptions& options) {
    const auto& y = panel.target().values;
    GrangerFilter out;
    for (const auto& name : candidates) {
        GrangerResult r = granger_test(y, panel.column(name).values, options.max_lag, options.p_threshold);
        r.name = name;
        if (r.status == GrangerResult::Status::retained) out.retained.push_back(name);
        out.results.push_back(std::move(r));
    }
    return out;
}

}  // namespace hybridcast
