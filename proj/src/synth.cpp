#include "hybridcast/synth.hpp"

#include <cmath>
#include <string>

#include "hybridcast/error.hpp"
#include "hybridcast/rng.hpp"

namespace hybridcast {

namespace {

constexpr double kLevel = 60.0;
constexpr double kAmplitude = 15.0;

void check(const SynthSpec& s) {
    if (s.months < 36) throw ValidationError("synth: months must be at least 36");
    if (s.factors < 1) throw ValidationError("synth: factors must be at least 1");
    if (s.series_per_factor < 2) throw ValidationError("synth: series_per_factor must be at least 2");
    if (!(s.noise >= 0.0) || !(s.target_noise >= 0.0)) throw ValidationError("synth: noise scales must be non-negative");
    if (s.lag < 0) throw ValidationError("synth: lag must be non-negative");
    if (s.smoothing < 1) throw ValidationError("synth: smoothing window must be at least 1");
}

}  // namespace

double synth_link(std::span<const double> z) {
    double sum = 0.0;
    for (std::size_t f = 0; f < z.size(); ++f) {
        const double w = (f % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(f + 1);
        sum += w * std::tanh(z[f]);
    }
    return kLevel + kAmplitude * sum;
}

SynthData synth_generate(const SynthSpec& spec) {
    check(spec);
    Rng rng(spec.seed);
    const int span = spec.months + spec.lag;  // factor index s is month s - lag
    const int raw_len = span + spec.smoothing - 1;

    // Smoothed random walks, standardized and mutually uncorrelated.
    Matrix factor(spec.factors, span);
    for (int f = 0; f < spec.factors; ++f) {
        std::vector<double> walk(static_cast<std::size_t>(raw_len));
        double level = 0.0;
        for (auto& w : walk) {
            level += rng.normal();
            w = level;
        }
        for (int s = 0; s < span; ++s) {
            double acc = 0.0;
            for (int k = 0; k < spec.smoothing; ++k) acc += walk[static_cast<std::size_t>(s + k)];
            factor(f, s) = acc / spec.smoothing;
        }
        factor.row(f).array() -= factor.row(f).mean();
        // Decorrelate from the earlier factors so that every planted group is distinct.
        for (int e = 0; e < f; ++e) factor.row(f) -= (factor.row(f).dot(factor.row(e)) / span) * factor.row(e);
        const double sd = std::sqrt(factor.row(f).squaredNorm() / span);
        if (!(sd > 1e-12)) throw ValidationError("synth: factors are linearly dependent (too few months)");
        factor.row(f) /= sd;
    }

    SynthData out;
    out.factors = factor.rightCols(spec.months);
    out.driving_factors = factor.leftCols(spec.months);
    for (int t = 0; t < spec.months; ++t) out.panel.dates.push_back(spec.start.plus(t));

    for (int f = 0; f < spec.factors; ++f) {
        const Provenance tag = f % 2 == 0 ? Provenance::economic : Provenance::gsvi;
        for (int g = 0; g < spec.series_per_factor; ++g) {
            const double scale = rng.uniform(0.5, 2.0);
            const double offset = rng.uniform(10.0, 100.0);
            Series s{"f" + std::to_string(f + 1) + "_s" + std::to_string(g + 1), tag, {}};
            s.values.reserve(static_cast<std::size_t>(spec.months));
            for (int t = 0; t < spec.months; ++t) {
                s.values.push_back(offset + scale * (out.factors(f, t) + spec.noise * rng.normal()));
            }
            out.panel.columns.push_back(std::move(s));
            out.labels.push_back(f);
        }
    }

    Series price{"price", Provenance::target, {}};
    for (int t = 0; t < spec.months; ++t) {
        const Vector z = out.driving_factors.col(t);
        const double clean = synth_link({z.data(), static_cast<std::size_t>(z.size())});
        out.signal.push_back(clean);
        price.values.push_back(clean + kAmplitude * spec.target_noise * rng.normal());
    }
    out.panel.columns.push_back(std::move(price));
    return out;
}

}  // namespace hybridcast
