#pragma once

#include <cstdint>
#include <vector>

#include "hybridcast/numerics.hpp"
#include "hybridcast/panel.hpp"

namespace hybridcast {

/// Parameters of the planted-structure panel generator. The algorithm is
/// documented step by step in docs/synthetic.md.
struct SynthSpec {
    std::uint64_t seed = 1;
    int months = 180;            // T
    int factors = 3;             // F
    int series_per_factor = 10;  // G
    double noise = 0.1;          // indicator noise, in factor standard deviations
    double target_noise = 0.02;  // target noise, in units of the link amplitude
    int lag = 1;                 // target at month t is driven by the factors at t - lag
    int smoothing = 6;           // moving-average window applied to each random walk
    YearMonth start{2004, 1};
};

struct SynthData {
    Panel panel;                 // F*G indicators named f<i>_s<j>, then the target column "price"
    Matrix factors;              // F x T, each standardized, aligned with the panel rows
    Matrix driving_factors;      // F x T, the factor values that drive each row's target
    std::vector<int> labels;     // planted factor index per indicator column (0-based)
    std::vector<double> signal;  // noise-free target per row
};

/// The target link: 60 + 15 * sum_f w_f tanh(z_f), w_f = (-1)^f / (f + 1).
double synth_link(std::span<const double> factor_values);

SynthData synth_generate(const SynthSpec& spec);

}  // namespace hybridcast
