#pragma once

#include <random>
#include <vector>

#include "hybridcast/numerics.hpp"

namespace testutil {

inline hybridcast::Matrix gaussian(std::mt19937_64& gen, int rows, int cols) {
    std::normal_distribution<double> n;
    hybridcast::Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = n(gen);
    return m;
}

inline hybridcast::Matrix random_symmetric(std::mt19937_64& gen, int n) {
    const hybridcast::Matrix a = gaussian(gen, n, n);
    return (a + a.transpose()) / 2.0;
}

inline std::vector<double> to_vector(const hybridcast::Vector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace testutil
