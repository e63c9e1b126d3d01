#pragma once

#include "trienhance/dataset.hpp"

#include <cstdint>

namespace trienhance {

/// Two isotropic unit-variance Gaussian clusters. The majority (label 0) sits at the
/// origin, the minority (label 1) at distance `separation` along the diagonal.
struct BenchmarkSpec {
    std::size_t n = 2000;
    std::size_t d = 5;
    double imbalance_ratio = 20.0; // r in 1:r
    double separation = 2.0;
    double noise_rate = 0.05;      // share of labels flipped after sampling
    std::uint64_t seed = 42;
};

/// round(n / (1 + r)) rows of the minority class before label noise.
std::size_t minority_count_for(std::size_t n, double imbalance_ratio);

Dataset generate_synthetic_benchmark(const BenchmarkSpec& spec);

} // namespace trienhance
