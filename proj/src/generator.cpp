#include "trienhance/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace trienhance {

std::size_t minority_count_for(std::size_t n, double imbalance_ratio) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(n) / (1.0 + imbalance_ratio)));
}

Dataset generate_synthetic_benchmark(const BenchmarkSpec& spec) {
    if (!(spec.imbalance_ratio >= 1.0)) throw Error("imbalance ratio r must be >= 1");
    if (!(spec.noise_rate >= 0.0 && spec.noise_rate < 0.5)) throw Error("noise rate must lie in [0, 0.5)");
    if (!std::isfinite(spec.separation) || spec.separation < 0.0) throw Error("separation must be finite and >= 0");
    if (spec.d == 0) throw Error("benchmark needs at least one feature");

    std::mt19937_64 rng(spec.seed);
    const std::size_t minority = minority_count_for(spec.n, spec.imbalance_ratio);
    std::vector<int> labels(spec.n, 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(minority), 1);
    std::shuffle(labels.begin(), labels.end(), rng);

    const double shift = spec.separation / std::sqrt(static_cast<double>(spec.d));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> features(spec.n * spec.d);
    for (std::size_t i = 0; i < spec.n; ++i) {
        double mean = labels[i] == 1 ? shift : 0.0;
        for (std::size_t j = 0; j < spec.d; ++j) features[i * spec.d + j] = mean + normal(rng);
    }

    auto flips = static_cast<std::size_t>(std::llround(spec.noise_rate * static_cast<double>(spec.n)));
    std::vector<std::size_t> order(spec.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t f = 0; f < flips; ++f) labels[order[f]] = 1 - labels[order[f]];

    std::vector<std::string> names;
    for (std::size_t j = 0; j < spec.d; ++j) names.push_back("x" + std::to_string(j));
    Dataset out(names, std::vector<ColumnKind>(spec.d, ColumnKind::numeric), true);
    out.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        out.add_row(std::span<const double>(features.data() + i * spec.d, spec.d), labels[i], Provenance::original,
                    static_cast<std::int64_t>(i));
    }
    return out;
}

} // namespace trienhance
