#include "trienhance/synthesis.hpp"

#include "trienhance/metrics.hpp"
#include "trienhance/preprocess.hpp"
#include "trienhance/text.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace trienhance {

namespace {

std::vector<std::size_t> minority_rows(const Dataset& train) {
    if (!train.labeled()) throw Error("synthesis requires a labeled dataset");
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < train.rows(); ++i) {
        if (train.label(i) == 1) rows.push_back(i);
    }
    return rows;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += (a[j] - b[j]) * (a[j] - b[j]);
    return s;
}

} // namespace

std::size_t synthesis_count(const Dataset& train, double target_ratio) {
    if (!(target_ratio > 0.0)) throw Error("target ratio must be positive");
    auto stats = class_stats(train);
    const double wanted = std::round(target_ratio * static_cast<double>(stats.count_of(0)));
    const double have = static_cast<double>(stats.count_of(1));
    return wanted > have ? static_cast<std::size_t>(wanted - have) : 0;
}

Dataset random_oversample(const Dataset& train, double target_ratio, std::uint64_t seed) {
    auto minority = minority_rows(train);
    if (minority.empty()) throw Error("empty minority class");
    const std::size_t count = synthesis_count(train, target_ratio);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, minority.size() - 1);
    Dataset out = train.empty_like();
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.add_row(train.row(minority[pick(rng)]), 1, Provenance::synthetic);
    return out;
}

std::vector<double> interpolate(std::span<const double> x, std::span<const double> neighbor, double u) {
    if (x.size() != neighbor.size()) throw Error("interpolation endpoints differ in dimension");
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] + u * (neighbor[j] - x[j]);
    return out;
}

Dataset smote(const Dataset& train, std::size_t k_neighbors, double target_ratio, std::uint64_t seed) {
    auto minority = minority_rows(train);
    if (minority.size() < 2) throw Error("SMOTE needs at least 2 minority rows, found " + std::to_string(minority.size()));
    if (k_neighbors == 0) throw Error("SMOTE needs k_neighbors >= 1");
    const std::size_t m = minority.size();
    const std::size_t k = std::min(k_neighbors, m - 1);
    const std::size_t count = synthesis_count(train, target_ratio);

    // neighbour lists are filled on first use
    std::vector<std::optional<std::vector<std::size_t>>> neighbors(m);
    auto neighbors_of = [&](std::size_t a) -> const std::vector<std::size_t>& {
        auto& slot = neighbors[a];
        if (!slot) {
            std::vector<std::pair<double, std::size_t>> dist;
            dist.reserve(m - 1);
            for (std::size_t b = 0; b < m; ++b) {
                if (b != a) dist.emplace_back(squared_distance(train.row(minority[a]), train.row(minority[b])), b);
            }
            std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
            std::vector<std::size_t> nn(k);
            for (std::size_t i = 0; i < k; ++i) nn[i] = dist[i].second;
            slot = std::move(nn);
        }
        return *slot;
    };

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_base(0, m - 1);
    std::uniform_int_distribution<std::size_t> pick_nn(0, k - 1);
    std::uniform_real_distribution<double> gap(0.0, 1.0);
    Dataset out = train.empty_like();
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t a = pick_base(rng);
        const std::size_t b = neighbors_of(a)[pick_nn(rng)];
        const double u = gap(rng);
        out.add_row(interpolate(train.row(minority[a]), train.row(minority[b]), u), 1, Provenance::synthetic);
    }
    return out;
}

Dataset RandomOversampler::generate(const Dataset& train, std::uint64_t seed) const {
    return random_oversample(train, target_ratio_, seed);
}

Dataset Smote::generate(const Dataset& train, std::uint64_t seed) const {
    return smote(train, k_, target_ratio_, seed);
}

ReplayTechnique::ReplayTechnique(std::string name, Dataset rows) : name_(std::move(name)), rows_(std::move(rows)) {}

Dataset ReplayTechnique::generate(const Dataset& train, std::uint64_t) const {
    if (rows_.cols() != train.cols()) throw Error("replay rows do not match the training schema");
    Dataset out = train.empty_like();
    out.reserve(rows_.rows());
    for (std::size_t i = 0; i < rows_.rows(); ++i) out.add_row(rows_.row(i), 1, Provenance::synthetic);
    return out;
}

Dataset load_replay_rows(const std::filesystem::path& path, const Dataset& schema) {
    auto raw = load_csv(path, std::nullopt);
    std::vector<std::size_t> source;
    for (const auto& name : schema.feature_names()) {
        auto it = std::find(raw.header.begin(), raw.header.end(), name);
        if (it == raw.header.end()) throw Error("replay file lacks column '" + name + "'");
        source.push_back(static_cast<std::size_t>(it - raw.header.begin()));
    }
    Dataset out(schema.feature_names(), schema.column_kinds(), true);
    std::vector<double> x(source.size());
    for (std::size_t r = 0; r < raw.size(); ++r) {
        for (std::size_t j = 0; j < source.size(); ++j) {
            const auto& cell = raw.rows[r][source[j]];
            auto v = cell ? parse_double(*cell) : std::nullopt;
            if (!v) throw Error("replay file row " + std::to_string(r + 1) + " has a non-numeric value");
            x[j] = *v;
        }
        out.add_row(x, 1, Provenance::synthetic);
    }
    return out;
}

SynthesisOutcome meta_synthesize(const Dataset& d, const std::vector<TechniquePtr>& techniques, const Trainer& trainer,
                                 const SplitSpec& split) {
    if (techniques.empty()) throw Error("technique list is empty");
    auto parts = stratified_partition(d, split);
    const Dataset train = d.subset(parts[0]);
    const Dataset validation = d.subset(parts[1]);

    SynthesisOutcome out;
    double best = -1.0;
    for (std::size_t t = 0; t < techniques.size(); ++t) {
        Dataset aug = concat(train, techniques[t]->generate(train, split.seed));
        auto model = trainer(aug);
        double f1 = f1_score(*model, validation);
        out.scores.push_back({techniques[t]->name(), f1});
        if (f1 > best) {
            best = f1;
            out.chosen = t;
        }
    }
    out.chosen_name = techniques[out.chosen]->name();

    Dataset synthetic = techniques[out.chosen]->generate(train, split.seed);
    Dataset aug = concat(train, synthetic);
    out.model = trainer(aug);

    auto predicted = predict(*out.model, validation, 0.5);
    std::vector<std::size_t> correct, wrong;
    for (std::size_t i = 0; i < validation.rows(); ++i) {
        (predicted[i] == validation.label(i) ? correct : wrong).push_back(i);
    }
    aug.append(validation.subset(correct).with_provenance(Provenance::validation_merged));

    out.train_rows = train.rows();
    out.synthetic_rows = synthetic.rows();
    out.validation_rows = validation.rows();
    out.merged_rows = correct.size();
    out.augmented = std::move(aug);
    out.misclassified = validation.subset(wrong);
    return out;
}

} // namespace trienhance
