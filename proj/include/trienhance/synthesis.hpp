#pragma once

#include "trienhance/classifier.hpp"
#include "trienhance/split.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace trienhance {

/// A minority-class generator. Rows it returns carry label 1 and provenance
/// "synthetic"; the same train set and seed must give the same rows.
class SynthesisTechnique {
public:
    virtual ~SynthesisTechnique() = default;
    virtual std::string name() const = 0;
    virtual Dataset generate(const Dataset& train, std::uint64_t seed) const = 0;
};

using TechniquePtr = std::shared_ptr<const SynthesisTechnique>;

/// Rows needed for minority/majority to reach `target_ratio`; never negative.
std::size_t synthesis_count(const Dataset& train, double target_ratio);

/// Duplicates minority rows drawn uniformly with replacement.
Dataset random_oversample(const Dataset& train, double target_ratio, std::uint64_t seed);

/// x + u * (neighbor - x)
std::vector<double> interpolate(std::span<const double> x, std::span<const double> neighbor, double u);

/// Interpolates between a random minority row and one of its k nearest minority
/// neighbours (Euclidean, ties to the lower row index). k is clamped to m - 1.
Dataset smote(const Dataset& train, std::size_t k_neighbors, double target_ratio, std::uint64_t seed);

class RandomOversampler final : public SynthesisTechnique {
public:
    explicit RandomOversampler(double target_ratio = 1.0) : target_ratio_(target_ratio) {}
    std::string name() const override { return "random-oversample"; }
    Dataset generate(const Dataset& train, std::uint64_t seed) const override;

private:
    double target_ratio_;
};

class Smote final : public SynthesisTechnique {
public:
    explicit Smote(std::size_t k_neighbors = 5, double target_ratio = 1.0)
        : k_(k_neighbors), target_ratio_(target_ratio) {}
    std::string name() const override { return "smote"; }
    Dataset generate(const Dataset& train, std::uint64_t seed) const override;

private:
    std::size_t k_;
    double target_ratio_;
};

/// Serves rows produced by an external generator (e.g. a tabular GAN) so they can
/// compete in the technique race.
class ReplayTechnique final : public SynthesisTechnique {
public:
    ReplayTechnique(std::string name, Dataset rows);
    std::string name() const override { return name_; }
    Dataset generate(const Dataset& train, std::uint64_t seed) const override;

private:
    std::string name_;
    Dataset rows_;
};

/// Reads replay rows from CSV. Columns are matched to `schema` by feature name and
/// must be numeric (already encoded); any other column is ignored.
Dataset load_replay_rows(const std::filesystem::path& path, const Dataset& schema);

struct TechniqueScore {
    std::string name;
    double f1 = 0.0;
};

struct SynthesisOutcome {
    Dataset augmented;     // D^tr + synthetic rows + correctly classified validation rows
    Dataset misclassified; // validation rows the final model got wrong
    std::size_t chosen = 0;
    std::string chosen_name;
    std::vector<TechniqueScore> scores; // list order
    ModelPtr model;                     // trained on D^tr + synthetic rows
    std::size_t train_rows = 0;
    std::size_t synthetic_rows = 0;
    std::size_t validation_rows = 0;
    std::size_t merged_rows = 0;
};

/// Partitions `d`, races every technique by validation F1 (first wins ties), rebuilds
/// the augmented set with the winner and folds correctly classified validation rows
/// back in.
SynthesisOutcome meta_synthesize(const Dataset& d, const std::vector<TechniquePtr>& techniques, const Trainer& trainer,
                                 const SplitSpec& split);

} // namespace trienhance
