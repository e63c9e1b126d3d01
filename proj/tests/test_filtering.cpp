#include "support.hpp"

#include "trienhance/filtering.hpp"
#include "trienhance/generator.hpp"
#include "trienhance/metrics.hpp"
#include "trienhance/synthesis.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace trienhance;
using namespace testsupport;

namespace {

/// Model whose margin on a row is |2 * x0 - 1|, since p(1) = x0 for x0 in [0, 1].
ModelPtr margin_by_x0() {
    return binary_model(1, [](std::span<const double> x) { return std::clamp(x[0], 0.0, 1.0); });
}

std::vector<MarginRecord> records(std::vector<double> deltas) {
    std::vector<MarginRecord> out;
    for (std::size_t i = 0; i < deltas.size(); ++i) out.push_back({i, deltas[i]});
    return out;
}

} // namespace

TEST_CASE("margins") {
    CHECK(margin_of(std::vector<double>{0.9, 0.1}) == doctest::Approx(0.8));
    CHECK(margin_of(std::vector<double>{0.5, 0.5}) == 0.0);
    CHECK(margin_of(std::vector<double>{0.5, 0.3, 0.2}) == doctest::Approx(0.2));
    CHECK(margin_of(std::vector<double>{0.3, 0.2, 0.5}) == doctest::Approx(0.2));
    auto d = make_labeled({{0.95}, {0.5}, {0.2}}, {1, 0, 0});
    auto m = margins(*margin_by_x0(), d);
    REQUIRE(m.size() == 3);
    CHECK(m[0].delta == doctest::Approx(0.9));
    CHECK(m[1].delta == doctest::Approx(0.0));
    CHECK(m[2].delta == doctest::Approx(0.6));
    CHECK(m[2].row == 2);
    CHECK_THROWS_AS(margins(*margin_by_x0(), make_labeled({{1, 2}}, {0})), Error);
}

TEST_CASE("kept rows use an inclusive threshold") {
    auto r = records({0.9, 0.4, 0.1});
    CHECK(kept_rows(r, 0.5) == std::vector<std::size_t>{0});
    CHECK(kept_rows(r, 0.4) == std::vector<std::size_t>{0, 1});
    CHECK(kept_rows(r, 0.0).size() == 3);
}

TEST_CASE("default grid") {
    auto g = default_threshold_grid();
    REQUIRE(g.size() == 10);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == doctest::Approx(0.9));
}

TEST_CASE("retention quotas") {
    auto even = class_stats(counts_dataset(5, 5));
    CHECK(retention_quota(3, even) == std::vector<std::size_t>{2, 1});
    auto blsd = class_stats(counts_dataset(2252, 7748));
    CHECK(retention_quota(1000, blsd) == std::vector<std::size_t>{775, 225});
}

TEST_CASE("retention keeps the highest margins per class and never reassigns a shortfall") {
    // pool: 2 minority rows and 8 majority rows, priors 0.5 / 0.5 -> quota 5 each
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (int i = 0; i < 10; ++i) {
        x.push_back({static_cast<double>(i)});
        y.push_back(i < 2 ? 1 : 0);
    }
    auto pool = make_labeled(x, y);
    auto deltas = records({0.1, 0.2, 0.05, 0.3, 0.01, 0.25, 0.15, 0.2, 0.02, 0.12});
    auto r = retain_by_class(pool, class_stats(counts_dataset(5, 5)), deltas);
    CHECK(r.quota == std::vector<std::size_t>{5, 5});
    CHECK(r.retained == std::vector<std::size_t>{5, 2});
    CHECK(r.rows.rows() == 7);
    std::set<double> kept;
    for (std::size_t i = 0; i < r.rows.rows(); ++i) {
        kept.insert(r.rows.at(i, 0));
        CHECK(r.rows.provenance(i) == Provenance::retained);
    }
    // majority margins in descending order: rows 3, 5, 7, 6, 9
    CHECK(kept == std::set<double>{0, 1, 3, 5, 6, 7, 9});

    auto empty = retain_by_class(pool.subset(std::vector<std::size_t>{}), class_stats(counts_dataset(5, 5)), {});
    CHECK(empty.rows.empty());
}

TEST_CASE("retention on a 1000-row pool with table priors") {
    auto pool = counts_dataset(225, 775);
    std::vector<MarginRecord> m(pool.rows());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = {i, 0.1};
    auto r = retain_by_class(pool, class_stats(counts_dataset(2252, 7748)), m);
    CHECK(r.retained == std::vector<std::size_t>{775, 225});
}

TEST_CASE("threshold sweep picks the best F1 on the misclassified rows") {
    // aug margins under the stub: 0.9 for x0 = 0.95 / 0.05, 0.2 for x0 = 0.6 / 0.4
    auto aug = make_labeled({{0.95}, {0.05}, {0.6}, {0.4}, {0.95}, {0.05}}, {1, 0, 1, 0, 1, 0});
    auto mis = make_labeled({{0.5}, {0.5}, {0.5}, {0.5}}, {1, 1, 0, 0});
    // F1 on mis: all-positive -> 2/3, all-negative -> 0
    ScriptedTrainer trainer{{always({0, 1}, 1, 0), always({0, 1}, 1, 1)}};
    FilterOptions opts;
    opts.thresholds = {0.3, 0.6};
    auto out = filter_sweep(aug, mis, *margin_by_x0(), trainer, class_stats(aug), opts);
    REQUIRE(out.table.size() == 2);
    CHECK(out.table[0].f1 == 0.0);
    CHECK(out.table[1].f1 == doctest::Approx(2.0 / 3));
    CHECK(out.chosen_threshold == 0.6);
    CHECK(out.table[1].kept == 4);
    CHECK(out.table[1].filtered_out == 2);
    CHECK(out.table[1].retained == 2);
}

TEST_CASE("threshold sweep ties go to the smaller threshold, and t = 0 keeps everything") {
    auto aug = make_labeled({{0.95}, {0.05}, {0.6}, {0.4}}, {1, 0, 1, 0});
    auto mis = make_labeled({{0.5}, {0.5}}, {1, 0});
    ScriptedTrainer trainer{{always({0, 1}, 1, 1), always({0, 1}, 1, 1)}};
    FilterOptions opts;
    opts.thresholds = {0.0, 0.5};
    auto out = filter_sweep(aug, mis, *margin_by_x0(), trainer, class_stats(aug), opts);
    CHECK(out.chosen_threshold == 0.0);
    CHECK(out.filtered == aug);
    CHECK(out.discarded == 0);
}

TEST_CASE("threshold sweep skips empty or single-class candidates") {
    auto aug = make_labeled({{0.95}, {0.4}}, {1, 0});
    auto mis = make_labeled({{0.5}}, {1});
    FilterOptions opts;
    opts.thresholds = {0.5, 0.0};
    opts.retention = false;
    ScriptedTrainer trainer{{always({0, 1}, 1, 1)}};
    auto out = filter_sweep(aug, mis, *margin_by_x0(), trainer, class_stats(aug), opts);
    CHECK(out.table[0].skipped);
    CHECK(out.table[0].f1 == -1.0);
    CHECK(out.chosen_threshold == 0.0);

    opts.thresholds = {0.95};
    CHECK_THROWS_AS(filter_sweep(aug, mis, *margin_by_x0(), trainer, class_stats(aug), opts), Error);
    CHECK_THROWS_AS(filter_sweep(aug, mis.subset(std::vector<std::size_t>{}), *margin_by_x0(), trainer, class_stats(aug)),
                    Error);
    opts.thresholds = {1.5};
    CHECK_THROWS_AS(filter_sweep(aug, mis, *margin_by_x0(), trainer, class_stats(aug), opts), Error);
}

TEST_CASE("filtering invariants on the benchmark generator output") {
    auto d = generate_synthetic_benchmark(BenchmarkSpec{});
    auto trainer = make_trainer(ClassifierSpec{});
    auto syn = meta_synthesize(d, {std::make_shared<Smote>(), std::make_shared<RandomOversampler>()}, trainer,
                               SplitSpec::holdout(0.8, 42));
    const auto priors = class_stats(d);
    auto out = filter_sweep(syn.augmented, syn.misclassified, *syn.model, trainer, priors);

    auto grid = default_threshold_grid();
    for (std::size_t k = 1; k < grid.size(); ++k) {
        auto hi = kept_rows(out.margins, grid[k]);
        auto lo = kept_rows(out.margins, grid[k - 1]);
        CHECK(std::includes(lo.begin(), lo.end(), hi.begin(), hi.end()));
    }

    const auto kept = kept_rows(out.margins, out.chosen_threshold);
    for (auto i : kept) CHECK(out.margins[i].delta >= out.chosen_threshold);
    std::set<std::size_t> kept_set(kept.begin(), kept.end());

    // retained rows are exactly the "retained" tail and come from the filtered-out pool
    std::size_t retained = 0;
    for (std::size_t i = 0; i < out.filtered.rows(); ++i) {
        if (i < kept.size()) continue;
        CHECK(out.filtered.provenance(i) == Provenance::retained);
        ++retained;
    }
    const std::size_t n_out = syn.augmented.rows() - kept.size();
    auto quota = retention_quota(n_out, priors);
    std::size_t total = 0;
    for (std::size_t c = 0; c < out.classes.size(); ++c) {
        std::size_t pool_c = 0;
        for (std::size_t i = 0; i < syn.augmented.rows(); ++i) {
            if (!kept_set.count(i) && syn.augmented.label(i) == out.classes[c]) ++pool_c;
        }
        CHECK(out.retained_counts[c] == std::min(quota[c], pool_c));
        CHECK(out.retained_counts[c] <= pool_c);
        total += out.retained_counts[c];
    }
    CHECK(total == retained);
    CHECK(total <= n_out);
    CHECK(out.filtered.rows() + out.discarded == syn.augmented.rows());

    double chosen_f1 = -1;
    for (const auto& t : out.table) {
        if (t.threshold == out.chosen_threshold) chosen_f1 = t.f1;
    }
    for (const auto& t : out.table) {
        if (!t.skipped) CHECK(chosen_f1 >= t.f1);
    }
}
