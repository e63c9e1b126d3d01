#include "support.hpp"

#include "trienhance/config.hpp"
#include "trienhance/filtering.hpp"
#include "trienhance/generator.hpp"
#include "trienhance/pipeline.hpp"
#include "trienhance/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

using namespace trienhance;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

Dataset small_benchmark() { return generate_synthetic_benchmark(BenchmarkSpec{.n = 600, .imbalance_ratio = 8}); }

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("trienhance_pipeline_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::size_t summary_count(const std::string& text, const std::string& key) {
    auto at = text.find("  " + key + ": ");
    REQUIRE(at != std::string::npos);
    return std::stoul(text.substr(at + key.size() + 4));
}

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("config round trip through the key = value format") {
    PipelineConfig c;
    c.seed = 7;
    c.classifier = ClassifierKind::random_forest;
    c.bootstrap = false;
    c.techniques = {"random-oversample"};
    c.thresholds = {0.0, 0.25, 0.5};
    c.strategy = StrategyMode::dds;
    c.disable_filtering = true;
    c.hide_labels = 0.3;
    c.positive_label = "yes";
    c.learning_rate = 0.125;
    std::istringstream in(write_config(c));
    CHECK(parse_config(in) == c);

    std::istringstream defaults(write_config(PipelineConfig{}));
    CHECK(parse_config(defaults) == PipelineConfig{});
}

TEST_CASE("config parsing rejects bad input with the line number") {
    std::istringstream unknown("# comment\n\nseed = 3\nbogus = 1\n");
    CHECK_THROWS_WITH_AS(parse_config(unknown), doctest::Contains("config line 4"), Error);
    std::istringstream bad_number("seed = x\n");
    CHECK_THROWS_AS(parse_config(bad_number), Error);
    std::istringstream bad_range("target_percentage = 1.5\n");
    CHECK_THROWS_WITH_AS(parse_config(bad_range), doctest::Contains("invalid config"), Error);
    PipelineConfig c;
    set_config_value(c, "strategy", "kfulf");
    CHECK(c.strategy == StrategyMode::kfulf);
    CHECK_THROWS_AS(set_config_value(c, "k_folds", "-2"), Error);
    c.k_folds = 1;
    CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("all stages disabled is the identity") {
    auto d = small_benchmark();
    PipelineConfig c;
    c.disable_synthesis = c.disable_filtering = c.disable_selflearning = true;
    auto r = run_pipeline(d, std::nullopt, c);
    CHECK(r.enhanced == d);
    CHECK_FALSE(r.synthesis);
    CHECK(r.timing.empty());
}

TEST_CASE("synthesis alone matches meta-synthesis") {
    auto d = small_benchmark();
    PipelineConfig c;
    c.disable_filtering = c.disable_selflearning = true;
    auto r = run_pipeline(d, std::nullopt, c);
    auto direct = meta_synthesize(d, make_techniques(c, d), make_trainer(c.classifier_spec()),
                                  SplitSpec::holdout(c.synthesis_train_ratio, c.seed));
    CHECK(r.enhanced == direct.augmented);
}

TEST_CASE("without self-learning the output is synthesis then filtering") {
    auto d = small_benchmark();
    PipelineConfig c;
    c.disable_selflearning = true;
    auto r = run_pipeline(d, std::nullopt, c);
    const auto trainer = make_trainer(c.classifier_spec());
    auto syn = meta_synthesize(d, make_techniques(c, d), trainer, SplitSpec::holdout(c.synthesis_train_ratio, c.seed));
    REQUIRE_FALSE(syn.misclassified.empty());
    auto fil = filter_sweep(syn.augmented, syn.misclassified, *syn.model, trainer, class_stats(d));
    CHECK(r.enhanced == fil.filtered);
    CHECK(r.filtered == fil.filtered);
    CHECK(r.augmented == syn.augmented);
}

TEST_CASE("filtering without synthesis is skipped with a note") {
    auto d = small_benchmark();
    PipelineConfig c;
    c.disable_synthesis = c.disable_selflearning = true;
    auto r = run_pipeline(d, std::nullopt, c);
    CHECK(r.enhanced == d);
    REQUIRE(r.notes.size() == 1);
    CHECK(r.notes[0].find("filtering skipped") == 0);
}

TEST_CASE("full pipeline with an unlabeled pool") {
    auto d = small_benchmark();
    auto hidden = hide_labels(d, 0.3, 5);
    PipelineConfig c;
    auto r = run_pipeline(hidden.labeled, hidden.pool, c);
    REQUIRE(r.self_learning);
    CHECK(r.unlabeled_rows == hidden.pool.rows());
    CHECK(r.enhanced.rows() == r.filtered.rows() + r.self_learning->pseudo_count);
    std::size_t pseudo = 0;
    for (std::size_t i = 0; i < r.enhanced.rows(); ++i) {
        CHECK(r.enhanced.label(i) != kArtificialLabel);
        pseudo += r.enhanced.provenance(i) == Provenance::pseudo_labeled;
    }
    CHECK(pseudo == r.self_learning->pseudo_count);
    CHECK(r.kfulf_holdout_f1);
    CHECK(r.selection_holdout_rows > 0);

    // the same run again is identical
    auto again = run_pipeline(hidden.labeled, hidden.pool, c);
    CHECK(again.enhanced == r.enhanced);

    auto audit = audit_pseudo_labels(r.enhanced, hidden.pool, hidden.hidden_truth, *fit(c.classifier_spec(), hidden.labeled));
    CHECK(audit.pseudo_rows == pseudo);
    CHECK(audit.pool_rows == hidden.pool.rows());
}

TEST_CASE("stage errors carry the stage name") {
    auto d = small_benchmark();
    PipelineConfig c;
    c.techniques = {"no-such-technique"};
    CHECK(error_of([&] { run_pipeline(d, std::nullopt, c); }).rfind("synthesis: ", 0) == 0);

    c = PipelineConfig{};
    c.strategy = StrategyMode::kfulf;
    c.disable_synthesis = true;
    auto tiny_pool = small_benchmark().without_labels().subset(std::vector<std::size_t>{0, 1});
    CHECK(error_of([&] { run_pipeline(d, tiny_pool, c); }).rfind("self-learning: ", 0) == 0);

    CHECK_THROWS_AS(run_pipeline(d, make_unlabeled({{1.0}}), c), Error);
}

TEST_CASE("reports are complete, consistent and reproducible") {
    auto d = small_benchmark();
    auto hidden = hide_labels(d, 0.3, 5);
    PipelineConfig c;
    auto r = run_pipeline(hidden.labeled, hidden.pool, c);
    auto dir_a = scratch("a"), dir_b = scratch("b");
    auto files = emit_report(r, c, dir_a);
    for (const char* name : {"enhanced.csv", "d_aug.csv", "d_filtered.csv", "summary.txt", "config.txt",
                             "synthesis_scores.csv", "filter_thresholds.csv"}) {
        CHECK(fs::exists(dir_a / name));
    }
    const auto summary = slurp(dir_a / "summary.txt");
    CHECK(summary_count(summary, "input") == hidden.labeled.rows());
    CHECK(summary_count(summary, "D_aug") == r.augmented.rows());
    CHECK(summary_count(summary, "D_filtered") == r.filtered.rows());
    CHECK(summary_count(summary, "D_enhanced") == r.enhanced.rows());
    CHECK(summary.find("distribution: D_enhanced") != std::string::npos);

    // replaying the written config reproduces every file
    auto replayed = load_config(dir_a / "config.txt");
    CHECK(replayed == c);
    auto files_b = emit_report(run_pipeline(hidden.labeled, hidden.pool, replayed), replayed, dir_b);
    REQUIRE(files.size() == files_b.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        CHECK(files[i].filename() == files_b[i].filename());
        CHECK(slurp(files[i]) == slurp(files_b[i]));
    }
}

TEST_CASE("benchmark: the identity pipeline equals the baseline and folds never leak") {
    auto d = small_benchmark();
    PipelineConfig c;
    c.disable_synthesis = c.disable_filtering = c.disable_selflearning = true;
    c.hide_labels = 0.2;
    auto b = benchmark(d, c);
    REQUIRE(b.folds.size() == 3);
    std::size_t tested = 0;
    for (const auto& f : b.folds) {
        CHECK(f.baseline.to_csv_row() == f.enhanced.to_csv_row());
        CHECK(f.leakage_free);
        tested += f.test_rows;
    }
    CHECK(tested == d.rows());
    CHECK(b.baseline.f1.mean == b.enhanced.f1.mean);

    PipelineConfig full;
    auto fb = benchmark(d, full);
    for (const auto& f : fb.folds) CHECK(f.leakage_free);
    CHECK(benchmark_folds_csv(benchmark(d, full)) == benchmark_folds_csv(fb));
}

TEST_CASE("ablation variants") {
    auto variants = ablation_configs(PipelineConfig{});
    REQUIRE(variants.size() == 6);
    CHECK(variants[0].first == "full");
    CHECK(variants[1].first == "w/o sl");
    CHECK(variants[1].second.disable_selflearning);
    CHECK(variants[2].first == "w/o fil");
    CHECK(variants[2].second.disable_filtering);
    CHECK(variants[3].first == "w/o sl+fil");
    CHECK(variants[4].first == "w/o fil w. KFULF");
    CHECK(variants[4].second.strategy == StrategyMode::kfulf);
    CHECK(variants[5].first == "w/o fil w. DDS");
    CHECK(variants[5].second.strategy == StrategyMode::dds);
    CHECK_FALSE(variants[5].second.disable_synthesis);
}
