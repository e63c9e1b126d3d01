#include "trienhance/pipeline.hpp"

#include <chrono>
#include <unordered_map>
#include <unordered_set>

namespace trienhance {

namespace {

class StageClock {
public:
    StageClock(std::vector<StageTiming>& sink, std::string stage)
        : sink_(sink), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
    ~StageClock() {
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        sink_.push_back({stage_, std::chrono::duration<double, std::milli>(elapsed).count()});
    }

private:
    std::vector<StageTiming>& sink_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

template <class F>
auto in_stage(const char* stage, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        throw Error(std::string(stage) + ": " + e.what());
    }
}

void check_binary(const Dataset& d) {
    if (!d.labeled()) throw Error("pipeline input must be labeled");
    if (d.empty()) throw Error("pipeline input is empty");
    for (int y : d.labels()) {
        if (y != 0 && y != 1) throw Error("pipeline input must be binary with labels 0 and 1");
    }
}

} // namespace

EnhancementResult run_pipeline(const Dataset& input, const std::optional<Dataset>& unlabeled,
                               const PipelineConfig& cfg) {
    return run_pipeline(input, unlabeled, cfg, make_trainer(cfg.classifier_spec()));
}

EnhancementResult run_pipeline(const Dataset& input, const std::optional<Dataset>& unlabeled,
                               const PipelineConfig& cfg, const Trainer& trainer) {
    cfg.validate();
    check_binary(input);
    EnhancementResult r;
    r.input = input;

    Dataset pool = unlabeled ? (unlabeled->labeled() ? unlabeled->without_labels() : *unlabeled) : input.empty_like().without_labels();
    if (unlabeled && !pool.same_schema(input.without_labels())) throw Error("unlabeled rows do not match the input schema");
    r.unlabeled_rows = pool.rows();

    r.augmented = input;
    if (!cfg.disable_synthesis) {
        StageClock clock(r.timing, "synthesis");
        r.synthesis = in_stage("synthesis", [&] {
            auto techniques = make_techniques(cfg, input);
            return meta_synthesize(input, techniques, trainer, SplitSpec::holdout(cfg.synthesis_train_ratio, cfg.seed));
        });
        r.augmented = r.synthesis->augmented;
    }

    r.filtered = r.augmented;
    if (!cfg.disable_filtering) {
        if (!r.synthesis) {
            r.notes.push_back("filtering skipped: it scores thresholds on the misclassified validation rows, "
                              "which only synthesis produces");
        } else if (r.synthesis->misclassified.empty()) {
            r.notes.push_back("filtering skipped: the synthesis model classified every validation row correctly");
        } else {
            StageClock clock(r.timing, "filtering");
            FilterOptions opts;
            opts.thresholds = cfg.thresholds;
            opts.retention = cfg.retention;
            r.filtering = in_stage("filtering", [&] {
                return filter_sweep(r.augmented, r.synthesis->misclassified, *r.synthesis->model, trainer,
                                    class_stats(input), opts);
            });
            r.filtered = r.filtering->filtered;
        }
    }

    r.enhanced = r.filtered;
    if (!cfg.disable_selflearning) {
        if (pool.empty()) {
            r.notes.push_back("self-learning skipped: no unlabeled rows");
        } else {
            StageClock clock(r.timing, "self-learning");
            const auto pcfg = cfg.pseudo_label_config();
            r.self_learning = in_stage("self-learning", [&] {
                switch (cfg.strategy) {
                case StrategyMode::kfulf: return kfulf(r.filtered, pool, trainer, pcfg);
                case StrategyMode::dds: return dds(r.filtered, pool, trainer, pcfg);
                case StrategyMode::auto_select: break;
                }
                // the holdout only judges the two strategies and rejoins the result afterwards
                auto carve = stratified_holdout(r.filtered, 1.0 - cfg.selection_holdout, cfg.seed);
                r.selection_holdout_rows = carve.second.rows();
                auto choice = select_strategy(carve.first, pool, carve.second, trainer, pcfg);
                r.kfulf_holdout_f1 = choice.kfulf_f1;
                r.dds_holdout_f1 = choice.dds_f1;
                choice.outcome.enhanced.append(carve.second);
                return std::move(choice.outcome);
            });
            r.enhanced = r.self_learning->enhanced;
        }
    }
    return r;
}

PseudoLabelAudit audit_pseudo_labels(const Dataset& enhanced, const Dataset& pool,
                                     const std::vector<int>& hidden_truth, const Model& base_model) {
    if (hidden_truth.size() != pool.rows()) throw Error("hidden labels are not parallel to the pool");
    PseudoLabelAudit a;
    a.pool_rows = pool.rows();
    std::unordered_map<std::int64_t, int> truth;
    for (std::size_t i = 0; i < pool.rows(); ++i) truth[pool.row_id(i)] = hidden_truth[i];

    for (std::size_t i = 0; i < enhanced.rows(); ++i) {
        if (enhanced.provenance(i) != Provenance::pseudo_labeled) continue;
        auto it = truth.find(enhanced.row_id(i));
        if (it == truth.end()) throw Error("pseudo-labeled row does not come from the pool");
        ++a.pseudo_rows;
        if (it->second == enhanced.label(i)) ++a.pseudo_correct;
    }
    if (a.pseudo_rows > 0) a.pseudo_accuracy = static_cast<double>(a.pseudo_correct) / static_cast<double>(a.pseudo_rows);
    if (!pool.empty()) {
        auto predicted = predict(base_model, pool);
        std::size_t hits = 0;
        for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == hidden_truth[i];
        a.base_accuracy = static_cast<double>(hits) / static_cast<double>(pool.rows());
    }
    return a;
}

BenchmarkResult benchmark(const Dataset& input, const PipelineConfig& cfg) {
    cfg.validate();
    check_binary(input);
    const auto parts = stratified_partition(input, SplitSpec::k_fold(cfg.benchmark_folds, cfg.seed));
    BenchmarkResult out;
    std::vector<EvalReport> base_reports, enh_reports;
    for (std::size_t f = 0; f < parts.size(); ++f) {
        PipelineConfig fold_cfg = cfg;
        fold_cfg.seed = cfg.seed + f;
        const auto trainer = make_trainer(fold_cfg.classifier_spec());
        auto split = fold_split(input, parts, f);

        FoldResult fr;
        fr.fold = f;
        fr.test_rows = split.second.rows();
        Dataset labeled = split.first;
        std::optional<Dataset> pool;
        std::vector<int> truth;
        if (cfg.hide_labels > 0.0) {
            auto hidden = hide_labels(split.first, cfg.hide_labels, fold_cfg.seed);
            labeled = std::move(hidden.labeled);
            pool = std::move(hidden.pool);
            truth = std::move(hidden.hidden_truth);
        }
        fr.train_rows = labeled.rows();
        fr.pool_rows = pool ? pool->rows() : 0;

        auto base_model = trainer(labeled);
        fr.baseline = evaluate(*base_model, split.second, cfg.decision_threshold);

        auto result = run_pipeline(labeled, pool, fold_cfg, trainer);
        fr.enhanced_rows = result.enhanced.rows();
        auto enh_model = trainer(result.enhanced);
        fr.enhanced = evaluate(*enh_model, split.second, cfg.decision_threshold);

        std::unordered_set<std::int64_t> test_ids(split.second.row_ids().begin(), split.second.row_ids().end());
        for (std::size_t i = 0; i < result.enhanced.rows(); ++i) {
            const auto id = result.enhanced.row_id(i);
            if (id != kNoRowId && test_ids.count(id)) fr.leakage_free = false;
        }
        if (pool && !pool->empty()) fr.audit = audit_pseudo_labels(result.enhanced, *pool, truth, *base_model);

        base_reports.push_back(fr.baseline);
        enh_reports.push_back(fr.enhanced);
        out.folds.push_back(std::move(fr));
    }
    out.baseline = summarize(base_reports);
    out.enhanced = summarize(enh_reports);
    return out;
}

std::vector<std::pair<std::string, PipelineConfig>> ablation_configs(const PipelineConfig& base) {
    std::vector<std::pair<std::string, PipelineConfig>> out;
    PipelineConfig full = base;
    full.disable_synthesis = full.disable_filtering = full.disable_selflearning = false;
    out.emplace_back("full", full);

    PipelineConfig c = full;
    c.disable_selflearning = true;
    out.emplace_back("w/o sl", c);

    c = full;
    c.disable_filtering = true;
    out.emplace_back("w/o fil", c);

    c = full;
    c.disable_filtering = c.disable_selflearning = true;
    out.emplace_back("w/o sl+fil", c);

    c = full;
    c.disable_filtering = true;
    c.strategy = StrategyMode::kfulf;
    out.emplace_back("w/o fil w. KFULF", c);

    c.strategy = StrategyMode::dds;
    out.emplace_back("w/o fil w. DDS", c);
    return out;
}

std::vector<AblationRow> run_ablation(const Dataset& input, const PipelineConfig& base) {
    std::vector<AblationRow> rows;
    for (auto& [name, c] : ablation_configs(base)) rows.push_back({name, c, benchmark(input, c)});
    return rows;
}

} // namespace trienhance
