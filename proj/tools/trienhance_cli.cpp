// trienhance: enhance, benchmark, generate and metrics subcommands.

#include "trienhance/config.hpp"
#include "trienhance/generator.hpp"
#include "trienhance/models.hpp"
#include "trienhance/pipeline.hpp"
#include "trienhance/preprocess.hpp"
#include "trienhance/report.hpp"
#include "trienhance/text.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace trienhance;

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> label_column;
    std::optional<double> hide_labels;
    std::optional<std::string> strategy;
    std::optional<std::string> classifier;
    std::optional<std::string> positive_label;
    bool disable_synthesis = false;
    bool disable_filtering = false;
    bool disable_selflearning = false;
    std::vector<std::string> set;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "random seed (default 42)");
    cmd->add_option("--label-column", f.label_column, "name of the label column (default label)");
    cmd->add_option("--hide-labels", f.hide_labels, "fraction of labeled rows turned into the unlabeled pool");
    cmd->add_option("--strategy", f.strategy, "self-learning strategy: auto, kfulf or dds");
    cmd->add_option("--classifier", f.classifier, "decision-tree, random-forest or logistic-regression");
    cmd->add_option("--positive-label", f.positive_label, "raw label value treated as class 1 (default: minority)");
    cmd->add_flag("--disable-synthesis", f.disable_synthesis);
    cmd->add_flag("--disable-filtering", f.disable_filtering);
    cmd->add_flag("--disable-selflearning", f.disable_selflearning);
    cmd->add_option("--set", f.set, "extra key=value config overrides, applied last");
}

PipelineConfig resolve(const CommonFlags& f) {
    PipelineConfig cfg;
    if (!f.config_path.empty()) cfg = load_config(f.config_path);
    if (f.seed) cfg.seed = *f.seed;
    if (f.label_column) cfg.label_column = *f.label_column;
    if (f.hide_labels) cfg.hide_labels = *f.hide_labels;
    if (f.strategy) cfg.strategy = parse_strategy_mode(*f.strategy);
    if (f.classifier) cfg.classifier = parse_classifier_kind(*f.classifier);
    if (f.positive_label) cfg.positive_label = *f.positive_label;
    if (f.disable_synthesis) cfg.disable_synthesis = true;
    if (f.disable_filtering) cfg.disable_filtering = true;
    if (f.disable_selflearning) cfg.disable_selflearning = true;
    for (const auto& kv : f.set) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error("--set expects key=value, got '" + kv + "'");
        set_config_value(cfg, std::string(trim(kv.substr(0, eq))), std::string(trim(kv.substr(eq + 1))));
    }
    cfg.validate();
    return cfg;
}

RawTable load_unlabeled(const std::string& path, const std::string& label_column) {
    auto raw = load_csv(path, std::nullopt);
    if (std::find(raw.header.begin(), raw.header.end(), label_column) != raw.header.end()) {
        raw = load_csv(path, label_column);
    }
    return raw;
}

std::string encoding_text(const Preprocessed& p, const std::string& label_column) {
    std::ostringstream os;
    os << "label column: " << label_column << '\n'
       << "class 0: " << p.label_values[0] << '\n'
       << "class 1: " << p.label_values[1] << '\n';
    os << "dropped columns:";
    for (const auto& c : p.dropped_columns) os << ' ' << c;
    os << '\n';
    const auto& names = p.labeled.feature_names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (p.categories[j].empty()) continue;
        os << "categories " << names[j] << ':';
        for (std::size_t c = 0; c < p.categories[j].size(); ++c) os << ' ' << c << '=' << p.categories[j][c];
        os << '\n';
    }
    return os.str();
}

void print_summary(const std::string& name, const ReportSummary& s) {
    auto line = [&](const char* metric, const MetricStat& m) {
        std::cout << "  " << name << ' ' << metric << ": " << format_fixed(m.mean, 4) << " +/- "
                  << format_fixed(m.stdev, 4) << '\n';
    };
    line("precision", s.precision);
    line("recall", s.recall);
    line("f1", s.f1);
    line("accuracy", s.accuracy);
    line("auc", s.auc);
    line("ks", s.ks);
}

int run_enhance(const std::string& input, const std::string& unlabeled_path, const std::string& out_dir,
                const std::string& model_path, const CommonFlags& flags) {
    auto cfg = resolve(flags);
    auto raw = load_csv(input, cfg.label_column);
    if (!unlabeled_path.empty()) append_unlabeled(raw, load_unlabeled(unlabeled_path, cfg.label_column));
    auto pre = preprocess(raw, cfg.preprocess_options());

    Dataset labeled = pre.labeled;
    Dataset pool = pre.unlabeled;
    std::optional<HiddenLabelSplit> hidden;
    if (cfg.hide_labels > 0.0) {
        hidden = hide_labels(labeled, cfg.hide_labels, cfg.seed);
        labeled = hidden->labeled;
        pool.append(hidden->pool);
    }

    auto result = run_pipeline(labeled, pool, cfg);
    auto written = emit_report(result, cfg, out_dir);
    write_text(std::filesystem::path(out_dir) / "encoding.txt", encoding_text(pre, cfg.label_column));

    if (hidden && !hidden->pool.empty()) {
        auto base = fit(cfg.classifier_spec(), labeled);
        auto audit = audit_pseudo_labels(result.enhanced, hidden->pool, hidden->hidden_truth, *base);
        std::ostringstream os;
        os << "hidden rows: " << audit.pool_rows << '\n'
           << "pseudo-labeled hidden rows: " << audit.pseudo_rows << '\n'
           << "pseudo-label accuracy: " << format_fixed(audit.pseudo_accuracy) << '\n'
           << "base model accuracy on hidden rows: " << format_fixed(audit.base_accuracy) << '\n';
        write_text(std::filesystem::path(out_dir) / "pseudo_label_audit.txt", os.str());
    }
    if (!model_path.empty()) {
        auto model = fit(cfg.classifier_spec(), result.enhanced);
        std::ofstream out(model_path);
        if (!out) throw Error("cannot write model file '" + model_path + "'");
        save_model(out, *model);
    }

    std::cout << "input " << result.input.rows() << ", D_aug " << result.augmented.rows() << ", D_filtered "
              << result.filtered.rows() << ", D_enhanced " << result.enhanced.rows() << '\n';
    for (const auto& t : result.timing) std::cout << "  " << t.stage << ": " << format_fixed(t.milliseconds, 1) << " ms\n";
    for (const auto& n : result.notes) std::cout << "  note: " << n << '\n';
    std::cout << "reports written to " << out_dir << '\n';
    return 0;
}

int run_benchmark(const std::string& input, const std::string& out_dir, bool ablation, const CommonFlags& flags) {
    auto cfg = resolve(flags);
    auto raw = load_csv(input, cfg.label_column);
    auto pre = preprocess(raw, cfg.preprocess_options());
    if (!pre.unlabeled.empty()) {
        std::cerr << "note: " << pre.unlabeled.rows() << " rows without a label are ignored by the benchmark\n";
    }
    auto result = benchmark(pre.labeled, cfg);
    if (!out_dir.empty()) emit_benchmark(result, cfg, out_dir);
    std::cout << cfg.benchmark_folds << "-fold benchmark, classifier " << to_string(cfg.classifier) << '\n';
    print_summary("baseline", result.baseline);
    print_summary("enhanced", result.enhanced);
    for (const auto& f : result.folds) {
        if (!f.leakage_free) throw Error("fold " + std::to_string(f.fold) + " leaked test rows into training");
    }
    if (ablation) {
        auto rows = run_ablation(pre.labeled, cfg);
        if (!out_dir.empty()) write_text(std::filesystem::path(out_dir) / "ablation.csv", ablation_csv(rows));
        for (const auto& r : rows) {
            std::cout << r.name << ": recall " << format_fixed(r.result.enhanced.recall.mean, 4) << ", f1 "
                      << format_fixed(r.result.enhanced.f1.mean, 4) << ", auc "
                      << format_fixed(r.result.enhanced.auc.mean, 4) << '\n';
        }
    }
    return 0;
}

int run_metrics(const std::string& path, const std::string& label_col, const std::string& score_col, double threshold,
                const std::string& out) {
    auto raw = load_csv(path, std::nullopt);
    auto col = [&](const std::string& name) {
        auto it = std::find(raw.header.begin(), raw.header.end(), name);
        if (it == raw.header.end()) throw Error("column '" + name + "' not found in '" + path + "'");
        return static_cast<std::size_t>(it - raw.header.begin());
    };
    const auto yc = col(label_col), sc = col(score_col);
    std::vector<int> labels;
    std::vector<double> scores;
    for (std::size_t r = 0; r < raw.size(); ++r) {
        const auto& y = raw.rows[r][yc];
        const auto& s = raw.rows[r][sc];
        const long long yv = y ? parse_int(*y).value_or(-1) : -1;
        auto sv = s ? parse_double(*s) : std::nullopt;
        if (yv != 0 && yv != 1) throw Error("row " + std::to_string(r + 1) + ": label must be 0 or 1");
        if (!sv) throw Error("row " + std::to_string(r + 1) + ": score is not a number");
        labels.push_back(static_cast<int>(yv));
        scores.push_back(*sv);
    }
    auto report = evaluate_scores(labels, scores, threshold);
    std::cout << report.to_key_value();
    if (!out.empty()) write_text(out, EvalReport::csv_header() + "\n" + report.to_csv_row() + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Imbalanced tabular data enhancement: synthesis, margin filtering and pseudo-label self-learning"};
    app.require_subcommand(1);

    CommonFlags enhance_flags;
    std::string enhance_input, unlabeled, enhance_out = "trienhance_out", model_path;
    auto* enhance = app.add_subcommand("enhance", "run the pipeline on a CSV and write reports");
    enhance->add_option("input", enhance_input, "labeled CSV")->required()->check(CLI::ExistingFile);
    enhance->add_option("--unlabeled", unlabeled, "CSV of unlabeled rows")->check(CLI::ExistingFile);
    enhance->add_option("--out", enhance_out, "output directory");
    enhance->add_option("--save-model", model_path, "fit the classifier on the enhanced data and save it here");
    add_common(enhance, enhance_flags);

    CommonFlags bench_flags;
    std::string bench_input, bench_out;
    bool ablation = false;
    auto* bench = app.add_subcommand("benchmark", "stratified k-fold baseline vs enhanced comparison");
    bench->add_option("input", bench_input, "labeled CSV")->required()->check(CLI::ExistingFile);
    bench->add_option("--out", bench_out, "output directory");
    bench->add_flag("--ablation", ablation, "also run the ablation variants");
    add_common(bench, bench_flags);

    BenchmarkSpec gen;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "write a synthetic imbalanced benchmark CSV");
    generate->add_option("--n", gen.n, "rows");
    generate->add_option("--d", gen.d, "features");
    generate->add_option("--ir", gen.imbalance_ratio, "imbalance ratio r in 1:r");
    generate->add_option("--separation", gen.separation, "distance between class means");
    generate->add_option("--noise", gen.noise_rate, "share of flipped labels");
    generate->add_option("--seed", gen.seed, "random seed");
    generate->add_option("--out", gen_out, "output CSV")->required();

    std::string metrics_input, metrics_label = "label", metrics_score = "score", metrics_out;
    double metrics_threshold = 0.5;
    auto* metrics = app.add_subcommand("metrics", "score a predictions CSV (label and score columns)");
    metrics->add_option("input", metrics_input, "predictions CSV")->required()->check(CLI::ExistingFile);
    metrics->add_option("--label-column", metrics_label, "0/1 ground-truth column");
    metrics->add_option("--score-column", metrics_score, "p(y=1|x) column");
    metrics->add_option("--threshold", metrics_threshold, "decision threshold");
    metrics->add_option("--out", metrics_out, "also write a one-row CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*enhance) return run_enhance(enhance_input, unlabeled, enhance_out, model_path, enhance_flags);
        if (*bench) return run_benchmark(bench_input, bench_out, ablation, bench_flags);
        if (*generate) {
            save_csv(gen_out, generate_synthetic_benchmark(gen), "label", false);
            std::cout << "wrote " << gen.n << " rows to " << gen_out << '\n';
            return 0;
        }
        if (*metrics) return run_metrics(metrics_input, metrics_label, metrics_score, metrics_threshold, metrics_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
