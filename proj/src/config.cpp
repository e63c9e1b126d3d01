#include "trienhance/config.hpp"

#include "trienhance/text.hpp"

#include <fstream>
#include <sstream>

namespace trienhance {

std::string_view to_string(StrategyMode m) {
    switch (m) {
    case StrategyMode::auto_select: return "auto";
    case StrategyMode::kfulf: return "kfulf";
    case StrategyMode::dds: return "dds";
    }
    return "auto";
}

StrategyMode parse_strategy_mode(std::string_view s) {
    auto v = to_lower(trim(s));
    if (v == "auto") return StrategyMode::auto_select;
    if (v == "kfulf") return StrategyMode::kfulf;
    if (v == "dds") return StrategyMode::dds;
    throw Error("unknown strategy '" + std::string(s) + "' (expected auto, kfulf or dds)");
}

ClassifierSpec PipelineConfig::classifier_spec() const {
    ClassifierSpec spec;
    spec.kind = classifier;
    spec.max_depth = max_depth;
    spec.n_estimators = n_estimators;
    spec.bootstrap = bootstrap;
    spec.max_features = max_features;
    spec.leaf_smoothing = leaf_smoothing;
    spec.learning_rate = learning_rate;
    spec.n_iterations = n_iterations;
    spec.seed = seed;
    return spec;
}

PseudoLabelConfig PipelineConfig::pseudo_label_config() const {
    PseudoLabelConfig p;
    p.k_folds = k_folds;
    p.target_percentage = target_percentage;
    p.max_iterations = max_iterations;
    p.seed = seed;
    return p;
}

PreprocessOptions PipelineConfig::preprocess_options() const {
    PreprocessOptions p;
    p.missing_drop_threshold = missing_drop_threshold;
    p.positive_label = positive_label;
    return p;
}

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw Error(std::string("invalid config: ") + what);
}

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

} // namespace

void PipelineConfig::validate() const {
    require(max_depth >= 1, "max_depth must be >= 1");
    require(n_estimators >= 1, "n_estimators must be >= 1");
    require(leaf_smoothing >= 0.0, "leaf_smoothing must be >= 0");
    require(learning_rate > 0.0, "learning_rate must be > 0");
    require(decision_threshold >= 0.0 && decision_threshold <= 1.0, "decision_threshold must lie in [0,1]");
    require(!techniques.empty(), "techniques must not be empty");
    require(smote_k >= 1, "smote_k must be >= 1");
    require(target_ratio > 0.0, "target_ratio must be > 0");
    require(in_open_unit(synthesis_train_ratio), "synthesis_train_ratio must lie in (0,1)");
    require(!thresholds.empty(), "thresholds must not be empty");
    for (double t : thresholds) require(t >= 0.0 && t <= 1.0, "thresholds must lie in [0,1]");
    require(k_folds >= 2, "k_folds must be >= 2");
    require(in_open_unit(target_percentage), "target_percentage must lie in (0,1)");
    require(max_iterations >= 1, "max_iterations must be >= 1");
    require(in_open_unit(selection_holdout), "selection_holdout must lie in (0,1)");
    require(benchmark_folds >= 2, "benchmark_folds must be >= 2");
    require(!label_column.empty(), "label_column must not be empty");
    require(hide_labels >= 0.0 && hide_labels < 1.0, "hide_labels must lie in [0,1)");
    require(missing_drop_threshold >= 0.0 && missing_drop_threshold <= 1.0, "missing_drop_threshold must lie in [0,1]");
}

std::vector<TechniquePtr> make_techniques(const PipelineConfig& cfg, const Dataset& schema) {
    std::vector<TechniquePtr> out;
    for (const auto& name : cfg.techniques) {
        if (name == "smote") {
            out.push_back(std::make_shared<Smote>(cfg.smote_k, cfg.target_ratio));
        } else if (name == "random-oversample") {
            out.push_back(std::make_shared<RandomOversampler>(cfg.target_ratio));
        } else if (name.rfind("replay:", 0) == 0) {
            const std::string path = name.substr(7);
            out.push_back(std::make_shared<ReplayTechnique>(name, load_replay_rows(path, schema)));
        } else {
            throw Error("unknown synthesis technique '" + name + "'");
        }
    }
    return out;
}

namespace {

std::size_t as_count(const std::string& key, const std::string& v) {
    auto n = parse_int(v);
    if (!n || *n < 0) throw Error("config key '" + key + "' needs a non-negative integer, got '" + v + "'");
    return static_cast<std::size_t>(*n);
}

double as_real(const std::string& key, const std::string& v) {
    auto d = parse_double(v);
    if (!d) throw Error("config key '" + key + "' needs a number, got '" + v + "'");
    return *d;
}

bool as_bool(const std::string& key, const std::string& v) {
    auto s = to_lower(v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw Error("config key '" + key + "' needs true or false, got '" + v + "'");
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
    return out;
}

} // namespace

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    const std::string& v = value;
    if (key == "seed") cfg.seed = as_count(key, v);
    else if (key == "classifier") cfg.classifier = parse_classifier_kind(v);
    else if (key == "max_depth") cfg.max_depth = as_count(key, v);
    else if (key == "n_estimators") cfg.n_estimators = as_count(key, v);
    else if (key == "bootstrap") cfg.bootstrap = as_bool(key, v);
    else if (key == "max_features") cfg.max_features = as_count(key, v);
    else if (key == "leaf_smoothing") cfg.leaf_smoothing = as_real(key, v);
    else if (key == "learning_rate") cfg.learning_rate = as_real(key, v);
    else if (key == "n_iterations") cfg.n_iterations = as_count(key, v);
    else if (key == "decision_threshold") cfg.decision_threshold = as_real(key, v);
    else if (key == "techniques") {
        cfg.techniques.clear();
        for (auto& t : split(v, ',')) {
            if (!t.empty()) cfg.techniques.push_back(t);
        }
    }
    else if (key == "smote_k") cfg.smote_k = as_count(key, v);
    else if (key == "target_ratio") cfg.target_ratio = as_real(key, v);
    else if (key == "synthesis_train_ratio") cfg.synthesis_train_ratio = as_real(key, v);
    else if (key == "thresholds") {
        cfg.thresholds.clear();
        for (auto& t : split(v, ',')) {
            if (!t.empty()) cfg.thresholds.push_back(as_real(key, t));
        }
    }
    else if (key == "retention") cfg.retention = as_bool(key, v);
    else if (key == "k_folds") cfg.k_folds = as_count(key, v);
    else if (key == "target_percentage") cfg.target_percentage = as_real(key, v);
    else if (key == "max_iterations") cfg.max_iterations = as_count(key, v);
    else if (key == "strategy") cfg.strategy = parse_strategy_mode(v);
    else if (key == "selection_holdout") cfg.selection_holdout = as_real(key, v);
    else if (key == "disable_synthesis") cfg.disable_synthesis = as_bool(key, v);
    else if (key == "disable_filtering") cfg.disable_filtering = as_bool(key, v);
    else if (key == "disable_selflearning") cfg.disable_selflearning = as_bool(key, v);
    else if (key == "benchmark_folds") cfg.benchmark_folds = as_count(key, v);
    else if (key == "label_column") cfg.label_column = v;
    else if (key == "hide_labels") cfg.hide_labels = as_real(key, v);
    else if (key == "missing_drop_threshold") cfg.missing_drop_threshold = as_real(key, v);
    else if (key == "positive_label") {
        if (v.empty()) cfg.positive_label.reset();
        else cfg.positive_label = v;
    }
    else throw Error("unknown config key '" + key + "'");
}

PipelineConfig parse_config(std::istream& in, PipelineConfig base) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw Error("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key(trim(body.substr(0, eq)));
        std::string value(trim(body.substr(eq + 1)));
        try {
            set_config_value(base, key, value);
        } catch (const Error& e) {
            throw Error("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    base.validate();
    return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path.string() + "'");
    return parse_config(in, std::move(base));
}

std::string write_config(const PipelineConfig& c) {
    std::vector<std::string> grid;
    for (double t : c.thresholds) grid.push_back(format_double(t));
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };

    std::ostringstream out;
    out << "seed = " << c.seed << '\n'
        << "classifier = " << to_string(c.classifier) << '\n'
        << "max_depth = " << c.max_depth << '\n'
        << "n_estimators = " << c.n_estimators << '\n'
        << "bootstrap = " << b(c.bootstrap) << '\n'
        << "max_features = " << c.max_features << '\n'
        << "leaf_smoothing = " << format_double(c.leaf_smoothing) << '\n'
        << "learning_rate = " << format_double(c.learning_rate) << '\n'
        << "n_iterations = " << c.n_iterations << '\n'
        << "decision_threshold = " << format_double(c.decision_threshold) << '\n'
        << "techniques = " << join(c.techniques) << '\n'
        << "smote_k = " << c.smote_k << '\n'
        << "target_ratio = " << format_double(c.target_ratio) << '\n'
        << "synthesis_train_ratio = " << format_double(c.synthesis_train_ratio) << '\n'
        << "thresholds = " << join(grid) << '\n'
        << "retention = " << b(c.retention) << '\n'
        << "k_folds = " << c.k_folds << '\n'
        << "target_percentage = " << format_double(c.target_percentage) << '\n'
        << "max_iterations = " << c.max_iterations << '\n'
        << "strategy = " << to_string(c.strategy) << '\n'
        << "selection_holdout = " << format_double(c.selection_holdout) << '\n'
        << "disable_synthesis = " << b(c.disable_synthesis) << '\n'
        << "disable_filtering = " << b(c.disable_filtering) << '\n'
        << "disable_selflearning = " << b(c.disable_selflearning) << '\n'
        << "benchmark_folds = " << c.benchmark_folds << '\n'
        << "label_column = " << c.label_column << '\n'
        << "hide_labels = " << format_double(c.hide_labels) << '\n'
        << "missing_drop_threshold = " << format_double(c.missing_drop_threshold) << '\n'
        << "positive_label = " << c.positive_label.value_or("") << '\n';
    return out.str();
}

} // namespace trienhance
