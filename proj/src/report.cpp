#include "trienhance/report.hpp"

#include "trienhance/preprocess.hpp"
#include "trienhance/text.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace trienhance {

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

namespace {

struct Moments {
    double mean = 0.0;
    double stdev = 0.0;
};

// population standard deviation over the selected rows
Moments moments(const Dataset& d, std::size_t col, const std::vector<std::size_t>& rows) {
    Moments m;
    if (rows.empty()) return m;
    for (auto i : rows) m.mean += d.at(i, col);
    m.mean /= static_cast<double>(rows.size());
    double ss = 0.0;
    for (auto i : rows) ss += (d.at(i, col) - m.mean) * (d.at(i, col) - m.mean);
    m.stdev = std::sqrt(ss / static_cast<double>(rows.size()));
    return m;
}

std::string csv_number(double v) { return format_fixed(v); }

} // namespace

std::string distribution_summary(const Dataset& d) {
    std::ostringstream os;
    os << "  rows: " << d.rows() << '\n';
    std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
    std::vector<std::size_t> all(d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i) all[i] = i;
    groups.emplace_back("all", all);
    if (d.labeled()) {
        auto stats = class_stats(d);
        for (std::size_t c = 0; c < stats.classes.size(); ++c) {
            os << "  class " << stats.classes[c] << ": " << stats.counts[c] << " rows (prior "
               << format_fixed(stats.priors[c], 4) << ")\n";
            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < d.rows(); ++i) {
                if (d.label(i) == stats.classes[c]) rows.push_back(i);
            }
            groups.emplace_back("class " + std::to_string(stats.classes[c]), std::move(rows));
        }
    }
    os << "  feature";
    for (const auto& g : groups) os << " | " << g.first << " mean, stdev";
    os << '\n';
    for (std::size_t j = 0; j < d.cols(); ++j) {
        os << "  " << d.feature_names()[j];
        for (const auto& g : groups) {
            auto m = moments(d, j, g.second);
            os << " | " << format_fixed(m.mean, 4) << ", " << format_fixed(m.stdev, 4);
        }
        os << '\n';
    }
    return os.str();
}

std::string summary_text(const EnhancementResult& r) {
    std::ostringstream os;
    os << "stage row counts\n"
       << "  input: " << r.input.rows() << '\n'
       << "  unlabeled pool: " << r.unlabeled_rows << '\n'
       << "  D_aug: " << r.augmented.rows() << '\n'
       << "  D_filtered: " << r.filtered.rows() << '\n'
       << "  D_enhanced: " << r.enhanced.rows() << '\n';

    os << "\nsynthesis\n";
    if (r.synthesis) {
        const auto& s = *r.synthesis;
        os << "  chosen technique: " << s.chosen_name << '\n'
           << "  training part: " << s.train_rows << '\n'
           << "  synthetic rows: " << s.synthetic_rows << '\n'
           << "  validation part: " << s.validation_rows << '\n'
           << "  validation rows merged back: " << s.merged_rows << '\n'
           << "  misclassified validation rows: " << s.misclassified.rows() << '\n';
    } else {
        os << "  disabled\n";
    }

    os << "\nfiltering\n";
    if (r.filtering) {
        const auto& f = *r.filtering;
        os << "  chosen threshold: " << format_double(f.chosen_threshold) << '\n';
        std::size_t kept = 0, out = 0;
        for (const auto& row : f.table) {
            if (row.threshold == f.chosen_threshold) {
                kept = row.kept;
                out = row.filtered_out;
            }
        }
        os << "  kept directly: " << kept << '\n' << "  filtered out: " << out << '\n';
        for (std::size_t c = 0; c < f.classes.size(); ++c) {
            os << "  retained class " << f.classes[c] << ": " << f.retained_counts[c] << '\n';
        }
        os << "  discarded: " << f.discarded << '\n';
    } else {
        os << "  not run\n";
    }

    os << "\nself-learning\n";
    if (r.self_learning) {
        const auto& s = *r.self_learning;
        os << "  strategy: " << to_string(s.strategy) << '\n' << "  pseudo-labeled rows: " << s.pseudo_count << '\n';
        if (r.kfulf_holdout_f1) {
            os << "  selection holdout rows: " << r.selection_holdout_rows << '\n'
               << "  holdout f1 kfulf: " << format_fixed(*r.kfulf_holdout_f1) << '\n'
               << "  holdout f1 dds: " << format_fixed(*r.dds_holdout_f1) << '\n';
        }
    } else {
        os << "  not run\n";
    }
    for (const auto& n : r.notes) os << "  note: " << n << '\n';

    os << "\ndistribution: input\n" << distribution_summary(r.input);
    os << "\ndistribution: D_aug\n" << distribution_summary(r.augmented);
    os << "\ndistribution: D_filtered\n" << distribution_summary(r.filtered);
    os << "\ndistribution: D_enhanced\n" << distribution_summary(r.enhanced);
    return os.str();
}

std::vector<std::filesystem::path> emit_report(const EnhancementResult& r, const PipelineConfig& cfg,
                                               const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    std::vector<std::filesystem::path> written;
    auto put = [&](const std::string& name, const std::string& content) {
        write_text(dir / name, content);
        written.push_back(dir / name);
    };
    auto csv = [&](const Dataset& d) {
        std::ostringstream os;
        write_csv(os, d, cfg.label_column, true);
        return os.str();
    };

    put("enhanced.csv", csv(r.enhanced));
    put("d_aug.csv", csv(r.augmented));
    put("d_filtered.csv", csv(r.filtered));
    put("summary.txt", summary_text(r));
    put("config.txt", write_config(cfg));

    if (r.synthesis) {
        std::ostringstream os;
        os << "technique,f1,chosen\n";
        for (std::size_t i = 0; i < r.synthesis->scores.size(); ++i) {
            os << r.synthesis->scores[i].name << ',' << csv_number(r.synthesis->scores[i].f1) << ','
               << (i == r.synthesis->chosen ? 1 : 0) << '\n';
        }
        put("synthesis_scores.csv", os.str());
    }
    if (r.filtering) {
        std::ostringstream os;
        os << "threshold,f1,kept_count,filtered_out_count,retained_count,skipped\n";
        for (const auto& t : r.filtering->table) {
            os << format_double(t.threshold) << ',' << csv_number(t.f1) << ','
               << t.kept << ',' << t.filtered_out << ',' << t.retained << ',' << (t.skipped ? 1 : 0) << '\n';
        }
        put("filter_thresholds.csv", os.str());
    }
    if (r.self_learning) {
        std::ostringstream os;
        if (!r.self_learning->folds.empty() || r.self_learning->strategy == Strategy::kfulf) {
            os << "fold,tested_count,artificial_label_rows,kept_count\n";
            for (const auto& f : r.self_learning->folds) {
                os << f.fold << ',' << f.tested.size() << ',' << f.artificial_rows << ',' << f.kept << '\n';
            }
            put("kfulf_log.csv", os.str());
        }
        if (!r.self_learning->iterations.empty() || r.self_learning->strategy == Strategy::dds) {
            std::ostringstream ds;
            ds << "iteration,pool_size,selected_count,f1_base,f1_new,accepted,holdout_f1\n";
            for (const auto& it : r.self_learning->iterations) {
                ds << it.iteration << ',' << it.pool_size << ',' << it.selected << ',' << csv_number(it.f1_base) << ','
                   << csv_number(it.f1_new) << ',' << (it.accepted ? 1 : 0) << ','
                   << (it.holdout_f1 ? csv_number(*it.holdout_f1) : std::string()) << '\n';
            }
            put("dds_log.csv", ds.str());
        }
    }
    return written;
}

std::string benchmark_folds_csv(const BenchmarkResult& b) {
    std::ostringstream os;
    os << "fold,arm,train_rows,pool_rows,enhanced_rows,test_rows," << EvalReport::csv_header()
       << ",leakage_free,pseudo_rows,pseudo_accuracy,base_pool_accuracy\n";
    for (const auto& f : b.folds) {
        auto line = [&](const char* arm, const EvalReport& e, bool enhanced_arm) {
            os << f.fold << ',' << arm << ',' << f.train_rows << ',' << f.pool_rows << ','
               << (enhanced_arm ? f.enhanced_rows : f.train_rows) << ',' << f.test_rows << ',' << e.to_csv_row() << ','
               << (f.leakage_free ? 1 : 0) << ',';
            if (enhanced_arm && f.audit) {
                os << f.audit->pseudo_rows << ',' << csv_number(f.audit->pseudo_accuracy) << ','
                   << csv_number(f.audit->base_accuracy);
            } else {
                os << ",,";
            }
            os << '\n';
        };
        line("baseline", f.baseline, false);
        line("enhanced", f.enhanced, true);
    }
    return os.str();
}

namespace {

void summary_rows(std::ostream& os, const std::string& prefix, const ReportSummary& s) {
    const std::pair<const char*, MetricStat> stats[] = {{"precision", s.precision}, {"recall", s.recall},
                                                         {"f1", s.f1},               {"accuracy", s.accuracy},
                                                         {"auc", s.auc},             {"ks", s.ks}};
    for (const auto& [name, st] : stats) {
        os << prefix << name << ',' << csv_number(st.mean) << ',' << csv_number(st.stdev) << '\n';
    }
}

} // namespace

std::string benchmark_summary_csv(const BenchmarkResult& b) {
    std::ostringstream os;
    os << "arm,metric,mean,stdev\n";
    summary_rows(os, "baseline,", b.baseline);
    summary_rows(os, "enhanced,", b.enhanced);
    return os.str();
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
    std::ostringstream os;
    os << "variant,arm,metric,mean,stdev\n";
    for (const auto& r : rows) {
        summary_rows(os, r.name + ",baseline,", r.result.baseline);
        summary_rows(os, r.name + ",enhanced,", r.result.enhanced);
    }
    return os.str();
}

std::vector<std::filesystem::path> emit_benchmark(const BenchmarkResult& b, const PipelineConfig& cfg,
                                                  const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
    write_text(dir / "benchmark_folds.csv", benchmark_folds_csv(b));
    write_text(dir / "benchmark_summary.csv", benchmark_summary_csv(b));
    write_text(dir / "config.txt", write_config(cfg));
    return {dir / "benchmark_folds.csv", dir / "benchmark_summary.csv", dir / "config.txt"};
}

} // namespace trienhance
