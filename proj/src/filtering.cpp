#include "trienhance/filtering.hpp"

#include "trienhance/metrics.hpp"
#include "trienhance/split.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>

namespace trienhance {

double margin_of(std::span<const double> proba) {
    if (proba.empty()) throw Error("empty probability row");
    if (proba.size() == 1) return 1.0;
    double top = -1.0, second = -1.0;
    for (double p : proba) {
        if (p > top) {
            second = top;
            top = p;
        } else if (p > second) {
            second = p;
        }
    }
    return std::clamp(top - second, 0.0, 1.0);
}

std::vector<MarginRecord> margins(const Model& m, const Dataset& d) {
    auto p = m.predict_proba(d);
    std::vector<MarginRecord> out(p.rows);
    for (std::size_t i = 0; i < p.rows; ++i) out[i] = {i, margin_of(p.row(i))};
    return out;
}

std::vector<double> default_threshold_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(static_cast<double>(i) / 10.0);
    return grid;
}

std::vector<std::size_t> retention_quota(std::size_t n_filtered_out, const ClassStats& priors) {
    if (priors.classes.empty()) return {};
    return largest_remainder(n_filtered_out, priors.priors);
}

RetentionResult retain_by_class(const Dataset& filtered_out, const ClassStats& original_priors,
                                std::span<const MarginRecord> pool_margins) {
    if (pool_margins.size() != filtered_out.rows()) throw Error("margins are not parallel to the filtered-out pool");
    RetentionResult out;
    out.rows = filtered_out.empty_like();
    out.classes = original_priors.classes;
    out.quota = retention_quota(filtered_out.rows(), original_priors);
    out.retained.assign(out.classes.size(), 0);
    if (filtered_out.empty()) return out;

    std::vector<std::size_t> picked;
    for (std::size_t c = 0; c < out.classes.size(); ++c) {
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < filtered_out.rows(); ++i) {
            if (filtered_out.label(i) == out.classes[c]) pool.push_back(i);
        }
        std::stable_sort(pool.begin(), pool.end(),
                         [&](std::size_t a, std::size_t b) { return pool_margins[a].delta > pool_margins[b].delta; });
        const std::size_t take = std::min(out.quota[c], pool.size());
        picked.insert(picked.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
        out.retained[c] = take;
    }
    std::sort(picked.begin(), picked.end());
    out.rows = filtered_out.subset(picked).with_provenance(Provenance::retained);
    return out;
}

std::vector<std::size_t> kept_rows(std::span<const MarginRecord> margins, double t) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < margins.size(); ++i) {
        if (margins[i].delta >= t) kept.push_back(i);
    }
    return kept;
}

namespace {

struct Candidate {
    Dataset data;
    RetentionResult retention;
    std::size_t kept = 0;
    std::size_t filtered_out = 0;
};

Candidate build_candidate(const Dataset& aug, std::span<const MarginRecord> margin, double t,
                          const ClassStats& priors, bool retention) {
    Candidate c;
    auto kept = kept_rows(margin, t);
    std::vector<std::size_t> dropped;
    std::vector<MarginRecord> dropped_margins;
    std::size_t next = 0;
    for (std::size_t i = 0; i < aug.rows(); ++i) {
        if (next < kept.size() && kept[next] == i) {
            ++next;
        } else {
            dropped.push_back(i);
            dropped_margins.push_back(margin[i]);
        }
    }
    c.kept = kept.size();
    c.filtered_out = dropped.size();
    c.data = aug.subset(kept);
    if (retention) {
        c.retention = retain_by_class(aug.subset(dropped), priors, dropped_margins);
        c.data.append(c.retention.rows);
    } else {
        c.retention.rows = aug.empty_like();
        c.retention.classes = priors.classes;
        c.retention.quota.assign(priors.classes.size(), 0);
        c.retention.retained.assign(priors.classes.size(), 0);
    }
    return c;
}

bool trainable(const Dataset& d) {
    if (d.empty()) return false;
    std::set<int> seen(d.labels().begin(), d.labels().end());
    return seen.size() >= 2;
}

} // namespace

FilterOutcome filter_sweep(const Dataset& aug, const Dataset& mis, const Model& m, const Trainer& trainer,
                           const ClassStats& original_priors, const FilterOptions& opts) {
    if (!aug.labeled() || !mis.labeled()) throw Error("filtering needs labeled datasets");
    if (mis.empty()) throw Error("misclassified set is empty");
    if (opts.thresholds.empty()) throw Error("threshold grid is empty");
    for (double t : opts.thresholds) {
        if (!(t >= 0.0 && t <= 1.0)) throw Error("difficulty thresholds must lie in [0,1]");
    }

    FilterOutcome out;
    out.margins = margins(m, aug);
    std::optional<std::size_t> best;
    Candidate best_candidate;
    for (std::size_t k = 0; k < opts.thresholds.size(); ++k) {
        const double t = opts.thresholds[k];
        Candidate c = build_candidate(aug, out.margins, t, original_priors, opts.retention);
        ThresholdResult row;
        row.threshold = t;
        row.kept = c.kept;
        row.filtered_out = c.filtered_out;
        row.retained = c.retention.rows.rows();
        if (!trainable(c.data)) {
            row.skipped = true;
            out.table.push_back(row);
            continue;
        }
        auto model = trainer(c.data);
        row.f1 = f1_score(*model, mis);
        out.table.push_back(row);
        const bool better = !best || row.f1 > out.table[*best].f1 ||
                            (row.f1 == out.table[*best].f1 && t < out.table[*best].threshold);
        if (better) {
            best = k;
            best_candidate = std::move(c);
            out.model = std::move(model);
        }
    }
    if (!best) throw Error("every difficulty threshold produced an empty or single-class dataset");

    out.chosen_threshold = out.table[*best].threshold;
    out.classes = best_candidate.retention.classes;
    out.retained_counts = best_candidate.retention.retained;
    out.discarded = best_candidate.filtered_out - best_candidate.retention.rows.rows();
    out.filtered = std::move(best_candidate.data);
    return out;
}

} // namespace trienhance
