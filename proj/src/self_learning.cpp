#include "trienhance/self_learning.hpp"

#include "trienhance/metrics.hpp"
#include "trienhance/split.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace trienhance {

std::string_view to_string(Strategy s) { return s == Strategy::kfulf ? "kfulf" : "dds"; }

namespace {

void check_train(const Dataset& train) {
    if (!train.labeled()) throw Error("self-learning needs a labeled training set");
    for (int y : train.labels()) {
        if (y != 0 && y != 1) throw Error("self-learning needs a binary training set");
    }
}

Dataset as_pool(const Dataset& unlabeled) {
    return unlabeled.labeled() ? unlabeled.without_labels() : unlabeled;
}

Dataset pseudo_rows(const Dataset& pool, const std::vector<std::size_t>& idx, std::vector<int> labels) {
    return pool.subset(idx).with_labels(std::move(labels)).with_provenance(Provenance::pseudo_labeled);
}

} // namespace

std::vector<std::vector<std::size_t>> pool_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw Error("KFULF needs k_folds >= 2");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    auto sizes = largest_remainder(n, std::vector<double>(k, 1.0));
    std::vector<std::vector<std::size_t>> folds(k);
    std::size_t next = 0;
    for (std::size_t f = 0; f < k; ++f) {
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(next),
                        order.begin() + static_cast<std::ptrdiff_t>(next + sizes[f]));
        std::sort(folds[f].begin(), folds[f].end());
        next += sizes[f];
    }
    return folds;
}

SelfLearnOutcome kfulf(const Dataset& train, const Dataset& unlabeled, const Trainer& trainer,
                       const PseudoLabelConfig& cfg) {
    check_train(train);
    SelfLearnOutcome out;
    out.strategy = Strategy::kfulf;
    out.enhanced = train;
    const Dataset pool = as_pool(unlabeled);
    if (pool.empty()) return out;
    if (pool.rows() < cfg.k_folds) {
        throw Error("unlabeled pool has " + std::to_string(pool.rows()) + " rows, fewer than k_folds = " +
                    std::to_string(cfg.k_folds));
    }
    if (cfg.artificial_label == 0 || cfg.artificial_label == 1) throw Error("artificial label must differ from 0 and 1");

    auto folds = pool_folds(pool.rows(), cfg.k_folds, cfg.seed);
    for (std::size_t k = 0; k < folds.size(); ++k) {
        std::vector<std::size_t> others;
        for (std::size_t f = 0; f < folds.size(); ++f) {
            if (f != k) others.insert(others.end(), folds[f].begin(), folds[f].end());
        }
        std::sort(others.begin(), others.end());
        Dataset combined = train;
        combined.append(pool.subset(others).with_labels(std::vector<int>(others.size(), cfg.artificial_label)));

        auto model = trainer(combined);
        const Dataset tested = pool.subset(folds[k]);
        auto predicted = predict(*model, tested);

        std::vector<std::size_t> keep;
        std::vector<int> labels;
        for (std::size_t i = 0; i < predicted.size(); ++i) {
            if (predicted[i] != cfg.artificial_label) {
                keep.push_back(folds[k][i]);
                labels.push_back(predicted[i]);
            }
        }
        out.folds.push_back({k, others.size(), folds[k], keep.size()});
        out.pseudo_count += keep.size();
        out.enhanced.append(pseudo_rows(pool, keep, std::move(labels)));
    }
    return out;
}

std::size_t dds_selection_size(std::size_t pool, double pct) {
    if (!(pct > 0.0 && pct < 1.0)) throw Error("target percentage must lie in (0,1)");
    if (pool == 0) return 0;
    // 0.3 * 100 evaluates to 30.000000000000004; the tolerance keeps it at 30
    const double exact = pct * static_cast<double>(pool);
    auto n = static_cast<std::size_t>(std::ceil(exact - 1e-9));
    return std::clamp<std::size_t>(n, 1, pool);
}

SelfLearnOutcome dds(const Dataset& train, const Dataset& unlabeled, const Trainer& trainer,
                     const PseudoLabelConfig& cfg, const Dataset* diagnostic_holdout) {
    check_train(train);
    if (!(cfg.target_percentage > 0.0 && cfg.target_percentage < 1.0)) {
        throw Error("target percentage must lie in (0,1)");
    }
    SelfLearnOutcome out;
    out.strategy = Strategy::dds;
    out.enhanced = train;
    Dataset pool = as_pool(unlabeled);
    if (pool.empty()) return out;

    auto model = trainer(train);
    double f1_base = f1_score(*model, train);
    Dataset accepted = train.empty_like();

    bool improving = true;
    while (improving && !pool.empty() && out.iterations.size() < cfg.max_iterations) {
        auto proba = model->predict_proba(pool);
        std::vector<double> confidence(pool.rows());
        for (std::size_t i = 0; i < pool.rows(); ++i) {
            auto row = proba.row(i);
            confidence[i] = *std::max_element(row.begin(), row.end());
        }
        std::vector<std::size_t> order(pool.rows());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return confidence[a] > confidence[b]; });
        const std::size_t take = dds_selection_size(pool.rows(), cfg.target_percentage);
        std::vector<std::size_t> top(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
        std::sort(top.begin(), top.end());

        const Dataset selected_x = pool.subset(top);
        Dataset selected = pseudo_rows(pool, top, predict(*model, selected_x));

        Dataset candidate = concat(train, accepted);
        candidate.append(selected);
        model = trainer(candidate);
        const double f1_new = f1_score(*model, candidate);

        DdsIterationLog log;
        log.iteration = out.iterations.size();
        log.pool_size = pool.rows();
        log.selected = take;
        log.f1_base = f1_base;
        log.f1_new = f1_new;
        log.accepted = f1_new > f1_base;
        if (diagnostic_holdout != nullptr && !diagnostic_holdout->empty()) {
            log.holdout_f1 = f1_score(*model, *diagnostic_holdout);
        }
        out.iterations.push_back(log);

        if (log.accepted) {
            f1_base = f1_new;
            accepted.append(selected);
            std::vector<std::size_t> rest;
            std::size_t next = 0;
            for (std::size_t i = 0; i < pool.rows(); ++i) {
                if (next < top.size() && top[next] == i) {
                    ++next;
                } else {
                    rest.push_back(i);
                }
            }
            pool = pool.subset(rest);
        } else {
            improving = false;
        }
    }
    out.pseudo_count = accepted.rows();
    out.enhanced.append(accepted);
    return out;
}

StrategyChoice choose_strategy(const Dataset& train, const Dataset& unlabeled, const Dataset& holdout,
                               const Trainer& trainer, const SelfLearner& kfulf_learner,
                               const SelfLearner& dds_learner) {
    if (!holdout.labeled() || holdout.empty()) throw Error("strategy selection needs a labeled, non-empty holdout");
    auto by_kfulf = kfulf_learner(train, unlabeled);
    auto by_dds = dds_learner(train, unlabeled);
    StrategyChoice choice;
    choice.kfulf_f1 = f1_score(*trainer(by_kfulf.enhanced), holdout);
    choice.dds_f1 = f1_score(*trainer(by_dds.enhanced), holdout);
    choice.outcome = choice.dds_f1 > choice.kfulf_f1 ? std::move(by_dds) : std::move(by_kfulf);
    return choice;
}

StrategyChoice select_strategy(const Dataset& train, const Dataset& unlabeled, const Dataset& holdout,
                               const Trainer& trainer, const PseudoLabelConfig& cfg) {
    return choose_strategy(
        train, unlabeled, holdout, trainer,
        [&](const Dataset& t, const Dataset& u) { return kfulf(t, u, trainer, cfg); },
        [&](const Dataset& t, const Dataset& u) { return dds(t, u, trainer, cfg, &holdout); });
}

} // namespace trienhance
