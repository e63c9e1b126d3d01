#pragma once

#include "trienhance/classifier.hpp"
#include "trienhance/dataset.hpp"

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace testsupport {

using namespace trienhance;

/// Model whose probability rows come from a callback.
class FnModel final : public Model {
public:
    using Fn = std::function<void(std::span<const double>, std::span<double>)>;
    FnModel(std::vector<int> labels, std::size_t d, Fn fn) : Model(std::move(labels), d), fn_(std::move(fn)) {}
    void predict_row(std::span<const double> x, std::span<double> out) const override { fn_(x, out); }
    std::string_view kind() const override { return "stub"; }

private:
    Fn fn_;
};

/// Binary model that returns p(1) = f(x).
inline ModelPtr binary_model(std::size_t d, std::function<double(std::span<const double>)> p1) {
    return std::make_shared<FnModel>(std::vector<int>{0, 1}, d, [p1](std::span<const double> x, std::span<double> out) {
        const double p = p1(x);
        out[0] = 1.0 - p;
        out[1] = p;
    });
}

inline ModelPtr constant_model(std::size_t d, double p1) {
    return binary_model(d, [p1](std::span<const double>) { return p1; });
}

/// Model that predicts a fixed label for every row (probability 1 on it).
inline ModelPtr always(const std::vector<int>& labels, std::size_t d, int label) {
    return std::make_shared<FnModel>(labels, d, [labels, label](std::span<const double>, std::span<double> out) {
        for (std::size_t j = 0; j < labels.size(); ++j) out[j] = labels[j] == label ? 1.0 : 0.0;
    });
}

inline std::vector<std::string> names(std::size_t d) {
    std::vector<std::string> n;
    for (std::size_t j = 0; j < d; ++j) n.push_back("x" + std::to_string(j));
    return n;
}

/// Labeled numeric dataset; row ids are the row positions.
inline Dataset make_labeled(const std::vector<std::vector<double>>& x, const std::vector<int>& y) {
    const std::size_t d = x.empty() ? 1 : x.front().size();
    Dataset out(names(d), std::vector<ColumnKind>(d, ColumnKind::numeric), true);
    for (std::size_t i = 0; i < x.size(); ++i) out.add_row(x[i], y[i], Provenance::original, static_cast<std::int64_t>(i));
    return out;
}

inline Dataset make_unlabeled(const std::vector<std::vector<double>>& x, std::int64_t first_id = 1000) {
    const std::size_t d = x.empty() ? 1 : x.front().size();
    Dataset out(names(d), std::vector<ColumnKind>(d, ColumnKind::numeric), false);
    for (std::size_t i = 0; i < x.size(); ++i) {
        out.add_row(x[i], std::nullopt, Provenance::original, first_id + static_cast<std::int64_t>(i));
    }
    return out;
}

/// 1-D dataset with `pos` rows of label 1 at x = 1 and `neg` rows of label 0 at x = 0.
inline Dataset counts_dataset(std::size_t pos, std::size_t neg) {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (std::size_t i = 0; i < pos; ++i) {
        x.push_back({1.0 + static_cast<double>(i) * 1e-3});
        y.push_back(1);
    }
    for (std::size_t i = 0; i < neg; ++i) {
        x.push_back({-static_cast<double>(i) * 1e-3});
        y.push_back(0);
    }
    return make_labeled(x, y);
}

/// Multiset of (features, label) rows, for partition bookkeeping checks.
inline std::multiset<std::pair<std::vector<double>, int>> row_multiset(const Dataset& d) {
    std::multiset<std::pair<std::vector<double>, int>> s;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        auto r = d.row(i);
        s.emplace(std::vector<double>(r.begin(), r.end()), d.labeled() ? d.label(i) : 0);
    }
    return s;
}

/// Trainer that records every training set it sees and hands back scripted models in turn.
struct ScriptedTrainer {
    std::vector<ModelPtr> script;
    std::shared_ptr<std::vector<Dataset>> seen = std::make_shared<std::vector<Dataset>>();
    std::shared_ptr<std::size_t> next = std::make_shared<std::size_t>(0);

    ModelPtr operator()(const Dataset& d) const {
        seen->push_back(d);
        if (*next >= script.size()) throw Error("scripted trainer ran out of models");
        return script[(*next)++];
    }
};

} // namespace testsupport
