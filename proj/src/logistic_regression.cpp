#include "trienhance/models.hpp"

#include <cmath>
#include <set>

namespace trienhance {

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow
double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

struct BinaryFit {
    std::vector<double> w;
    double b = 0.0;
    std::vector<double> losses;
};

// Gradient descent on mean cross-entropy; x is standardized row-major n x d.
BinaryFit fit_binary(const std::vector<double>& x, std::size_t n, std::size_t d, const std::vector<double>& y,
                     double lr, std::size_t iterations) {
    BinaryFit f;
    f.w.assign(d, 0.0);
    std::vector<double> z(n), grad(d);
    auto forward = [&] {
        double loss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = f.b;
            for (std::size_t j = 0; j < d; ++j) s += f.w[j] * x[i * d + j];
            z[i] = s;
            // -[y log p + (1-y) log(1-p)] = softplus(s) - y s
            loss += softplus(s) - y[i] * s;
        }
        return loss / static_cast<double>(n);
    };
    f.losses.reserve(iterations + 1);
    for (std::size_t it = 0; it < iterations; ++it) {
        f.losses.push_back(forward());
        std::fill(grad.begin(), grad.end(), 0.0);
        double gb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = sigmoid(z[i]) - y[i];
            gb += r;
            for (std::size_t j = 0; j < d; ++j) grad[j] += r * x[i * d + j];
        }
        const double scale = lr / static_cast<double>(n);
        for (std::size_t j = 0; j < d; ++j) f.w[j] -= scale * grad[j];
        f.b -= scale * gb;
    }
    f.losses.push_back(forward());
    return f;
}

} // namespace

LogisticRegression::LogisticRegression(std::vector<int> labels, std::vector<double> means, std::vector<double> scales,
                                       std::vector<std::vector<double>> weights, std::vector<double> biases)
    : Model(std::move(labels), means.size()), means_(std::move(means)), scales_(std::move(scales)),
      weights_(std::move(weights)), biases_(std::move(biases)) {
    const std::size_t k = label_set().size();
    const std::size_t expected = k == 2 ? 1 : k;
    if (k < 2) throw Error("logistic regression needs at least two labels");
    if (scales_.size() != means_.size()) throw Error("scale vector length mismatch");
    if (weights_.size() != expected || biases_.size() != expected) throw Error("weight matrix does not match label set");
    for (const auto& w : weights_) {
        if (w.size() != means_.size()) throw Error("weight row length mismatch");
    }
}

LogisticRegression LogisticRegression::train(const Dataset& data, double learning_rate, std::size_t iterations) {
    check_trainable(data);
    if (!(learning_rate > 0.0)) throw Error("learning rate must be positive");
    std::set<int> seen(data.labels().begin(), data.labels().end());
    std::vector<int> labels(seen.begin(), seen.end());

    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    std::vector<double> means(d, 0.0), scales(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) means[j] += data.at(i, j);
    for (auto& m : means) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) scales[j] += (data.at(i, j) - means[j]) * (data.at(i, j) - means[j]);
    for (auto& s : scales) {
        s = std::sqrt(s / static_cast<double>(n));
        if (!(s > 0.0)) s = 1.0; // constant column
    }
    std::vector<double> x(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) x[i * d + j] = (data.at(i, j) - means[j]) / scales[j];

    std::vector<std::vector<double>> weights;
    std::vector<double> biases;
    std::vector<std::vector<double>> history;
    // binary: one problem for class labels[1]; otherwise one-vs-rest per label
    const std::size_t problems = labels.size() == 2 ? 1 : labels.size();
    for (std::size_t p = 0; p < problems; ++p) {
        const int target = labels.size() == 2 ? labels[1] : labels[p];
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = data.label(i) == target ? 1.0 : 0.0;
        auto f = fit_binary(x, n, d, y, learning_rate, iterations);
        weights.push_back(std::move(f.w));
        biases.push_back(f.b);
        history.push_back(std::move(f.losses));
    }
    LogisticRegression model(labels, std::move(means), std::move(scales), std::move(weights), std::move(biases));
    model.loss_history_ = std::move(history);
    return model;
}

void LogisticRegression::predict_row(std::span<const double> x, std::span<double> out) const {
    auto score = [&](std::size_t p) {
        double s = biases_[p];
        for (std::size_t j = 0; j < means_.size(); ++j) s += weights_[p][j] * (x[j] - means_[j]) / scales_[j];
        return sigmoid(s);
    };
    if (weights_.size() == 1) {
        double p1 = score(0);
        out[0] = 1.0 - p1;
        out[1] = p1;
        return;
    }
    double total = 0.0;
    for (std::size_t p = 0; p < weights_.size(); ++p) {
        out[p] = score(p);
        total += out[p];
    }
    if (!(total > 0.0)) {
        for (auto& v : out) v = 1.0 / static_cast<double>(out.size());
        return;
    }
    for (auto& v : out) v /= total;
}

} // namespace trienhance
