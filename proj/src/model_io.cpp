#include "trienhance/models.hpp"

#include "trienhance/text.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace trienhance {

namespace {

constexpr std::string_view kMagic = "trienhance-model";
constexpr int kVersion = 1;

void write_vector(std::ostream& out, std::string_view tag, const std::vector<double>& v) {
    out << tag << ' ' << v.size();
    for (double x : v) out << ' ' << format_double(x);
    out << '\n';
}

void write_tree(std::ostream& out, const DecisionTree& t) {
    out << "nodes " << t.nodes().size() << '\n';
    for (const auto& node : t.nodes()) {
        if (node.feature < 0) {
            write_vector(out, "leaf", node.proba);
        } else {
            out << "split " << node.feature << ' ' << format_double(node.threshold) << ' ' << node.left << ' '
                << node.right << '\n';
        }
    }
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::istringstream line(std::string_view expected_tag) {
        std::string text;
        if (!std::getline(in_, text)) throw Error("model file truncated, expected '" + std::string(expected_tag) + "'");
        std::istringstream ss(text);
        std::string tag;
        ss >> tag;
        if (tag != expected_tag) throw Error("model file: expected '" + std::string(expected_tag) + "', found '" + tag + "'");
        return ss;
    }

    static double number(std::istringstream& ss) {
        std::string tok;
        if (!(ss >> tok)) throw Error("model file: missing number");
        auto v = parse_double(tok);
        if (!v) throw Error("model file: bad number '" + tok + "'");
        return *v;
    }

    static std::size_t count(std::istringstream& ss) {
        long long v = 0;
        if (!(ss >> v) || v < 0) throw Error("model file: bad count");
        return static_cast<std::size_t>(v);
    }

    std::vector<double> vector(std::string_view tag) {
        auto ss = line(tag);
        std::size_t n = count(ss);
        std::vector<double> v(n);
        for (auto& x : v) x = number(ss);
        return v;
    }

    DecisionTree tree(const std::vector<int>& labels, std::size_t d) {
        auto ss = line("nodes");
        std::size_t n = count(ss);
        std::vector<DecisionTree::Node> nodes(n);
        for (auto& node : nodes) {
            std::string text;
            if (!std::getline(in_, text)) throw Error("model file truncated inside tree");
            std::istringstream row(text);
            std::string tag;
            row >> tag;
            if (tag == "leaf") {
                std::size_t k = count(row);
                node.proba.resize(k);
                for (auto& p : node.proba) p = number(row);
            } else if (tag == "split") {
                if (!(row >> node.feature)) throw Error("model file: malformed split node");
                node.threshold = number(row);
                if (!(row >> node.left >> node.right)) throw Error("model file: malformed split node");
            } else {
                throw Error("model file: unknown node tag '" + tag + "'");
            }
        }
        return DecisionTree(labels, d, std::move(nodes));
    }

private:
    std::istream& in_;
};

} // namespace

void save_model(std::ostream& out, const Model& m) {
    out << kMagic << ' ' << kVersion << '\n';
    out << "kind " << m.kind() << '\n';
    out << "labels " << m.label_set().size();
    for (int l : m.label_set()) out << ' ' << l;
    out << '\n';
    out << "features " << m.n_features() << '\n';
    if (auto* tree = dynamic_cast<const DecisionTree*>(&m)) {
        write_tree(out, *tree);
    } else if (auto* forest = dynamic_cast<const RandomForest*>(&m)) {
        out << "trees " << forest->trees().size() << '\n';
        for (const auto& t : forest->trees()) write_tree(out, t);
    } else if (auto* lr = dynamic_cast<const LogisticRegression*>(&m)) {
        write_vector(out, "means", lr->means());
        write_vector(out, "scales", lr->scales());
        write_vector(out, "biases", lr->biases());
        out << "problems " << lr->weights().size() << '\n';
        for (const auto& w : lr->weights()) write_vector(out, "weights", w);
    } else {
        throw Error("model kind '" + std::string(m.kind()) + "' cannot be saved");
    }
}

ModelPtr load_model(std::istream& in) {
    Reader r(in);
    auto header = r.line(kMagic);
    int version = 0;
    if (!(header >> version) || version != kVersion) throw Error("unsupported model file version");
    std::string kind;
    r.line("kind") >> kind;
    auto ls = r.line("labels");
    std::vector<int> labels(Reader::count(ls));
    for (auto& l : labels) {
        if (!(ls >> l)) throw Error("model file: bad label list");
    }
    auto fs = r.line("features");
    std::size_t d = Reader::count(fs);

    if (kind == "decision-tree") return std::make_shared<DecisionTree>(r.tree(labels, d));
    if (kind == "random-forest") {
        auto ts = r.line("trees");
        std::size_t n = Reader::count(ts);
        std::vector<DecisionTree> trees;
        for (std::size_t t = 0; t < n; ++t) trees.push_back(r.tree(labels, d));
        return std::make_shared<RandomForest>(labels, d, std::move(trees));
    }
    if (kind == "logistic-regression") {
        auto means = r.vector("means");
        auto scales = r.vector("scales");
        auto biases = r.vector("biases");
        auto ps = r.line("problems");
        std::size_t p = Reader::count(ps);
        std::vector<std::vector<double>> weights;
        for (std::size_t i = 0; i < p; ++i) weights.push_back(r.vector("weights"));
        if (means.size() != d) throw Error("model file: feature count mismatch");
        return std::make_shared<LogisticRegression>(labels, std::move(means), std::move(scales), std::move(weights),
                                                    std::move(biases));
    }
    throw Error("model file: unknown kind '" + kind + "'");
}

} // namespace trienhance
