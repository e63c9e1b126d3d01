#include "support.hpp"

#include "trienhance/generator.hpp"
#include "trienhance/preprocess.hpp"
#include "trienhance/split.hpp"
#include "trienhance/text.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace trienhance;
using namespace testsupport;

namespace {

RawTable parse(const std::string& text, std::optional<std::string> label = std::nullopt) {
    std::istringstream in(text);
    return parse_csv(in, label);
}

std::vector<double> column(const Dataset& d, std::size_t j) {
    std::vector<double> out;
    for (std::size_t i = 0; i < d.rows(); ++i) out.push_back(d.at(i, j));
    return out;
}

} // namespace

TEST_CASE("csv: header a,b,y with label y gives 3 rows of 2 features") {
    auto raw = parse("a,b,y\n1,2,0\n3,4,1\n5,6,0\n", "y");
    CHECK(raw.size() == 3);
    CHECK(raw.header == std::vector<std::string>{"a", "b"});
    auto p = preprocess(raw);
    CHECK(p.labeled.rows() == 3);
    CHECK(p.labeled.cols() == 2);
    CHECK(p.unlabeled.empty());
}

TEST_CASE("csv: no label column yields an unlabeled pool") {
    auto p = preprocess(parse("a,b\n1,2\n3,4\n"));
    CHECK(p.labeled.empty());
    CHECK(p.unlabeled.rows() == 2);
    CHECK_FALSE(p.unlabeled.labeled());
}

TEST_CASE("csv: short row is rejected as non-rectangular") {
    try {
        parse("a,b,y\n1,2,0\n3,4\n5,6,1\n", "y");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("non-rectangular") != std::string::npos);
    }
}

TEST_CASE("csv: missing label column and unreadable file") {
    CHECK_THROWS_AS(parse("a,b\n1,2\n", "y"), Error);
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", std::nullopt), Error);
}

TEST_CASE("csv: quoted fields, embedded commas and blank lines") {
    auto raw = parse("name,v,y\n\"x, y\",1,0\n\n\"he said \"\"hi\"\"\",2,1\n", "y");
    REQUIRE(raw.size() == 2);
    CHECK(*raw.rows[0][0] == "x, y");
    CHECK(*raw.rows[1][0] == "he said \"hi\"");
}

TEST_CASE("missing markers") {
    CHECK(is_missing_marker(""));
    CHECK(is_missing_marker("NA"));
    CHECK(is_missing_marker("nan"));
    CHECK(is_missing_marker("NaN"));
    CHECK_FALSE(is_missing_marker("0"));
    CHECK_FALSE(is_missing_marker("none"));
}

TEST_CASE("preprocess: a column with 6 of 10 cells missing is dropped, 5 of 10 is kept") {
    std::string text = "six,five,y\n";
    for (int i = 0; i < 10; ++i) {
        text += (i < 6 ? std::string("") : std::to_string(i)) + "," + (i < 5 ? std::string("NA") : std::to_string(i)) +
                "," + std::to_string(i % 2) + "\n";
    }
    auto p = preprocess(parse(text, "y"));
    CHECK(p.dropped_columns == std::vector<std::string>{"six"});
    CHECK(p.labeled.feature_names() == std::vector<std::string>{"five"});
}

TEST_CASE("preprocess: mode fill and first-appearance encoding") {
    auto p = preprocess(parse("n,s,y\n1,b,0\nNA,a,1\n1,b,0\n2,,1\n", "y"));
    CHECK(column(p.labeled, 0) == std::vector<double>{1, 1, 1, 2});
    // "b" appears first, so b = 0 and a = 1; the empty cell takes the mode "b"
    CHECK(column(p.labeled, 1) == std::vector<double>{0, 1, 0, 0});
    CHECK(p.categories[1] == std::vector<std::string>{"b", "a"});
    CHECK(p.labeled.column_kinds()[1] == ColumnKind::categorical);
}

TEST_CASE("preprocess: string column b,a,b encodes to 0,1,0") {
    auto p = preprocess(parse("s,y\nb,0\na,1\nb,0\n", "y"));
    CHECK(column(p.labeled, 0) == std::vector<double>{0, 1, 0});
}

TEST_CASE("preprocess: numeric mode ties go to the smallest value") {
    auto p = preprocess(parse("n,y\n3,0\n2,1\n3,0\n2,1\nNA,0\n", "y"));
    CHECK(column(p.labeled, 0) == std::vector<double>{3, 2, 3, 2, 2});
}

TEST_CASE("preprocess: all columns dropped is an error") {
    CHECK_THROWS_WITH_AS(preprocess(parse("a,y\n,0\n,1\n1,0\n", "y")), doctest::Contains("all columns dropped"), Error);
}

TEST_CASE("preprocess: labels map minority to 1, overridable") {
    auto p = preprocess(parse("a,y\n1,good\n2,good\n3,bad\n", "y"));
    CHECK(p.label_values[1] == "bad");
    CHECK(p.labeled.labels() == std::vector<int>{0, 0, 1});

    PreprocessOptions opts;
    opts.positive_label = "good";
    auto q = preprocess(parse("a,y\n1,good\n2,good\n3,bad\n", "y"), opts);
    CHECK(q.labeled.labels() == std::vector<int>{1, 1, 0});

    CHECK_THROWS_AS(preprocess(parse("a,y\n1,a\n2,b\n3,c\n", "y")), Error);
}

TEST_CASE("preprocess: rows without a label go to the unlabeled pool") {
    auto p = preprocess(parse("a,y\n1,0\n2,\n3,1\n", "y"));
    CHECK(p.labeled.rows() == 2);
    REQUIRE(p.unlabeled.rows() == 1);
    CHECK(p.unlabeled.row_id(0) == 1);
}

TEST_CASE("preprocess is idempotent") {
    auto once = preprocess(parse("n,s,gone,y\n1,b,,0\nNA,a,,1\n1,b,7,0\n2,c,,1\n", "y"));
    auto twice = preprocess(to_raw(once.labeled, "y"));
    CHECK(twice.labeled == once.labeled);
    CHECK(twice.dropped_columns.empty());
}

TEST_CASE("write_csv appends a provenance column") {
    auto d = make_labeled({{1.5, 2}}, {1});
    std::ostringstream os;
    write_csv(os, d, "y");
    CHECK(os.str() == "x0,x1,y,provenance\n1.5,2,1,original\n");
}

TEST_CASE("dataset rejects non-finite values and keeps provenance names") {
    Dataset d(names(1), {ColumnKind::numeric}, true);
    std::vector<double> bad{std::nan("")};
    CHECK_THROWS_AS(d.add_row(bad, 0, Provenance::original), Error);
    CHECK(to_string(Provenance::pseudo_labeled) == "pseudo-labeled");
    CHECK(to_string(Provenance::validation_merged) == "validation-merged");
    CHECK(parse_provenance("retained") == Provenance::retained);
}

TEST_CASE("class_stats: table-shaped priors") {
    SUBCASE("ZCD shape, 10000 rows with positive ratio 0.1683") {
        auto s = class_stats(counts_dataset(1683, 8317));
        CHECK(std::round(s.imbalance_ratio() * 100) / 100 == doctest::Approx(4.94));
    }
    SUBCASE("BLSD shape, positive 0.2252") {
        auto s = class_stats(counts_dataset(2252, 7748));
        CHECK(std::round(s.imbalance_ratio() * 100) / 100 == doctest::Approx(3.44));
        CHECK(s.prior_of(0) == doctest::Approx(0.7748));
    }
    SUBCASE("balanced") {
        auto s = class_stats(counts_dataset(50, 50));
        CHECK(s.priors == std::vector<double>{0.5, 0.5});
        CHECK(s.imbalance_ratio() == 1.0);
    }
    auto s = class_stats(counts_dataset(3, 7));
    CHECK(std::abs(s.priors[0] + s.priors[1] - 1.0) < 1e-12);
    CHECK_THROWS_AS(class_stats(make_unlabeled({{1.0}})), Error);
}

TEST_CASE("largest remainder rounding") {
    CHECK(largest_remainder(3, {0.5, 0.5}) == std::vector<std::size_t>{2, 1});
    CHECK(largest_remainder(1000, {0.7748, 0.2252}) == std::vector<std::size_t>{775, 225});
    CHECK(largest_remainder(10, {1, 1, 1}) == std::vector<std::size_t>{4, 3, 3});
}

TEST_CASE("stratified holdout 0.8 on 20 pos / 80 neg") {
    auto d = counts_dataset(20, 80);
    auto split = stratified_holdout(d, 0.8, 42);
    CHECK(class_stats(split.first).count_of(1) == 16);
    CHECK(class_stats(split.first).count_of(0) == 64);
    CHECK(class_stats(split.second).count_of(1) == 4);
    CHECK(class_stats(split.second).count_of(0) == 16);
}

TEST_CASE("stratified 3-fold on 3 pos / 6 neg gives 1 pos / 2 neg per fold") {
    auto d = counts_dataset(3, 6);
    auto parts = stratified_partition(d, SplitSpec::k_fold(3, 42));
    REQUIRE(parts.size() == 3);
    for (const auto& p : parts) {
        auto s = class_stats(d.subset(p));
        CHECK(s.count_of(1) == 1);
        CHECK(s.count_of(0) == 2);
    }
}

TEST_CASE("k-fold class size precondition") {
    CHECK_NOTHROW(stratified_partition(counts_dataset(4, 10), SplitSpec::k_fold(3)));
    CHECK_THROWS_WITH_AS(stratified_partition(counts_dataset(2, 10), SplitSpec::k_fold(3)),
                         doctest::Contains("class too small"), Error);
    CHECK_THROWS_AS(stratified_partition(counts_dataset(4, 10), SplitSpec::holdout(1.0)), Error);
    CHECK_THROWS_AS(stratified_partition(counts_dataset(4, 10), SplitSpec::k_fold(1)), Error);
}

TEST_CASE("stratified parts cover, stay disjoint and keep priors within 1/|part|") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t pos = 3 + rng() % 30, neg = 3 + rng() % 90;
        const std::size_t k = 2 + rng() % 2;
        auto d = counts_dataset(pos, neg);
        auto parts = stratified_partition(d, SplitSpec::k_fold(k, rng()));
        std::vector<int> hits(d.rows(), 0);
        const auto whole = class_stats(d);
        for (const auto& p : parts) {
            for (auto i : p) ++hits[i];
            auto s = class_stats(d.subset(p));
            for (int c : {0, 1}) CHECK(std::abs(s.prior_of(c) - whole.prior_of(c)) <= 1.0 / p.size() + 1e-12);
        }
        for (int h : hits) CHECK(h == 1);
    }
}

TEST_CASE("splits are deterministic per seed") {
    auto d = counts_dataset(17, 60);
    CHECK(stratified_partition(d, SplitSpec::k_fold(3, 5)) == stratified_partition(d, SplitSpec::k_fold(3, 5)));
    CHECK(stratified_partition(d, SplitSpec::holdout(0.7, 5)) == stratified_partition(d, SplitSpec::holdout(0.7, 5)));
}

TEST_CASE("hide_labels carves an unlabeled pool and keeps its truth") {
    auto d = counts_dataset(20, 80);
    auto h = hide_labels(d, 0.3, 42);
    CHECK(h.pool.rows() == 30);
    CHECK(h.labeled.rows() == 70);
    CHECK_FALSE(h.pool.labeled());
    REQUIRE(h.hidden_truth.size() == 30);
    for (std::size_t i = 0; i < h.pool.rows(); ++i) {
        CHECK(d.label(static_cast<std::size_t>(h.pool.row_id(i))) == h.hidden_truth[i]);
    }
    auto none = hide_labels(d, 0.0, 42);
    CHECK(none.pool.empty());
    CHECK(none.labeled == d);
}

TEST_CASE("generator: counts, determinism and a separable clean case") {
    CHECK(minority_count_for(2000, 20) == 95);
    BenchmarkSpec spec;
    spec.noise_rate = 0.0;
    auto d = generate_synthetic_benchmark(spec);
    CHECK(d.rows() == 2000);
    CHECK(d.cols() == 5);
    CHECK(class_stats(d).count_of(1) == 95);

    BenchmarkSpec noisy;
    CHECK(generate_synthetic_benchmark(noisy) == generate_synthetic_benchmark(noisy));

    BenchmarkSpec far;
    far.noise_rate = 0.0;
    far.separation = 1e4;
    auto s = generate_synthetic_benchmark(far);
    // the coordinate sum is a separating direction
    const double cut = far.separation * std::sqrt(static_cast<double>(far.d)) / 2.0;
    for (std::size_t i = 0; i < s.rows(); ++i) {
        double sum = 0;
        for (double v : s.row(i)) sum += v;
        CHECK((sum > cut) == (s.label(i) == 1));
    }

    BenchmarkSpec bad;
    bad.noise_rate = 0.5;
    CHECK_THROWS_AS(generate_synthetic_benchmark(bad), Error);
    bad.noise_rate = 0.0;
    bad.imbalance_ratio = 0.5;
    CHECK_THROWS_AS(generate_synthetic_benchmark(bad), Error);
}

TEST_CASE("generator: noise flips exactly round(noise * n) labels") {
    BenchmarkSpec clean;
    clean.noise_rate = 0.0;
    BenchmarkSpec noisy;
    auto a = generate_synthetic_benchmark(clean);
    auto b = generate_synthetic_benchmark(noisy);
    REQUIRE(a.rows() == b.rows());
    std::size_t flipped = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        CHECK(std::equal(a.row(i).begin(), a.row(i).end(), b.row(i).begin()));
        flipped += a.label(i) != b.label(i);
    }
    CHECK(flipped == 100);
}

TEST_CASE("text helpers") {
    CHECK(parse_double(" 2.5 ") == 2.5);
    CHECK(parse_double("+1e3") == 1000.0);
    CHECK_FALSE(parse_double("1.5x"));
    CHECK_FALSE(parse_double(""));
    CHECK(parse_int("42") == 42);
    CHECK_FALSE(parse_int("4.2"));
    CHECK(format_double(0.1) == "0.1");
    CHECK(split("a, b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
}
