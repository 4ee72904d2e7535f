#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "neurotrade/dataset.hpp"

using namespace nt;

namespace {

std::vector<FeatureRow> rows_from_closes(const std::vector<double>& closes) {
    std::vector<FeatureRow> rows;
    for (std::size_t i = 0; i < closes.size(); ++i) {
        FeatureRow r;
        r.date = Date::from_serial(Date{2000, 1, 3}.serial() + static_cast<long>(i));
        r.close = closes[i];
        r.rsi = 50.0 + (i % 7);
        r.williams_r = -50.0 - (i % 5);
        r.macd = 0.1 * static_cast<double>(i % 3);
        rows.push_back(r);
    }
    return rows;
}

std::vector<Label> labels_of(const std::vector<LabeledRow>& rows) {
    std::vector<Label> out;
    for (const auto& r : rows) out.push_back(r.label);
    return out;
}

std::vector<LabeledRow> labeled(const std::vector<double>& closes) {
    std::vector<LabeledRow> out;
    for (const auto& r : rows_from_closes(closes)) out.push_back({r, Label::Hold});
    return out;
}

} // namespace

TEST_CASE("label_extrema marks a unique center peak") {
    const auto got = labels_of(label_extrema(rows_from_closes({0.5, 1, 2, 3, 2, 1, 0.5}),
                                             LabelerConfig{3}));
    const std::vector<Label> want{Label::Hold, Label::Hold, Label::Hold, Label::Sell,
                                  Label::Hold, Label::Hold, Label::Hold};
    CHECK(got == want);
}

TEST_CASE("label_extrema marks a unique valley") {
    const auto got = labels_of(label_extrema(rows_from_closes({3, 2, 1, 2, 3}), LabelerConfig{3}));
    const std::vector<Label> want{Label::Hold, Label::Hold, Label::Buy, Label::Hold, Label::Hold};
    CHECK(got == want);
}

TEST_CASE("label_extrema on a monotone series is all Hold") {
    std::vector<double> closes;
    for (int i = 0; i < 20; ++i) closes.push_back(1.0 + i);
    for (Label l : labels_of(label_extrema(rows_from_closes(closes), LabelerConfig{5})))
        CHECK(l == Label::Hold);
}

TEST_CASE("label_extrema: plateau ties are Hold") {
    const auto got =
        labels_of(label_extrema(rows_from_closes({1, 3, 3, 3, 1, 1, 1}), LabelerConfig{3}));
    for (Label l : got) CHECK(l == Label::Hold);
}

TEST_CASE("label_extrema guards and window validation") {
    CHECK_THROWS_AS(label_extrema(rows_from_closes({1, 2}), LabelerConfig{3}), Error);
    CHECK_THROWS_AS(label_extrema(rows_from_closes({1, 2, 3, 4}), LabelerConfig{4}), Error);
}

TEST_CASE("label_extrema invariant under positive affine transforms") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> step(-1.0, 1.0);
    std::vector<double> closes{50.0};
    for (int i = 0; i < 120; ++i) closes.push_back(closes.back() + step(rng));

    const auto base = labels_of(label_extrema(rows_from_closes(closes), LabelerConfig{7}));
    std::vector<double> scaled;
    for (double c : closes) scaled.push_back(3.5 * c + 200.0);
    const auto transformed =
        labels_of(label_extrema(rows_from_closes(scaled), LabelerConfig{7}));
    CHECK(base == transformed);
}

TEST_CASE("label_extrema: no two same-kind signals inside one window on distinct closes") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> step(-1.0, 1.0);
    std::vector<double> closes{50.0};
    for (int i = 0; i < 300; ++i) closes.push_back(closes.back() + step(rng) + 1e-7 * i);

    // two strict unique extrema of the same kind cannot both lie inside one
    // centered window: each would have to exceed the other
    const int window = 9;
    const std::size_t half = (window - 1) / 2;
    const auto labels = labels_of(label_extrema(rows_from_closes(closes), LabelerConfig{window}));
    for (std::size_t t = 0; t < labels.size(); ++t) {
        if (labels[t] == Label::Hold) continue;
        for (std::size_t u = t + 1; u <= std::min(labels.size() - 1, t + half); ++u)
            CHECK_FALSE(labels[u] == labels[t]);
    }
}

TEST_CASE("split_by_date partitions by the configured ranges") {
    std::vector<double> closes(40, 1.0);
    auto rows = labeled(closes);
    // spread dates over four years
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].row.date = Date{1996 + static_cast<int>(i) / 10, 6, 1 + static_cast<int>(i) % 10};

    SplitSpec spec{{1997, 1, 1}, {1997, 12, 31}, {1998, 1, 1}, {1999, 12, 31}};
    const auto [train, test] = split_by_date(rows, spec);
    CHECK(train.size() == 10);
    CHECK(test.size() == 20);
    CHECK(std::max_element(train.begin(), train.end(), [](auto& a, auto& b) {
              return a.row.date < b.row.date;
          })->row.date < test.front().row.date);
}

TEST_CASE("split_by_date boundary date lands in train") {
    auto rows = labeled({1, 2});
    rows[0].row.date = Date{2006, 12, 31};
    rows[1].row.date = Date{2007, 1, 3};
    SplitSpec spec{{1997, 1, 1}, {2006, 12, 31}, {2007, 1, 1}, {2017, 1, 1}};
    const auto [train, test] = split_by_date(rows, spec);
    REQUIRE(train.size() == 1);
    CHECK(train[0].row.date == Date{2006, 12, 31});
}

TEST_CASE("split_by_date empty side throws") {
    auto rows = labeled({1, 2, 3});
    for (auto& r : rows) r.row.date.year = 1990;
    SplitSpec spec{{1997, 1, 1}, {2006, 12, 31}, {2007, 1, 1}, {2017, 1, 1}};
    CHECK_THROWS_AS(split_by_date(rows, spec), Error);
}

TEST_CASE("normalizer maps train range onto [0,1] and inverts") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(10.0, 20.0);
    std::vector<LabeledRow> train;
    for (int i = 0; i < 50; ++i) {
        LabeledRow s;
        s.row.date = Date::from_serial(11000 + i);
        s.row.close = i == 0 ? 10.0 : (i == 1 ? 20.0 : u(rng));
        s.row.rsi = 50.0 + i * 0.1;
        s.row.williams_r = -40.0 - i * 0.2;
        s.row.macd = -1.0 + i * 0.05;
        train.push_back(s);
    }
    const Normalizer n = Normalizer::fit(train);
    CHECK(n.transform_close(10.0) == doctest::Approx(0.0));
    CHECK(n.transform_close(20.0) == doctest::Approx(1.0));
    CHECK(n.transform_close(15.0) == doctest::Approx(0.5));

    const auto samples = apply_normalizer(n, train);
    for (const auto& s : samples)
        for (double f : s.features) {
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
        }

    // invert close feature back to the raw value
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double recovered = samples[i].features[0] * (n.close.max - n.close.min) + n.close.min;
        CHECK(recovered == doctest::Approx(train[i].row.close).epsilon(1e-9));
    }
}

TEST_CASE("values outside the training range stay unclamped") {
    std::vector<LabeledRow> train;
    for (const auto& r : rows_from_closes({10, 20, 15, 12})) train.push_back({r, Label::Hold});
    const Normalizer n = Normalizer::fit(train);
    CHECK(n.transform_close(30.0) == doctest::Approx(2.0));
    CHECK(n.transform_close(0.0) == doctest::Approx(-1.0));
}

TEST_CASE("constant feature throws ConstantFeature naming the column") {
    std::vector<LabeledRow> train;
    for (int i = 0; i < 5; ++i) {
        LabeledRow s;
        s.row.close = 10.0 + i;
        s.row.rsi = 40.0 + i;
        s.row.williams_r = -50.0 - i;
        s.row.macd = 0.25; // constant
        train.push_back(s);
    }
    try {
        Normalizer::fit(train);
        FAIL("expected ConstantFeature");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ConstantFeature);
        CHECK(std::string(e.what()).find("macd") != std::string::npos);
    }
}

namespace {

std::vector<LabeledSample> make_samples(int holds, int buys, int sells) {
    std::vector<LabeledSample> out;
    int i = 0;
    auto add = [&](int n, Label l) {
        for (int k = 0; k < n; ++k) {
            LabeledSample s;
            s.date = Date::from_serial(11000 + i++);
            s.features = {0.1 * i, 0.2, 0.3, 0.4};
            s.label = l;
            s.raw_close = 100.0 + i;
            out.push_back(s);
        }
    };
    add(holds, Label::Hold);
    add(buys, Label::Buy);
    add(sells, Label::Sell);
    return out;
}

std::map<Label, long> count_labels(const std::vector<LabeledSample>& samples) {
    std::map<Label, long> counts;
    for (const auto& s : samples) counts[s.label]++;
    return counts;
}

} // namespace

TEST_CASE("resample_minority duplication arithmetic (10,2,3) -> (10,10,9)") {
    const auto out = resample_minority(make_samples(10, 2, 3), 42);
    auto counts = count_labels(out);
    CHECK(counts[Label::Hold] == 10);
    CHECK(counts[Label::Buy] == 10);
    CHECK(counts[Label::Sell] == 9);
}

TEST_CASE("resample_minority leaves a balanced set unchanged as a multiset") {
    const auto in = make_samples(5, 5, 5);
    auto out = resample_minority(in, 7);
    REQUIRE(out.size() == in.size());
    auto key = [](const LabeledSample& s) { return s.date.serial(); };
    std::vector<long> a, b;
    for (const auto& s : in) a.push_back(key(s));
    for (const auto& s : out) b.push_back(key(s));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
}

TEST_CASE("resample_minority requires every class") {
    CHECK_THROWS_AS(resample_minority(make_samples(10, 0, 3), 1), Error);
}

TEST_CASE("resample_minority is deterministic and preserves the distinct-sample set") {
    const auto in = make_samples(20, 3, 5);
    const auto a = resample_minority(in, 1234);
    const auto b = resample_minority(in, 1234);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].date == b[i].date);
        CHECK(a[i].label == b[i].label);
    }

    std::set<long> original, resampled;
    for (const auto& s : in) original.insert(s.date.serial());
    for (const auto& s : a) resampled.insert(s.date.serial());
    CHECK(original == resampled);

    auto counts = count_labels(a);
    long lo = std::min({counts[Label::Hold], counts[Label::Buy], counts[Label::Sell]});
    long hi = std::max({counts[Label::Hold], counts[Label::Buy], counts[Label::Sell]});
    CHECK(static_cast<double>(hi) / static_cast<double>(lo) < 2.0);
}
