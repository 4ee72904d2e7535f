#include "neurotrade/dataset.hpp"

#include <algorithm>
#include <random>

namespace nt {

namespace {

Normalizer::Range fit_range(const std::vector<LabeledRow>& rows,
                            double (*get)(const FeatureRow&), const char* name) {
    double lo = get(rows.front().row);
    double hi = lo;
    for (const auto& s : rows) {
        lo = std::min(lo, get(s.row));
        hi = std::max(hi, get(s.row));
    }
    if (!(hi > lo))
        throw Error(Errc::ConstantFeature, name);
    return {lo, hi};
}

double scale(const Normalizer::Range& r, double x) { return (x - r.min) / (r.max - r.min); }

} // namespace

std::vector<LabeledRow> label_extrema(const std::vector<FeatureRow>& rows,
                                      const LabelerConfig& cfg) {
    if (cfg.window < 3 || cfg.window % 2 == 0)
        throw Error(Errc::ConfigInvalid, "labeler window must be odd and >= 3");
    const std::size_t n = rows.size();
    if (n < static_cast<std::size_t>(cfg.window))
        throw Error(Errc::SeriesTooShort, "labeling needs at least " +
                                              std::to_string(cfg.window) + " rows");

    const std::size_t half = (cfg.window - 1) / 2;
    std::vector<LabeledRow> out(n);
    for (std::size_t t = 0; t < n; ++t) out[t].row = rows[t];

    for (std::size_t t = half; t + half < n; ++t) {
        const double c = rows[t].close;
        bool strict_max = true;
        bool strict_min = true;
        for (std::size_t i = t - half; i <= t + half; ++i) {
            if (i == t) continue;
            if (rows[i].close >= c) strict_max = false;
            if (rows[i].close <= c) strict_min = false;
        }
        if (strict_max)
            out[t].label = Label::Sell;
        else if (strict_min)
            out[t].label = Label::Buy;
    }
    return out;
}

std::pair<std::vector<LabeledRow>, std::vector<LabeledRow>>
split_by_date(const std::vector<LabeledRow>& samples, const SplitSpec& spec) {
    if (!(spec.train_end < spec.test_start))
        throw Error(Errc::ConfigInvalid, "train_end must precede test_start");
    std::vector<LabeledRow> train, test;
    for (const auto& s : samples) {
        if (spec.train_start <= s.row.date && s.row.date <= spec.train_end)
            train.push_back(s);
        else if (spec.test_start <= s.row.date && s.row.date <= spec.test_end)
            test.push_back(s);
    }
    if (train.empty())
        throw Error(Errc::EmptySplit, "no samples in training range");
    if (test.empty())
        throw Error(Errc::EmptySplit, "no samples in test range");
    return {std::move(train), std::move(test)};
}

Normalizer Normalizer::fit(const std::vector<LabeledRow>& train) {
    if (train.empty())
        throw Error(Errc::EmptySeries, "cannot fit normalizer on empty training set");
    Normalizer n;
    n.close = fit_range(train, [](const FeatureRow& r) { return r.close; }, "close");
    n.rsi = fit_range(train, [](const FeatureRow& r) { return r.rsi; }, "rsi");
    n.wr = fit_range(train, [](const FeatureRow& r) { return r.williams_r; }, "williams_r");
    n.macd = fit_range(train, [](const FeatureRow& r) { return r.macd; }, "macd");
    return n;
}

double Normalizer::transform_close(double x) const { return scale(close, x); }
double Normalizer::transform_rsi(double x) const { return scale(rsi, x); }
double Normalizer::transform_wr(double x) const { return scale(wr, x); }
double Normalizer::transform_macd(double x) const { return scale(macd, x); }

std::vector<LabeledSample> apply_normalizer(const Normalizer& n,
                                            const std::vector<LabeledRow>& rows) {
    std::vector<LabeledSample> out;
    out.reserve(rows.size());
    for (const auto& s : rows) {
        LabeledSample sample;
        sample.date = s.row.date;
        // test-period values outside the training range stay unclamped
        sample.features = {n.transform_close(s.row.close), n.transform_rsi(s.row.rsi),
                           n.transform_wr(s.row.williams_r), n.transform_macd(s.row.macd)};
        sample.label = s.label;
        sample.raw_close = s.row.close;
        out.push_back(sample);
    }
    return out;
}

std::vector<LabeledSample> resample_minority(const std::vector<LabeledSample>& train,
                                             std::uint64_t seed) {
    std::array<long, 3> counts{};
    for (const auto& s : train) counts[static_cast<int>(s.label)]++;
    for (int c = 0; c < 3; ++c)
        if (counts[c] == 0) {
            static const char* names[] = {"Hold", "Buy", "Sell"};
            throw Error(Errc::MissingClass, names[c]);
        }

    const long majority = *std::max_element(counts.begin(), counts.end());
    std::array<long, 3> factor{};
    for (int c = 0; c < 3; ++c) factor[c] = majority / counts[c];

    std::vector<LabeledSample> out;
    out.reserve(train.size() * 2);
    for (const auto& s : train)
        for (long k = 0; k < factor[static_cast<int>(s.label)]; ++k)
            out.push_back(s);

    std::mt19937_64 rng(seed);
    std::shuffle(out.begin(), out.end(), rng);
    return out;
}

} // namespace nt
