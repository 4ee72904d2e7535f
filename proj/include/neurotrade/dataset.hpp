#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "neurotrade/indicators.hpp"

namespace nt {

enum class Label : int { Hold = 0, Buy = 1, Sell = 2 };

struct LabelerConfig {
    int window = 15; // odd, >= 3
};

struct LabeledRow {
    FeatureRow row;
    Label label = Label::Hold;
};

struct SplitSpec {
    Date train_start;
    Date train_end;
    Date test_start;
    Date test_end;
};

// Min-max normalizer fitted on training data only.
class Normalizer {
public:
    struct Range {
        double min = 0;
        double max = 0;
    };

    static Normalizer fit(const std::vector<LabeledRow>& train);

    double transform_close(double x) const;
    double transform_rsi(double x) const;
    double transform_wr(double x) const;
    double transform_macd(double x) const;

    Range close, rsi, wr, macd;
};

struct LabeledSample {
    Date date;
    std::array<double, 4> features{}; // normalized close, rsi, williams_r, macd
    Label label = Label::Hold;
    double raw_close = 0; // retained for the trading simulation
};

// Sell at a strict unique window maximum, Buy at a strict unique minimum,
// Hold otherwise; bars without a full centered window are Hold.
std::vector<LabeledRow> label_extrema(const std::vector<FeatureRow>& rows,
                                      const LabelerConfig& cfg);

std::pair<std::vector<LabeledRow>, std::vector<LabeledRow>>
split_by_date(const std::vector<LabeledRow>& samples, const SplitSpec& spec);

std::vector<LabeledSample> apply_normalizer(const Normalizer& n,
                                            const std::vector<LabeledRow>& rows);

// Duplicates minority-class samples so each class count reaches
// floor(majority / count) * count, then shuffles deterministically.
std::vector<LabeledSample> resample_minority(const std::vector<LabeledSample>& train,
                                             std::uint64_t seed);

} // namespace nt
