#pragma once

#include <vector>

#include "neurotrade/market_data.hpp"

namespace nt {

struct IndicatorConfig {
    int rsi_period = 14;
    int wr_period = 14;
    int macd_fast = 12;
    int macd_slow = 26;
};

// Date-aligned feature vector for one bar; close kept raw for trading.
struct FeatureRow {
    Date date;
    double close = 0;
    double rsi = 0;        // [0, 100]
    double williams_r = 0; // [-100, 0]
    double macd = 0;       // price-difference units
};

// All indicator outputs are the same length as the input; warm-up indices
// that have no defined value are NaN.

// SMA seed at index period-1, then ema[t] = a*close[t] + (1-a)*ema[t-1]
// with a = 2/(period+1).
std::vector<double> ema(const std::vector<double>& closes, int period);

// Wilder smoothing after an SMA seed over the first `period` changes;
// defined from index `period`. Flat window (gain = loss = 0) yields 50.
std::vector<double> rsi(const std::vector<double>& closes, int period);

// fast EMA minus slow EMA; defined where both are.
std::vector<double> macd(const std::vector<double>& closes, const IndicatorConfig& cfg);

// ((HH - close) / (HH - LL)) * -100 over the trailing window; flat window -50.
std::vector<double> williams_r(const std::vector<AdjustedBar>& bars, int period);

// One row per bar where all three indicators are defined; warm-up dropped.
std::vector<FeatureRow> compute_feature_rows(const std::vector<AdjustedBar>& bars,
                                             const IndicatorConfig& cfg);

} // namespace nt
