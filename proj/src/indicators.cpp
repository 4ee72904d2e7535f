#include "neurotrade/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nt {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> ema(const std::vector<double>& closes, int period) {
    if (closes.empty())
        throw Error(Errc::EmptySeries, "ema");
    const std::size_t n = closes.size();
    std::vector<double> out(n, kNaN);
    if (n < static_cast<std::size_t>(period))
        return out;

    double seed = 0;
    for (int i = 0; i < period; ++i) seed += closes[i];
    seed /= period;
    out[period - 1] = seed;

    const double alpha = 2.0 / (period + 1);
    for (std::size_t t = period; t < n; ++t)
        out[t] = alpha * closes[t] + (1.0 - alpha) * out[t - 1];
    return out;
}

std::vector<double> rsi(const std::vector<double>& closes, int period) {
    const std::size_t n = closes.size();
    if (n <= static_cast<std::size_t>(period))
        throw Error(Errc::SeriesTooShort, "rsi needs more than " + std::to_string(period) + " closes");

    std::vector<double> out(n, kNaN);
    double avg_gain = 0;
    double avg_loss = 0;
    for (int t = 1; t <= period; ++t) {
        const double change = closes[t] - closes[t - 1];
        avg_gain += std::max(change, 0.0);
        avg_loss += std::max(-change, 0.0);
    }
    avg_gain /= period;
    avg_loss /= period;

    auto value = [](double gain, double loss) {
        if (gain == 0.0 && loss == 0.0) return 50.0; // flat window, neutral momentum
        if (loss == 0.0) return 100.0;
        if (gain == 0.0) return 0.0;
        const double rs = gain / loss;
        return 100.0 - 100.0 / (1.0 + rs);
    };

    out[period] = value(avg_gain, avg_loss);
    for (std::size_t t = period + 1; t < n; ++t) {
        const double change = closes[t] - closes[t - 1];
        avg_gain = (avg_gain * (period - 1) + std::max(change, 0.0)) / period;
        avg_loss = (avg_loss * (period - 1) + std::max(-change, 0.0)) / period;
        out[t] = value(avg_gain, avg_loss);
    }
    return out;
}

std::vector<double> macd(const std::vector<double>& closes, const IndicatorConfig& cfg) {
    if (closes.size() < static_cast<std::size_t>(cfg.macd_slow))
        throw Error(Errc::SeriesTooShort,
                    "macd needs at least " + std::to_string(cfg.macd_slow) + " closes");
    const auto fast = ema(closes, cfg.macd_fast);
    const auto slow = ema(closes, cfg.macd_slow);
    std::vector<double> out(closes.size(), kNaN);
    for (std::size_t t = 0; t < closes.size(); ++t)
        if (!std::isnan(fast[t]) && !std::isnan(slow[t]))
            out[t] = fast[t] - slow[t];
    return out;
}

std::vector<double> williams_r(const std::vector<AdjustedBar>& bars, int period) {
    const std::size_t n = bars.size();
    if (n < static_cast<std::size_t>(period))
        throw Error(Errc::SeriesTooShort,
                    "williams_r needs at least " + std::to_string(period) + " bars");
    std::vector<double> out(n, kNaN);
    for (std::size_t t = period - 1; t < n; ++t) {
        double hh = bars[t - period + 1].high;
        double ll = bars[t - period + 1].low;
        for (std::size_t i = t - period + 2; i <= t; ++i) {
            hh = std::max(hh, bars[i].high);
            ll = std::min(ll, bars[i].low);
        }
        if (hh == ll) {
            out[t] = -50.0;
        } else {
            out[t] = (hh - bars[t].close) / (hh - ll) * -100.0;
        }
    }
    return out;
}

std::vector<FeatureRow> compute_feature_rows(const std::vector<AdjustedBar>& bars,
                                             const IndicatorConfig& cfg) {
    const std::size_t warmup = static_cast<std::size_t>(
        std::max({cfg.macd_slow - 1, cfg.rsi_period, cfg.wr_period - 1}));
    if (bars.size() <= warmup)
        throw Error(Errc::SeriesTooShort, "need more than " + std::to_string(warmup) + " bars");

    std::vector<double> closes(bars.size());
    std::transform(bars.begin(), bars.end(), closes.begin(),
                   [](const AdjustedBar& b) { return b.close; });

    const auto r = rsi(closes, cfg.rsi_period);
    const auto wr = williams_r(bars, cfg.wr_period);
    const auto m = macd(closes, cfg);

    std::vector<FeatureRow> rows;
    rows.reserve(bars.size() - warmup);
    for (std::size_t t = warmup; t < bars.size(); ++t)
        rows.push_back({bars[t].date, closes[t], r[t], wr[t], m[t]});
    return rows;
}

} // namespace nt
