#include "neurotrade/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace nt {

long ConfusionMatrix::total() const {
    long t = 0;
    for (const auto& row : counts)
        for (long v : row) t += v;
    return t;
}

long ConfusionMatrix::trace() const {
    return counts[0][0] + counts[1][1] + counts[2][2];
}

ConfusionMatrix confusion(const std::vector<Label>& actual,
                          const std::vector<Label>& predicted) {
    if (actual.size() != predicted.size() || actual.empty())
        throw Error(Errc::LengthMismatch, "actual and predicted labels must align");
    ConfusionMatrix m;
    for (std::size_t i = 0; i < actual.size(); ++i)
        m.counts[static_cast<int>(actual[i])][static_cast<int>(predicted[i])]++;
    return m;
}

ClassScores scores(const ConfusionMatrix& m) {
    ClassScores s;
    for (int c = 0; c < 3; ++c) {
        long col = 0, row = 0;
        for (int i = 0; i < 3; ++i) {
            col += m.counts[i][c];
            row += m.counts[c][i];
        }
        const double diag = static_cast<double>(m.counts[c][c]);
        s.precision[c] = col > 0 ? diag / static_cast<double>(col) : 0.0;
        s.recall[c] = row > 0 ? diag / static_cast<double>(row) : 0.0;
        const double pr = s.precision[c] + s.recall[c];
        s.f1[c] = pr > 0 ? 2.0 * s.precision[c] * s.recall[c] / pr : 0.0;
    }
    s.accuracy = static_cast<double>(m.trace()) / static_cast<double>(m.total());
    return s;
}

double annualize(double start_capital, const std::vector<std::pair<Date, double>>& equity_path) {
    if (equity_path.size() < 2)
        throw Error(Errc::SpanTooShort, "equity path needs at least two points");

    // yearly simple returns chained off the previous year's closing equity
    double year_start = start_capital;
    int current_year = equity_path.front().first.year;
    double last_equity = equity_path.front().second;
    std::vector<double> returns;
    for (const auto& [date, equity] : equity_path) {
        if (date.year != current_year) {
            returns.push_back(last_equity / year_start - 1.0);
            year_start = last_equity;
            current_year = date.year;
        }
        last_equity = equity;
    }
    returns.push_back(last_equity / year_start - 1.0);

    double sum = 0;
    for (double r : returns) sum += r;
    return sum / static_cast<double>(returns.size());
}

double annualize_cagr(double start_capital,
                      const std::vector<std::pair<Date, double>>& equity_path) {
    if (equity_path.size() < 2)
        throw Error(Errc::SpanTooShort, "equity path needs at least two points");
    const double years =
        static_cast<double>(equity_path.back().first.serial() - equity_path.front().first.serial()) /
        365.25;
    if (years <= 0)
        throw Error(Errc::SpanTooShort, "equity path must span time");
    return std::pow(equity_path.back().second / start_capital, 1.0 / years) - 1.0;
}

namespace {

std::vector<std::pair<Date, double>> equity_path(const Ledger& ledger) {
    std::vector<std::pair<Date, double>> path;
    path.reserve(ledger.dates.size());
    for (std::size_t i = 0; i < ledger.dates.size(); ++i)
        path.emplace_back(ledger.dates[i], ledger.equity[i + 1]);
    return path;
}

} // namespace

TradingStats trading_stats(const Ledger& ours, const Ledger& bah, double test_years) {
    if (test_years <= 0)
        throw Error(Errc::ConfigInvalid, "test_years must be positive");

    TradingStats st;
    st.final_capital = ours.final_capital;
    st.bah_final_capital = bah.final_capital;
    st.max_capital = *std::max_element(ours.equity.begin(), ours.equity.end());

    const auto path = equity_path(ours);
    const auto bah_path = equity_path(bah);
    st.annualized_return = annualize(ours.starting_capital, path);
    st.bah_annualized_return = annualize(bah.starting_capital, bah_path);
    st.annualized_return_cagr = annualize_cagr(ours.starting_capital, path);
    st.bah_annualized_return_cagr = annualize_cagr(bah.starting_capital, bah_path);

    const auto& trades = ours.trades;
    if (trades.empty()) {
        st.no_trades = true;
        return st;
    }

    st.annualized_transactions = static_cast<double>(trades.size()) / test_years;
    long wins = 0;
    double pct_sum = 0, len_sum = 0;
    double max_pct = trades.front().profit_pct, min_pct = trades.front().profit_pct;
    for (const auto& t : trades) {
        if (t.profit > 0) ++wins;
        pct_sum += t.profit_pct;
        len_sum += t.exit_index - t.entry_index;
        max_pct = std::max(max_pct, t.profit_pct);
        min_pct = std::min(min_pct, t.profit_pct);
    }
    const double n = static_cast<double>(trades.size());
    st.percent_success = 100.0 * static_cast<double>(wins) / n;
    st.avg_profit_per_transaction_pct = 100.0 * pct_sum / n;
    st.avg_transaction_length_bars = len_sum / n;
    st.max_profit_pct = 100.0 * max_pct;
    st.max_loss_pct = 100.0 * min_pct;
    return st;
}

} // namespace nt
