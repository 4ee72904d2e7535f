#include "neurotrade/backtest.hpp"

#include <cstdio>
#include <sstream>

namespace nt {

namespace {

void validate_prices(const std::vector<PricePoint>& prices) {
    for (const auto& [date, close] : prices)
        if (!(close > 0))
            throw Error(Errc::NonPositivePrice, date.str());
}

std::string money(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

} // namespace

const char* exit_reason_name(ExitReason r) {
    switch (r) {
    case ExitReason::Signal: return "Signal";
    case ExitReason::StopLoss: return "StopLoss";
    case ExitReason::EndOfData: return "EndOfData";
    }
    return "?";
}

Ledger simulate(const std::vector<PricePoint>& prices, const std::vector<Label>& labels,
                const TradingConfig& cfg) {
    if (prices.size() != labels.size())
        throw Error(Errc::LengthMismatch, "prices and labels must align one-to-one");
    validate_prices(prices);

    Ledger ledger;
    ledger.starting_capital = cfg.starting_capital;
    ledger.equity.push_back(cfg.starting_capital);

    double cash = cfg.starting_capital;
    bool long_position = false;
    double shares = 0;
    double entry_price = 0;
    double cash_before_entry = 0;
    int entry_index = 0;

    auto close_position = [&](int t, ExitReason reason) {
        cash = shares * prices[t].second - cfg.commission_per_side;
        Trade trade;
        trade.entry_index = entry_index;
        trade.exit_index = t;
        trade.entry_date = prices[entry_index].first;
        trade.exit_date = prices[t].first;
        trade.entry_price = entry_price;
        trade.exit_price = prices[t].second;
        trade.shares = shares;
        trade.profit = cash - cash_before_entry;
        trade.profit_pct = trade.profit / cash_before_entry;
        trade.exit_reason = reason;
        trade.capital_after = cash;
        ledger.trades.push_back(trade);
        long_position = false;
        shares = 0;
    };

    for (std::size_t t = 0; t < prices.size(); ++t) {
        const Label signal = labels[t];
        // only the first label of a run triggers; repeats are ignored
        const bool triggered = signal != Label::Hold && (t == 0 || labels[t - 1] != signal);
        const double close = prices[t].second;

        if (long_position && triggered && signal == Label::Sell) {
            close_position(static_cast<int>(t), ExitReason::Signal);
        } else if (long_position && close <= entry_price * (1.0 - cfg.stop_loss_fraction)) {
            // forced exit; a later fresh Buy run may re-enter
            close_position(static_cast<int>(t), ExitReason::StopLoss);
        } else if (!long_position && triggered && signal == Label::Buy && t + 1 < prices.size()) {
            // no entry on the final bar; it would close in the same instant
            cash_before_entry = cash;
            entry_price = close;
            entry_index = static_cast<int>(t);
            shares = (cash - cfg.commission_per_side) / close;
            long_position = true;
        }

        ledger.dates.push_back(prices[t].first);
        ledger.equity.push_back(long_position ? shares * close : cash);
    }

    if (long_position) {
        close_position(static_cast<int>(prices.size()) - 1, ExitReason::EndOfData);
        ledger.equity.back() = cash;
    }

    ledger.final_capital = ledger.equity.back();
    return ledger;
}

Ledger buy_and_hold(const std::vector<PricePoint>& prices, const TradingConfig& cfg) {
    if (prices.size() < 2)
        throw Error(Errc::SeriesTooShort, "buy-and-hold needs at least two prices");
    validate_prices(prices);

    Ledger ledger;
    ledger.starting_capital = cfg.starting_capital;
    ledger.equity.push_back(cfg.starting_capital);

    const double shares = (cfg.starting_capital - cfg.commission_per_side) / prices.front().second;
    for (std::size_t t = 0; t + 1 < prices.size(); ++t) {
        ledger.dates.push_back(prices[t].first);
        ledger.equity.push_back(shares * prices[t].second);
    }
    const double final_cash = shares * prices.back().second - cfg.commission_per_side;
    ledger.dates.push_back(prices.back().first);
    ledger.equity.push_back(final_cash);

    Trade trade;
    trade.entry_index = 0;
    trade.exit_index = static_cast<int>(prices.size()) - 1;
    trade.entry_date = prices.front().first;
    trade.exit_date = prices.back().first;
    trade.entry_price = prices.front().second;
    trade.exit_price = prices.back().second;
    trade.shares = shares;
    trade.profit = final_cash - cfg.starting_capital;
    trade.profit_pct = trade.profit / cfg.starting_capital;
    trade.exit_reason = ExitReason::EndOfData;
    trade.capital_after = final_cash;
    ledger.trades.push_back(trade);

    ledger.final_capital = final_cash;
    return ledger;
}

std::string format_trade_log(const Ledger& ledger) {
    std::ostringstream out;
    out << "Transaction Number, Interval, Gain, Instant Capital\n";
    int n = 0;
    for (const auto& t : ledger.trades)
        out << ++n << ".(" << t.entry_index << "-" << t.exit_index << ") => " << money(t.profit)
            << " Capital: $" << money(t.capital_after) << "\n";
    return out.str();
}

std::string serialize_trades_csv(const Ledger& ledger) {
    std::ostringstream out;
    out << "trade_no,entry_date,exit_date,entry_price,exit_price,shares,profit,profit_pct,"
           "exit_reason,capital_after\n";
    char buf[256];
    int n = 0;
    for (const auto& t : ledger.trades) {
        std::snprintf(buf, sizeof(buf), "%d,%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%.17g\n", ++n,
                      t.entry_date.str().c_str(), t.exit_date.str().c_str(), t.entry_price,
                      t.exit_price, t.shares, t.profit, t.profit_pct,
                      exit_reason_name(t.exit_reason), t.capital_after);
        out << buf;
    }
    return out.str();
}

} // namespace nt
