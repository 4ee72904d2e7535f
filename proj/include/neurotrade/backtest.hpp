#pragma once

#include <string>
#include <utility>
#include <vector>

#include "neurotrade/dataset.hpp"

namespace nt {

struct TradingConfig {
    double starting_capital = 10000.0;
    double commission_per_side = 1.0; // 0.001 of the default starting capital
    double stop_loss_fraction = 0.05;
};

enum class ExitReason { Signal, StopLoss, EndOfData };

const char* exit_reason_name(ExitReason r);

struct Trade {
    int entry_index = 0;
    int exit_index = 0;
    Date entry_date;
    Date exit_date;
    double entry_price = 0;
    double exit_price = 0;
    double shares = 0;
    double profit = 0;     // cash after exit minus cash before entry
    double profit_pct = 0; // profit / cash before entry
    ExitReason exit_reason = ExitReason::Signal;
    double capital_after = 0;
};

struct Ledger {
    double starting_capital = 0;
    std::vector<Date> dates;    // one per bar
    std::vector<double> equity; // size bars + 1; equity[0] = starting capital
    std::vector<Trade> trades;
    double final_capital = 0;
};

using PricePoint = std::pair<Date, double>;

// Long-only state machine over aligned (price, label) bars: all-in entries on
// Buy, full exits on Sell or stop-loss, repeated signals suppressed until the
// label changes, open position closed at the final bar.
Ledger simulate(const std::vector<PricePoint>& prices, const std::vector<Label>& labels,
                const TradingConfig& cfg);

// Single all-in trade from the first to the last close.
Ledger buy_and_hold(const std::vector<PricePoint>& prices, const TradingConfig& cfg);

// `N.(entryIdx-exitIdx) => profit Capital: $X`, one line per trade.
std::string format_trade_log(const Ledger& ledger);

std::string serialize_trades_csv(const Ledger& ledger);

} // namespace nt
