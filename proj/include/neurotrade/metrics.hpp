#pragma once

#include <array>

#include "neurotrade/backtest.hpp"

namespace nt {

// rows = actual class, columns = predicted class (codes 0,1,2)
struct ConfusionMatrix {
    std::array<std::array<long, 3>, 3> counts{};

    long total() const;
    long trace() const;
};

struct ClassScores {
    std::array<double, 3> precision{};
    std::array<double, 3> recall{};
    std::array<double, 3> f1{};
    double accuracy = 0;
};

struct TradingStats {
    double final_capital = 0;          // OUR
    double bah_final_capital = 0;      // BaH
    double annualized_return = 0;      // OURr, mean of calendar-year returns
    double bah_annualized_return = 0;  // BaHr
    double annualized_return_cagr = 0; // cross-check variant
    double bah_annualized_return_cagr = 0;
    double annualized_transactions = 0;       // AnT
    double percent_success = 0;               // PoS
    double avg_profit_per_transaction_pct = 0; // ApT
    double avg_transaction_length_bars = 0;    // L
    double max_profit_pct = 0;                 // MpT
    double max_loss_pct = 0;                   // MlT
    double max_capital = 0;                    // MxC
    bool no_trades = false;
};

ConfusionMatrix confusion(const std::vector<Label>& actual,
                          const std::vector<Label>& predicted);

ClassScores scores(const ConfusionMatrix& m);

// Arithmetic mean of calendar-year simple returns over the equity path.
double annualize(double start_capital, const std::vector<std::pair<Date, double>>& equity_path);

// Geometric (CAGR) variant, emitted alongside as a cross-check.
double annualize_cagr(double start_capital,
                      const std::vector<std::pair<Date, double>>& equity_path);

TradingStats trading_stats(const Ledger& ours, const Ledger& bah, double test_years);

} // namespace nt
