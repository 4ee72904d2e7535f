#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "neurotrade/date.hpp"
#include "neurotrade/errors.hpp"

namespace nt {

// One raw trading day as exported by the Yahoo Finance daily CSV.
struct OhlcvBar {
    Date date;
    double open = 0;
    double high = 0;
    double low = 0;
    double close = 0;
    double adjusted_close = 0;
    long long volume = 0;
};

// Bar after the adjust-ratio correction: all four prices rescaled so that
// close equals the source bar's adjusted close.
struct AdjustedBar {
    Date date;
    double open = 0;
    double high = 0;
    double low = 0;
    double close = 0;
};

// Parses the fixed header `Date,Open,High,Low,Close,Adj Close,Volume`.
// Rows are sorted ascending by date; duplicate dates and malformed rows throw.
std::vector<OhlcvBar> parse_csv(std::istream& in);

// Serializes bars back into the same CSV schema (round-trips to 1e-9 relative).
std::string serialize_csv(const std::vector<OhlcvBar>& bars);

// ratio = close / adjusted_close; all four prices divided by the ratio.
std::vector<AdjustedBar> adjust_bars(const std::vector<OhlcvBar>& bars);

std::string serialize_adjusted_csv(const std::vector<AdjustedBar>& bars);
std::vector<AdjustedBar> parse_adjusted_csv(std::istream& in);

struct TickerSeries {
    std::string symbol;
    std::vector<AdjustedBar> bars;
    std::size_t row_count = 0; // provenance: rows in the source file
    Date first_date;
    Date last_date;
};

TickerSeries load_ticker(const std::filesystem::path& path, const std::string& symbol);

} // namespace nt
