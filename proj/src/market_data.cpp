#include "neurotrade/market_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nt {

namespace {

constexpr const char* kHeader = "Date,Open,High,Low,Close,Adj Close,Volume";

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double(std::string_view s, int line_no) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
        throw Error(Errc::MalformedRow,
                    "line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
    return v;
}

long long parse_volume(std::string_view s, int line_no) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 0)
        throw Error(Errc::MalformedRow,
                    "line " + std::to_string(line_no) + ": bad volume '" + std::string(s) + "'");
    return v;
}

std::string format_price(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

} // namespace

std::vector<OhlcvBar> parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kHeader)
        throw Error(Errc::MalformedHeader, "expected '" + std::string(kHeader) + "'");

    std::vector<OhlcvBar> bars;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 7)
            throw Error(Errc::MalformedRow,
                        "line " + std::to_string(line_no) + ": expected 7 fields");
        OhlcvBar bar;
        try {
            bar.date = Date::parse(fields[0]);
        } catch (const Error&) {
            throw Error(Errc::MalformedRow,
                        "line " + std::to_string(line_no) + ": bad date '" +
                            std::string(fields[0]) + "'");
        }
        bar.open = parse_double(fields[1], line_no);
        bar.high = parse_double(fields[2], line_no);
        bar.low = parse_double(fields[3], line_no);
        bar.close = parse_double(fields[4], line_no);
        bar.adjusted_close = parse_double(fields[5], line_no);
        bar.volume = parse_volume(fields[6], line_no);

        if (bar.open <= 0 || bar.high <= 0 || bar.low <= 0 || bar.close <= 0 ||
            bar.adjusted_close <= 0)
            throw Error(Errc::NonPositivePrice, "line " + std::to_string(line_no));
        if (bar.low > std::min(bar.open, bar.close) || bar.high < std::max(bar.open, bar.close))
            throw Error(Errc::MalformedRow,
                        "line " + std::to_string(line_no) + ": OHLC ordering violated");
        bars.push_back(bar);
    }

    std::stable_sort(bars.begin(), bars.end(),
                     [](const OhlcvBar& a, const OhlcvBar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < bars.size(); ++i)
        if (bars[i].date == bars[i - 1].date)
            throw Error(Errc::DuplicateDate, bars[i].date.str());
    return bars;
}

std::string serialize_csv(const std::vector<OhlcvBar>& bars) {
    std::ostringstream out;
    out << kHeader << '\n';
    for (const auto& b : bars)
        out << b.date.str() << ',' << format_price(b.open) << ',' << format_price(b.high) << ','
            << format_price(b.low) << ',' << format_price(b.close) << ','
            << format_price(b.adjusted_close) << ',' << b.volume << '\n';
    return out.str();
}

std::vector<AdjustedBar> adjust_bars(const std::vector<OhlcvBar>& bars) {
    std::vector<AdjustedBar> out;
    out.reserve(bars.size());
    for (const auto& b : bars) {
        if (b.adjusted_close <= 0)
            throw Error(Errc::ZeroAdjustedClose, b.date.str());
        const double ratio = b.close / b.adjusted_close;
        out.push_back({b.date, b.open / ratio, b.high / ratio, b.low / ratio, b.close / ratio});
    }
    return out;
}

std::string serialize_adjusted_csv(const std::vector<AdjustedBar>& bars) {
    std::ostringstream out;
    out << "Date,Open,High,Low,Close\n";
    for (const auto& b : bars)
        out << b.date.str() << ',' << format_price(b.open) << ',' << format_price(b.high) << ','
            << format_price(b.low) << ',' << format_price(b.close) << '\n';
    return out.str();
}

std::vector<AdjustedBar> parse_adjusted_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "Date,Open,High,Low,Close")
        throw Error(Errc::MalformedHeader, "expected 'Date,Open,High,Low,Close'");
    std::vector<AdjustedBar> bars;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 5)
            throw Error(Errc::MalformedRow, "line " + std::to_string(line_no));
        AdjustedBar b;
        b.date = Date::parse(fields[0]);
        b.open = parse_double(fields[1], line_no);
        b.high = parse_double(fields[2], line_no);
        b.low = parse_double(fields[3], line_no);
        b.close = parse_double(fields[4], line_no);
        bars.push_back(b);
    }
    return bars;
}

TickerSeries load_ticker(const std::filesystem::path& path, const std::string& symbol) {
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::MissingUpstreamArtifact, symbol + ": cannot open " + path.string());
    try {
        TickerSeries series;
        series.symbol = symbol;
        const auto raw = parse_csv(in);
        series.row_count = raw.size();
        series.bars = adjust_bars(raw);
        if (!series.bars.empty()) {
            series.first_date = series.bars.front().date;
            series.last_date = series.bars.back().date;
        }
        return series;
    } catch (const Error& e) {
        throw Error(e.code(), symbol + ": " + e.what());
    }
}

} // namespace nt
