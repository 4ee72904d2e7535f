#include "neurotrade/date.hpp"

#include <charconv>
#include <cstdio>

#include "neurotrade/errors.hpp"

namespace nt {

namespace {

// Howard Hinnant's civil date algorithms.
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

void civil_from_days(long z, int& y, int& m, int& d) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long yy = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

int days_in_month(int y, int m) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2) {
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[m - 1];
}

} // namespace

Date Date::parse(std::string_view s) {
    Date out;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-')
        throw Error(Errc::MalformedRow, "bad date '" + std::string(s) + "'");
    auto num = [&](std::string_view part, int& dst) {
        auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), dst);
        if (ec != std::errc() || p != part.data() + part.size())
            throw Error(Errc::MalformedRow, "bad date '" + std::string(s) + "'");
    };
    num(s.substr(0, 4), out.year);
    num(s.substr(5, 2), out.month);
    num(s.substr(8, 2), out.day);
    if (!out.valid())
        throw Error(Errc::MalformedRow, "invalid date '" + std::string(s) + "'");
    return out;
}

std::string Date::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

long Date::serial() const { return days_from_civil(year, month, day); }

Date Date::from_serial(long days) {
    Date d;
    civil_from_days(days, d.year, d.month, d.day);
    return d;
}

bool Date::valid() const {
    return month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

} // namespace nt
