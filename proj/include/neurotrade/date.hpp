#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace nt {

// Calendar date, no time component. Comparable; convertible to a serial
// day count (days since 1970-01-01, proleptic Gregorian).
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    // "YYYY-MM-DD"
    static Date parse(std::string_view s);
    std::string str() const;

    long serial() const;
    static Date from_serial(long days);

    bool valid() const;
};

} // namespace nt
