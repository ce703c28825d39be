#include "fusion/dates.hpp"

#include "fusion/errors.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace fusion {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr std::array<int, 12> base = {31, 28, 31, 30, 31, 30,
                                                 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return base[static_cast<size_t>(month - 1)];
}

bool is_valid_date(const Date& d) {
    return d.month >= 1 && d.month <= 12 && d.day >= 1 &&
           d.day <= days_in_month(d.year, d.month);
}

bool is_month_end(const Date& d) {
    return d.day == days_in_month(d.year, d.month);
}

Date end_of_month(int year, int month) {
    return Date{year, month, days_in_month(year, month)};
}

Date dec31(int year) { return Date{year, 12, 31}; }

Date add_months(const Date& d, int n) {
    const bool eom = is_month_end(d);
    int idx = d.year * 12 + (d.month - 1) + n;
    int y = idx / 12;
    int m = idx % 12;
    if (m < 0) { m += 12; y -= 1; }
    m += 1;
    int day = eom ? days_in_month(y, m) : std::min(d.day, days_in_month(y, m));
    return Date{y, m, day};
}

int months_between(const Date& from, const Date& to) {
    if (to < from) return -months_between(to, from);
    int diff = (to.year * 12 + to.month) - (from.year * 12 + from.month);
    if (to.day < from.day && !is_month_end(to)) diff -= 1;
    return diff;
}

std::string to_string(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return std::string(buf);
}

Date parse_date(const std::string& s) {
    auto fail = [&]() -> Error {
        return data_error("BadDate", "expected YYYY-MM-DD, got '" + s + "'");
    };
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw fail();
    Date d;
    auto parse_int = [&](size_t pos, size_t len, int& out) {
        auto res = std::from_chars(s.data() + pos, s.data() + pos + len, out);
        if (res.ec != std::errc{} || res.ptr != s.data() + pos + len) throw fail();
    };
    parse_int(0, 4, d.year);
    parse_int(5, 2, d.month);
    parse_int(8, 2, d.day);
    if (!is_valid_date(d)) throw fail();
    return d;
}

} // namespace fusion
