#pragma once

#include <compare>
#include <string>

namespace fusion {

// Calendar date, day precision, no time zone. Monthly-frequency data is
// stored on the last day of its month.
struct Date {
    int year = 1970;
    int month = 1; // 1..12
    int day = 1;   // 1..days_in_month

    auto operator<=>(const Date&) const = default;
};

bool is_leap_year(int year);
int days_in_month(int year, int month);
bool is_valid_date(const Date& d);
bool is_month_end(const Date& d);

Date end_of_month(int year, int month);
Date dec31(int year);

// Adds n months (n may be negative). Day-of-month is clamped to the target
// month; a month-end input stays month-end (2020-12-31 + 2 -> 2021-02-29).
Date add_months(const Date& d, int n);

// Whole months elapsed from `from` to `to` (floor; negative if to < from).
// Month-end to month-end counts calendar months exactly.
int months_between(const Date& from, const Date& to);

std::string to_string(const Date& d);   // ISO-8601 "YYYY-MM-DD"
Date parse_date(const std::string& s);  // throws Error("BadDate") on malformed input

} // namespace fusion
