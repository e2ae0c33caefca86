#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace coco {

using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`. Throws InvalidArgument on anything else.
Date parse_date(std::string_view text);

std::string format_date(const Date& d);

/// ACT/365 fixed year fraction from `from` to `to` (negative if `to` precedes `from`).
double year_fraction(const Date& from, const Date& to);

/// Shifts by whole months, clamping the day to the end of the target month.
Date add_months(const Date& d, int months);

int days_between(const Date& from, const Date& to);

} // namespace coco
