#include "coco/dates.hpp"

#include "coco/errors.hpp"

#include <charconv>
#include <cstdio>

namespace coco {

namespace {

int parse_field(std::string_view text, std::string_view whole) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw InvalidArgument("malformed date '" + std::string(whole) + "'");
    return value;
}

} // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw InvalidArgument("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
    const int y = parse_field(text.substr(0, 4), text);
    const int m = parse_field(text.substr(5, 2), text);
    const int d = parse_field(text.substr(8, 2), text);
    Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
              std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok())
        throw InvalidArgument("invalid calendar date '" + std::string(text) + "'");
    return date;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

int days_between(const Date& from, const Date& to) {
    return static_cast<int>((std::chrono::sys_days{to} - std::chrono::sys_days{from}).count());
}

double year_fraction(const Date& from, const Date& to) {
    return days_between(from, to) / 365.0;
}

Date add_months(const Date& d, int months) {
    using namespace std::chrono;
    const year_month ym = year_month{d.year(), d.month()} + std::chrono::months{months};
    const auto last = year_month_day_last{ym.year(), month_day_last{ym.month()}}.day();
    return Date{ym.year(), ym.month(), d.day() > last ? last : d.day()};
}

} // namespace coco
