#include "lagcast/date.hpp"

#include "lagcast/error.hpp"

#include <charconv>
#include <cstdio>

namespace lagcast {

namespace {

std::chrono::year_month_day to_ymd(std::chrono::sys_days d) {
    return std::chrono::year_month_day{d};
}

int parse_int(std::string_view s, const std::string& context) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::UnparseableDate, "bad number '" + std::string(s) + "' in " + context);
    }
    return value;
}

Date make_checked(int y, int m, int d, const std::string& text) {
    std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                    std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) {
        throw Error(ErrorCode::UnparseableDate, "'" + text + "' is not a calendar date");
    }
    return Date(std::chrono::sys_days{ymd});
}

} // namespace

Date::Date(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
        throw Error(ErrorCode::UnparseableDate, "invalid date components");
    }
    days_ = std::chrono::sys_days{ymd};
}

Date Date::parse_iso(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw Error(ErrorCode::UnparseableDate, "'" + text + "' is not YYYY-MM-DD");
    }
    int y = parse_int(std::string_view(text).substr(0, 4), text);
    int m = parse_int(std::string_view(text).substr(5, 2), text);
    int d = parse_int(std::string_view(text).substr(8, 2), text);
    return make_checked(y, m, d, text);
}

Date Date::parse_mdy(const std::string& text) {
    auto first = text.find('/');
    auto second = text.find('/', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos || second + 1 >= text.size()) {
        throw Error(ErrorCode::UnparseableDate, "'" + text + "' is not M/D/YY");
    }
    std::string_view sv(text);
    int m = parse_int(sv.substr(0, first), text);
    int d = parse_int(sv.substr(first + 1, second - first - 1), text);
    int y = parse_int(sv.substr(second + 1), text);
    if (y < 100) {
        y += 2000;  // two-digit years in the JHU headers mean 20YY
    }
    return make_checked(y, m, d, text);
}

std::string Date::to_iso() const {
    auto ymd = to_ymd(days_);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

std::string Date::to_mdy() const {
    auto ymd = to_ymd(days_);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%u/%u/%02d", unsigned(ymd.month()), unsigned(ymd.day()),
                  int(ymd.year()) % 100);
    return buf;
}

int Date::year() const { return int(to_ymd(days_).year()); }
unsigned Date::month() const { return unsigned(to_ymd(days_).month()); }
unsigned Date::day() const { return unsigned(to_ymd(days_).day()); }

} // namespace lagcast
