#ifndef SACT_DATE_HPP
#define SACT_DATE_HPP

#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>

namespace sact {

/// Proleptic Gregorian calendar date. Plain aggregate so notes and
/// anchors can carry it around without chrono types in their API.
struct Date {
    int year = 0;
    int month = 0; // 1-12
    int day = 0;   // 1-31

    auto operator<=>(const Date&) const = default;
};

inline bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline int days_in_month(int year, int month) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12) return 0;
    if (month == 2 && is_leap_year(year)) return 29;
    return kDays[month - 1];
}

inline bool is_valid_date(const Date& d) {
    return d.month >= 1 && d.month <= 12 && d.day >= 1 && d.day <= days_in_month(d.year, d.month);
}

inline std::chrono::sys_days to_sys_days(const Date& d) {
    using namespace std::chrono;
    return sys_days{year{d.year} / month{static_cast<unsigned>(d.month)} /
                    day{static_cast<unsigned>(d.day)}};
}

inline Date from_sys_days(std::chrono::sys_days sd) {
    std::chrono::year_month_day ymd{sd};
    return Date{int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day()))};
}

inline Date add_days(const Date& d, long n) {
    return from_sys_days(to_sys_days(d) + std::chrono::days{n});
}

/// Month arithmetic with day-of-month clamping:
/// Jan 31 - 1 month -> Dec 31; Mar 31 - 1 month -> Feb 28/29.
inline Date add_months_clamped(const Date& d, long n) {
    long idx = static_cast<long>(d.year) * 12 + (d.month - 1) + n;
    int y = static_cast<int>(idx >= 0 ? idx / 12 : (idx - 11) / 12);
    int m = static_cast<int>(idx - static_cast<long>(y) * 12) + 1;
    int day = d.day;
    int dim = days_in_month(y, m);
    if (day > dim) day = dim;
    return Date{y, m, day};
}

inline Date add_years_clamped(const Date& d, long n) {
    return add_months_clamped(d, n * 12);
}

/// Monday = 0 ... Sunday = 6.
inline int weekday_monday0(const Date& d) {
    std::chrono::weekday wd{to_sys_days(d)};
    return static_cast<int>(wd.iso_encoding()) - 1;
}

inline int day_of_year(const Date& d) {
    int doy = d.day;
    for (int m = 1; m < d.month; ++m) doy += days_in_month(d.year, m);
    return doy;
}

struct IsoWeek {
    int year = 0;
    int week = 0; // 1-53
    auto operator<=>(const IsoWeek&) const = default;
};

/// ISO-8601 week number: weeks start on Monday, week 1 is the week
/// containing the first Thursday of the year. Computed by locating the
/// Thursday of the date's week.
inline IsoWeek iso_week_of(const Date& d) {
    Date thursday = add_days(d, 3 - weekday_monday0(d));
    return IsoWeek{thursday.year, (day_of_year(thursday) - 1) / 7 + 1};
}

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

inline std::string format_month(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", d.year, d.month);
    return buf;
}

inline std::string format_year(int y) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%04d", y);
    return buf;
}

inline std::string format_iso_week(const IsoWeek& w) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-w%02d", w.year, w.week);
    return buf;
}

/// Parse "YYYY-MM-DD"; returns nullopt on malformed or invalid dates.
inline std::optional<Date> parse_iso_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c", &y, &m, &d, &extra) != 3) return std::nullopt;
    if (s.size() != 10) return std::nullopt;
    Date date{y, m, d};
    if (!is_valid_date(date)) return std::nullopt;
    return date;
}

} // namespace sact

#endif // SACT_DATE_HPP
