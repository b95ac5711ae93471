#ifndef SACT_TIMENORM_HPP
#define SACT_TIMENORM_HPP

#include <charconv>
#include <optional>
#include <regex>
#include <string>
#include <string_view>

#include "sact/date.hpp"
#include "sact/text.hpp"

namespace sact {

enum class Granularity { day, week, month, year };

inline const char* to_string(Granularity g) {
    switch (g) {
        case Granularity::day: return "day";
        case Granularity::week: return "week";
        case Granularity::month: return "month";
        case Granularity::year: return "year";
    }
    return "?";
}

/// ISO-normalized time at one of four granularities:
///   day "YYYY-MM-DD", week "YYYY-wWW", month "YYYY-MM", year "YYYY".
struct NormalizedTime {
    Granularity granularity = Granularity::day;
    std::string value;

    bool operator==(const NormalizedTime&) const = default;
};

/// Infer the granularity of a stored value string; nullopt if the string
/// matches no format exactly.
inline std::optional<NormalizedTime> normalized_time_from_value(const std::string& v) {
    static const std::regex day_re(R"(^\d{4}-\d{2}-\d{2}$)");
    static const std::regex week_re(R"(^\d{4}-w\d{2}$)");
    static const std::regex month_re(R"(^\d{4}-\d{2}$)");
    static const std::regex year_re(R"(^\d{4}$)");
    if (std::regex_match(v, day_re)) {
        if (!parse_iso_date(v)) return std::nullopt;
        return NormalizedTime{Granularity::day, v};
    }
    if (std::regex_match(v, week_re)) {
        int wk = (v[6] - '0') * 10 + (v[7] - '0');
        if (wk < 1 || wk > 53) return std::nullopt;
        return NormalizedTime{Granularity::week, v};
    }
    if (std::regex_match(v, month_re)) {
        int m = (v[5] - '0') * 10 + (v[6] - '0');
        if (m < 1 || m > 12) return std::nullopt;
        return NormalizedTime{Granularity::month, v};
    }
    if (std::regex_match(v, year_re)) return NormalizedTime{Granularity::year, v};
    return std::nullopt;
}

/// Document time used to resolve relative expressions.
struct Anchor {
    Date doctime;
};

enum class UnnormalizableReason { unknown_shape, missing_anchor, invalid_date };

inline const char* to_string(UnnormalizableReason r) {
    switch (r) {
        case UnnormalizableReason::unknown_shape: return "unknown-shape";
        case UnnormalizableReason::missing_anchor: return "missing-anchor";
        case UnnormalizableReason::invalid_date: return "invalid-date";
    }
    return "?";
}

struct NormalizeOutcome {
    std::optional<NormalizedTime> time;
    UnnormalizableReason reason = UnnormalizableReason::unknown_shape;

    bool ok() const { return time.has_value(); }
};

struct TimenormOptions {
    /// Off by default: reproduces the reference behaviors this pipeline's
    /// scores were computed with (month-day expressions anchor to the
    /// previous year; "last week" yields a day while "next week" yields a
    /// week). Turning it on resolves month-day to the most recent
    /// occurrence not after the anchor and makes "last week" symmetric
    /// with "next week".
    bool strict_iso_fixups = false;
};

namespace detail {

inline std::optional<int> month_from_name(std::string_view s) {
    if (!s.empty() && s.back() == '.') s.remove_suffix(1);
    static constexpr std::string_view kFull[] = {
        "january", "february", "march", "april", "may", "june",
        "july", "august", "september", "october", "november", "december"};
    for (int i = 0; i < 12; ++i) {
        if (s == kFull[i]) return i + 1;
        if (s.size() == 3 && s == kFull[i].substr(0, 3)) return i + 1;
    }
    if (s == "sept") return 9;
    return std::nullopt;
}

inline std::string strip_outer_punct(std::string_view s) {
    constexpr std::string_view kPunct = "()[]{}<>.,;:!?\"'";
    size_t b = 0, e = s.size();
    while (b < e && (is_space(s[b]) || kPunct.find(s[b]) != std::string_view::npos)) ++b;
    while (e > b && (is_space(s[e - 1]) || kPunct.find(s[e - 1]) != std::string_view::npos)) --e;
    return std::string(s.substr(b, e - b));
}

inline std::optional<long long> to_ll(const std::string& s) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
    return v;
}

// Keeps arithmetic inside the printable four-digit range.
inline bool year_in_range(int y) { return y >= 1 && y <= 9999; }

inline NormalizeOutcome success_day(const Date& d) {
    if (!year_in_range(d.year))
        return {std::nullopt, UnnormalizableReason::invalid_date};
    return {NormalizedTime{Granularity::day, format_date(d)}, {}};
}

inline NormalizeOutcome success_week(const Date& d) {
    IsoWeek w = iso_week_of(d);
    if (!year_in_range(w.year))
        return {std::nullopt, UnnormalizableReason::invalid_date};
    return {NormalizedTime{Granularity::week, format_iso_week(w)}, {}};
}

inline NormalizeOutcome success_month(const Date& d) {
    if (!year_in_range(d.year))
        return {std::nullopt, UnnormalizableReason::invalid_date};
    return {NormalizedTime{Granularity::month, format_month(d)}, {}};
}

inline NormalizeOutcome success_year(int y) {
    if (!year_in_range(y))
        return {std::nullopt, UnnormalizableReason::invalid_date};
    return {NormalizedTime{Granularity::year, format_year(y)}, {}};
}

} // namespace detail

/// Normalize one time expression against an optional document-time anchor.
/// The rule grammar covers the expression shapes this pipeline's prompts
/// ask for; anything else is Unnormalizable and gets discarded upstream.
inline NormalizeOutcome normalize(std::string_view expr,
                                  const std::optional<Anchor>& anchor,
                                  const TimenormOptions& opts = {}) {
    using R = UnnormalizableReason;
    const std::string s = collapse_whitespace(to_lower(detail::strip_outer_punct(expr)));
    if (s.empty()) return {std::nullopt, R::unknown_shape};

    auto need_anchor = [&]() { return !anchor.has_value(); };

    static const std::regex slash_y4(R"(^(\d{1,2})/(\d{1,2})/(\d{4})$)");
    static const std::regex dash_y4(R"(^(\d{1,2})-(\d{1,2})-(\d{4})$)");
    static const std::regex slash_y2(R"(^(\d{1,2})/(\d{1,2})/(\d{2})$)");
    static const std::regex verbose_date(R"(^([a-z]+\.?) (\d{1,2})(?:st|nd|rd|th)?,? (\d{4})$)");
    static const std::regex month_day(R"(^([a-z]+\.?) (\d{1,2})(?:st|nd|rd|th)?$)");
    static const std::regex month_year(R"(^([a-z]+\.?),? (\d{4})$)");
    static const std::regex year_only(R"(^(\d{4})$)");
    static const std::regex n_units_ago(R"(^(\d+) (day|week|month|year)s? ago$)");
    static const std::regex last_next_this(R"(^(last|next|this) (week|month|year)$)");

    std::smatch m;

    // (a) numeric dates
    if (std::regex_match(s, m, slash_y4) || std::regex_match(s, m, dash_y4)) {
        Date d{std::stoi(m[3]), std::stoi(m[1]), std::stoi(m[2])};
        if (!is_valid_date(d)) return {std::nullopt, R::invalid_date};
        return detail::success_day(d);
    }
    if (std::regex_match(s, m, slash_y2)) {
        int yy = std::stoi(m[3]);
        Date d{yy <= 29 ? 2000 + yy : 1900 + yy, std::stoi(m[1]), std::stoi(m[2])};
        if (!is_valid_date(d)) return {std::nullopt, R::invalid_date};
        return detail::success_day(d);
    }

    // (e) deictics
    if (s == "today" || s == "yesterday" || s == "tomorrow") {
        if (need_anchor()) return {std::nullopt, R::missing_anchor};
        long off = s == "yesterday" ? -1 : s == "tomorrow" ? 1 : 0;
        return detail::success_day(add_days(anchor->doctime, off));
    }

    // (f) "N unit(s) ago" -> day via calendar arithmetic
    if (std::regex_match(s, m, n_units_ago)) {
        auto n = detail::to_ll(m[1]);
        if (!n || *n > 1000000) return {std::nullopt, R::unknown_shape};
        if (need_anchor()) return {std::nullopt, R::missing_anchor};
        const Date& a = anchor->doctime;
        const std::string unit = m[2];
        Date d;
        if (unit == "day") d = add_days(a, -*n);
        else if (unit == "week") d = add_days(a, -7 * *n);
        else if (unit == "month") d = add_months_clamped(a, -*n);
        else d = add_years_clamped(a, -*n);
        return detail::success_day(d);
    }

    // (g) last/next/this week|month|year
    if (std::regex_match(s, m, last_next_this)) {
        if (need_anchor()) return {std::nullopt, R::missing_anchor};
        const Date& a = anchor->doctime;
        const std::string which = m[1], unit = m[2];
        if (unit == "week") {
            if (which == "last") {
                // Reference asymmetry: "last week" comes out at day
                // granularity, "next week" at week granularity.
                Date d = add_days(a, -7);
                return opts.strict_iso_fixups ? detail::success_week(d)
                                              : detail::success_day(d);
            }
            if (which == "next") return detail::success_week(add_days(a, 7));
            return detail::success_week(a);
        }
        if (unit == "month") {
            long off = which == "last" ? -1 : which == "next" ? 1 : 0;
            return detail::success_month(add_months_clamped(a, off));
        }
        long off = which == "last" ? -1 : which == "next" ? 1 : 0;
        return detail::success_year(a.year + static_cast<int>(off));
    }

    // (b) verbose dates "Month D, YYYY"
    if (std::regex_match(s, m, verbose_date)) {
        auto mon = detail::month_from_name(m[1].str());
        if (mon) {
            Date d{std::stoi(m[3]), *mon, std::stoi(m[2])};
            if (!is_valid_date(d)) return {std::nullopt, R::invalid_date};
            return detail::success_day(d);
        }
    }

    // (c) "Month D" without year, resolved against the anchor
    if (std::regex_match(s, m, month_day)) {
        auto mon = detail::month_from_name(m[1].str());
        if (mon) {
            if (need_anchor()) return {std::nullopt, R::missing_anchor};
            const Date& a = anchor->doctime;
            int day = std::stoi(m[2]);
            Date d{a.year - 1, *mon, day};
            if (opts.strict_iso_fixups) {
                Date same_year{a.year, *mon, day};
                if (is_valid_date(same_year) && same_year <= a) d = same_year;
            }
            if (!is_valid_date(d)) return {std::nullopt, R::invalid_date};
            return detail::success_day(d);
        }
    }

    // (d) "Month YYYY" and bare "YYYY"
    if (std::regex_match(s, m, month_year)) {
        auto mon = detail::month_from_name(m[1].str());
        if (mon) return detail::success_month(Date{std::stoi(m[2]), *mon, 1});
    }
    if (std::regex_match(s, m, year_only)) {
        int y = std::stoi(m[1]);
        // Same plausibility window the doctime detector uses; keeps bare
        // numerics like lab values from normalizing as years.
        if (y < 1900 || y > 2100) return {std::nullopt, R::unknown_shape};
        return detail::success_year(y);
    }

    return {std::nullopt, R::unknown_shape};
}

} // namespace sact

#endif // SACT_TIMENORM_HPP
