#pragma once

// Price ingestion, exchange-rate construction, calendar filling and the
// aligned Panel that every estimator consumes. Dates are plain calendar days;
// callers are responsible for sourcing all series in one time zone.

#include "svarlingam/core.hpp"
#include "svarlingam/csv.hpp"
#include "svarlingam/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace svarlingam {

class Date {
public:
    Date() = default;
    explicit Date(std::chrono::sys_days d) : days_(d) {}
    Date(int y, unsigned m, unsigned d)
        : days_(std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                            std::chrono::day{d}}) {}

    /// Accepts YYYY-MM-DD, optionally followed by an ISO-8601 time part
    /// ("T..." or " ...") which is ignored.
    static std::optional<Date> parse(std::string_view s) {
        s = csv::trim(s);
        if (s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
        if (s.size() > 10 && s[10] != 'T' && s[10] != ' ') return std::nullopt;
        int y = 0;
        unsigned m = 0, d = 0;
        auto num = [](std::string_view part, auto& out) {
            auto r = std::from_chars(part.data(), part.data() + part.size(), out);
            return r.ec == std::errc() && r.ptr == part.data() + part.size();
        };
        if (!num(s.substr(0, 4), y) || !num(s.substr(5, 2), m) || !num(s.substr(8, 2), d))
            return std::nullopt;
        std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
        if (!ymd.ok()) return std::nullopt;
        return Date(std::chrono::sys_days{ymd});
    }

    static Date from_string(std::string_view s) {
        auto d = parse(s);
        if (!d) throw Error(Errc::parse, "unparseable date '" + std::string(s) + "'");
        return *d;
    }

    std::string str() const {
        const std::chrono::year_month_day ymd{days_};
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        return buf;
    }

    std::chrono::sys_days days() const { return days_; }
    Date next() const { return Date(days_ + std::chrono::days{1}); }
    Date prev() const { return Date(days_ - std::chrono::days{1}); }

    friend auto operator<=>(const Date&, const Date&) = default;

private:
    std::chrono::sys_days days_{};
};

struct Observation {
    Date date;
    double value = 0.0;
};

/// A named, strictly date-ascending series of finite values.
struct RawSeries {
    std::string name;
    std::vector<Observation> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// Aligned T x n observation matrix sharing one date index.
struct Panel {
    std::vector<std::string> names;
    std::vector<Date> dates;
    Matrix values;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

struct VariableStats {
    std::string name;
    std::size_t n = 0;
    double min = 0.0, q1 = 0.0, median = 0.0, mean = 0.0, q3 = 0.0, max = 0.0;
    double sd = 0.0, skewness = 0.0, kurtosis = 0.0;
};

using StatsTable = std::vector<VariableStats>;

/// Loads one price column keyed by a date column. Rows are sorted ascending;
/// a repeated date is an error naming that date.
inline RawSeries load_price_csv(const std::string& path, const std::string& date_column = "Date",
                                const std::string& value_column = "Close",
                                std::string name = {}) {
    const csv::Table t = csv::read_file(path);
    const std::size_t di = csv::column_index(t, date_column, path);
    const std::size_t vi = csv::column_index(t, value_column, path);
    if (t.rows.empty()) throw Error(Errc::empty_input, path + " has no data rows");

    RawSeries s;
    s.name = name.empty() ? value_column : std::move(name);
    s.points.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = path + ":" + std::to_string(t.line_numbers[r]);
        if (row.size() <= std::max(di, vi)) throw Error(Errc::parse, where + ": too few fields");
        const auto date = Date::parse(row[di]);
        if (!date) throw Error(Errc::parse, where + ": unparseable date '" + row[di] + "'");
        double v = 0.0;
        if (!csv::parse_double(row[vi], v) || !std::isfinite(v))
            throw Error(Errc::parse, where + ": unparseable value '" + row[vi] + "'");
        s.points.push_back({*date, v});
    }
    std::stable_sort(s.points.begin(), s.points.end(),
                     [](const Observation& a, const Observation& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < s.points.size(); ++i)
        if (s.points[i - 1].date == s.points[i].date)
            throw Error(Errc::parse, path + ": duplicate date " + s.points[i].date.str());
    return s;
}

/// Crypto-asset exchange rate: EUR price over USD price on shared dates.
inline RawSeries compute_cer(const RawSeries& p_eur, const RawSeries& p_usd, std::string name = {}) {
    if (p_eur.empty() || p_usd.empty()) throw Error(Errc::empty_input, "CER inputs must be nonempty");
    RawSeries out;
    out.name = name.empty() ? p_eur.name + "/" + p_usd.name : std::move(name);
    std::size_t j = 0;
    for (const auto& e : p_eur.points) {
        while (j < p_usd.points.size() && p_usd.points[j].date < e.date) ++j;
        if (j == p_usd.points.size()) break;
        if (p_usd.points[j].date != e.date) continue;
        const double usd = p_usd.points[j].value;
        if (!(usd > 0.0))
            throw Error(Errc::domain, "nonpositive USD price on " + e.date.str());
        out.points.push_back({e.date, e.value / usd});
    }
    if (out.empty()) throw Error(Errc::alignment, "EUR and USD series share no dates");
    return out;
}

/// Forward-fills every calendar day in [start, end] from the most recent
/// observation at or before it (weekends and holidays take the last close).
/// Observations outside the window are dropped.
inline RawSeries weekend_fill(const RawSeries& series, Date start, Date end) {
    if (series.empty()) throw Error(Errc::empty_input, series.name + ": empty series");
    if (end < start) throw Error(Errc::config, "weekend_fill: start after end");
    if (start < series.points.front().date)
        throw Error(Errc::uncoverable_gap, series.name + ": no observation at or before " + start.str());
    RawSeries out;
    out.name = series.name;
    std::size_t j = 0;
    double last = series.points.front().value;
    for (Date d = start; d <= end; d = d.next()) {
        while (j < series.points.size() && series.points[j].date <= d) last = series.points[j++].value;
        out.points.push_back({d, last});
    }
    return out;
}

/// Fills the span from the first to the last observation.
inline RawSeries weekend_fill(const RawSeries& series) {
    if (series.empty()) throw Error(Errc::empty_input, series.name + ": empty series");
    return weekend_fill(series, series.points.front().date, series.points.back().date);
}

inline RawSeries log_transform(const RawSeries& series) {
    RawSeries out = series;
    for (auto& p : out.points) {
        if (!(p.value > 0.0))
            throw Error(Errc::domain, series.name + ": nonpositive value on " + p.date.str());
        p.value = std::log(p.value);
    }
    return out;
}

/// Inner join on dates, columns in input order.
inline Panel align_panel(const std::vector<RawSeries>& series_list) {
    if (series_list.size() < 2) throw Error(Errc::alignment, "align_panel needs at least two series");
    std::vector<Date> common;
    for (const auto& p : series_list.front().points) common.push_back(p.date);
    for (std::size_t k = 1; k < series_list.size(); ++k) {
        std::vector<Date> next;
        const auto& pts = series_list[k].points;
        std::size_t j = 0;
        for (const Date& d : common) {
            while (j < pts.size() && pts[j].date < d) ++j;
            if (j < pts.size() && pts[j].date == d) next.push_back(d);
        }
        common = std::move(next);
    }
    if (common.empty()) throw Error(Errc::alignment, "series share no common dates");

    Panel panel;
    panel.dates = common;
    panel.values.resize(static_cast<Eigen::Index>(common.size()),
                        static_cast<Eigen::Index>(series_list.size()));
    for (std::size_t k = 0; k < series_list.size(); ++k) {
        panel.names.push_back(series_list[k].name);
        const auto& pts = series_list[k].points;
        std::size_t j = 0;
        for (std::size_t r = 0; r < common.size(); ++r) {
            while (pts[j].date < common[r]) ++j;
            panel.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = pts[j].value;
        }
    }
    return panel;
}

inline Panel slice_period(const Panel& panel, Date start, Date end) {
    if (end < start) throw Error(Errc::config, "slice_period: start after end");
    const auto lo = std::lower_bound(panel.dates.begin(), panel.dates.end(), start);
    const auto hi = std::upper_bound(panel.dates.begin(), panel.dates.end(), end);
    if (lo >= hi)
        throw Error(Errc::empty_slice, "no rows between " + start.str() + " and " + end.str());
    Panel out;
    out.names = panel.names;
    out.dates.assign(lo, hi);
    const auto first = static_cast<Eigen::Index>(lo - panel.dates.begin());
    out.values = panel.values.middleRows(first, static_cast<Eigen::Index>(hi - lo));
    return out;
}

/// First differences; the first date is dropped.
inline Panel difference(const Panel& panel) {
    if (panel.rows() < 2) throw Error(Errc::insufficient_data, "difference needs at least two rows");
    Panel out;
    out.names = panel.names;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.values = panel.values.bottomRows(panel.rows() - 1) - panel.values.topRows(panel.rows() - 1);
    return out;
}

inline VariableStats describe(const std::string& name, std::vector<double> x) {
    if (x.size() < 2) throw Error(Errc::insufficient_data, name + ": need at least two observations");
    VariableStats s;
    s.name = name;
    s.n = x.size();
    const auto m = stats::central_moments(x);
    std::sort(x.begin(), x.end());
    s.min = x.front();
    s.max = x.back();
    s.q1 = stats::quantile_sorted(x, 0.25);
    s.median = stats::quantile_sorted(x, 0.5);
    s.q3 = stats::quantile_sorted(x, 0.75);
    s.mean = m.mean;
    const auto n = static_cast<double>(x.size());
    s.sd = std::sqrt(m.m2 * n / (n - 1.0));
    s.skewness = stats::skewness(m);
    s.kurtosis = stats::excess_kurtosis(m);
    return s;
}

/// Per-column descriptive statistics: type-7 quartiles, sample sd (N-1),
/// skewness and excess kurtosis from standardized moments.
inline StatsTable summary_stats(const Panel& panel) {
    if (panel.rows() == 0) throw Error(Errc::empty_input, "summary_stats on empty panel");
    StatsTable table;
    for (Eigen::Index j = 0; j < panel.cols(); ++j) {
        const Vector col = panel.values.col(j);
        table.push_back(describe(panel.names[static_cast<std::size_t>(j)], stats::to_vector(col)));
    }
    return table;
}

inline StatsTable summary_stats(const RawSeries& series) {
    std::vector<double> x;
    for (const auto& p : series.points) x.push_back(p.value);
    return {describe(series.name, std::move(x))};
}

// ---- CSV export / import --------------------------------------------------

inline std::string panel_to_csv(const Panel& panel) {
    std::string out = "date";
    for (const auto& n : panel.names) out += "," + n;
    out += "\n";
    for (Eigen::Index r = 0; r < panel.rows(); ++r) {
        out += panel.dates[static_cast<std::size_t>(r)].str();
        for (Eigen::Index c = 0; c < panel.cols(); ++c) out += "," + csv::format(panel.values(r, c));
        out += "\n";
    }
    return out;
}

/// Reads a Panel CSV whose first column is the date and remaining columns are
/// variables (the format panel_to_csv writes).
inline Panel load_panel_csv(const std::string& path) {
    const csv::Table t = csv::read_file(path);
    if (t.header.size() < 2) throw Error(Errc::schema, path + ": panel needs a date and a value column");
    if (t.rows.empty()) throw Error(Errc::empty_input, path + " has no data rows");
    Panel p;
    p.names.assign(t.header.begin() + 1, t.header.end());
    p.values.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(p.names.size()));
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string where = path + ":" + std::to_string(t.line_numbers[r]);
        const auto& row = t.rows[r];
        if (row.size() != t.header.size()) throw Error(Errc::parse, where + ": wrong field count");
        const auto d = Date::parse(row[0]);
        if (!d) throw Error(Errc::parse, where + ": unparseable date '" + row[0] + "'");
        if (!p.dates.empty() && !(p.dates.back() < *d))
            throw Error(Errc::parse, where + ": dates not strictly increasing");
        p.dates.push_back(*d);
        for (std::size_t c = 1; c < row.size(); ++c) {
            double v = 0.0;
            if (!csv::parse_double(row[c], v) || !std::isfinite(v))
                throw Error(Errc::parse, where + ": unparseable value '" + row[c] + "'");
            p.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c - 1)) = v;
        }
    }
    return p;
}

/// Column order of the descriptive-statistics table.
inline std::string stats_to_csv(const StatsTable& table) {
    std::string out = "variable,N,min,q1,median,mean,q3,max,sd,skewness,kurtosis\n";
    for (const auto& s : table) {
        out += s.name + "," + std::to_string(s.n);
        for (double v : {s.min, s.q1, s.median, s.mean, s.q3, s.max, s.sd, s.skewness, s.kurtosis})
            out += "," + csv::format(v);
        out += "\n";
    }
    return out;
}

/// Builds a synthetic daily date index starting at `start`.
inline std::vector<Date> daily_dates(Date start, std::size_t count) {
    std::vector<Date> d;
    d.reserve(count);
    for (std::size_t i = 0; i < count; ++i, start = start.next()) d.push_back(start);
    return d;
}

inline Panel make_panel(const Matrix& values, std::vector<std::string> names = {},
                        Date start = Date(2000, 1, 1)) {
    Panel p;
    if (names.empty())
        for (Eigen::Index j = 0; j < values.cols(); ++j) names.push_back("y" + std::to_string(j + 1));
    p.names = std::move(names);
    p.dates = daily_dates(start, static_cast<std::size_t>(values.rows()));
    p.values = values;
    return p;
}

}  // namespace svarlingam
