#pragma once

// Normality and serial-correlation tests for VAR residuals.

#include "svarlingam/core.hpp"
#include "svarlingam/stats.hpp"
#include "svarlingam/var.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace svarlingam {

struct TestResult {
    double statistic = 0.0;
    double p = 1.0;
};

inline TestResult jarque_bera(std::span<const double> x) {
    if (x.size() < 8) throw Error(Errc::insufficient_data, "Jarque-Bera needs at least 8 observations");
    const auto m = stats::central_moments(x);
    if (!(m.m2 > 0.0)) throw Error(Errc::degenerate, "Jarque-Bera on a zero-variance sample");
    const double s = stats::skewness(m);
    const double k = stats::excess_kurtosis(m);
    const double jb = static_cast<double>(x.size()) / 6.0 * (s * s + k * k / 4.0);
    return {jb, stats::chi2_sf(jb, 2.0)};
}

namespace detail {

inline std::vector<double> sorted_checked(std::span<const double> x, const char* test) {
    if (x.size() < 12 || x.size() > 5000)
        throw Error(Errc::unsupported_size, std::string(test) + " supports 12 <= N <= 5000, got " +
                                                std::to_string(x.size()));
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    if (!(s.back() > s.front())) throw Error(Errc::degenerate, std::string(test) + " on a constant sample");
    return s;
}

inline std::vector<double> blom_scores(std::size_t n) {
    std::vector<double> m(n);
    const auto nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        m[i] = stats::normal_quantile((static_cast<double>(i + 1) - 0.375) / (nd + 0.25));
    return m;
}

inline double poly(std::span<const double> c, double x) {
    double r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

}  // namespace detail

/// Shapiro-Wilk W with Royston's (1992, 1995) coefficient and p-value
/// approximations, valid for 12 <= N <= 5000.
inline TestResult shapiro_wilk(std::span<const double> x) {
    const std::vector<double> s = detail::sorted_checked(x, "Shapiro-Wilk");
    const std::size_t n = s.size();
    const std::vector<double> m = detail::blom_scores(n);
    double mtm = 0.0;
    for (double v : m) mtm += v * v;
    const double u = 1.0 / std::sqrt(static_cast<double>(n));
    static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
    static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    const double mn = m[n - 1], mn1 = m[n - 2];
    const double an = mn / std::sqrt(mtm) + detail::poly(c1, u);
    const double an1 = mn1 / std::sqrt(mtm) + detail::poly(c2, u);
    const double phi = (mtm - 2.0 * mn * mn - 2.0 * mn1 * mn1) / (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
    std::vector<double> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = m[i] / std::sqrt(phi);
    a[n - 1] = an;
    a[n - 2] = an1;
    a[0] = -an;
    a[1] = -an1;

    const double mean = stats::mean(s);
    double num = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += a[i] * s[i];
        ss += (s[i] - mean) * (s[i] - mean);
    }
    const double w = std::min(num * num / ss, 1.0);

    static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
    const double ln = std::log(static_cast<double>(n));
    const double mu = detail::poly(c5, ln);
    const double sigma = std::exp(detail::poly(c6, ln));
    if (w >= 1.0) return {w, 1.0};
    const double z = (std::log(1.0 - w) - mu) / sigma;
    return {w, stats::normal_sf(z)};
}

/// Shapiro-Francia W' (squared correlation with Blom scores) and Royston's
/// (1993) normal approximation for its p-value.
inline TestResult shapiro_francia(std::span<const double> x) {
    const std::vector<double> s = detail::sorted_checked(x, "Shapiro-Francia");
    const std::size_t n = s.size();
    const std::vector<double> m = detail::blom_scores(n);
    const double ms = stats::mean(s), mm = stats::mean(m);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (s[i] - ms) * (m[i] - mm);
        sxx += (s[i] - ms) * (s[i] - ms);
        syy += (m[i] - mm) * (m[i] - mm);
    }
    const double w = std::min(sxy * sxy / (sxx * syy), 1.0);
    const double u = std::log(static_cast<double>(n));
    const double v = std::log(u);
    const double mu = -1.2725 + 1.0521 * (v - u);
    const double sigma = 1.0308 - 0.26758 * (v + 2.0 / u);
    if (w >= 1.0) return {w, 1.0};
    return {w, stats::normal_sf((std::log(1.0 - w) - mu) / sigma)};
}

/// Ljung-Box Q over lags 1..h; the chi-square reference has h - fitdf degrees
/// of freedom.
inline TestResult ljung_box(std::span<const double> x, int h, int fitdf = 0) {
    const std::size_t N = x.size();
    if (h < 1) throw Error(Errc::config, "Ljung-Box lag count must be positive");
    if (N <= static_cast<std::size_t>(h) + 1)
        throw Error(Errc::insufficient_data, "Ljung-Box needs more than h + 1 observations");
    if (h - fitdf < 1) throw Error(Errc::config, "Ljung-Box degrees of freedom must be positive");
    const double mean = stats::mean(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - mean) * (v - mean);
    if (!(c0 > 0.0)) throw Error(Errc::degenerate, "Ljung-Box on a zero-variance series");
    const auto n = static_cast<double>(N);
    double q = 0.0;
    for (int k = 1; k <= h; ++k) {
        double ck = 0.0;
        for (std::size_t t = static_cast<std::size_t>(k); t < N; ++t)
            ck += (x[t] - mean) * (x[t - static_cast<std::size_t>(k)] - mean);
        const double rho = ck / c0;
        q += rho * rho / (n - k);
    }
    q *= n * (n + 2.0);
    return {q, stats::chi2_sf(q, static_cast<double>(h - fitdf))};
}

struct ResidualDiagnostics {
    std::string name;
    double kurtosis = 0.0;  // excess
    TestResult shapiro_wilk;
    TestResult shapiro_francia;
    TestResult jarque_bera;
    TestResult ljung_box;
};

struct DiagnosticsReport {
    int ljung_box_lag = 10;
    std::vector<ResidualDiagnostics> columns;
};

/// Normality and serial-correlation diagnostics per residual column.
/// Samples above 5000 rows skip the Shapiro tests (reported as NaN).
inline DiagnosticsReport diagnose_residuals(const Matrix& residuals, const std::vector<std::string>& names,
                                            int ljung_box_lag = 10) {
    DiagnosticsReport rep;
    rep.ljung_box_lag = ljung_box_lag;
    for (Eigen::Index j = 0; j < residuals.cols(); ++j) {
        const std::vector<double> x = stats::to_vector(residuals.col(j));
        ResidualDiagnostics d;
        d.name = static_cast<std::size_t>(j) < names.size() ? names[static_cast<std::size_t>(j)]
                                                            : "e" + std::to_string(j + 1);
        d.kurtosis = stats::excess_kurtosis(stats::central_moments(x));
        if (x.size() >= 12 && x.size() <= 5000) {
            d.shapiro_wilk = shapiro_wilk(x);
            d.shapiro_francia = shapiro_francia(x);
        } else {
            d.shapiro_wilk = d.shapiro_francia = {std::nan(""), std::nan("")};
        }
        d.jarque_bera = jarque_bera(x);
        d.ljung_box = ljung_box(x, ljung_box_lag);
        rep.columns.push_back(d);
    }
    return rep;
}

inline DiagnosticsReport diagnose(const VarModel& model, int ljung_box_lag = 10) {
    return diagnose_residuals(model.residuals, model.names, ljung_box_lag);
}

/// Ordered residuals against Blom normal scores, one block per variable,
/// for external Q-Q plotting.
inline std::string qq_to_csv(const VarModel& model) {
    std::string out = "variable,rank,theoretical,residual\n";
    const auto n = static_cast<std::size_t>(model.nobs());
    const std::vector<double> m = detail::blom_scores(n);
    for (Eigen::Index j = 0; j < model.dim(); ++j) {
        std::vector<double> x = stats::to_vector(model.residuals.col(j));
        std::sort(x.begin(), x.end());
        const auto ju = static_cast<std::size_t>(j);
        const std::string label = ju < model.names.size() ? model.names[ju] : "y" + std::to_string(j + 1);
        for (std::size_t i = 0; i < n; ++i)
            out += label + "," + std::to_string(i + 1) + "," +
                   csv::format(m[i]) + "," + csv::format(x[i]) + "\n";
    }
    return out;
}

}  // namespace svarlingam
