#pragma once

// Augmented Dickey-Fuller regression
//   dy_t = a (+ b t) + rho y_{t-1} + sum_{i=1..L} g_i dy_{t-i} + e_t
// with the t-ratio of rho compared against asymptotic critical values.

#include "svarlingam/core.hpp"
#include "svarlingam/stats.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace svarlingam {

enum class AdfSpec { constant, trend };

inline const char* to_string(AdfSpec s) { return s == AdfSpec::constant ? "constant" : "trend"; }

/// Significance levels, ordered 1%, 5%, 10%.
inline constexpr std::array<double, 3> kSignificanceLevels = {0.01, 0.05, 0.10};

/// MacKinnon (1991/2010) asymptotic Dickey-Fuller tau critical values.
inline std::array<double, 3> adf_critical_values(AdfSpec spec) {
    if (spec == AdfSpec::constant) return {-3.43, -2.86, -2.57};
    return {-3.96, -3.41, -3.13};
}

struct AdfReport {
    std::string variable;
    int lag = 0;
    AdfSpec spec = AdfSpec::constant;
    double statistic = 0.0;
    std::array<double, 3> critical_values{};
    std::optional<double> reject_at;  // smallest level at which the unit root is rejected
    std::size_t nobs = 0;             // effective observations in the regression
};

struct AdfLagSelection {
    int lag = 0;
    std::vector<double> sic;        // per candidate lag 0..max_lag
    std::vector<double> statistic;  // ADF t-ratio per candidate on the common sample
    std::size_t nobs = 0;
};

namespace detail {

struct AdfFit {
    double tstat = 0.0;
    double ssr = 0.0;
    std::size_t nobs = 0;
    std::size_t ncoef = 0;
};

// Fits the ADF regression at `lag` over the sample that would be available
// with `sample_lag` (>= lag) lagged differences, so that candidates share rows.
inline AdfFit adf_regression(std::span<const double> y, int lag, int sample_lag, AdfSpec spec) {
    const auto N = static_cast<Eigen::Index>(y.size());
    const Eigen::Index first = sample_lag + 1;  // index into y of the first dy_t used
    const Eigen::Index rows = N - first;
    const Eigen::Index det = spec == AdfSpec::constant ? 1 : 2;
    const Eigen::Index k = det + 1 + lag;
    if (rows <= k) throw Error(Errc::insufficient_data, "series too short for ADF regression");

    Matrix X(rows, k);
    Vector dy(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = first + r;
        dy(r) = y[t] - y[t - 1];
        X(r, 0) = 1.0;
        if (spec == AdfSpec::trend) X(r, 1) = static_cast<double>(t);
        X(r, det) = y[t - 1];
        for (int i = 1; i <= lag; ++i) X(r, det + i) = y[t - i] - y[t - i - 1];
    }
    const auto fit = stats::ols(X, dy);
    const Vector resid = fit.residuals.col(0);
    const Vector se = stats::ols_standard_errors(X, resid);
    if (!(se(det) > 0.0)) throw Error(Errc::degenerate, "zero standard error for the lagged level");
    return {fit.coef(det, 0) / se(det), resid.squaredNorm(), static_cast<std::size_t>(rows),
            static_cast<std::size_t>(k)};
}

inline void check_finite(std::span<const double> y) {
    for (double v : y)
        if (!std::isfinite(v)) throw Error(Errc::domain, "ADF input contains non-finite values");
}

}  // namespace detail

inline AdfReport make_adf_report(std::string variable, int lag, AdfSpec spec, double statistic,
                                 std::size_t nobs) {
    AdfReport rep;
    rep.variable = std::move(variable);
    rep.lag = lag;
    rep.spec = spec;
    rep.statistic = statistic;
    rep.critical_values = adf_critical_values(spec);
    rep.nobs = nobs;
    for (std::size_t i = 0; i < 3; ++i)
        if (statistic < rep.critical_values[i]) {
            rep.reject_at = kSignificanceLevels[i];
            break;
        }
    return rep;
}

/// ADF test at a fixed lag. `sample_lag` trims the start of the sample as if
/// that many lags were present (defaults to `lag`, i.e. the longest sample).
inline AdfReport adf_test(std::span<const double> y, int lag, AdfSpec spec = AdfSpec::constant,
                          std::string variable = {}, std::optional<int> sample_lag = {}) {
    if (lag < 0) throw Error(Errc::config, "ADF lag must be nonnegative");
    const int sl = sample_lag.value_or(lag);
    if (sl < lag) throw Error(Errc::config, "sample_lag must be at least lag");
    const std::size_t need = static_cast<std::size_t>(lag) + (spec == AdfSpec::constant ? 3 : 4);
    if (y.size() <= need) throw Error(Errc::insufficient_data, "series too short for ADF at lag " + std::to_string(lag));
    detail::check_finite(y);
    const auto fit = detail::adf_regression(y, lag, sl, spec);
    return make_adf_report(std::move(variable), lag, spec, fit.tstat, fit.nobs);
}

/// Schwarz criterion over lags 0..max_lag on the common sample
/// (log(SSR/T) + k log(T)/T, k = estimated coefficients).
inline AdfLagSelection select_lag_sic_detail(std::span<const double> y, int max_lag,
                                             AdfSpec spec = AdfSpec::constant) {
    if (max_lag < 0) throw Error(Errc::config, "max_lag must be nonnegative");
    if (y.size() <= static_cast<std::size_t>(max_lag) + 10)
        throw Error(Errc::insufficient_data, "series too short for lag selection up to " + std::to_string(max_lag));
    detail::check_finite(y);
    AdfLagSelection sel;
    double best = 0.0;
    for (int lag = 0; lag <= max_lag; ++lag) {
        const auto fit = detail::adf_regression(y, lag, max_lag, spec);
        const auto T = static_cast<double>(fit.nobs);
        const double sic = std::log(fit.ssr / T) + static_cast<double>(fit.ncoef) * std::log(T) / T;
        sel.sic.push_back(sic);
        sel.statistic.push_back(fit.tstat);
        sel.nobs = fit.nobs;
        if (lag == 0 || sic < best) {
            best = sic;
            sel.lag = lag;
        }
    }
    return sel;
}

inline int select_lag_sic(std::span<const double> y, int max_lag, AdfSpec spec = AdfSpec::constant) {
    return select_lag_sic_detail(y, max_lag, spec).lag;
}

/// Lag chosen by SIC, then the test re-run on the longest sample for that lag.
inline AdfReport adf_auto(std::span<const double> y, int max_lag, AdfSpec spec = AdfSpec::constant,
                          std::string variable = {}) {
    const int lag = select_lag_sic(y, max_lag, spec);
    return adf_test(y, lag, spec, std::move(variable));
}

}  // namespace svarlingam
