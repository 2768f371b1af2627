#pragma once

#include "svarlingam/core.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace svarlingam::stats {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

inline double normal_quantile(double p) {
    return boost::math::quantile(boost::math::normal_distribution<double>(0.0, 1.0), p);
}

/// Upper tail P(X > x) of a chi-square with `df` degrees of freedom.
inline double chi2_sf(double x, double df) {
    if (x <= 0.0) return 1.0;
    if (!std::isfinite(x)) return 0.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared_distribution<double>(df), x));
}

/// Linear-interpolation quantile between order statistics (Hyndman-Fan type 7).
/// `sorted` must be ascending and nonempty.
inline double quantile_sorted(std::span<const double> sorted, double q) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, q);
}

inline double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

/// Central moments m2, m3, m4 with divisor N.
struct CentralMoments {
    double mean = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
};

inline CentralMoments central_moments(std::span<const double> x) {
    CentralMoments m;
    m.mean = mean(x);
    for (double v : x) {
        const double d = v - m.mean;
        const double d2 = d * d;
        m.m2 += d2;
        m.m3 += d2 * d;
        m.m4 += d2 * d2;
    }
    const auto n = static_cast<double>(x.size());
    m.m2 /= n;
    m.m3 /= n;
    m.m4 /= n;
    return m;
}

/// Third standardized moment; 0 for a constant sample.
inline double skewness(const CentralMoments& m) {
    if (m.m2 <= 0.0) return 0.0;
    return m.m3 / std::pow(m.m2, 1.5);
}

/// Fourth standardized moment minus 3; 0 for a constant sample.
inline double excess_kurtosis(const CentralMoments& m) {
    if (m.m2 <= 0.0) return 0.0;
    return m.m4 / (m.m2 * m.m2) - 3.0;
}

inline std::vector<double> to_vector(const Eigen::Ref<const Vector>& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

/// Least-squares fit of one or more responses on a shared regressor matrix.
struct OlsFit {
    Matrix coef;       // k x m (one column per response)
    Matrix residuals;  // N x m
    Eigen::Index rank = 0;
};

/// Solves min ||Y - X C|| column-wise. Throws Errc::degenerate when X is
/// rank deficient (relative pivot threshold 1e-10).
inline OlsFit ols(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Matrix>& Y) {
    Eigen::ColPivHouseholderQR<Matrix> qr(X);
    qr.setThreshold(1e-10);
    OlsFit fit;
    fit.rank = qr.rank();
    if (fit.rank < X.cols())
        throw Error(Errc::degenerate, "regressor matrix is rank deficient (rank " +
                                          std::to_string(fit.rank) + " of " +
                                          std::to_string(X.cols()) + ")");
    fit.coef = qr.solve(Y);
    fit.residuals = Y - X * fit.coef;
    return fit;
}

/// Standard error of every coefficient in a single-response regression.
inline Vector ols_standard_errors(const Eigen::Ref<const Matrix>& X, const Eigen::Ref<const Vector>& resid) {
    const auto n = static_cast<double>(X.rows());
    const auto k = static_cast<double>(X.cols());
    const double s2 = resid.squaredNorm() / (n - k);
    const Matrix xtx_inv = (X.transpose() * X).ldlt().solve(Matrix::Identity(X.cols(), X.cols()));
    return (s2 * xtx_inv.diagonal()).cwiseSqrt();
}

/// Sample covariance with divisor N (columns are variables).
inline Matrix covariance(const Eigen::Ref<const Matrix>& x) {
    const RowVector mu = x.colwise().mean();
    const Matrix c = x.rowwise() - mu;
    return (c.transpose() * c) / static_cast<double>(x.rows());
}

}  // namespace svarlingam::stats
