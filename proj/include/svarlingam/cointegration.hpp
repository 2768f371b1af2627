#pragma once

// Johansen reduced-rank test with an unrestricted constant in the VECM
//   dY_t = c + Pi Y_{t-1} + sum_{i=1..k-1} G_i dY_{t-i} + e_t.

#include "svarlingam/core.hpp"
#include "svarlingam/data.hpp"
#include "svarlingam/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace svarlingam {

struct CointCriticalValues {
    std::array<double, 3> trace;   // 1%, 5%, 10%
    std::array<double, 3> maxeig;  // 1%, 5%, 10%
};

inline constexpr int kJohansenMaxDimension = 12;

/// Critical values for n - r = dim, unrestricted constant (linear trend in the
/// levels). Rows 1..11 from Osterwald-Lenum (1992), Table 1. Row 12 is a
/// 10,000-replication simulation of the asymptotic distribution, scaled to
/// the level of row 11.
inline CointCriticalValues johansen_critical_values(int dim) {
    // {99%, 95%, 90%} quantiles, i.e. 1%, 5%, 10% significance.
    static constexpr double trace[12][3] = {
        {6.65, 3.76, 2.69},       {20.04, 15.41, 13.33},    {35.65, 29.68, 26.79},
        {54.46, 47.21, 43.95},    {76.07, 68.52, 64.84},    {103.18, 94.15, 89.48},
        {133.57, 124.24, 118.50}, {168.36, 156.00, 150.53}, {204.95, 192.89, 186.39},
        {247.18, 233.13, 225.85}, {293.44, 277.71, 269.96}, {344.3, 327.1, 319.1},
    };
    static constexpr double maxeig[12][3] = {
        {6.65, 3.76, 2.69},    {18.63, 14.07, 12.07}, {25.52, 20.97, 18.60}, {32.24, 27.07, 24.73},
        {38.77, 33.46, 30.90}, {45.10, 39.37, 36.76}, {51.57, 45.28, 42.32}, {57.69, 51.42, 48.33},
        {62.80, 57.12, 53.98}, {69.09, 62.81, 59.62}, {75.95, 68.83, 65.38}, {82.1, 75.0, 71.5},
    };
    if (dim < 1 || dim > kJohansenMaxDimension)
        throw Error(Errc::unsupported_dimension,
                    "no Johansen critical values for n - r = " + std::to_string(dim));
    const auto i = static_cast<std::size_t>(dim - 1);
    return {{trace[i][0], trace[i][1], trace[i][2]}, {maxeig[i][0], maxeig[i][1], maxeig[i][2]}};
}

enum class RankTest { trace, maxeig };

struct CointReport {
    int lag = 0;
    std::size_t nobs = 0;  // effective T used to scale the statistics
    std::vector<double> eigenvalues;
    std::vector<double> trace_stats;   // H0: rank <= r, r = 0..n-1
    std::vector<double> maxeig_stats;  // H0: rank = r vs r + 1
    std::vector<CointCriticalValues> critical_values;
    double level = 0.05;
    RankTest rank_test = RankTest::trace;
    int selected_rank = 0;
    std::vector<std::string> names;
};

inline int level_index(double level) {
    if (std::abs(level - 0.01) < 1e-12) return 0;
    if (std::abs(level - 0.05) < 1e-12) return 1;
    if (std::abs(level - 0.10) < 1e-12) return 2;
    throw Error(Errc::config, "significance level must be 0.01, 0.05 or 0.10");
}

/// Johansen trace and maximum-eigenvalue tests on the levels in `panel`.
/// `lag` is the VAR order in levels (k - 1 lagged differences enter the VECM).
inline CointReport johansen_test(const Panel& panel, int lag, double level = 0.05,
                                 RankTest rank_test = RankTest::trace) {
    const Eigen::Index T = panel.rows();
    const Eigen::Index n = panel.cols();
    if (lag < 1) throw Error(Errc::config, "Johansen lag must be at least 1");
    if (n > kJohansenMaxDimension)
        throw Error(Errc::unsupported_dimension, "Johansen test supports at most 12 variables");
    if (T <= n * lag + n + 10)
        throw Error(Errc::insufficient_data, "too few observations for the Johansen test");
    const int li = level_index(level);

    const Matrix& Y = panel.values;
    const Eigen::Index rows = T - lag;
    const Eigen::Index kz2 = 1 + n * (lag - 1);
    Matrix Z0(rows, n), Z1(rows, n), Z2(rows, kz2);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = r + lag;
        Z0.row(r) = Y.row(t) - Y.row(t - 1);
        Z1.row(r) = Y.row(t - 1);
        Z2(r, 0) = 1.0;
        for (int i = 1; i < lag; ++i)
            Z2.block(r, 1 + n * (i - 1), 1, n) = Y.row(t - i) - Y.row(t - i - 1);
    }
    const auto f0 = stats::ols(Z2, Z0);
    const auto f1 = stats::ols(Z2, Z1);
    const Matrix& R0 = f0.residuals;
    const Matrix& R1 = f1.residuals;
    const auto Td = static_cast<double>(rows);
    const Matrix S00 = R0.transpose() * R0 / Td;
    const Matrix S11 = R1.transpose() * R1 / Td;
    const Matrix S01 = R0.transpose() * R1 / Td;

    auto singular = [](const Matrix& S) {
        const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(S, Eigen::EigenvaluesOnly).eigenvalues();
        return !(ev(0) > 1e-12 * ev(ev.size() - 1));
    };
    if (singular(S00) || singular(S11))
        throw Error(Errc::rank_deficient, "singular product-moment matrix in the Johansen test");
    Eigen::LLT<Matrix> l00(S00), l11(S11);

    // Symmetric form: L11^{-1} S10 S00^{-1} S01 L11^{-T}.
    const Matrix L11 = l11.matrixL();
    const Matrix A = L11.triangularView<Eigen::Lower>().solve(S01.transpose());
    const Matrix M = A * l00.solve(A.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (M + M.transpose()));
    Vector ev = es.eigenvalues().reverse();

    CointReport rep;
    rep.lag = lag;
    rep.nobs = static_cast<std::size_t>(rows);
    rep.level = level;
    rep.rank_test = rank_test;
    rep.names = panel.names;
    for (Eigen::Index i = 0; i < n; ++i) rep.eigenvalues.push_back(std::clamp(ev(i), 0.0, 1.0 - 1e-15));

    std::vector<double> terms;
    for (double l : rep.eigenvalues) terms.push_back(-Td * std::log1p(-l));
    double tail = 0.0;
    rep.trace_stats.assign(static_cast<std::size_t>(n), 0.0);
    rep.maxeig_stats.assign(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index r = n - 1; r >= 0; --r) {
        const auto ri = static_cast<std::size_t>(r);
        tail += terms[ri];
        rep.trace_stats[ri] = tail;
        rep.maxeig_stats[ri] = terms[ri];
    }
    rep.selected_rank = static_cast<int>(n);
    for (Eigen::Index r = 0; r < n; ++r)
        rep.critical_values.push_back(johansen_critical_values(static_cast<int>(n - r)));
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto ri = static_cast<std::size_t>(r);
        const auto& cv = rep.critical_values[ri];
        const bool reject = rank_test == RankTest::trace
                                ? rep.trace_stats[ri] > cv.trace[static_cast<std::size_t>(li)]
                                : rep.maxeig_stats[ri] > cv.maxeig[static_cast<std::size_t>(li)];
        if (!reject) {
            rep.selected_rank = static_cast<int>(r);
            break;
        }
    }
    return rep;
}

}  // namespace svarlingam
