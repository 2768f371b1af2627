#pragma once

// Reduced-form VAR(p): y_t = gamma + sum_{h=1..p} Pi_h y_{t-h} + eps_t,
// estimated equation by equation with least squares.

#include "svarlingam/core.hpp"
#include "svarlingam/data.hpp"
#include "svarlingam/stats.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace svarlingam {

struct VarModel {
    int p = 0;
    Vector gamma;             // intercept, n
    std::vector<Matrix> pi;   // Pi_1..Pi_p, each n x n
    Matrix residuals;         // (T - p) x n
    Matrix sigma;             // residual covariance, divisor T - p
    std::vector<std::string> names;
    std::vector<Date> dates;  // dates of the residual rows

    Eigen::Index dim() const { return gamma.size(); }
    Eigen::Index nobs() const { return residuals.rows(); }
};

namespace detail {

/// Regressor matrix [1, y_{t-1}', ..., y_{t-p}'] for rows t = first..T-1.
inline Matrix var_design(const Matrix& Y, int p, Eigen::Index first) {
    const Eigen::Index n = Y.cols();
    const Eigen::Index rows = Y.rows() - first;
    Matrix X(rows, 1 + n * p);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Eigen::Index t = first + r;
        X(r, 0) = 1.0;
        for (int h = 1; h <= p; ++h) X.block(r, 1 + n * (h - 1), 1, n) = Y.row(t - h);
    }
    return X;
}

inline VarModel unpack_var(const Matrix& coef, Matrix residuals, int p) {
    const Eigen::Index n = coef.cols();
    VarModel m;
    m.p = p;
    m.gamma = coef.row(0).transpose();
    for (int h = 1; h <= p; ++h) m.pi.push_back(coef.block(1 + n * (h - 1), 0, n, n).transpose());
    m.residuals = std::move(residuals);
    m.sigma = m.residuals.transpose() * m.residuals / static_cast<double>(m.residuals.rows());
    return m;
}

}  // namespace detail

/// Least-squares VAR(p) with intercept on rows p+1..T.
inline VarModel fit_var(const Matrix& Y, int p) {
    const Eigen::Index T = Y.rows();
    const Eigen::Index n = Y.cols();
    if (p < 1) throw Error(Errc::config, "VAR lag order must be at least 1");
    if (T <= n * p + n + 1)
        throw Error(Errc::insufficient_data, "too few observations for VAR(" + std::to_string(p) + ")");
    const Matrix X = detail::var_design(Y, p, p);
    const auto fit = stats::ols(X, Y.bottomRows(T - p));
    VarModel m = detail::unpack_var(fit.coef, fit.residuals, p);
    for (Eigen::Index j = 0; j < n; ++j) m.names.push_back("y" + std::to_string(j + 1));
    return m;
}

inline VarModel fit_var(const Panel& panel, int p) {
    VarModel m = fit_var(panel.values, p);
    m.names = panel.names;
    if (!panel.dates.empty()) m.dates.assign(panel.dates.begin() + p, panel.dates.end());
    return m;
}

/// One-step fitted values for rows p+1..T.
inline Matrix var_fitted(const VarModel& m, const Matrix& Y) {
    Matrix coef(1 + m.dim() * m.p, m.dim());
    coef.row(0) = m.gamma.transpose();
    for (int h = 1; h <= m.p; ++h)
        coef.block(1 + m.dim() * (h - 1), 0, m.dim(), m.dim()) = m.pi[static_cast<std::size_t>(h - 1)].transpose();
    return detail::var_design(Y, m.p, m.p) * coef;
}

struct VarLagSelection {
    int p = 1;
    std::vector<double> sic;  // candidates 1..max_p
    std::size_t nobs = 0;
};

/// ln det Sigma_p + p n^2 ln(T_eff) / T_eff over a shared sample starting at max_p.
inline VarLagSelection select_var_lag_sic_detail(const Matrix& Y, int max_p) {
    const Eigen::Index T = Y.rows();
    const Eigen::Index n = Y.cols();
    if (max_p < 1) throw Error(Errc::config, "max lag must be at least 1");
    if (T <= n * max_p + n + 10) throw Error(Errc::insufficient_data, "too few observations for lag selection");
    VarLagSelection sel;
    const Matrix Yr = Y.bottomRows(T - max_p);
    const auto Te = static_cast<double>(T - max_p);
    sel.nobs = static_cast<std::size_t>(T - max_p);
    double best = 0.0;
    for (int p = 1; p <= max_p; ++p) {
        const Matrix X = detail::var_design(Y, p, max_p);
        const auto fit = stats::ols(X, Yr);
        const Matrix S = fit.residuals.transpose() * fit.residuals / Te;
        Eigen::LLT<Matrix> llt(S);
        if (llt.info() != Eigen::Success) throw Error(Errc::degenerate, "singular residual covariance");
        const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
        const double sic = logdet + static_cast<double>(p * n * n) * std::log(Te) / Te;
        sel.sic.push_back(sic);
        if (p == 1 || sic < best) {
            best = sic;
            sel.p = p;
        }
    }
    return sel;
}

inline int select_var_lag_sic(const Panel& panel, int max_p) {
    return select_var_lag_sic_detail(panel.values, max_p).p;
}

/// Largest modulus among the companion-matrix eigenvalues.
inline double companion_spectral_radius(const std::vector<Matrix>& pi) {
    if (pi.empty()) return 0.0;
    const Eigen::Index n = pi.front().rows();
    const auto p = static_cast<Eigen::Index>(pi.size());
    Matrix C = Matrix::Zero(n * p, n * p);
    for (Eigen::Index h = 0; h < p; ++h) C.block(0, n * h, n, n) = pi[static_cast<std::size_t>(h)];
    if (p > 1) C.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
    Eigen::EigenSolver<Matrix> es(C, false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace svarlingam
