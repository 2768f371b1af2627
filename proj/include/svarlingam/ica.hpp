#pragma once

// Whitening and symmetric FastICA. The demixing matrix is identified only up
// to row scaling and permutation; downstream LiNGAM code resolves both.

#include "svarlingam/core.hpp"
#include "svarlingam/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

namespace svarlingam {

struct WhitenedData {
    Matrix z;          // N x n, unit sample covariance (divisor N)
    Matrix whitening;  // V, so that z = (x - mean) V'
    Vector mean;
};

inline WhitenedData whiten(const Matrix& x) {
    const Eigen::Index N = x.rows();
    const Eigen::Index n = x.cols();
    if (N <= n) throw Error(Errc::insufficient_data, "whitening needs more rows than columns");
    WhitenedData w;
    w.mean = x.colwise().mean().transpose();
    const Matrix xc = x.rowwise() - w.mean.transpose();
    const Matrix cov = xc.transpose() * xc / static_cast<double>(N);
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    const Vector lambda = es.eigenvalues();
    const double top = lambda.maxCoeff();
    if (!(lambda.minCoeff() > 1e-12 * top)) {
        std::ostringstream dir;
        dir << es.eigenvectors().col(0).transpose();
        throw Error(Errc::degenerate, "covariance is rank deficient; null direction [" + dir.str() + "]");
    }
    w.whitening = lambda.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
    w.z = xc * w.whitening.transpose();
    return w;
}

enum class Nonlinearity { tanh, cube };

struct IcaOptions {
    Nonlinearity nonlinearity = Nonlinearity::tanh;
    int max_iter = 1000;
    double tol = 1e-10;
    std::uint64_t seed = 0;
};

struct IcaResult {
    Matrix w_ica;       // demixing matrix in original coordinates
    Matrix a_est;       // inverse of w_ica
    Matrix components;  // (x - mean) w_ica'
    int iterations = 0;
    bool converged = false;
};

namespace detail {

/// (W W')^{-1/2} W
inline Matrix symmetric_decorrelation(const Matrix& W) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(W * W.transpose());
    const Matrix& E = es.eigenvectors();
    return E * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * E.transpose() * W;
}

}  // namespace detail

/// Symmetric fixed-point FastICA on whitened data. Convergence when every
/// row of the new unmixing matrix is (up to sign) its predecessor within tol.
inline IcaResult fastica(const Matrix& x, const IcaOptions& opt = {}) {
    const Eigen::Index n = x.cols();
    if (x.rows() < 10 * n) throw Error(Errc::insufficient_data, "FastICA needs N >= 10 n");
    const WhitenedData wd = whiten(x);
    const Matrix& z = wd.z;
    const auto N = static_cast<double>(z.rows());

    Rng rng(opt.seed);
    Matrix B = detail::symmetric_decorrelation(draw_matrix(Distribution::gaussian, n, n, rng));

    IcaResult res;
    for (int it = 1; it <= opt.max_iter; ++it) {
        const Matrix y = z * B.transpose();  // N x n projections
        Matrix g(y.rows(), n);
        Vector gprime_mean(n);
        if (opt.nonlinearity == Nonlinearity::tanh) {
            g = y.array().tanh().matrix();
            gprime_mean = (1.0 - g.array().square()).colwise().mean().transpose();
        } else {
            g = y.array().cube().matrix();
            gprime_mean = (3.0 * y.array().square()).colwise().mean().transpose();
        }
        Matrix Bn = g.transpose() * z / N - gprime_mean.asDiagonal() * B;
        Bn = detail::symmetric_decorrelation(Bn);
        const double lim = (Bn * B.transpose()).diagonal().cwiseAbs().minCoeff();
        B = Bn;
        res.iterations = it;
        if (lim > 1.0 - opt.tol) {
            res.converged = true;
            break;
        }
    }
    res.w_ica = B * wd.whitening;
    res.a_est = res.w_ica.inverse();
    res.components = (x.rowwise() - wd.mean.transpose()) * res.w_ica.transpose();
    return res;
}

/// Histogram plug-in estimate of differential entropy, ceil(sqrt(N)) bins.
inline double histogram_entropy(const Eigen::Ref<const Vector>& v) {
    const Eigen::Index N = v.size();
    const double lo = v.minCoeff(), hi = v.maxCoeff();
    if (!(hi > lo)) throw Error(Errc::degenerate, "entropy of a constant column");
    const auto bins = static_cast<Eigen::Index>(std::ceil(std::sqrt(static_cast<double>(N))));
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<double> count(static_cast<std::size_t>(bins), 0.0);
    for (Eigen::Index i = 0; i < N; ++i) {
        auto b = static_cast<Eigen::Index>((v(i) - lo) / width);
        b = std::clamp<Eigen::Index>(b, 0, bins - 1);
        count[static_cast<std::size_t>(b)] += 1.0;
    }
    double h = 0.0;
    for (double c : count)
        if (c > 0.0) {
            const double p = c / static_cast<double>(N);
            h -= p * std::log(p / width);
        }
    return h;
}

/// Dependence score sum_j H(z_j) - H(z): histogram marginals, Gaussian
/// (maximum-entropy) surrogate for the joint term, clamped at zero. A
/// diagnostic only; a singular joint covariance yields a large finite score.
inline double mutual_information_estimate(const Matrix& z) {
    if (z.rows() < 100) throw Error(Errc::insufficient_data, "mutual information estimate needs N >= 100");
    const Eigen::Index n = z.cols();
    double marginal = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) marginal += histogram_entropy(z.col(j));
    const Matrix cov = stats::covariance(z);
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(cov, Eigen::EigenvaluesOnly).eigenvalues();
    const double floor = 1e-12 * ev.maxCoeff();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) logdet += std::log(std::max(ev(i), floor));
    constexpr double kTwoPiE = 17.079468445347132;  // 2 pi e
    const double joint = 0.5 * (static_cast<double>(n) * std::log(kTwoPiE) + logdet);
    return std::max(0.0, marginal - joint);
}

}  // namespace svarlingam
