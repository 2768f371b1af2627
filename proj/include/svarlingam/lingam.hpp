#pragma once

// ICA-LiNGAM: x = B x + e with B permutable to strictly lower triangular.
//
// Orders are stored as a list of variable indices from first (most
// exogenous) to last, so order[0] is the variable with causal rank 1.

#include "svarlingam/core.hpp"
#include "svarlingam/ica.hpp"
#include "svarlingam/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace svarlingam {

using Order = std::vector<int>;

struct LingamResult {
    Matrix b;              // connection strengths, zero diagonal
    Order order;
    Matrix w_normalized;   // W' with unit diagonal
    double upper_mass = 0.0;  // strictly-upper sum of squares of b permuted by order
};

inline Order identity_order(Eigen::Index n) {
    Order o(static_cast<std::size_t>(n));
    std::iota(o.begin(), o.end(), 0);
    return o;
}

/// Position of each variable in `order` (0-based causal rank).
inline std::vector<int> causal_rank(const Order& order) {
    std::vector<int> k(order.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) k[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos);
    return k;
}

/// P B P' where row/column i of the result is variable order[i].
inline Matrix permute_by_order(const Matrix& b, const Order& order) {
    const auto n = static_cast<Eigen::Index>(order.size());
    Matrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) out(i, j) = b(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
    return out;
}

inline double upper_mass(const Matrix& b, const Order& order) {
    double s = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const double v = b(order[i], order[j]);
            s += v * v;
        }
    return s;
}

namespace detail {

// Hungarian algorithm (shortest augmenting path, potentials), minimizing
// sum cost(i, assign[i]). Returns assign[row] = column.
inline std::vector<int> solve_assignment(const Matrix& cost) {
    const auto n = static_cast<int>(cost.rows());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<int> p(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
        std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = p[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (used[ju]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[ju];
                if (cur < minv[ju]) {
                    minv[ju] = cur;
                    way[ju] = j0;
                }
                if (minv[ju] < delta) {
                    delta = minv[ju];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                const auto ju = static_cast<std::size_t>(j);
                if (used[ju]) {
                    u[static_cast<std::size_t>(p[ju])] += delta;
                    v[ju] -= delta;
                } else {
                    minv[ju] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> assign(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) assign[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return assign;
}

inline bool is_zero(double v) { return std::abs(v) <= 1e-12; }

}  // namespace detail

struct RowPermutation {
    std::vector<int> perm;  // row i of the result is row perm[i] of the input
    Matrix w_permuted;
};

/// Row permutation of a demixing matrix maximizing prod_i |w_ii|, i.e.
/// minimizing sum_i -log|w_ii|. Each row lands on exactly one diagonal slot,
/// so the choice is unaffected by rescaling rows. Exhaustive search for
/// n <= 8 (lexicographically first optimum), the Hungarian algorithm beyond.
inline RowPermutation row_permute_nonzero_diag(const Matrix& w) {
    const Eigen::Index n = w.rows();
    if (n < 1 || w.cols() != n) throw Error(Errc::config, "row permutation needs a nonempty square matrix");
    const double inf = std::numeric_limits<double>::infinity();
    auto cost = [&](Eigen::Index row, Eigen::Index diag) {
        const double a = std::abs(w(row, diag));
        return detail::is_zero(a) ? inf : -std::log(a);
    };
    std::vector<int> best;
    if (n <= 8) {
        std::vector<int> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), 0);
        double best_cost = inf;
        do {
            double c = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) c += cost(perm[static_cast<std::size_t>(i)], i);
            if (c < best_cost) {
                best_cost = c;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        if (best.empty())
            throw Error(Errc::identification_failure, "every row permutation leaves a zero on the diagonal");
    } else {
        // cost indexed (diagonal slot, source row); infeasible cells carry a
        // penalty exceeding the spread of any feasible total
        Matrix c(n, n);
        double lo = inf, hi = -inf;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index r = 0; r < n; ++r) {
                const double v = cost(r, i);
                if (std::isfinite(v)) {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
        if (!std::isfinite(lo))
            throw Error(Errc::identification_failure, "every row permutation leaves a zero on the diagonal");
        const double penalty = hi + (hi - lo + 1.0) * static_cast<double>(n + 1);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index r = 0; r < n; ++r) {
                const double v = cost(r, i);
                c(i, r) = std::isfinite(v) ? v : penalty;
            }
        best = detail::solve_assignment(c);
        for (Eigen::Index i = 0; i < n; ++i)
            if (!std::isfinite(cost(best[static_cast<std::size_t>(i)], i)))
                throw Error(Errc::identification_failure, "every row permutation leaves a zero on the diagonal");
    }
    RowPermutation out;
    out.perm = best;
    out.w_permuted.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out.w_permuted.row(i) = w.row(best[static_cast<std::size_t>(i)]);
    return out;
}

struct NormalizedW {
    Matrix w_normalized;
    Matrix b;
};

/// Scales each row to unit diagonal and returns B = I - W'.
inline NormalizedW normalize_and_extract_b(const Matrix& w_permuted) {
    const Eigen::Index n = w_permuted.rows();
    NormalizedW out;
    out.w_normalized = w_permuted;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = w_permuted(i, i);
        if (detail::is_zero(d)) throw Error(Errc::identification_failure, "zero on the diagonal of W");
        out.w_normalized.row(i) /= d;
        out.w_normalized(i, i) = 1.0;
    }
    out.b = Matrix::Identity(n, n) - out.w_normalized;
    out.b.diagonal().setZero();
    return out;
}

struct CausalOrder {
    Order order;
    double upper_mass = 0.0;
};

namespace detail {

// Whether the nonzero pattern of b admits a strictly lower-triangular
// permutation; fills `order` on success (sinks removed last).
inline bool triangular_order(const Matrix& b, Order& order) {
    const Eigen::Index n = b.rows();
    std::vector<char> removed(static_cast<std::size_t>(n), 0);
    order.clear();
    for (Eigen::Index step = 0; step < n; ++step) {
        int pick = -1;
        for (Eigen::Index i = 0; i < n && pick < 0; ++i) {
            if (removed[static_cast<std::size_t>(i)]) continue;
            bool exogenous = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i && !removed[static_cast<std::size_t>(j)] && b(i, j) != 0.0) {
                    exogenous = false;
                    break;
                }
            if (exogenous) pick = static_cast<int>(i);
        }
        if (pick < 0) return false;
        removed[static_cast<std::size_t>(pick)] = 1;
        order.push_back(pick);
    }
    return true;
}

}  // namespace detail

/// Permutation minimizing the strictly-upper sum of squares of the permuted B.
/// Exhaustive (lexicographically first optimum) for n <= 8; beyond that the
/// smallest entries are zeroed until the pattern becomes acyclic.
inline CausalOrder find_causal_order(const Matrix& b) {
    const Eigen::Index n = b.rows();
    CausalOrder out;
    if (n <= 8) {
        Order perm = identity_order(n);
        double best = std::numeric_limits<double>::infinity();
        do {
            const double m = upper_mass(b, perm);
            if (m < best) {
                best = m;
                out.order = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.upper_mass = best;
        return out;
    }
    std::vector<std::pair<double, Eigen::Index>> mags;
    for (Eigen::Index i = 0; i < n * n; ++i) mags.emplace_back(std::abs(b(i % n, i / n)), i);
    std::sort(mags.begin(), mags.end());
    Matrix pruned = b;
    pruned.diagonal().setZero();
    std::size_t k = 0;
    const auto initial = static_cast<std::size_t>(n * (n + 1) / 2);
    for (; k < initial && k < mags.size(); ++k) pruned(mags[k].second % n, mags[k].second / n) = 0.0;
    Order order;
    while (!detail::triangular_order(pruned, order)) {
        pruned(mags[k].second % n, mags[k].second / n) = 0.0;
        ++k;
    }
    out.order = order;
    out.upper_mass = upper_mass(b, order);
    return out;
}

/// Zeroes |b_ij| < threshold and recomputes the causal order.
inline LingamResult prune_edges(const Matrix& b, double threshold) {
    if (threshold < 0.0) throw Error(Errc::config, "pruning threshold must be nonnegative");
    LingamResult out;
    out.b = b;
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            if (std::abs(b(i, j)) < threshold) out.b(i, j) = 0.0;
    const auto co = find_causal_order(out.b);
    out.order = co.order;
    out.upper_mass = co.upper_mass;
    out.w_normalized = Matrix::Identity(b.rows(), b.cols()) - out.b;
    return out;
}

/// Least-squares connection strengths given a causal order: each variable
/// regressed (with intercept) on its predecessors. Entries that violate the
/// order are exactly zero.
inline Matrix regress_on_order(const Matrix& x, const Order& order) {
    const Eigen::Index n = x.cols();
    const Eigen::Index N = x.rows();
    Matrix b = Matrix::Zero(n, n);
    for (std::size_t pos = 1; pos < order.size(); ++pos) {
        Matrix X(N, static_cast<Eigen::Index>(pos) + 1);
        X.col(0).setOnes();
        for (std::size_t q = 0; q < pos; ++q) X.col(static_cast<Eigen::Index>(q) + 1) = x.col(order[q]);
        const auto fit = stats::ols(X, x.col(order[pos]));
        for (std::size_t q = 0; q < pos; ++q) b(order[pos], order[q]) = fit.coef(static_cast<Eigen::Index>(q) + 1, 0);
    }
    return b;
}

enum class BEstimate {
    ica,         // B taken directly from the normalized demixing matrix
    regression,  // order from ICA, strengths re-estimated by least squares
};

struct LingamOptions {
    IcaOptions ica;
    BEstimate estimate = BEstimate::regression;
    double prune_threshold = 0.0;
};

struct LingamFit {
    LingamResult result;
    IcaResult ica;
    RowPermutation permutation;
    Matrix b_ica;  // B read off the normalized demixing matrix before any refit
};

/// Full ICA-LiNGAM: FastICA, row permutation, normalization, causal order,
/// then (by default) least-squares strengths along that order.
inline LingamFit estimate_lingam(const Matrix& x, const LingamOptions& opt = {}) {
    LingamFit fit;
    fit.ica = fastica(x, opt.ica);
    fit.permutation = row_permute_nonzero_diag(fit.ica.w_ica);
    const auto nw = normalize_and_extract_b(fit.permutation.w_permuted);
    fit.b_ica = nw.b;
    const auto co = find_causal_order(nw.b);
    LingamResult& r = fit.result;
    r.w_normalized = nw.w_normalized;
    r.order = co.order;
    r.b = opt.estimate == BEstimate::regression ? regress_on_order(x, co.order) : nw.b;
    if (opt.prune_threshold > 0.0) {
        const auto pruned = prune_edges(r.b, opt.prune_threshold);
        r.b = pruned.b;
        r.order = pruned.order;
    }
    r.upper_mass = upper_mass(r.b, r.order);
    return fit;
}

enum class Density { laplace, logistic };

/// Log density of a unit-variance non-Gaussian law.
inline double standardized_log_density(Density d, double u) {
    if (d == Density::laplace) return -std::sqrt(2.0) * std::abs(u) - 0.5 * std::log(2.0);
    const double s = std::sqrt(3.0) / 3.141592653589793;
    const double a = std::abs(u) / s;
    return -a - 2.0 * std::log1p(std::exp(-a)) - std::log(s);
}

/// LiNGAM log likelihood for a fixed order: each centered variable regressed
/// on its centered predecessors, residuals standardized by their ML scale.
inline double lingam_loglik(const Matrix& x, const Order& order, Density density = Density::laplace) {
    const Eigen::Index N = x.rows();
    const Eigen::Index n = x.cols();
    if (N <= n + 2) throw Error(Errc::insufficient_data, "likelihood needs N > n + 2");
    if (static_cast<Eigen::Index>(order.size()) != n) throw Error(Errc::config, "order size mismatch");
    const Matrix xc = x.rowwise() - x.colwise().mean();
    double ll = 0.0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        Vector r = xc.col(order[pos]);
        if (pos > 0) {
            Matrix X(N, static_cast<Eigen::Index>(pos));
            for (std::size_t q = 0; q < pos; ++q) X.col(static_cast<Eigen::Index>(q)) = xc.col(order[q]);
            r = stats::ols(X, r).residuals.col(0);
        }
        const double sigma = std::sqrt(r.squaredNorm() / static_cast<double>(N));
        if (!(sigma > 0.0)) throw Error(Errc::degenerate, "zero residual scale in likelihood");
        for (Eigen::Index t = 0; t < N; ++t) ll += standardized_log_density(density, r(t) / sigma);
        ll -= static_cast<double>(N) * std::log(sigma);
    }
    return ll;
}

/// Order maximizing lingam_loglik over all n! permutations (n <= 6).
inline Order brute_force_order(const Matrix& x, Density density = Density::laplace) {
    const Eigen::Index n = x.cols();
    if (n > 6) throw Error(Errc::unsupported_size, "brute-force order search supports n <= 6");
    Order perm = identity_order(n), best = perm;
    double best_ll = -std::numeric_limits<double>::infinity();
    do {
        const double ll = lingam_loglik(x, perm, density);
        if (ll > best_ll) {
            best_ll = ll;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace svarlingam
