#pragma once

// SVAR-LiNGAM: y_t = c + sum_{h=0..p} B_h y_{t-h} + u_t.
//
// B_0 sits on the right-hand side with a zero diagonal. Forms that write the
// instantaneous matrix on the left (A y_t = ...) use A = I - B_0. The reduced
// form follows as gamma = (I - B_0)^{-1} c, Pi_h = (I - B_0)^{-1} B_h and
// eps_t = (I - B_0)^{-1} u_t.

#include "svarlingam/core.hpp"
#include "svarlingam/data.hpp"
#include "svarlingam/diagnostics.hpp"
#include "svarlingam/lingam.hpp"
#include "svarlingam/var.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace svarlingam {

namespace detail {

inline Eigen::PartialPivLU<Matrix> checked_lu(const Matrix& b0) {
    const Eigen::Index n = b0.rows();
    const Matrix a = Matrix::Identity(n, n) - b0;
    Eigen::FullPivLU<Matrix> full(a);
    if (!full.isInvertible()) throw Error(Errc::degenerate, "I - B0 is singular");
    return Eigen::PartialPivLU<Matrix>(a);
}

}  // namespace detail

/// Pi_h = (I - B_0)^{-1} B_h.
inline std::vector<Matrix> structural_to_reduced(const Matrix& b0, const std::vector<Matrix>& b_lags) {
    const auto lu = detail::checked_lu(b0);
    std::vector<Matrix> pi;
    for (const auto& b : b_lags) pi.push_back(lu.solve(b));
    return pi;
}

/// B_h = (I - B_0) Pi_h.
inline std::vector<Matrix> reduced_to_structural(const std::vector<Matrix>& pi, const Matrix& b0) {
    detail::checked_lu(b0);
    const Eigen::Index n = b0.rows();
    const Matrix a = Matrix::Identity(n, n) - b0;
    std::vector<Matrix> b;
    for (const auto& m : pi) b.push_back(a * m);
    return b;
}

struct SvarConfig {
    LingamOptions lingam;
    bool differenced = false;  // fit on first differences instead of levels
};

struct SvarLingamModel {
    int p = 0;
    Vector c;
    std::vector<Matrix> b;  // B_0..B_p
    Order order;
    Matrix shocks;          // u_t, (T - p) x n
    VarModel var;
    Matrix b0_ica;          // B_0 read directly off the ICA demixing matrix
    bool ica_converged = true;
    bool differenced = false;
    std::vector<std::string> warnings;

    Eigen::Index dim() const { return c.size(); }
    const std::vector<std::string>& names() const { return var.names; }
};

/// Structural model from a fitted VAR and an instantaneous matrix.
inline SvarLingamModel assemble_svar(const VarModel& var, const Matrix& b0, Order order) {
    SvarLingamModel m;
    m.p = var.p;
    m.var = var;
    m.order = std::move(order);
    const Eigen::Index n = var.dim();
    const Matrix a = Matrix::Identity(n, n) - b0;
    m.b.push_back(b0);
    for (const auto& b : reduced_to_structural(var.pi, b0)) m.b.push_back(b);
    m.c = a * var.gamma;
    m.shocks = var.residuals * a.transpose();
    return m;
}

inline Panel prepare_input(const Panel& panel, bool differenced) {
    return differenced ? difference(panel) : panel;
}

/// Reduced-form VAR, ICA-LiNGAM on its residuals, then structural lags,
/// intercept and shocks. Deterministic given the ICA seed.
inline SvarLingamModel fit_svar_lingam(const Panel& panel, int p, const SvarConfig& cfg = {}) {
    const Panel input = prepare_input(panel, cfg.differenced);
    const VarModel var = fit_var(input, p);
    const LingamFit lf = estimate_lingam(var.residuals, cfg.lingam);
    SvarLingamModel m = assemble_svar(var, lf.result.b, lf.result.order);
    m.b0_ica = lf.b_ica;
    m.ica_converged = lf.ica.converged;
    m.differenced = cfg.differenced;
    if (!lf.ica.converged) m.warnings.push_back("FastICA did not converge within max_iter");
    bool all_gaussian = true;
    for (Eigen::Index j = 0; j < var.residuals.cols(); ++j) {
        const auto x = stats::to_vector(var.residuals.col(j));
        if (x.size() < 8 || jarque_bera(x).p <= 0.05) all_gaussian = false;
    }
    if (all_gaussian)
        m.warnings.push_back("all VAR residuals look Gaussian (Jarque-Bera p > 0.05); instantaneous structure is weakly identified");
    return m;
}

// ---- bootstrap ------------------------------------------------------------

struct BootstrapOptions {
    int iterations = 1000;
    std::uint64_t seed = 0;
    bool rediscover_order = false;  // rerun ICA-LiNGAM per replicate instead of fixing the order
    LingamOptions lingam;           // used when rediscover_order is set
    unsigned threads = 0;           // 0 = hardware concurrency
    double max_drop_fraction = 0.05;
};

struct ReplicateFit {
    std::vector<Matrix> b;   // B_0..B_p
    std::vector<Matrix> pi;  // Pi_1..Pi_p
};

struct BootstrapDraws {
    std::vector<ReplicateFit> replicates;  // successful replicates, in index order
    int requested = 0;
    int dropped = 0;
};

namespace detail {

template <class Fn>
void parallel_for(int count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (int i = static_cast<int>(t); i < count; i += static_cast<int>(threads)) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace detail

/// Residual-resampling bootstrap. Each replicate draws VAR residual rows with
/// replacement, rebuilds the series recursively from the observed first p
/// rows, refits the VAR and re-estimates B_0 (order fixed unless
/// rediscover_order). Replicate i uses seed derive_seed(seed, i), so results
/// do not depend on scheduling.
inline BootstrapDraws bootstrap_draws(const SvarLingamModel& model, const Panel& panel, const BootstrapOptions& opt) {
    if (opt.iterations < 100) throw Error(Errc::config, "bootstrap needs at least 100 iterations");
    const Panel input = prepare_input(panel, model.differenced);
    const Matrix& Y = input.values;
    const int p = model.p;
    const Eigen::Index n = model.dim();
    const Eigen::Index T = Y.rows();
    const Matrix& eps = model.var.residuals;
    const Eigen::Index R = eps.rows();
    if (T - p != R || Y.cols() != n) throw Error(Errc::config, "panel does not match the fitted model");

    std::vector<std::optional<ReplicateFit>> slots(static_cast<std::size_t>(opt.iterations));
    detail::parallel_for(opt.iterations, opt.threads, [&](int i) {
        Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(i)));
        std::uniform_int_distribution<Eigen::Index> pick(0, R - 1);
        Matrix ys(T, n);
        ys.topRows(p) = Y.topRows(p);
        for (Eigen::Index t = p; t < T; ++t) {
            Vector v = model.var.gamma + eps.row(pick(rng)).transpose();
            for (int h = 1; h <= p; ++h) v += model.var.pi[static_cast<std::size_t>(h - 1)] * ys.row(t - h).transpose();
            ys.row(t) = v.transpose();
        }
        try {
            const VarModel vm = fit_var(ys, p);
            Matrix b0;
            if (opt.rediscover_order) {
                LingamOptions lo = opt.lingam;
                lo.ica.seed = derive_seed(opt.seed ^ 0xA5A5A5A5ULL, static_cast<std::uint64_t>(i));
                b0 = estimate_lingam(vm.residuals, lo).result.b;
            } else {
                b0 = regress_on_order(vm.residuals, model.order);
            }
            ReplicateFit rf;
            rf.b.push_back(b0);
            for (auto& b : reduced_to_structural(vm.pi, b0)) rf.b.push_back(std::move(b));
            rf.pi = vm.pi;
            slots[static_cast<std::size_t>(i)] = std::move(rf);
        } catch (const Error&) {
            // degenerate replicate: dropped and counted below
        }
    });

    BootstrapDraws out;
    out.requested = opt.iterations;
    for (auto& s : slots) {
        if (s)
            out.replicates.push_back(std::move(*s));
        else
            ++out.dropped;
    }
    if (static_cast<double>(out.dropped) > opt.max_drop_fraction * opt.iterations)
        throw Error(Errc::reliability, std::to_string(out.dropped) + " of " + std::to_string(opt.iterations) +
                                           " bootstrap replicates were degenerate");
    return out;
}

inline constexpr std::array<double, 3> kIntervalLevels = {0.90, 0.95, 0.99};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    bool excludes_zero() const { return lower > 0.0 || upper < 0.0; }
};

struct CoefficientSummary {
    int lag = 0;
    int row = 0;
    int col = 0;
    double estimate = 0.0;
    double std_error = 0.0;
    std::array<Interval, 3> intervals{};  // 90%, 95%, 99%
    int stars = 0;                        // 3: 0 outside 99%, 2: 95%, 1: 90%

    std::string star_text() const { return std::string(static_cast<std::size_t>(stars), '*'); }
};

struct BootstrapSummary {
    int iterations = 0;
    int dropped = 0;
    bool rediscover_order = false;
    std::uint64_t seed = 0;
    std::vector<CoefficientSummary> coefficients;  // ordered by (lag, row, col)

    const CoefficientSummary& at(int lag, int row, int col, Eigen::Index n) const {
        return coefficients[static_cast<std::size_t>((lag * n + row) * n + col)];
    }
};

/// Equal-tail percentile interval (type-7 quantiles) at `level`.
inline Interval percentile_interval(std::vector<double>& sorted_values, double level) {
    const double a = (1.0 - level) / 2.0;
    return {stats::quantile_sorted(sorted_values, a), stats::quantile_sorted(sorted_values, 1.0 - a)};
}

inline int stars_for(const std::array<Interval, 3>& iv) {
    if (iv[2].excludes_zero()) return 3;
    if (iv[1].excludes_zero()) return 2;
    if (iv[0].excludes_zero()) return 1;
    return 0;
}

inline BootstrapSummary summarize_bootstrap(const SvarLingamModel& model, const BootstrapDraws& draws,
                                            const BootstrapOptions& opt) {
    BootstrapSummary s;
    s.iterations = draws.requested;
    s.dropped = draws.dropped;
    s.rediscover_order = opt.rediscover_order;
    s.seed = opt.seed;
    const Eigen::Index n = model.dim();
    std::vector<double> vals(draws.replicates.size());
    for (int h = 0; h <= model.p; ++h)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                for (std::size_t r = 0; r < draws.replicates.size(); ++r)
                    vals[r] = draws.replicates[r].b[static_cast<std::size_t>(h)](i, j);
                CoefficientSummary c;
                c.lag = h;
                c.row = static_cast<int>(i);
                c.col = static_cast<int>(j);
                c.estimate = model.b[static_cast<std::size_t>(h)](i, j);
                const double mu = stats::mean(vals);
                double ss = 0.0;
                for (double v : vals) ss += (v - mu) * (v - mu);
                c.std_error = vals.size() > 1 ? std::sqrt(ss / static_cast<double>(vals.size() - 1)) : 0.0;
                std::sort(vals.begin(), vals.end());
                for (std::size_t k = 0; k < 3; ++k) c.intervals[k] = percentile_interval(vals, kIntervalLevels[k]);
                c.stars = stars_for(c.intervals);
                s.coefficients.push_back(c);
            }
    return s;
}

inline BootstrapSummary bootstrap_significance(const SvarLingamModel& model, const Panel& panel,
                                               const BootstrapOptions& opt) {
    return summarize_bootstrap(model, bootstrap_draws(model, panel, opt), opt);
}

// ---- causal graph -----------------------------------------------------------

struct Edge {
    int from = 0;
    int to = 0;
    int lag = 0;
    double weight = 0.0;
    bool significant = true;
};

struct CausalGraph {
    std::vector<std::string> nodes;  // variable labels, indexed like the model columns
    Order order;
    std::vector<Edge> edges;
};

inline std::size_t interval_index(double significance_level) {
    if (std::abs(significance_level - 0.10) < 1e-12) return 0;
    if (std::abs(significance_level - 0.05) < 1e-12) return 1;
    if (std::abs(significance_level - 0.01) < 1e-12) return 2;
    throw Error(Errc::config, "significance level must be 0.10, 0.05 or 0.01");
}

/// One edge per nonzero B_h entry (j -> i for b_ij). Instantaneous edges come
/// first, ordered by the causal rank of their endpoints; without a bootstrap
/// summary every edge is marked significant.
inline CausalGraph to_causal_graph(const SvarLingamModel& model, const BootstrapSummary* summary = nullptr,
                                   double significance_level = 0.05) {
    const Eigen::Index n = model.dim();
    const std::size_t k = interval_index(significance_level);
    if (summary && summary->coefficients.size() != static_cast<std::size_t>((model.p + 1) * n * n))
        throw Error(Errc::config, "bootstrap summary does not match the model dimensions");
    CausalGraph g;
    g.order = model.order;
    g.nodes = model.names();
    const std::vector<int> rank = causal_rank(model.order);
    for (int h = 0; h <= model.p; ++h) {
        std::vector<Edge> layer;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const double w = model.b[static_cast<std::size_t>(h)](i, j);
                if (w == 0.0) continue;
                Edge e{static_cast<int>(j), static_cast<int>(i), h, w, true};
                if (summary) e.significant = summary->at(h, static_cast<int>(i), static_cast<int>(j), n).intervals[k].excludes_zero();
                layer.push_back(e);
            }
        std::stable_sort(layer.begin(), layer.end(), [&](const Edge& a, const Edge& b) {
            const auto ka = std::make_pair(rank[static_cast<std::size_t>(a.from)], rank[static_cast<std::size_t>(a.to)]);
            const auto kb = std::make_pair(rank[static_cast<std::size_t>(b.from)], rank[static_cast<std::size_t>(b.to)]);
            return ka < kb;
        });
        g.edges.insert(g.edges.end(), layer.begin(), layer.end());
    }
    return g;
}

/// Topological order of the instantaneous edges, or nullopt if they contain a cycle.
inline std::optional<Order> topological_sort(const CausalGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.nodes.size());
    Matrix adj = Matrix::Zero(n, n);
    for (const auto& e : g.edges)
        if (e.lag == 0) adj(e.to, e.from) = 1.0;
    Order order;
    if (!detail::triangular_order(adj, order)) return std::nullopt;
    return order;
}

}  // namespace svarlingam
