#pragma once

// Structural impulse responses theta_h = Phi_h (I - B_0)^{-1}, where Phi_h are
// the moving-average coefficients of the reduced-form VAR.

#include "svarlingam/core.hpp"
#include "svarlingam/data.hpp"
#include "svarlingam/svar_lingam.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace svarlingam {

/// Phi_0 = I, Phi_h = sum_{j=1..min(h,p)} Pi_j Phi_{h-j}.
inline std::vector<Matrix> ma_coefficients(const std::vector<Matrix>& pi, int horizon, Eigen::Index n = -1) {
    if (horizon < 0) throw Error(Errc::config, "horizon must be nonnegative");
    if (n < 0) {
        if (pi.empty()) throw Error(Errc::config, "dimension unknown without lag matrices");
        n = pi.front().rows();
    }
    std::vector<Matrix> phi{Matrix::Identity(n, n)};
    for (int h = 1; h <= horizon; ++h) {
        Matrix m = Matrix::Zero(n, n);
        for (int j = 1; j <= std::min<int>(h, static_cast<int>(pi.size())); ++j)
            m += pi[static_cast<std::size_t>(j - 1)] * phi[static_cast<std::size_t>(h - j)];
        phi.push_back(std::move(m));
    }
    return phi;
}

enum class ShockScale { unit, sd };

struct IrfResult {
    int horizon = 0;
    std::vector<Matrix> theta;  // theta[h](i, j): response of i at h to a shock in j
    std::vector<Matrix> lower, upper;  // empty unless bands were computed
    double level = 0.0;
    int iterations = 0;
    ShockScale scale = ShockScale::unit;
    std::vector<std::string> names;

    bool has_bands() const { return !lower.empty(); }
};

namespace detail {

inline std::vector<Matrix> structural_responses(const std::vector<Matrix>& pi, const Matrix& b0, int horizon,
                                                const Vector* shock_sd) {
    const Eigen::Index n = b0.rows();
    const auto lu = checked_lu(b0);
    Matrix impact = lu.solve(Matrix::Identity(n, n));
    if (shock_sd) impact = impact * shock_sd->asDiagonal();
    std::vector<Matrix> theta;
    for (const auto& phi : ma_coefficients(pi, horizon, n)) theta.push_back(phi * impact);
    return theta;
}

inline Vector shock_sd(const Matrix& shocks) {
    const Matrix c = shocks.rowwise() - shocks.colwise().mean();
    return (c.colwise().squaredNorm() / static_cast<double>(shocks.rows())).cwiseSqrt().transpose();
}

}  // namespace detail

/// Responses to a unit structural shock (or one standard deviation of u_j
/// when scale == sd).
inline IrfResult structural_irf(const SvarLingamModel& model, int horizon, ShockScale scale = ShockScale::unit) {
    IrfResult r;
    r.horizon = horizon;
    r.scale = scale;
    r.names = model.names();
    Vector sd;
    if (scale == ShockScale::sd) sd = detail::shock_sd(model.shocks);
    r.theta = detail::structural_responses(model.var.pi, model.b.front(), horizon, scale == ShockScale::sd ? &sd : nullptr);
    return r;
}

/// Equal-tail percentile bands over precomputed bootstrap replicates,
/// widened where needed so each band contains its point estimate.
inline IrfResult irf_bands_from_draws(const SvarLingamModel& model, const BootstrapDraws& draws, int horizon,
                                      double level, ShockScale scale = ShockScale::unit) {
    if (!(level > 0.5 && level < 1.0)) throw Error(Errc::config, "band level must lie in (0.5, 1)");
    if (draws.replicates.empty()) throw Error(Errc::reliability, "no bootstrap replicates");
    IrfResult r = structural_irf(model, horizon, scale);
    const Eigen::Index n = model.dim();
    // sd scaling uses the point estimate's shock sd in every replicate
    Vector sd;
    if (scale == ShockScale::sd) sd = detail::shock_sd(model.shocks);
    std::vector<std::vector<Matrix>> reps;
    reps.reserve(draws.replicates.size());
    for (const auto& rf : draws.replicates)
        reps.push_back(detail::structural_responses(rf.pi, rf.b.front(), horizon, scale == ShockScale::sd ? &sd : nullptr));

    r.level = level;
    r.iterations = draws.requested;
    const double a = (1.0 - level) / 2.0;
    std::vector<double> vals(reps.size());
    for (int h = 0; h <= horizon; ++h) {
        Matrix lo(n, n), hi(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < reps.size(); ++k) vals[k] = reps[k][static_cast<std::size_t>(h)](i, j);
                std::sort(vals.begin(), vals.end());
                const double point = r.theta[static_cast<std::size_t>(h)](i, j);
                lo(i, j) = std::min(stats::quantile_sorted(vals, a), point);
                hi(i, j) = std::max(stats::quantile_sorted(vals, 1.0 - a), point);
            }
        r.lower.push_back(lo);
        r.upper.push_back(hi);
    }
    return r;
}

inline IrfResult irf_bootstrap_bands(const SvarLingamModel& model, const Panel& panel, int horizon, double level,
                                     const BootstrapOptions& opt, ShockScale scale = ShockScale::unit) {
    if (!(level > 0.5 && level < 1.0)) throw Error(Errc::config, "band level must lie in (0.5, 1)");
    return irf_bands_from_draws(model, bootstrap_draws(model, panel, opt), horizon, level, scale);
}

struct SubperiodIrfs {
    IrfResult whole, first, second;
    Date split;
};

struct IrfConfig {
    SvarConfig svar;
    ShockScale scale = ShockScale::unit;
    double level = 0.99;
    BootstrapOptions bootstrap;
    bool bands = true;
};

/// IRFs over the whole panel and over [start, split] and (split, end],
/// each fitted independently with the same lag order and settings.
inline SubperiodIrfs compare_subperiods(const Panel& panel, Date split, int p, int horizon, const IrfConfig& cfg) {
    auto run = [&](const Panel& part, const char* label) {
        const Eigen::Index min_rows = part.cols() * p + part.cols() + 2 + (cfg.svar.differenced ? 1 : 0);
        if (part.rows() <= min_rows)
            throw Error(Errc::insufficient_data, std::string(label) + " subperiod has too few observations");
        const SvarLingamModel m = fit_svar_lingam(part, p, cfg.svar);
        return cfg.bands ? irf_bootstrap_bands(m, part, horizon, cfg.level, cfg.bootstrap, cfg.scale)
                         : structural_irf(m, horizon, cfg.scale);
    };
    auto slice_or_empty = [&](Date a, Date b, const char* label) {
        try {
            return slice_period(panel, a, b);
        } catch (const Error& e) {
            if (e.code() != Errc::empty_slice && e.code() != Errc::config) throw;
            throw Error(Errc::insufficient_data, std::string(label) + " subperiod is empty");
        }
    };
    if (panel.dates.empty()) throw Error(Errc::insufficient_data, "panel has no dates");
    SubperiodIrfs out;
    out.split = split;
    const Panel first = slice_or_empty(panel.dates.front(), split, "first");
    const Panel second = slice_or_empty(split.next(), panel.dates.back(), "second");
    out.whole = run(panel, "whole");
    out.first = run(first, "first");
    out.second = run(second, "second");
    return out;
}

}  // namespace svarlingam
