#pragma once

// Ground-truth generators for LiNGAM and SVAR-LiNGAM processes.

#include "svarlingam/core.hpp"
#include "svarlingam/data.hpp"
#include "svarlingam/lingam.hpp"
#include "svarlingam/var.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace svarlingam {

struct GroundTruthSpec {
    std::vector<Matrix> b;  // B_0..B_p; B_0 must be acyclic with zero diagonal
    Vector intercept;       // c; empty means zero
    Distribution shock_dist = Distribution::laplace;
    double student_df = 5.0;
    Vector shock_scale;     // per variable; empty means ones
    std::size_t T = 1000;
    std::size_t burn_in = 500;
    std::uint64_t seed = 0;

    Eigen::Index n() const { return b.empty() ? 0 : b.front().rows(); }
    int p() const { return static_cast<int>(b.size()) - 1; }
};

/// Order in which B admits a strictly lower-triangular arrangement, or an
/// error when its nonzero pattern has a cycle or a nonzero diagonal.
inline Order acyclic_order(const Matrix& b) {
    if (b.rows() != b.cols()) throw Error(Errc::config, "B must be square");
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        if (b(i, i) != 0.0) throw Error(Errc::config, "B must have a zero diagonal");
    Order order;
    if (!detail::triangular_order(b, order))
        throw Error(Errc::config, "B is cyclic; no causal order makes it strictly lower triangular");
    return order;
}

/// Reduced-form lag matrices (I - B_0)^{-1} B_h implied by a structural spec.
inline std::vector<Matrix> implied_reduced_form(const std::vector<Matrix>& b) {
    const Eigen::Index n = b.front().rows();
    const Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - b.front());
    std::vector<Matrix> pi;
    for (std::size_t h = 1; h < b.size(); ++h) pi.push_back(lu.solve(b[h]));
    return pi;
}

/// Checks acyclicity of B_0 and stationarity of the implied reduced form.
inline void validate(const GroundTruthSpec& spec) {
    if (spec.b.empty()) throw Error(Errc::config, "spec needs at least B_0");
    const Eigen::Index n = spec.n();
    for (const auto& m : spec.b)
        if (m.rows() != n || m.cols() != n) throw Error(Errc::config, "all B_h must be n x n");
    acyclic_order(spec.b.front());
    if (spec.intercept.size() != 0 && spec.intercept.size() != n) throw Error(Errc::config, "intercept size mismatch");
    if (spec.shock_scale.size() != 0 && spec.shock_scale.size() != n) throw Error(Errc::config, "shock_scale size mismatch");
    if (spec.shock_dist == Distribution::student_t && !(spec.student_df > 2.0))
        throw Error(Errc::config, "student-t shocks need df > 2");
    if (spec.p() > 0 && !(companion_spectral_radius(implied_reduced_form(spec.b)) < 1.0))
        throw Error(Errc::config, "specification is not stationary (companion spectral radius >= 1)");
}

struct Simulation {
    Panel panel;
    Matrix shocks;  // structural u_t aligned with panel rows
};

/// y_t = (I - B_0)^{-1} (c + sum_{h>=1} B_h y_{t-h} + u_t), started from zeros.
/// Unit-variance shocks are drawn row by row and scaled per variable; the
/// first burn_in rows are discarded (no burn-in is needed when p = 0).
inline Simulation generate_svar(const GroundTruthSpec& spec) {
    validate(spec);
    const Eigen::Index n = spec.n();
    const int p = spec.p();
    const std::size_t burn = p > 0 ? spec.burn_in : 0;
    const auto total = static_cast<Eigen::Index>(spec.T + burn);
    Rng rng(spec.seed);
    Matrix u = draw_matrix(spec.shock_dist, total, n, rng, spec.student_df);
    if (spec.shock_scale.size() == n) u = u * spec.shock_scale.asDiagonal();

    const Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - spec.b.front());
    const Vector c = spec.intercept.size() == n ? spec.intercept : Vector::Zero(n);
    Matrix y = Matrix::Zero(total, n);
    for (Eigen::Index t = 0; t < total; ++t) {
        Vector rhs = c + u.row(t).transpose();
        for (int h = 1; h <= p && t - h >= 0; ++h) rhs += spec.b[static_cast<std::size_t>(h)] * y.row(t - h).transpose();
        y.row(t) = lu.solve(rhs).transpose();
    }
    Simulation sim;
    const auto keep = static_cast<Eigen::Index>(spec.T);
    sim.panel = make_panel(y.bottomRows(keep));
    sim.shocks = u.bottomRows(keep);
    return sim;
}

struct LingamSample {
    Matrix x;
    Matrix shocks;
};

/// x = (I - B)^{-1} e row-wise with unit-variance shocks.
inline LingamSample generate_lingam(const Matrix& b, Distribution shock_dist, std::size_t N, std::uint64_t seed) {
    acyclic_order(b);
    const Eigen::Index n = b.rows();
    Rng rng(seed);
    LingamSample s;
    s.shocks = draw_matrix(shock_dist, static_cast<Eigen::Index>(N), n, rng);
    s.x.resize(static_cast<Eigen::Index>(N), n);
    const Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - b);
    for (Eigen::Index t = 0; t < s.x.rows(); ++t) s.x.row(t) = lu.solve(s.shocks.row(t).transpose()).transpose();
    return s;
}

/// Independent Gaussian random walks with an optional common drift, for
/// unit-root and cointegration fixtures.
inline Matrix random_walks(Eigen::Index n, Eigen::Index T, std::uint64_t seed, double drift = 0.0) {
    Rng rng(seed);
    const Matrix e = draw_matrix(Distribution::gaussian, T, n, rng);
    Matrix y(T, n);
    y.row(0) = e.row(0).array() + drift;
    for (Eigen::Index t = 1; t < T; ++t) y.row(t) = y.row(t - 1) + e.row(t) + RowVector::Constant(n, drift);
    return y;
}

/// Built-in specifications: "bivariate" (y2 -> y1 instantaneous),
/// "chain3" (three-variable instantaneous chain), both with B_1 = 0.9 I and
/// uniform shocks; "lingam3" (static three-variable LiNGAM, Laplace shocks).
inline GroundTruthSpec preset_spec(const std::string& name) {
    GroundTruthSpec s;
    if (name == "bivariate") {
        s.b = {Matrix{{0, 1}, {0, 0}}, 0.9 * Matrix::Identity(2, 2)};
        s.shock_dist = Distribution::uniform;
        s.T = 5000;
    } else if (name == "chain3") {
        s.b = {Matrix{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, 0.9 * Matrix::Identity(3, 3)};
        s.shock_dist = Distribution::uniform;
        s.T = 5000;
    } else if (name == "lingam3") {
        s.b = {Matrix{{0, 0, -0.08}, {0.85, 0, 0}, {0, 0, 0}}};
        s.shock_dist = Distribution::laplace;
        s.T = 10000;
    } else {
        throw Error(Errc::config, "unknown preset '" + name + "' (bivariate, chain3, lingam3)");
    }
    return s;
}

}  // namespace svarlingam
