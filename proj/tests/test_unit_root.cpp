#include "catch_amalgamated.hpp"

#include "support.hpp"
#include "svarlingam/synthetic.hpp"
#include "svarlingam/unit_root.hpp"

#include <random>

using namespace svarlingam;
using Catch::Approx;

namespace {

std::vector<double> column(const Panel& p, Eigen::Index j) { return stats::to_vector(p.values.col(j)); }

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> x(n);
    for (auto& v : x) v = g(rng);
    return x;
}

std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    auto x = white_noise(n, seed);
    for (std::size_t i = 1; i < n; ++i) x[i] += x[i - 1];
    return x;
}

/// SIC of the ADF regression with constant at `lag`, every candidate on the
/// sample that starts after max_lag lags; solved by normal equations.
double oracle_sic(const std::vector<double>& y, int lag, int max_lag) {
    const auto N = static_cast<Eigen::Index>(y.size());
    const Eigen::Index first = max_lag + 1;
    const Eigen::Index rows = N - first;
    Matrix X(rows, 2 + lag);
    Vector dy(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(first + r);
        dy(r) = y[t] - y[t - 1];
        X(r, 0) = 1.0;
        X(r, 1) = y[t - 1];
        for (int i = 1; i <= lag; ++i) X(r, 1 + i) = y[t - static_cast<std::size_t>(i)] - y[t - static_cast<std::size_t>(i) - 1];
    }
    const Vector b = testsupport::normal_equations(X, dy);
    const double ssr = (dy - X * b).squaredNorm();
    const auto T = static_cast<double>(rows);
    return std::log(ssr / T) + static_cast<double>(X.cols()) * std::log(T) / T;
}

}  // namespace

TEST_CASE("ADF statistics match reference regressions on the fixture", "[adf]") {
    const auto y = column(testsupport::fixture(), 0);
    const auto r0 = adf_test(y, 0, AdfSpec::constant);
    CHECK(r0.statistic == Approx(-1.5809484682642618).epsilon(1e-10));
    CHECK(r0.nobs == 299);
    const auto r1 = adf_test(y, 1, AdfSpec::constant);
    CHECK(r1.statistic == Approx(-1.5236528382861327).epsilon(1e-10));
    CHECK(r1.nobs == 298);
    const auto r2 = adf_test(y, 2, AdfSpec::trend);
    CHECK(r2.statistic == Approx(-1.4783281591560062).epsilon(1e-10));
    CHECK(r2.nobs == 297);

    const Panel d = difference(testsupport::fixture());
    CHECK(select_lag_sic(column(d, 2), 4) == 0);
}

TEST_CASE("critical values and rejection flags are consistent", "[adf]") {
    for (AdfSpec spec : {AdfSpec::constant, AdfSpec::trend}) {
        const auto cv = adf_critical_values(spec);
        CHECK(cv[0] < cv[1]);
        CHECK(cv[1] < cv[2]);
    }
    const auto cv = adf_critical_values(AdfSpec::constant);
    CHECK(cv[0] == -3.43);
    CHECK(cv[1] == -2.86);
    CHECK(cv[2] == -2.57);
    CHECK(adf_critical_values(AdfSpec::trend)[0] == -3.96);

    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto x = seed % 2 ? white_noise(200, seed) : random_walk(200, seed);
        const auto r = adf_test(x, 1);
        if (r.reject_at) {
            const auto k = static_cast<std::size_t>(std::find(kSignificanceLevels.begin(), kSignificanceLevels.end(),
                                                              *r.reject_at) - kSignificanceLevels.begin());
            REQUIRE(k < 3);
            CHECK(r.statistic < r.critical_values[k]);
            if (k > 0) CHECK(r.statistic >= r.critical_values[k - 1]);
        } else {
            CHECK(r.statistic >= r.critical_values[2]);
        }
    }
}

TEST_CASE("SIC lag selection agrees with exhaustive evaluation", "[adf]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto y = random_walk(300, 100 + seed);
        const auto sel = select_lag_sic_detail(y, 6);
        int best = 0;
        for (int lag = 0; lag <= 6; ++lag) {
            const double s = oracle_sic(y, lag, 6);
            CHECK(sel.sic[static_cast<std::size_t>(lag)] == Approx(s).epsilon(1e-10));
            if (s < oracle_sic(y, best, 6)) best = lag;
        }
        CHECK(sel.lag == best);
    }
}

TEST_CASE("SIC picks lag 0 for white noise and 2 for AR(2) differences", "[adf]") {
    CHECK(select_lag_sic(white_noise(1000, 11), 8) == 0);
    CHECK(select_lag_sic(white_noise(1000, 11), 0) == 0);
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto e = white_noise(2000, 5000 + seed);
        std::vector<double> dy(e.size(), 0.0), y(e.size(), 0.0);
        for (std::size_t t = 2; t < e.size(); ++t) dy[t] = 0.4 * dy[t - 1] + 0.3 * dy[t - 2] + e[t];
        for (std::size_t t = 1; t < e.size(); ++t) y[t] = y[t - 1] + dy[t];
        hits += select_lag_sic(y, 8) == 2;
    }
    CHECK(hits >= 90);
}

TEST_CASE("ADF size and power", "[adf]") {
    int rw_not_rejected = 0, wn_rejected = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto rw = adf_test(random_walk(1000, 9000 + seed), 1);
        rw_not_rejected += !(rw.reject_at && *rw.reject_at <= 0.05);
        const auto wn = adf_test(white_noise(1000, 7000 + seed), 1);
        wn_rejected += wn.reject_at && *wn.reject_at <= 0.01;
    }
    CHECK(rw_not_rejected >= 90);
    CHECK(wn_rejected >= 99);
}

TEST_CASE("ADF statistic invariances", "[adf][property]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto y = random_walk(400, 300 + seed);
        const double base = adf_test(y, 2).statistic;
        auto shifted = y, scaled = y;
        for (auto& v : shifted) v += 12.5;
        for (auto& v : scaled) v *= 3.7;
        CHECK(adf_test(shifted, 2).statistic == Approx(base).epsilon(1e-8));
        CHECK(adf_test(scaled, 2).statistic == Approx(base).epsilon(1e-8));
    }
}

TEST_CASE("selection statistic equals adf_test on the common sample", "[adf][property]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto y = random_walk(500, 77 + seed);
        const auto sel = select_lag_sic_detail(y, 5);
        const auto r = adf_test(y, sel.lag, AdfSpec::constant, "y", 5);
        CHECK(r.statistic == Approx(sel.statistic[static_cast<std::size_t>(sel.lag)]).epsilon(1e-12));
        CHECK(r.nobs == sel.nobs);
    }
}

TEST_CASE("ADF errors", "[adf]") {
    const auto y = random_walk(12, 1);
    CHECK_THROWS_AS(select_lag_sic(y, 2), Error);
    try {
        select_lag_sic(y, 2);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::insufficient_data);
    }
    try {
        adf_test(std::vector<double>(50, 3.0), 1);
        FAIL("constant series accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::degenerate);
    }
    try {
        adf_test(std::vector<double>{1, 2, 3}, 0);
        FAIL("short series accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::insufficient_data);
    }
}
