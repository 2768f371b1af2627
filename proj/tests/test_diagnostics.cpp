#include "catch_amalgamated.hpp"

#include "support.hpp"
#include "svarlingam/diagnostics.hpp"
#include "svarlingam/var.hpp"

using namespace svarlingam;
using Catch::Approx;

namespace {

std::vector<double> draws(Distribution d, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return stats::to_vector(draw_matrix(d, static_cast<Eigen::Index>(n), 1, rng).col(0));
}

}  // namespace

TEST_CASE("diagnostics match reference values on VAR residuals", "[diagnostics]") {
    const VarModel m = fit_var(testsupport::fixture(), 2);
    const auto e = stats::to_vector(m.residuals.col(0));

    const auto jb = jarque_bera(e);
    CHECK(jb.statistic == Approx(150.67721002868262).epsilon(1e-10));
    CHECK(jb.p == Approx(1.9092357946139419e-33).epsilon(1e-6));

    const auto sw = shapiro_wilk(e);
    CHECK(sw.statistic == Approx(0.94529200155966353).epsilon(1e-6));
    CHECK(sw.p == Approx(4.4946569095732116e-09).epsilon(1e-3));

    const auto lb = ljung_box(e, 10);
    CHECK(lb.statistic == Approx(10.857397532966626).epsilon(1e-10));
    CHECK(lb.p == Approx(0.36873552981367463).epsilon(1e-8));

    const auto sf = shapiro_francia(e);
    CHECK(sf.statistic == Approx(0.94121524218149677).epsilon(1e-10));
    CHECK(sf.p == Approx(1.6862656230993944e-08).epsilon(1e-6));

    const auto rep = diagnose(m, 10);
    REQUIRE(rep.columns.size() == 3);
    CHECK(rep.columns[0].name == "y1");
    CHECK(rep.columns[0].jarque_bera.statistic == jb.statistic);
    CHECK(rep.columns[0].ljung_box.p == lb.p);
    CHECK(rep.columns[0].kurtosis == Approx(stats::excess_kurtosis(stats::central_moments(e))));
}

TEST_CASE("Jarque-Bera size and power", "[diagnostics]") {
    int size = 0, power = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) size += jarque_bera(draws(Distribution::gaussian, 10000, seed)).p < 0.01;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        power += jarque_bera(draws(Distribution::laplace, 10000, 20000 + seed)).p < 0.001;
    CHECK(std::abs(size / 500.0 - 0.01) <= 0.015);
    CHECK(power >= 99);

    const auto outlier = jarque_bera(std::vector<double>{1, 1, 1, 1, 1, 1, 1, 9});
    CHECK(std::isfinite(outlier.statistic));
    CHECK(outlier.statistic > 0.0);
}

TEST_CASE("Shapiro-Wilk on exact normal scores and Laplace samples", "[diagnostics]") {
    std::vector<double> q(100);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = stats::normal_quantile((static_cast<double>(i) + 1 - 0.375) / 100.25);
    CHECK(shapiro_wilk(q).statistic > 0.99);
    CHECK(shapiro_francia(q).statistic > 0.99);

    int rejected = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) rejected += shapiro_wilk(draws(Distribution::laplace, 1000, 40 + seed)).p < 0.01;
    CHECK(rejected >= 95);
}

TEST_CASE("Shapiro statistics are affine invariant and bounded", "[diagnostics][property]") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto x = draws(Distribution::student_t, 100 + 37 * seed, seed);
        const auto a = shapiro_wilk(x), f = shapiro_francia(x), j = jarque_bera(x);
        CHECK(a.statistic > 0.0);
        CHECK(a.statistic <= 1.0);
        CHECK(f.statistic <= 1.0);
        for (double p : {a.p, f.p, j.p}) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        for (auto& v : x) v = 4.0 - 2.5 * v;
        CHECK(shapiro_wilk(x).statistic == Approx(a.statistic).epsilon(1e-12));
        CHECK(shapiro_francia(x).statistic == Approx(f.statistic).epsilon(1e-12));
    }
}

TEST_CASE("Ljung-Box size and power", "[diagnostics]") {
    int size = 0, power = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) size += ljung_box(draws(Distribution::gaussian, 2000, 60000 + seed), 10).p < 0.05;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto e = draws(Distribution::gaussian, 2000, 80000 + seed);
        std::vector<double> ar(e.size());
        ar[0] = e[0];
        for (std::size_t t = 1; t < e.size(); ++t) ar[t] = 0.5 * ar[t - 1] + e[t];
        power += ljung_box(ar, 10).p < 0.001;
    }
    CHECK(std::abs(size / 500.0 - 0.05) <= 0.02);
    CHECK(power >= 99);

    const auto e = draws(Distribution::gaussian, 1000, 5);
    CHECK(ljung_box(e, 10, 2).p < ljung_box(e, 10).p);
    CHECK_THROWS_AS(ljung_box(e, 0), Error);
    try {
        ljung_box(std::vector<double>(40, 1.0), 5);
        FAIL("constant series accepted");
    } catch (const Error& err) {
        CHECK(err.code() == Errc::degenerate);
    }
}

TEST_CASE("large samples skip the Shapiro tests", "[diagnostics]") {
    Rng rng(1);
    const Matrix big = draw_matrix(Distribution::gaussian, 6000, 2, rng);
    const auto rep = diagnose_residuals(big, {"a", "b"});
    CHECK(std::isnan(rep.columns[0].shapiro_wilk.statistic));
    CHECK(std::isnan(rep.columns[1].shapiro_francia.p));
    CHECK(std::isfinite(rep.columns[0].jarque_bera.p));
}

TEST_CASE("QQ table", "[diagnostics]") {
    const VarModel m = fit_var(testsupport::fixture(), 1);
    const std::string csv = qq_to_csv(m);
    CHECK(csv.rfind("variable,rank,theoretical,residual\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 299);
    CHECK(csv.find("\ny3,299,") != std::string::npos);
}
