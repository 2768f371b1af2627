#include "catch_amalgamated.hpp"

#include "support.hpp"
#include "svarlingam/synthetic.hpp"
#include "svarlingam/var.hpp"

using namespace svarlingam;
using Catch::Approx;

namespace {

Matrix mat3(std::initializer_list<double> v) {
    Matrix m(3, 3);
    auto it = v.begin();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = *it++;
    return m;
}

void check_close(const Matrix& got, const Matrix& want, double eps) {
    REQUIRE(got.rows() == want.rows());
    REQUIRE(got.cols() == want.cols());
    for (Eigen::Index i = 0; i < want.size(); ++i)
        CHECK(got.data()[i] == Approx(want.data()[i]).epsilon(eps).margin(1e-12));
}

}  // namespace

TEST_CASE("VAR(2) matches reference estimates on the fixture", "[var]") {
    const VarModel m = fit_var(testsupport::fixture(), 2);
    Vector c(3);
    c << -0.02403328046548987, -0.0548700404198607, 0.10568811259912587;
    check_close(m.gamma, c, 1e-8);
    check_close(m.pi[0], mat3({0.8175421475013858, 0.1693108682302162, 0.006106654415536, 0.25039580450687093,
                               0.6165643830604228, 0.01030032974958128, -0.11807344955722987, 0.12665071488024962,
                               1.040921004321068}),
                1e-9);
    check_close(m.pi[1], mat3({0.02599405768601724, 0.00467816837821828, -0.00195310710585677, 0.0330980881149937,
                               0.0152122312412359, -0.00623802446213495, 0.17405414945428957, -0.1936134371709565,
                               -0.04793336111854427}),
                1e-8);
    check_close(m.sigma, mat3({2.443823573646776, 1.9427276339385882, -0.09217191859796253, 1.9427276339385882,
                               1.8787733703846377, -0.00353194812328225, -0.09217191859796253, -0.00353194812328225,
                               1.2643325480934948}),
                1e-10);
    CHECK(m.nobs() == 298);
    CHECK(m.names == std::vector<std::string>{"y1", "y2", "y3"});
    REQUIRE(m.dates.size() == 298);
    CHECK(m.dates.front() == Date(2017, 1, 3));
    CHECK(select_var_lag_sic(testsupport::fixture(), 4) == 1);
}

TEST_CASE("VAR estimates equal per-equation normal equations", "[var][property]") {
    const Panel fx = testsupport::fixture();
    for (int p = 1; p <= 3; ++p) {
        const VarModel m = fit_var(fx, p);
        const Matrix& Y = fx.values;
        const Eigen::Index rows = Y.rows() - p;
        Matrix X(rows, 1 + 3 * p);
        for (Eigen::Index r = 0; r < rows; ++r) {
            X(r, 0) = 1.0;
            for (int h = 1; h <= p; ++h) X.block(r, 1 + 3 * (h - 1), 1, 3) = Y.row(r + p - h);
        }
        const Matrix b = testsupport::normal_equations(X, Y.bottomRows(rows));
        for (Eigen::Index eq = 0; eq < 3; ++eq) {
            CHECK(m.gamma(eq) == Approx(b(0, eq)).epsilon(1e-8).margin(1e-10));
            for (int h = 1; h <= p; ++h)
                for (Eigen::Index k = 0; k < 3; ++k)
                    CHECK(m.pi[static_cast<std::size_t>(h - 1)](eq, k) ==
                          Approx(b(1 + 3 * (h - 1) + k, eq)).epsilon(1e-8).margin(1e-10));
        }
        // residuals are orthogonal to every regressor and add back to the data
        CHECK(testsupport::max_abs(X.transpose() * m.residuals) < 1e-8 * testsupport::max_abs(X));
        CHECK(testsupport::max_abs(var_fitted(m, Y) + m.residuals - Y.bottomRows(rows)) < 1e-10);
        const Matrix s = m.residuals.transpose() * m.residuals / static_cast<double>(rows);
        CHECK(testsupport::max_abs(s - m.sigma) < 1e-12);
    }
}

TEST_CASE("noise-free AR(1) is fitted exactly", "[var]") {
    Matrix y(50, 1);
    y(0, 0) = 1.0;
    for (Eigen::Index t = 1; t < 50; ++t) y(t, 0) = 0.9 * y(t - 1, 0);
    const VarModel m = fit_var(y, 1);
    CHECK(m.pi[0](0, 0) == Approx(0.9).epsilon(1e-10));
    CHECK(testsupport::max_abs(m.residuals) < 1e-12);
}

TEST_CASE("VAR recovers simulated coefficients", "[var]") {
    Matrix pi(2, 2);
    pi << 0.5, 0.1, -0.2, 0.3;
    GroundTruthSpec spec;
    spec.b = {Matrix::Zero(2, 2), pi};
    spec.shock_dist = Distribution::gaussian;
    spec.T = 5000;
    spec.seed = 42;
    const Panel data = generate_svar(spec).panel;
    const VarModel m = fit_var(data, 1);
    CHECK(testsupport::max_abs(m.pi[0] - pi) < 0.03);

    // independent normal-equations solve on the same sample
    const Eigen::Index rows = data.rows() - 1;
    Matrix X(rows, 3);
    X.col(0).setOnes();
    X.rightCols(2) = data.values.topRows(rows);
    const Matrix b = testsupport::normal_equations(X, data.values.bottomRows(rows));
    CHECK(testsupport::max_abs(m.pi[0] - b.bottomRows(2).transpose()) < 1e-10);

    Rng rng(8);
    const VarModel noise = fit_var(draw_matrix(Distribution::gaussian, 5000, 2, rng), 1);
    CHECK(testsupport::max_abs(noise.pi[0]) < 0.05);
}

TEST_CASE("SIC lag selection on simulated VARs", "[var]") {
    Matrix p1(2, 2), p2(2, 2), p3(2, 2);
    p1 << 0.4, 0.2, -0.1, 0.3;
    p2 << 0.0, 0.0, 0.2, -0.2;
    p3 << 0.35, -0.1, 0.1, 0.4;
    int hits = 0, ones = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GroundTruthSpec spec;
        spec.b = {Matrix::Zero(2, 2), p1, p2, p3};
        spec.shock_dist = Distribution::gaussian;
        spec.T = 3000;
        spec.seed = 300 + seed;
        hits += select_var_lag_sic(generate_svar(spec).panel, 8) == 3;
        Rng rng(700 + seed);
        ones += select_var_lag_sic(make_panel(draw_matrix(Distribution::gaussian, 3000, 2, rng)), 8) == 1;
    }
    CHECK(hits >= 90);
    CHECK(ones >= 90);
}

TEST_CASE("VAR equivariance and intercept absorption", "[var][property]") {
    const Panel fx = testsupport::fixture();
    const VarModel m = fit_var(fx, 2);
    const std::vector<int> perm = {2, 0, 1};
    Matrix y(fx.rows(), 3);
    for (int j = 0; j < 3; ++j) y.col(j) = fx.values.col(perm[static_cast<std::size_t>(j)]);
    const VarModel q = fit_var(y, 2);
    for (int h = 0; h < 2; ++h)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                CHECK(q.pi[static_cast<std::size_t>(h)](i, j) ==
                      Approx(m.pi[static_cast<std::size_t>(h)](perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]))
                          .margin(1e-10));

    Matrix shifted = fx.values;
    shifted.col(1).array() += 25.0;
    const VarModel s = fit_var(shifted, 2);
    for (int h = 0; h < 2; ++h)
        CHECK(testsupport::max_abs(s.pi[static_cast<std::size_t>(h)] - m.pi[static_cast<std::size_t>(h)]) < 1e-8);
    CHECK(testsupport::max_abs(s.residuals - m.residuals) < 1e-8);

    CHECK(testsupport::max_abs(m.residuals.colwise().mean()) < 1e-8);
    CHECK(testsupport::max_abs(m.sigma - m.sigma.transpose()) == 0.0);
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(m.sigma).eigenvalues().minCoeff() >= 0.0);
}

TEST_CASE("companion spectral radius", "[var]") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 0.5;
    a(1, 1) = -0.8;
    CHECK(companion_spectral_radius({a}) == Approx(0.8));
    // scalar AR(2) with roots 0.9 and 0.5
    Matrix p1(1, 1), p2(1, 1);
    p1 << 1.4;
    p2 << -0.45;
    CHECK(companion_spectral_radius({p1, p2}) == Approx(0.9));
    CHECK(companion_spectral_radius({}) == 0.0);
}

TEST_CASE("VAR errors", "[var]") {
    try {
        fit_var(Matrix(Matrix::Random(8, 3)), 2);
        FAIL("short sample accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::insufficient_data);
    }
    try {
        fit_var(testsupport::fixture(), 0);
        FAIL("p = 0 accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::config);
    }
    CHECK_THROWS_AS(select_var_lag_sic(testsupport::fixture(), 0), Error);
}
