#pragma once

// JSON, CSV and DOT renderings of every report type. Doubles are written in
// shortest round-trip form, so parsing a written file restores the exact
// values. NaN is stored as JSON null.

#include "svarlingam/cointegration.hpp"
#include "svarlingam/core.hpp"
#include "svarlingam/csv.hpp"
#include "svarlingam/data.hpp"
#include "svarlingam/diagnostics.hpp"
#include "svarlingam/ica.hpp"
#include "svarlingam/irf.hpp"
#include "svarlingam/lingam.hpp"
#include "svarlingam/svar_lingam.hpp"
#include "svarlingam/synthetic.hpp"
#include "svarlingam/unit_root.hpp"
#include "svarlingam/var.hpp"

#include "json.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace svarlingam::report {

using Json = nlohmann::json;

// ---- primitives -------------------------------------------------------------

inline Json num(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

inline double get_num(const Json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!j.is_number()) throw Error(Errc::schema, "expected a number, got " + j.dump());
    return j.get<double>();
}

inline const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(Errc::schema, std::string("missing JSON field '") + key + "'");
    return j.at(key);
}

inline Json vec_json(const Vector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
    return a;
}

inline Vector vec_from(const Json& j) {
    if (!j.is_array()) throw Error(Errc::schema, "expected an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = get_num(j[i]);
    return v;
}

inline Json doubles_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

inline std::vector<double> doubles_from(const Json& j) {
    const Vector v = vec_from(j);
    return {v.data(), v.data() + v.size()};
}

/// Row-major nested arrays.
inline Json mat_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) r.push_back(num(m(i, k)));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline Matrix mat_from(const Json& j, Eigen::Index cols_if_empty = 0) {
    if (!j.is_array()) throw Error(Errc::schema, "expected a matrix (array of rows)");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : cols_if_empty;
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const Json& r = j[static_cast<std::size_t>(i)];
        if (!r.is_array() || static_cast<Eigen::Index>(r.size()) != cols) throw Error(Errc::schema, "ragged matrix");
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = get_num(r[static_cast<std::size_t>(k)]);
    }
    return m;
}

/// Matrix with named axes: rows are responses, columns are sources.
inline Json labeled(const Matrix& m, const std::vector<std::string>& names) {
    return Json{{"rows", names}, {"cols", names}, {"data", mat_json(m)}};
}

inline Json order_json(const Order& o) { return Json(o); }

inline Order order_from(const Json& j) { return j.get<Order>(); }

inline Json dates_json(const std::vector<Date>& d) {
    Json a = Json::array();
    for (const auto& x : d) a.push_back(x.str());
    return a;
}

inline std::vector<Date> dates_from(const Json& j) {
    std::vector<Date> out;
    for (const auto& x : j) {
        const auto d = Date::parse(x.get<std::string>());
        if (!d) throw Error(Errc::schema, "bad date " + x.dump());
        out.push_back(*d);
    }
    return out;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::config, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(Errc::parse, path + ": " + e.what());
    }
}

inline std::string stars(int n) { return std::string(static_cast<std::size_t>(n), '*'); }

// ---- stats ------------------------------------------------------------------

inline Json to_json(const StatsTable& t) {
    Json a = Json::array();
    for (const auto& s : t)
        a.push_back({{"variable", s.name}, {"N", s.n}, {"min", num(s.min)}, {"q1", num(s.q1)},
                     {"median", num(s.median)}, {"mean", num(s.mean)}, {"q3", num(s.q3)}, {"max", num(s.max)},
                     {"sd", num(s.sd)}, {"skewness", num(s.skewness)}, {"kurtosis", num(s.kurtosis)}});
    return a;
}

inline StatsTable stats_from(const Json& j) {
    StatsTable t;
    for (const auto& e : j) {
        VariableStats s;
        s.name = field(e, "variable").get<std::string>();
        s.n = field(e, "N").get<std::size_t>();
        s.min = get_num(field(e, "min"));
        s.q1 = get_num(field(e, "q1"));
        s.median = get_num(field(e, "median"));
        s.mean = get_num(field(e, "mean"));
        s.q3 = get_num(field(e, "q3"));
        s.max = get_num(field(e, "max"));
        s.sd = get_num(field(e, "sd"));
        s.skewness = get_num(field(e, "skewness"));
        s.kurtosis = get_num(field(e, "kurtosis"));
        t.push_back(s);
    }
    return t;
}

// ---- ADF --------------------------------------------------------------------

inline Json to_json(const AdfReport& r) {
    Json cv = Json::object();
    for (std::size_t k = 0; k < 3; ++k) cv[csv::format(kSignificanceLevels[k])] = num(r.critical_values[k]);
    return {{"variable", r.variable}, {"lag", r.lag}, {"spec", to_string(r.spec)},
            {"statistic", num(r.statistic)}, {"critical_values", cv},
            {"reject_at", r.reject_at ? Json(*r.reject_at) : Json(nullptr)}, {"nobs", r.nobs}};
}

inline AdfReport adf_from(const Json& j) {
    AdfReport r;
    r.variable = field(j, "variable").get<std::string>();
    r.lag = field(j, "lag").get<int>();
    const auto spec = field(j, "spec").get<std::string>();
    if (spec != "constant" && spec != "trend") throw Error(Errc::schema, "unknown ADF spec " + spec);
    r.spec = spec == "constant" ? AdfSpec::constant : AdfSpec::trend;
    r.statistic = get_num(field(j, "statistic"));
    const Json& cv = field(j, "critical_values");
    for (std::size_t k = 0; k < 3; ++k) r.critical_values[k] = get_num(field(cv, csv::format(kSignificanceLevels[k]).c_str()));
    const Json& rej = field(j, "reject_at");
    if (!rej.is_null()) r.reject_at = rej.get<double>();
    r.nobs = field(j, "nobs").get<std::size_t>();
    return r;
}

/// One ADF row per variable: levels and first differences side by side.
struct AdfPair {
    AdfReport level;
    AdfReport difference;
};

inline Json to_json(const std::vector<AdfPair>& rows) {
    Json a = Json::array();
    for (const auto& r : rows) a.push_back({{"level", to_json(r.level)}, {"difference", to_json(r.difference)}});
    return a;
}

inline std::vector<AdfPair> adf_pairs_from(const Json& j) {
    std::vector<AdfPair> out;
    for (const auto& e : j) out.push_back({adf_from(field(e, "level")), adf_from(field(e, "difference"))});
    return out;
}

inline int adf_stars(const AdfReport& r) {
    if (!r.reject_at) return 0;
    if (*r.reject_at <= 0.01) return 3;
    if (*r.reject_at <= 0.05) return 2;
    return 1;
}

inline std::string adf_to_csv(const std::vector<AdfPair>& rows) {
    std::string out = "variable,level_lag,level_statistic,level_stars,difference_lag,difference_statistic,difference_stars\n";
    for (const auto& r : rows)
        out += r.level.variable + "," + std::to_string(r.level.lag) + "," + csv::format(r.level.statistic) + "," +
               stars(adf_stars(r.level)) + "," + std::to_string(r.difference.lag) + "," +
               csv::format(r.difference.statistic) + "," + stars(adf_stars(r.difference)) + "\n";
    return out;
}

// ---- Johansen ---------------------------------------------------------------

inline Json to_json(const CointReport& r) {
    Json cvs = Json::array();
    for (const auto& c : r.critical_values)
        cvs.push_back({{"trace", {c.trace[0], c.trace[1], c.trace[2]}}, {"maxeig", {c.maxeig[0], c.maxeig[1], c.maxeig[2]}}});
    return {{"lag", r.lag}, {"nobs", r.nobs}, {"names", r.names}, {"eigenvalues", doubles_json(r.eigenvalues)},
            {"trace_stats", doubles_json(r.trace_stats)}, {"maxeig_stats", doubles_json(r.maxeig_stats)},
            {"critical_values", cvs}, {"critical_value_levels", {0.01, 0.05, 0.10}}, {"level", r.level},
            {"rank_test", r.rank_test == RankTest::trace ? "trace" : "maxeig"}, {"selected_rank", r.selected_rank},
            {"deterministic", "unrestricted constant"}};
}

inline CointReport coint_from(const Json& j) {
    CointReport r;
    r.lag = field(j, "lag").get<int>();
    r.nobs = field(j, "nobs").get<std::size_t>();
    r.names = field(j, "names").get<std::vector<std::string>>();
    r.eigenvalues = doubles_from(field(j, "eigenvalues"));
    r.trace_stats = doubles_from(field(j, "trace_stats"));
    r.maxeig_stats = doubles_from(field(j, "maxeig_stats"));
    for (const auto& c : field(j, "critical_values")) {
        CointCriticalValues v{};
        for (std::size_t k = 0; k < 3; ++k) {
            v.trace[k] = field(c, "trace")[k].get<double>();
            v.maxeig[k] = field(c, "maxeig")[k].get<double>();
        }
        r.critical_values.push_back(v);
    }
    r.level = field(j, "level").get<double>();
    r.rank_test = field(j, "rank_test").get<std::string>() == "trace" ? RankTest::trace : RankTest::maxeig;
    r.selected_rank = field(j, "selected_rank").get<int>();
    return r;
}

inline std::string coint_to_csv(const CointReport& r) {
    std::string out =
        "rank_le,eigenvalue,trace,trace_cv_1,trace_cv_5,trace_cv_10,maxeig,maxeig_cv_1,maxeig_cv_5,maxeig_cv_10\n";
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
        const auto& c = r.critical_values[i];
        out += std::to_string(i) + "," + csv::format(r.eigenvalues[i]) + "," + csv::format(r.trace_stats[i]);
        for (double v : c.trace) out += "," + csv::format(v);
        out += "," + csv::format(r.maxeig_stats[i]);
        for (double v : c.maxeig) out += "," + csv::format(v);
        out += "\n";
    }
    return out;
}

// ---- VAR --------------------------------------------------------------------

inline Json to_json(const VarModel& m, bool with_residuals = true) {
    Json pi = Json::array();
    for (const auto& p : m.pi) pi.push_back(labeled(p, m.names));
    Json j{{"p", m.p}, {"names", m.names}, {"gamma", vec_json(m.gamma)}, {"pi", pi},
           {"sigma", labeled(m.sigma, m.names)}, {"nobs", m.nobs()}};
    if (with_residuals) {
        j["residuals"] = mat_json(m.residuals);
        j["dates"] = dates_json(m.dates);
    }
    return j;
}

inline VarModel var_from(const Json& j) {
    VarModel m;
    m.p = field(j, "p").get<int>();
    m.names = field(j, "names").get<std::vector<std::string>>();
    const auto n = static_cast<Eigen::Index>(m.names.size());
    m.gamma = vec_from(field(j, "gamma"));
    for (const auto& p : field(j, "pi")) m.pi.push_back(mat_from(field(p, "data")));
    m.sigma = mat_from(field(field(j, "sigma"), "data"));
    m.residuals = mat_from(field(j, "residuals"), n);
    m.dates = dates_from(field(j, "dates"));
    if (m.gamma.size() != n || static_cast<int>(m.pi.size()) != m.p)
        throw Error(Errc::schema, "VAR model dimensions are inconsistent");
    return m;
}

/// Table of coefficients: one row per regressor, one column per equation.
inline std::string var_to_csv(const VarModel& m) {
    std::string out = "term";
    for (const auto& n : m.names) out += "," + n;
    out += "\nconst";
    for (Eigen::Index i = 0; i < m.gamma.size(); ++i) out += "," + csv::format(m.gamma(i));
    out += "\n";
    for (int h = 1; h <= m.p; ++h)
        for (std::size_t j = 0; j < m.names.size(); ++j) {
            out += m.names[j] + "(t-" + std::to_string(h) + ")";
            for (std::size_t i = 0; i < m.names.size(); ++i)
                out += "," + csv::format(m.pi[static_cast<std::size_t>(h - 1)](static_cast<Eigen::Index>(i),
                                                                                static_cast<Eigen::Index>(j)));
            out += "\n";
        }
    return out;
}

// ---- diagnostics ------------------------------------------------------------

inline Json test_json(const TestResult& t) { return {{"statistic", num(t.statistic)}, {"p", num(t.p)}}; }

inline TestResult test_from(const Json& j) { return {get_num(field(j, "statistic")), get_num(field(j, "p"))}; }

inline Json to_json(const DiagnosticsReport& r) {
    Json cols = Json::array();
    for (const auto& c : r.columns)
        cols.push_back({{"variable", c.name}, {"kurtosis", num(c.kurtosis)}, {"shapiro_wilk", test_json(c.shapiro_wilk)},
                        {"shapiro_francia", test_json(c.shapiro_francia)}, {"jarque_bera", test_json(c.jarque_bera)},
                        {"ljung_box", test_json(c.ljung_box)}});
    return {{"ljung_box_lag", r.ljung_box_lag}, {"columns", cols}};
}

inline DiagnosticsReport diagnostics_from(const Json& j) {
    DiagnosticsReport r;
    r.ljung_box_lag = field(j, "ljung_box_lag").get<int>();
    for (const auto& c : field(j, "columns")) {
        ResidualDiagnostics d;
        d.name = field(c, "variable").get<std::string>();
        d.kurtosis = get_num(field(c, "kurtosis"));
        d.shapiro_wilk = test_from(field(c, "shapiro_wilk"));
        d.shapiro_francia = test_from(field(c, "shapiro_francia"));
        d.jarque_bera = test_from(field(c, "jarque_bera"));
        d.ljung_box = test_from(field(c, "ljung_box"));
        r.columns.push_back(d);
    }
    return r;
}

inline std::string diagnostics_to_csv(const DiagnosticsReport& r) {
    std::string out = "variable,kurtosis,shapiro_wilk_W,shapiro_wilk_p,shapiro_francia_W,shapiro_francia_p,"
                      "jarque_bera,jarque_bera_p,ljung_box_Q,ljung_box_p\n";
    auto f = [](double v) { return std::isnan(v) ? std::string("NA") : csv::format(v); };
    for (const auto& c : r.columns)
        out += c.name + "," + f(c.kurtosis) + "," + f(c.shapiro_wilk.statistic) + "," + f(c.shapiro_wilk.p) + "," +
               f(c.shapiro_francia.statistic) + "," + f(c.shapiro_francia.p) + "," + f(c.jarque_bera.statistic) + "," +
               f(c.jarque_bera.p) + "," + f(c.ljung_box.statistic) + "," + f(c.ljung_box.p) + "\n";
    return out;
}

// ---- ICA / LiNGAM -----------------------------------------------------------

inline Json to_json(const IcaResult& r) {
    return {{"w_ica", mat_json(r.w_ica)}, {"a_est", mat_json(r.a_est)}, {"iterations", r.iterations},
            {"converged", r.converged}};
}

inline Json to_json(const LingamResult& r) {
    return {{"b", mat_json(r.b)}, {"order", order_json(r.order)}, {"w_normalized", mat_json(r.w_normalized)},
            {"upper_mass", num(r.upper_mass)}};
}

// ---- SVAR-LiNGAM ------------------------------------------------------------

inline Json to_json(const SvarLingamModel& m) {
    Json b = Json::array();
    for (const auto& x : m.b) b.push_back(labeled(x, m.names()));
    Json order_names = Json::array();
    for (int k : m.order) order_names.push_back(m.names()[static_cast<std::size_t>(k)]);
    return {{"p", m.p}, {"names", m.names()}, {"c", vec_json(m.c)}, {"b", b}, {"order", order_json(m.order)},
            {"order_names", order_names}, {"shocks", mat_json(m.shocks)}, {"var", to_json(m.var)},
            {"b0_ica", mat_json(m.b0_ica)}, {"ica_converged", m.ica_converged}, {"differenced", m.differenced},
            {"warnings", m.warnings}};
}

inline SvarLingamModel model_from(const Json& j) {
    SvarLingamModel m;
    m.p = field(j, "p").get<int>();
    m.var = var_from(field(j, "var"));
    const auto n = static_cast<Eigen::Index>(m.var.names.size());
    m.c = vec_from(field(j, "c"));
    for (const auto& x : field(j, "b")) m.b.push_back(mat_from(field(x, "data")));
    m.order = order_from(field(j, "order"));
    m.shocks = mat_from(field(j, "shocks"), n);
    m.b0_ica = mat_from(field(j, "b0_ica"), n);
    m.ica_converged = field(j, "ica_converged").get<bool>();
    m.differenced = field(j, "differenced").get<bool>();
    m.warnings = field(j, "warnings").get<std::vector<std::string>>();
    if (static_cast<int>(m.b.size()) != m.p + 1 || m.c.size() != n || static_cast<Eigen::Index>(m.order.size()) != n)
        throw Error(Errc::schema, "SVAR model dimensions are inconsistent");
    return m;
}

inline std::string term_label(const std::string& name, int lag) {
    return lag == 0 ? name + "(t)" : name + "(t-" + std::to_string(lag) + ")";
}

/// Structural coefficients, one row per source term and one column per
/// equation, with significance stars when a bootstrap summary is given.
inline std::string svar_to_csv(const SvarLingamModel& m, const BootstrapSummary* s = nullptr) {
    const auto& names = m.names();
    const Eigen::Index n = m.dim();
    std::string out = "term";
    for (const auto& x : names) out += "," + x + (s ? "," + x + "_sig" : "");
    out += "\nconst";
    for (Eigen::Index i = 0; i < n; ++i) out += "," + csv::format(m.c(i)) + (s ? "," : "");
    out += "\n";
    for (int h = 0; h <= m.p; ++h)
        for (Eigen::Index j = 0; j < n; ++j) {
            out += term_label(names[static_cast<std::size_t>(j)], h);
            for (Eigen::Index i = 0; i < n; ++i) {
                out += "," + csv::format(m.b[static_cast<std::size_t>(h)](i, j));
                if (s) out += "," + s->at(h, static_cast<int>(i), static_cast<int>(j), n).star_text();
            }
            out += "\n";
        }
    return out;
}

inline Json to_json(const BootstrapSummary& s) {
    Json coefs = Json::array();
    for (const auto& c : s.coefficients) {
        Json iv = Json::array();
        for (std::size_t k = 0; k < 3; ++k)
            iv.push_back({{"level", kIntervalLevels[k]}, {"lower", num(c.intervals[k].lower)}, {"upper", num(c.intervals[k].upper)}});
        coefs.push_back({{"lag", c.lag}, {"row", c.row}, {"col", c.col}, {"estimate", num(c.estimate)},
                         {"std_error", num(c.std_error)}, {"intervals", iv}, {"stars", c.stars}});
    }
    return {{"iterations", s.iterations}, {"dropped", s.dropped}, {"rediscover_order", s.rediscover_order},
            {"seed", s.seed}, {"method", "residual resampling, percentile intervals"}, {"coefficients", coefs}};
}

inline BootstrapSummary bootstrap_from(const Json& j) {
    BootstrapSummary s;
    s.iterations = field(j, "iterations").get<int>();
    s.dropped = field(j, "dropped").get<int>();
    s.rediscover_order = field(j, "rediscover_order").get<bool>();
    s.seed = field(j, "seed").get<std::uint64_t>();
    for (const auto& e : field(j, "coefficients")) {
        CoefficientSummary c;
        c.lag = field(e, "lag").get<int>();
        c.row = field(e, "row").get<int>();
        c.col = field(e, "col").get<int>();
        c.estimate = get_num(field(e, "estimate"));
        c.std_error = get_num(field(e, "std_error"));
        const Json& iv = field(e, "intervals");
        if (iv.size() != 3) throw Error(Errc::schema, "expected three intervals per coefficient");
        for (std::size_t k = 0; k < 3; ++k) c.intervals[k] = {get_num(field(iv[k], "lower")), get_num(field(iv[k], "upper"))};
        c.stars = field(e, "stars").get<int>();
        s.coefficients.push_back(c);
    }
    return s;
}

inline std::string bootstrap_to_csv(const BootstrapSummary& s, const std::vector<std::string>& names) {
    std::string out = "lag,response,source,estimate,std_error,lower90,upper90,lower95,upper95,lower99,upper99,stars\n";
    for (const auto& c : s.coefficients) {
        out += std::to_string(c.lag) + "," + names[static_cast<std::size_t>(c.row)] + "," +
               names[static_cast<std::size_t>(c.col)] + "," + csv::format(c.estimate) + "," + csv::format(c.std_error);
        for (const auto& iv : c.intervals) out += "," + csv::format(iv.lower) + "," + csv::format(iv.upper);
        out += "," + c.star_text() + "\n";
    }
    return out;
}

// ---- IRF --------------------------------------------------------------------

inline Json to_json(const IrfResult& r) {
    auto tensor = [](const std::vector<Matrix>& t) {
        Json a = Json::array();
        for (const auto& m : t) a.push_back(mat_json(m));
        return a;
    };
    Json j{{"horizon", r.horizon}, {"names", r.names}, {"shock_scale", r.scale == ShockScale::unit ? "unit" : "sd"},
           {"theta", tensor(r.theta)}};
    if (r.has_bands()) {
        j["level"] = r.level;
        j["iterations"] = r.iterations;
        j["lower"] = tensor(r.lower);
        j["upper"] = tensor(r.upper);
    }
    return j;
}

inline IrfResult irf_from(const Json& j) {
    IrfResult r;
    r.horizon = field(j, "horizon").get<int>();
    r.names = field(j, "names").get<std::vector<std::string>>();
    r.scale = field(j, "shock_scale").get<std::string>() == "sd" ? ShockScale::sd : ShockScale::unit;
    for (const auto& m : field(j, "theta")) r.theta.push_back(mat_from(m));
    if (j.contains("lower")) {
        r.level = field(j, "level").get<double>();
        r.iterations = field(j, "iterations").get<int>();
        for (const auto& m : field(j, "lower")) r.lower.push_back(mat_from(m));
        for (const auto& m : field(j, "upper")) r.upper.push_back(mat_from(m));
    }
    return r;
}

/// Long format: horizon, shock, response, point, lower, upper.
inline std::string irf_to_csv(const IrfResult& r) {
    std::string out = "horizon,shock,response,point,lower,upper\n";
    const auto n = static_cast<Eigen::Index>(r.names.size());
    for (int h = 0; h <= r.horizon; ++h) {
        const auto hs = static_cast<std::size_t>(h);
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index i = 0; i < n; ++i) {
                out += std::to_string(h) + "," + r.names[static_cast<std::size_t>(j)] + "," +
                       r.names[static_cast<std::size_t>(i)] + "," + csv::format(r.theta[hs](i, j)) + ",";
                if (r.has_bands()) out += csv::format(r.lower[hs](i, j)) + "," + csv::format(r.upper[hs](i, j));
                else out += ",";
                out += "\n";
            }
    }
    return out;
}

// ---- causal graph -----------------------------------------------------------

inline Json to_json(const CausalGraph& g) {
    Json edges = Json::array();
    for (const auto& e : g.edges)
        edges.push_back({{"from", g.nodes[static_cast<std::size_t>(e.from)]}, {"to", g.nodes[static_cast<std::size_t>(e.to)]},
                         {"lag", e.lag}, {"weight", num(e.weight)}, {"significant", e.significant}});
    return {{"nodes", g.nodes}, {"order", order_json(g.order)}, {"edges", edges}};
}

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

inline std::string dot_id(const std::string& s) {
    bool plain = !s.empty() && !std::isdigit(static_cast<unsigned char>(s[0]));
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) plain = false;
    return plain ? s : dot_quote(s);
}

/// Nodes in causal order. Instantaneous edges carry their weight to two
/// decimals; lagged edges are labeled "t-h"; insignificant edges are dashed.
inline std::string export_dot(const CausalGraph& g) {
    std::ostringstream out;
    out << "digraph svar_lingam {\n  rankdir=LR;\n";
    std::vector<int> listed = g.order;
    if (listed.size() != g.nodes.size()) listed = identity_order(static_cast<Eigen::Index>(g.nodes.size()));
    for (int k : listed) out << "  " << dot_id(g.nodes[static_cast<std::size_t>(k)]) << ";\n";
    for (const auto& e : g.edges) {
        out << "  " << dot_id(g.nodes[static_cast<std::size_t>(e.from)]) << " -> "
            << dot_id(g.nodes[static_cast<std::size_t>(e.to)]) << " [label=\"";
        if (e.lag == 0) out << csv::format_fixed(e.weight, 2);
        else out << "t-" << e.lag;
        out << "\"";
        if (!e.significant) out << ", style=dashed";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

// ---- synthetic specs --------------------------------------------------------

inline const char* to_string(Distribution d) {
    switch (d) {
        case Distribution::uniform: return "uniform";
        case Distribution::laplace: return "laplace";
        case Distribution::gaussian: return "gaussian";
        case Distribution::student_t: return "student_t";
    }
    return "?";
}

inline Distribution distribution_from(const std::string& s) {
    if (s == "uniform") return Distribution::uniform;
    if (s == "laplace") return Distribution::laplace;
    if (s == "gaussian") return Distribution::gaussian;
    if (s == "student_t") return Distribution::student_t;
    throw Error(Errc::config, "unknown shock distribution '" + s + "'");
}

inline Json to_json(const GroundTruthSpec& s) {
    Json b = Json::array();
    for (const auto& m : s.b) b.push_back(mat_json(m));
    return {{"b", b}, {"intercept", vec_json(s.intercept)}, {"shock_dist", to_string(s.shock_dist)},
            {"student_df", s.student_df}, {"shock_scale", vec_json(s.shock_scale)}, {"T", s.T},
            {"burn_in", s.burn_in}, {"seed", s.seed}};
}

inline GroundTruthSpec spec_from(const Json& j) {
    GroundTruthSpec s;
    for (const auto& m : field(j, "b")) s.b.push_back(mat_from(m));
    if (j.contains("intercept")) s.intercept = vec_from(j.at("intercept"));
    if (j.contains("shock_dist")) s.shock_dist = distribution_from(j.at("shock_dist").get<std::string>());
    if (j.contains("student_df")) s.student_df = j.at("student_df").get<double>();
    if (j.contains("shock_scale")) s.shock_scale = vec_from(j.at("shock_scale"));
    if (j.contains("T")) s.T = j.at("T").get<std::size_t>();
    if (j.contains("burn_in")) s.burn_in = j.at("burn_in").get<std::size_t>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    return s;
}

}  // namespace svarlingam::report
