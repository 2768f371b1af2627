#pragma once

// Flat key = value configuration, per-stage artifact builders and the
// end-to-end pipeline. Every stage renders its files in memory; the bundle is
// written to a staging directory and renamed into place only on success.

#include "svarlingam/cointegration.hpp"
#include "svarlingam/core.hpp"
#include "svarlingam/csv.hpp"
#include "svarlingam/data.hpp"
#include "svarlingam/diagnostics.hpp"
#include "svarlingam/irf.hpp"
#include "svarlingam/report.hpp"
#include "svarlingam/svar_lingam.hpp"
#include "svarlingam/unit_root.hpp"
#include "svarlingam/var.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace svarlingam {

namespace fs = std::filesystem;

// ---- configuration ----------------------------------------------------------

/// Known keys and their defaults. Keys absent here and not of the form
/// <variable>.<field> are rejected.
inline const std::map<std::string, std::string>& config_defaults() {
    static const std::map<std::string, std::string> d = {
        {"adf_max_lag", "8"},
        {"adf_spec", "constant"},
        {"bootstrap_iterations", "1000"},
        {"date_column", "Date"},
        {"differenced", "false"},
        {"end", ""},
        {"ica_max_iter", "1000"},
        {"ica_nonlinearity", "tanh"},
        {"ica_tol", "1e-10"},
        {"irf_bands", "true"},
        {"irf_horizon", "20"},
        {"irf_level", "0.99"},
        {"johansen_lag", "var"},
        {"johansen_level", "0.05"},
        {"johansen_test", "trace"},
        {"lingam_estimate", "regression"},
        {"ljung_box_lag", "10"},
        {"log", "true"},
        {"max_lag", "8"},
        {"panel", ""},
        {"prune_threshold", "0"},
        {"rediscover_order", "false"},
        {"seed", ""},
        {"shock_scale", "unit"},
        {"significance_level", "0.05"},
        {"split_date", ""},
        {"start", ""},
        {"threads", "0"},
        {"value_column", "Close"},
        {"var_lag", "sic"},
        {"variables", ""},
        {"weekend_fill", "true"},
    };
    return d;
}

inline const std::set<std::string>& variable_fields() {
    static const std::set<std::string> f = {"file", "eur", "usd", "date_column", "value_column"};
    return f;
}

/// Keys that locate files or output; excluded from the echo so that two runs
/// differing only in output directory produce identical bundles.
inline bool is_location_key(const std::string& key) { return key == "output"; }

class Config {
public:
    Config() = default;

    static Config parse(std::string_view text, const std::string& source = "config") {
        Config c;
        std::istringstream in{std::string(text)};
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const std::string_view t = csv::trim(line);
            if (t.empty()) continue;
            const auto eq = t.find('=');
            if (eq == std::string_view::npos)
                throw Error(Errc::config, source + ":" + std::to_string(lineno) + ": expected key = value");
            c.set(std::string(csv::trim(t.substr(0, eq))), std::string(csv::trim(t.substr(eq + 1))),
                  source + ":" + std::to_string(lineno));
        }
        return c;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(Errc::config, "cannot open config " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        Config c = parse(ss.str(), path);
        c.base_dir_ = fs::absolute(fs::path(path)).parent_path();
        return c;
    }

    void set(const std::string& key, const std::string& value, const std::string& where = "override") {
        if (key.empty()) throw Error(Errc::config, where + ": empty key");
        if (key != "output" && !config_defaults().count(key)) {
            const auto dot = key.find('.');
            if (dot == std::string::npos || !variable_fields().count(key.substr(dot + 1)))
                throw Error(Errc::config, where + ": unknown key '" + key + "'");
        }
        values_[key] = value;
    }

    /// "key=value" as given on the command line.
    void set_assignment(const std::string& kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw Error(Errc::config, "--set expects key=value, got '" + kv + "'");
        set(std::string(csv::trim(std::string_view(kv).substr(0, eq))),
            std::string(csv::trim(std::string_view(kv).substr(eq + 1))));
    }

    bool has(const std::string& key) const {
        const auto it = values_.find(key);
        return it != values_.end() && !it->second.empty();
    }

    std::string get(const std::string& key) const {
        const auto it = values_.find(key);
        if (it != values_.end()) return it->second;
        const auto d = config_defaults().find(key);
        return d == config_defaults().end() ? std::string() : d->second;
    }

    int get_int(const std::string& key) const {
        const std::string v = get(key);
        int out = 0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
        if (r.ec != std::errc() || r.ptr != v.data() + v.size())
            throw Error(Errc::config, key + " must be an integer, got '" + v + "'");
        return out;
    }

    std::uint64_t get_u64(const std::string& key) const {
        const std::string v = get(key);
        std::uint64_t out = 0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
        if (r.ec != std::errc() || r.ptr != v.data() + v.size())
            throw Error(Errc::config, key + " must be a nonnegative integer, got '" + v + "'");
        return out;
    }

    double get_double(const std::string& key) const {
        const std::string v = get(key);
        double out = 0.0;
        if (!csv::parse_double(v, out)) throw Error(Errc::config, key + " must be a number, got '" + v + "'");
        return out;
    }

    bool get_bool(const std::string& key) const {
        const std::string v = get(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw Error(Errc::config, key + " must be true or false, got '" + v + "'");
    }

    std::optional<Date> get_date(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        const auto d = Date::parse(get(key));
        if (!d) throw Error(Errc::config, key + " must be a YYYY-MM-DD date, got '" + get(key) + "'");
        return d;
    }

    /// Path relative to the config file's directory (or the working directory).
    std::string path(const std::string& key) const {
        const fs::path p(get(key));
        if (p.empty()) throw Error(Errc::config, "missing required key '" + key + "'");
        return (p.is_absolute() ? p : base_dir_ / p).lexically_normal().string();
    }

    /// Makes every randomized stage reproducible: draws and stores a seed
    /// when none is configured.
    std::uint64_t ensure_seed() {
        if (!has("seed")) {
            std::random_device rd;
            const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
            values_["seed"] = std::to_string(s);
        }
        return get_u64("seed");
    }

    /// Every effective setting (defaults included) as sorted key = value lines,
    /// with input paths made absolute.
    std::string echo() const {
        std::map<std::string, std::string> all;
        for (const auto& [k, v] : config_defaults()) all[k] = v;
        for (const auto& [k, v] : values_) all[k] = v;
        std::string out;
        for (const auto& [k, v] : all) {
            if (is_location_key(k)) continue;
            std::string value = v;
            const bool is_path = k == "panel" || k.ends_with(".file") || k.ends_with(".eur") || k.ends_with(".usd");
            if (is_path && !value.empty()) {
                const fs::path p(value);
                value = (p.is_absolute() ? p : base_dir_ / p).lexically_normal().string();
            }
            out += k + " = " + value + "\n";
        }
        return out;
    }

    const fs::path& base_dir() const { return base_dir_; }
    void set_base_dir(fs::path p) { base_dir_ = std::move(p); }

private:
    std::map<std::string, std::string> values_;
    fs::path base_dir_ = fs::current_path();
};

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ','))
        if (const auto t = csv::trim(cur); !t.empty()) out.emplace_back(t);
    return out;
}

// ---- settings derived from the configuration --------------------------------

inline AdfSpec adf_spec(const Config& c) {
    const std::string v = c.get("adf_spec");
    if (v == "constant") return AdfSpec::constant;
    if (v == "trend") return AdfSpec::trend;
    throw Error(Errc::config, "adf_spec must be constant or trend");
}

inline SvarConfig svar_config(const Config& c) {
    SvarConfig s;
    const std::string nl = c.get("ica_nonlinearity");
    if (nl == "tanh") s.lingam.ica.nonlinearity = Nonlinearity::tanh;
    else if (nl == "cube") s.lingam.ica.nonlinearity = Nonlinearity::cube;
    else throw Error(Errc::config, "ica_nonlinearity must be tanh or cube");
    s.lingam.ica.max_iter = c.get_int("ica_max_iter");
    s.lingam.ica.tol = c.get_double("ica_tol");
    s.lingam.ica.seed = derive_seed(c.get_u64("seed"), 1);
    const std::string est = c.get("lingam_estimate");
    if (est == "regression") s.lingam.estimate = BEstimate::regression;
    else if (est == "ica") s.lingam.estimate = BEstimate::ica;
    else throw Error(Errc::config, "lingam_estimate must be regression or ica");
    s.lingam.prune_threshold = c.get_double("prune_threshold");
    if (s.lingam.prune_threshold < 0.0) throw Error(Errc::config, "prune_threshold must be nonnegative");
    s.differenced = c.get_bool("differenced");
    return s;
}

inline BootstrapOptions bootstrap_options(const Config& c, std::uint64_t stream = 2) {
    BootstrapOptions b;
    b.iterations = c.get_int("bootstrap_iterations");
    b.seed = derive_seed(c.get_u64("seed"), stream);
    b.rediscover_order = c.get_bool("rediscover_order");
    b.lingam = svar_config(c).lingam;
    const int threads = c.get_int("threads");
    if (threads < 0) throw Error(Errc::config, "threads must be nonnegative");
    b.threads = static_cast<unsigned>(threads);
    return b;
}

inline ShockScale shock_scale(const Config& c) {
    const std::string v = c.get("shock_scale");
    if (v == "unit") return ShockScale::unit;
    if (v == "sd") return ShockScale::sd;
    throw Error(Errc::config, "shock_scale must be unit or sd");
}

// ---- stages -----------------------------------------------------------------

/// Files produced by a stage, keyed by file name.
using Files = std::map<std::string, std::string>;

template <class Fn>
auto run_stage(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), std::string("stage ") + name + ": " + e.message());
    }
}

/// Builds the analysis panel either from a ready panel CSV (key `panel`) or
/// from per-variable price files listed in `variables`. A variable takes
/// either `<name>.file` (one price series) or `<name>.eur` and `<name>.usd`
/// (a crypto-asset exchange rate). Series are weekend-filled, optionally
/// logged, then aligned on shared dates and clipped to [start, end].
inline Panel build_panel(const Config& c) {
    Panel panel;
    if (c.has("panel")) {
        panel = load_panel_csv(c.path("panel"));
    } else {
        const auto vars = split_list(c.get("variables"));
        if (vars.empty()) throw Error(Errc::config, "configure either 'panel' or 'variables'");
        std::vector<RawSeries> series;
        for (const auto& v : vars) {
            const std::string dcol = c.has(v + ".date_column") ? c.get(v + ".date_column") : c.get("date_column");
            const std::string vcol = c.has(v + ".value_column") ? c.get(v + ".value_column") : c.get("value_column");
            RawSeries s;
            if (c.has(v + ".file")) {
                s = load_price_csv(c.path(v + ".file"), dcol, vcol, v);
            } else if (c.has(v + ".eur") && c.has(v + ".usd")) {
                s = compute_cer(load_price_csv(c.path(v + ".eur"), dcol, vcol, v + "_EUR"),
                                load_price_csv(c.path(v + ".usd"), dcol, vcol, v + "_USD"), v);
            } else {
                throw Error(Errc::config, "variable " + v + " needs " + v + ".file or both " + v + ".eur and " + v + ".usd");
            }
            if (c.get_bool("weekend_fill")) s = weekend_fill(s);
            if (c.get_bool("log")) s = log_transform(s);
            series.push_back(std::move(s));
        }
        if (series.size() == 1) {
            panel.names = {series[0].name};
            panel.values.resize(static_cast<Eigen::Index>(series[0].points.size()), 1);
            for (std::size_t t = 0; t < series[0].points.size(); ++t) {
                panel.dates.push_back(series[0].points[t].date);
                panel.values(static_cast<Eigen::Index>(t), 0) = series[0].points[t].value;
            }
        } else {
            panel = align_panel(series);
        }
    }
    const auto start = c.get_date("start");
    const auto end = c.get_date("end");
    if (start || end) panel = slice_period(panel, start.value_or(panel.dates.front()), end.value_or(panel.dates.back()));
    return panel;
}

inline Files stats_files(const Panel& panel) {
    const StatsTable t = summary_stats(panel);
    return {{"stats.csv", stats_to_csv(t)}, {"stats.json", report::dump(report::to_json(t))}};
}

inline std::vector<report::AdfPair> adf_reports(const Panel& panel, const Config& c) {
    const int max_lag = c.get_int("adf_max_lag");
    const AdfSpec spec = adf_spec(c);
    const Panel diff = difference(panel);
    std::vector<report::AdfPair> rows;
    for (Eigen::Index j = 0; j < panel.cols(); ++j) {
        const auto name = panel.names[static_cast<std::size_t>(j)];
        const auto lv = stats::to_vector(panel.values.col(j));
        const auto dv = stats::to_vector(diff.values.col(j));
        rows.push_back({adf_auto(lv, max_lag, spec, name), adf_auto(dv, max_lag, spec, name)});
    }
    return rows;
}

inline Files adf_files(const Panel& panel, const Config& c) {
    const auto rows = adf_reports(panel, c);
    return {{"adf.csv", report::adf_to_csv(rows)}, {"adf.json", report::dump(report::to_json(rows))}};
}

inline int var_lag(const Panel& panel, const Config& c, VarLagSelection* detail = nullptr) {
    const std::string v = c.get("var_lag");
    const Panel input = prepare_input(panel, c.get_bool("differenced"));
    if (v == "sic") {
        const VarLagSelection sel = select_var_lag_sic_detail(input.values, c.get_int("max_lag"));
        if (detail) *detail = sel;
        return sel.p;
    }
    const int p = c.get_int("var_lag");
    if (p < 1) throw Error(Errc::config, "var_lag must be 'sic' or a positive integer");
    return p;
}

inline int johansen_lag(const Panel& panel, const Config& c) {
    if (c.get("johansen_lag") == "var") return var_lag(panel, c);
    return c.get_int("johansen_lag");
}

inline Files johansen_files(const Panel& panel, const Config& c) {
    const std::string t = c.get("johansen_test");
    if (t != "trace" && t != "maxeig") throw Error(Errc::config, "johansen_test must be trace or maxeig");
    const CointReport r = johansen_test(panel, johansen_lag(panel, c), c.get_double("johansen_level"),
                                        t == "trace" ? RankTest::trace : RankTest::maxeig);
    return {{"johansen.csv", report::coint_to_csv(r)}, {"johansen.json", report::dump(report::to_json(r))}};
}

inline VarModel var_stage(const Panel& panel, const Config& c, report::Json* selection = nullptr) {
    VarLagSelection sel;
    sel.p = 0;
    const int p = var_lag(panel, c, &sel);
    if (selection) {
        *selection = report::Json::object();
        (*selection)["method"] = c.get("var_lag") == "sic" ? "sic" : "fixed";
        (*selection)["p"] = p;
        if (sel.p != 0) {
            (*selection)["sic"] = report::doubles_json(sel.sic);
            (*selection)["nobs"] = sel.nobs;
        }
    }
    return fit_var(prepare_input(panel, c.get_bool("differenced")), p);
}

inline Files var_files(const VarModel& m, const report::Json& selection) {
    report::Json j = report::to_json(m);
    j["lag_selection"] = selection;
    return {{"var.json", report::dump(j)}, {"var_coefficients.csv", report::var_to_csv(m)}};
}

inline Files diagnostics_files(const VarModel& m, const Config& c) {
    const DiagnosticsReport r = diagnose(m, c.get_int("ljung_box_lag"));
    return {{"diagnostics.csv", report::diagnostics_to_csv(r)},
            {"diagnostics.json", report::dump(report::to_json(r))},
            {"qq.csv", qq_to_csv(m)}};
}

inline Files model_files(const SvarLingamModel& m) {
    return {{"model.json", report::dump(report::to_json(m))}, {"svar_coefficients.csv", report::svar_to_csv(m)}};
}

inline Files bootstrap_files(const SvarLingamModel& m, const BootstrapSummary& s) {
    return {{"bootstrap.json", report::dump(report::to_json(s))},
            {"bootstrap.csv", report::bootstrap_to_csv(s, m.names())},
            {"svar_significance.csv", report::svar_to_csv(m, &s)}};
}

inline Files graph_files(const SvarLingamModel& m, const BootstrapSummary* s, const Config& c) {
    const CausalGraph g = to_causal_graph(m, s, c.get_double("significance_level"));
    return {{"graph.dot", report::export_dot(g)}, {"graph.json", report::dump(report::to_json(g))}};
}

inline Files irf_files(const IrfResult& r, const std::string& stem = "irf") {
    return {{stem + ".csv", report::irf_to_csv(r)}, {stem + ".json", report::dump(report::to_json(r))}};
}

/// IRFs with bands from `draws` when given, otherwise point responses only.
inline IrfResult irf_stage(const SvarLingamModel& m, const BootstrapDraws* draws, const Config& c) {
    const int h = c.get_int("irf_horizon");
    if (draws) return irf_bands_from_draws(m, *draws, h, c.get_double("irf_level"), shock_scale(c));
    return structural_irf(m, h, shock_scale(c));
}

inline Files subperiod_files(const Panel& panel, int p, const Config& c) {
    IrfConfig ic;
    ic.svar = svar_config(c);
    ic.scale = shock_scale(c);
    ic.level = c.get_double("irf_level");
    ic.bootstrap = bootstrap_options(c, 3);
    ic.bands = c.get_bool("irf_bands");
    const SubperiodIrfs s = compare_subperiods(panel, *c.get_date("split_date"), p, c.get_int("irf_horizon"), ic);
    Files f = irf_files(s.first, "irf_first");
    f.merge(irf_files(s.second, "irf_second"));
    return f;
}

inline void add(Files& into, Files more) {
    for (auto& [k, v] : more) into[k] = std::move(v);
}

/// Every stage in order; returns the complete bundle in memory.
inline Files build_bundle(Config c) {
    c.ensure_seed();
    Files out;
    out["config.txt"] = c.echo();
    const Panel panel = run_stage("ingest", [&] { return build_panel(c); });
    out["panel.csv"] = panel_to_csv(panel);
    add(out, run_stage("stats", [&] { return stats_files(panel); }));
    add(out, run_stage("adf", [&] { return adf_files(panel, c); }));
    add(out, run_stage("johansen", [&] { return johansen_files(panel, c); }));
    report::Json selection;
    const VarModel var = run_stage("var", [&] { return var_stage(panel, c, &selection); });
    add(out, var_files(var, selection));
    add(out, run_stage("diagnose", [&] { return diagnostics_files(var, c); }));
    const SvarLingamModel model = run_stage("fit", [&] { return fit_svar_lingam(panel, var.p, svar_config(c)); });
    add(out, model_files(model));
    const BootstrapOptions bo = bootstrap_options(c);
    const BootstrapDraws draws = run_stage("bootstrap", [&] { return bootstrap_draws(model, panel, bo); });
    const BootstrapSummary summary = summarize_bootstrap(model, draws, bo);
    add(out, bootstrap_files(model, summary));
    add(out, run_stage("graph", [&] { return graph_files(model, &summary, c); }));
    add(out, run_stage("irf", [&] { return irf_files(irf_stage(model, c.get_bool("irf_bands") ? &draws : nullptr, c)); }));
    if (c.has("split_date")) add(out, run_stage("subperiods", [&] { return subperiod_files(panel, var.p, c); }));
    return out;
}

// ---- writing ----------------------------------------------------------------

/// Writes files into `dir` (created if needed), each via a temporary name.
inline void write_files(const fs::path& dir, const Files& files) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(Errc::config, "cannot create " + dir.string() + ": " + ec.message());
    for (const auto& [name, text] : files) {
        const fs::path tmp = dir / (name + ".tmp");
        csv::write_text(tmp.string(), text);
        fs::rename(tmp, dir / name);
    }
}

/// Writes a full bundle atomically: staged in a sibling directory, then
/// renamed over `dir`. An existing `dir` is replaced only if it is empty or
/// holds a previous bundle (has config.txt).
inline void write_bundle(const fs::path& dir, const Files& files) {
    if (dir.empty()) throw Error(Errc::config, "missing output directory");
    const fs::path target = fs::absolute(dir).lexically_normal();
    const fs::path staging = target.string() + ".partial";
    std::error_code ec;
    fs::remove_all(staging, ec);
    try {
        write_files(staging, files);
        if (fs::exists(target)) {
            if (!fs::is_directory(target) || (!fs::is_empty(target) && !fs::exists(target / "config.txt")))
                throw Error(Errc::config, "refusing to replace " + target.string() + ": not a previous bundle");
            fs::remove_all(target);
        }
        fs::rename(staging, target);
    } catch (...) {
        fs::remove_all(staging, ec);
        throw;
    }
}

/// Runs every stage and writes the bundle to the configured `output`.
inline Files run_pipeline(const Config& c) {
    if (!c.has("output")) throw Error(Errc::config, "missing required key 'output'");
    Files files = build_bundle(c);
    write_bundle(c.path("output"), files);
    return files;
}

}  // namespace svarlingam
