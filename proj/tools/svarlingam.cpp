// Command-line front end. Every subcommand reads the same flat configuration
// (-c FILE plus --set key=value overrides) and writes its artifacts into -o.

#include "svarlingam.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace sl = svarlingam;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    std::vector<std::string> sets;
    std::string out = ".";
    std::string panel;
    std::string seed;
};

void add_common(CLI::App* cmd, Common& c, bool with_panel = true) {
    cmd->add_option("-c,--config", c.config, "configuration file (key = value lines)");
    cmd->add_option("--set", c.sets, "override a configuration key, KEY=VALUE")->take_all();
    cmd->add_option("-o,--out", c.out, "output directory");
    cmd->add_option("--seed", c.seed, "master seed");
    if (with_panel) cmd->add_option("--panel", c.panel, "panel CSV (date column first)");
}

std::string absolute(const std::string& p) { return fs::absolute(p).lexically_normal().string(); }

sl::Config make_config(const Common& c) {
    sl::Config cfg = c.config.empty() ? sl::Config() : sl::Config::load(c.config);
    for (const auto& kv : c.sets) cfg.set_assignment(kv);
    if (!c.panel.empty()) cfg.set("panel", absolute(c.panel));
    if (!c.seed.empty()) cfg.set("seed", c.seed);
    return cfg;
}

void write(const Common& c, const sl::Files& files) {
    sl::write_files(c.out, files);
    for (const auto& [name, text] : files) std::cout << (fs::path(c.out) / name).string() << "\n";
}

sl::report::Json truth_json(const sl::GroundTruthSpec& s) {
    sl::report::Json j = sl::report::to_json(s);
    sl::report::Json pi = sl::report::Json::array();
    for (const auto& m : sl::implied_reduced_form(s.b)) pi.push_back(sl::report::mat_json(m));
    j["implied_pi"] = pi;
    j["order"] = sl::acyclic_order(s.b.front());
    return j;
}

sl::Panel panel_or_build(const sl::Config& cfg) { return sl::run_stage("ingest", [&] { return sl::build_panel(cfg); }); }

sl::SvarLingamModel load_model(const std::string& path) { return sl::report::model_from(sl::report::read_json(path)); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SVAR-LiNGAM causal discovery for multivariate time series"};
    app.require_subcommand(1);

    Common c;
    std::string model_path, bootstrap_path, var_path, spec_path, preset_name, shock;
    long long sim_T = -1;
    bool on_residuals = false;

    auto* ingest = app.add_subcommand("ingest", "build the aligned panel (panel.csv)");
    add_common(ingest, c);
    auto* stats = app.add_subcommand("stats", "descriptive statistics (stats.csv, stats.json)");
    add_common(stats, c);
    auto* adf = app.add_subcommand("adf", "ADF tests on levels and differences (adf.csv, adf.json)");
    add_common(adf, c);
    auto* joh = app.add_subcommand("johansen", "Johansen cointegration tests (johansen.csv, johansen.json)");
    add_common(joh, c);
    auto* var = app.add_subcommand("var", "reduced-form VAR (var.json, var_coefficients.csv)");
    add_common(var, c);
    auto* diag = app.add_subcommand("diagnose", "residual diagnostics (diagnostics.csv/json, qq.csv)");
    add_common(diag, c);
    diag->add_option("--var", var_path, "fitted VAR (var.json); refit from the panel when omitted");
    auto* fit = app.add_subcommand("fit", "SVAR-LiNGAM point estimate (model.json, svar_coefficients.csv)");
    add_common(fit, c);
    auto* boot = app.add_subcommand("bootstrap", "bootstrap significance (bootstrap.*, svar_significance.csv)");
    add_common(boot, c);
    boot->add_option("--model", model_path, "fitted model (model.json)")->required();
    auto* irf = app.add_subcommand("irf", "structural impulse responses (irf.csv, irf.json)");
    add_common(irf, c);
    irf->add_option("--model", model_path, "fitted model (model.json)")->required();
    auto* graph = app.add_subcommand("graph", "causal graph (graph.dot, graph.json)");
    add_common(graph, c, false);
    graph->add_option("--model", model_path, "fitted model (model.json)")->required();
    graph->add_option("--bootstrap", bootstrap_path, "bootstrap summary (bootstrap.json) for significance");
    auto* sim = app.add_subcommand("simulate", "simulate a ground-truth process (panel.csv, truth.json)");
    add_common(sim, c, false);
    sim->add_option("--spec", spec_path, "ground-truth specification JSON");
    sim->add_option("--preset", preset_name, "built-in specification: bivariate, chain3 or lingam3");
    sim->add_option("--T", sim_T, "number of observations");
    sim->add_option("--shock", shock, "shock distribution: uniform, laplace, gaussian, student_t");
    auto* run = app.add_subcommand("run", "full pipeline into one output directory");
    add_common(run, c);
    auto* ica = app.add_subcommand("ica", "debug: FastICA on the panel columns (ica.json)");
    add_common(ica, c);
    ica->add_flag("--var-residuals", on_residuals, "use VAR residuals instead of the raw columns");
    auto* lingam = app.add_subcommand("lingam", "debug: ICA-LiNGAM on the panel columns (lingam.json)");
    add_common(lingam, c);
    lingam->add_flag("--var-residuals", on_residuals, "use VAR residuals instead of the raw columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        sl::Config cfg = make_config(c);
        auto seeded = [&] {
            const bool given = cfg.has("seed");
            const std::uint64_t s = cfg.ensure_seed();
            if (!given) std::cerr << "generated seed " << s << "\n";
            return s;
        };
        auto data_for_ica = [&](const sl::Panel& p) {
            if (!on_residuals) return p.values;
            return sl::var_stage(p, cfg).residuals;
        };

        if (*ingest) {
            write(c, {{"panel.csv", sl::panel_to_csv(panel_or_build(cfg))}});
        } else if (*stats) {
            const auto p = panel_or_build(cfg);
            write(c, sl::run_stage("stats", [&] { return sl::stats_files(p); }));
        } else if (*adf) {
            const auto p = panel_or_build(cfg);
            write(c, sl::run_stage("adf", [&] { return sl::adf_files(p, cfg); }));
        } else if (*joh) {
            const auto p = panel_or_build(cfg);
            write(c, sl::run_stage("johansen", [&] { return sl::johansen_files(p, cfg); }));
        } else if (*var) {
            const auto p = panel_or_build(cfg);
            sl::report::Json sel;
            const auto m = sl::run_stage("var", [&] { return sl::var_stage(p, cfg, &sel); });
            write(c, sl::var_files(m, sel));
        } else if (*diag) {
            const sl::VarModel m = var_path.empty() ? sl::var_stage(panel_or_build(cfg), cfg)
                                                    : sl::report::var_from(sl::report::read_json(var_path));
            write(c, sl::run_stage("diagnose", [&] { return sl::diagnostics_files(m, cfg); }));
        } else if (*fit) {
            seeded();
            const auto p = panel_or_build(cfg);
            const int lag = sl::run_stage("var", [&] { return sl::var_lag(p, cfg); });
            const auto m = sl::run_stage("fit", [&] { return sl::fit_svar_lingam(p, lag, sl::svar_config(cfg)); });
            for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";
            write(c, sl::model_files(m));
        } else if (*boot) {
            seeded();
            const auto p = panel_or_build(cfg);
            const auto m = load_model(model_path);
            const auto bo = sl::bootstrap_options(cfg);
            const auto s = sl::run_stage("bootstrap", [&] { return sl::bootstrap_significance(m, p, bo); });
            write(c, sl::bootstrap_files(m, s));
        } else if (*irf) {
            seeded();
            const auto p = panel_or_build(cfg);
            const auto m = load_model(model_path);
            const auto r = sl::run_stage("irf", [&] {
                if (!cfg.get_bool("irf_bands")) return sl::irf_stage(m, nullptr, cfg);
                const auto draws = sl::bootstrap_draws(m, p, sl::bootstrap_options(cfg));
                return sl::irf_stage(m, &draws, cfg);
            });
            write(c, sl::irf_files(r));
        } else if (*graph) {
            const auto m = load_model(model_path);
            std::optional<sl::BootstrapSummary> s;
            if (!bootstrap_path.empty()) s = sl::report::bootstrap_from(sl::report::read_json(bootstrap_path));
            write(c, sl::run_stage("graph", [&] { return sl::graph_files(m, s ? &*s : nullptr, cfg); }));
        } else if (*sim) {
            if (spec_path.empty() == preset_name.empty())
                throw sl::Error(sl::Errc::config, "simulate needs exactly one of --spec or --preset");
            sl::GroundTruthSpec spec = spec_path.empty() ? sl::preset_spec(preset_name)
                                                         : sl::report::spec_from(sl::report::read_json(spec_path));
            if (sim_T > 0) spec.T = static_cast<std::size_t>(sim_T);
            if (!shock.empty()) spec.shock_dist = sl::report::distribution_from(shock);
            if (cfg.has("seed") || spec_path.empty()) spec.seed = seeded();
            const auto s = sl::run_stage("simulate", [&] { return sl::generate_svar(spec); });
            write(c, {{"panel.csv", sl::panel_to_csv(s.panel)}, {"truth.json", sl::report::dump(truth_json(spec))}});
        } else if (*run) {
            seeded();
            if (c.out == ".") throw sl::Error(sl::Errc::config, "run needs an explicit -o output directory");
            cfg.set("output", absolute(c.out));
            const auto files = sl::run_pipeline(cfg);
            std::cout << "wrote " << files.size() << " files to " << absolute(c.out) << "\n";
        } else if (*ica) {
            seeded();
            const auto p = panel_or_build(cfg);
            const auto x = data_for_ica(p);
            const auto opt = sl::svar_config(cfg).lingam.ica;
            const auto r = sl::run_stage("ica", [&] { return sl::fastica(x, opt); });
            auto j = sl::report::to_json(r);
            j["names"] = p.names;
            j["mutual_information_input"] = sl::mutual_information_estimate(sl::whiten(x).z);
            j["mutual_information_components"] = sl::mutual_information_estimate(r.components);
            write(c, {{"ica.json", sl::report::dump(j)}});
        } else if (*lingam) {
            seeded();
            const auto p = panel_or_build(cfg);
            const auto x = data_for_ica(p);
            const auto lo = sl::svar_config(cfg).lingam;
            const auto r = sl::run_stage("lingam", [&] { return sl::estimate_lingam(x, lo); });
            auto j = sl::report::to_json(r.result);
            j["names"] = p.names;
            j["b_ica"] = sl::report::mat_json(r.b_ica);
            j["ica_converged"] = r.ica.converged;
            if (x.cols() <= 6) j["brute_force_order"] = sl::brute_force_order(x);
            write(c, {{"lingam.json", sl::report::dump(j)}});
        }
    } catch (const sl::Error& e) {
        std::cerr << "error [" << sl::errc_name(e.code()) << "]: " << e.message() << "\n";
        return sl::exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
