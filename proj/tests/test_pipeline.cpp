#include "catch_amalgamated.hpp"

#include "support.hpp"
#include "svarlingam.hpp"

#include <cstdlib>
#include <functional>
#include <sys/wait.h>

using namespace svarlingam;
using testsupport::slurp;
using testsupport::TempDir;

namespace {

std::string chain_panel_csv(std::uint64_t seed, std::size_t T = 2000) {
    GroundTruthSpec spec = preset_spec("chain3");
    spec.T = T;
    spec.seed = seed;
    return panel_to_csv(generate_svar(spec).panel);
}

Config chain_config(const TempDir& dir, std::uint64_t seed = 11) {
    const std::string panel = dir.file("chain3.csv", chain_panel_csv(seed));
    return Config::parse("panel = " + panel + "\nseed = 5\nbootstrap_iterations = 100\nmax_lag = 4\n"
                         "adf_max_lag = 4\nirf_horizon = 10\n");
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SVARLINGAM_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return Errc::config;
}

}  // namespace

TEST_CASE("configuration parsing", "[pipeline][config]") {
    const Config c = Config::parse("# comment\nseed = 42   # trailing\n\nmax_lag=3\nBTC.file = btc.csv\n");
    CHECK(c.get_u64("seed") == 42);
    CHECK(c.get_int("max_lag") == 3);
    CHECK(c.get("ica_nonlinearity") == "tanh");
    CHECK(c.has("BTC.file"));
    CHECK_FALSE(c.has("split_date"));

    CHECK(code_of([] { Config::parse("seed 42\n"); }) == Errc::config);
    CHECK(code_of([] { Config::parse("no_such_key = 1\n"); }) == Errc::config);
    CHECK(code_of([] { Config::parse("BTC.colour = red\n"); }) == Errc::config);
    CHECK(code_of([] { Config::parse("max_lag = many\n").get_int("max_lag"); }) == Errc::config);
    CHECK(code_of([] { Config::parse("log = maybe\n").get_bool("log"); }) == Errc::config);
    CHECK(code_of([] { Config::parse("start = 2020-13-01\n").get_date("start"); }) == Errc::config);
    CHECK(code_of([] { Config().set_assignment("seed"); }) == Errc::config);
    try {
        Config::parse("seed = 1\nbogus = 2\n", "run.cfg");
        FAIL("unknown key accepted");
    } catch (const Error& e) {
        CHECK(e.message().find("run.cfg:2") != std::string::npos);
    }

    Config o = Config::parse("max_lag = 3\n");
    o.set_assignment("max_lag=6");
    CHECK(o.get_int("max_lag") == 6);
}

TEST_CASE("configuration echo", "[pipeline][config]") {
    Config c = Config::parse("panel = data/p.csv\nmax_lag = 2\n");
    c.set_base_dir("/base");
    CHECK_FALSE(c.has("seed"));
    const auto seed = c.ensure_seed();
    CHECK(c.get_u64("seed") == seed);
    CHECK(c.ensure_seed() == seed);

    const std::string echo = c.echo();
    CHECK(echo.find("panel = /base/data/p.csv\n") != std::string::npos);
    CHECK(echo.find("max_lag = 2\n") != std::string::npos);
    CHECK(echo.find("seed = " + std::to_string(seed) + "\n") != std::string::npos);
    CHECK(echo.find("bootstrap_iterations = 1000\n") != std::string::npos);

    Config back = Config::parse(echo);
    CHECK(back.echo() == echo);

    Config with_out = c;
    with_out.set("output", "/somewhere");
    CHECK(with_out.echo() == echo);
}

TEST_CASE("end-to-end bundle on the three-variable chain", "[pipeline]") {
    TempDir dir;
    const Config c = chain_config(dir);
    const Files files = build_bundle(c);
    for (const char* name : {"config.txt", "panel.csv", "stats.csv", "stats.json", "adf.csv", "adf.json",
                             "johansen.csv", "johansen.json", "var.json", "var_coefficients.csv", "diagnostics.csv",
                             "diagnostics.json", "qq.csv", "model.json", "svar_coefficients.csv", "bootstrap.json",
                             "bootstrap.csv", "svar_significance.csv", "graph.dot", "graph.json", "irf.csv", "irf.json"})
        CHECK(files.count(name) == 1);

    const VarModel var = report::var_from(report::Json::parse(files.at("var.json")));
    REQUIRE(var.p == 1);
    CHECK(std::abs(var.pi[0](2, 0) - 0.9) < 0.1);

    const auto graph = report::Json::parse(files.at("graph.json"));
    std::map<std::pair<std::string, std::string>, std::pair<double, bool>> lag0;
    for (const auto& e : graph.at("edges"))
        if (e.at("lag").get<int>() == 0)
            lag0[{e.at("from").get<std::string>(), e.at("to").get<std::string>()}] = {e.at("weight").get<double>(),
                                                                                     e.at("significant").get<bool>()};
    REQUIRE(lag0.count({"y1", "y2"}));
    REQUIRE(lag0.count({"y2", "y3"}));
    CHECK(std::abs(lag0[{"y1", "y2"}].first - 1.0) < 0.1);
    CHECK(lag0[{"y1", "y2"}].second);
    CHECK(std::abs(lag0[{"y2", "y3"}].first - 1.0) < 0.1);
    CHECK(lag0[{"y2", "y3"}].second);
    for (const auto& [edge, w] : lag0)
        if (edge != std::pair<std::string, std::string>{"y1", "y2"} &&
            edge != std::pair<std::string, std::string>{"y2", "y3"})
            CHECK(std::abs(w.first) < 0.1);

    const SvarLingamModel m = report::model_from(report::Json::parse(files.at("model.json")));
    CHECK(std::abs(m.b[1](2, 0)) < 0.05);
    CHECK(files.at("graph.dot").find("y1 -> y2 [label=") != std::string::npos);
}

TEST_CASE("bundle is byte-identical across reruns and thread counts", "[pipeline][determinism]") {
    TempDir dir;
    Config c = chain_config(dir, 21);
    c.set("output", (dir.path() / "a").string());
    const Files first = run_pipeline(c);
    c.set("output", (dir.path() / "b").string());
    const Files second = run_pipeline(c);
    CHECK(first == second);
    for (const auto& [name, text] : first) {
        INFO(name);
        CHECK(slurp(dir.path() / "a" / name) == text);
        CHECK(slurp(dir.path() / "b" / name) == text);
    }
    CHECK_FALSE(std::filesystem::exists(dir.path() / "a.partial"));

    c.set("threads", "1");
    Files serial = build_bundle(c);
    CHECK(serial.at("config.txt") != first.at("config.txt"));
    serial["config.txt"] = first.at("config.txt");
    CHECK(serial == first);

    // The echoed configuration alone reproduces the bundle.
    Config echoed = Config::parse(first.at("config.txt"));
    echoed.set("output", (dir.path() / "c").string());
    CHECK(run_pipeline(echoed) == first);
}

TEST_CASE("each stage rerun from persisted artifacts reproduces its files", "[pipeline][determinism]") {
    TempDir dir;
    Config c = chain_config(dir, 31);
    c.set("split_date", "2002-01-01");
    c.set("output", (dir.path() / "out").string());
    const Files bundle = run_pipeline(c);
    const auto out = dir.path() / "out";
    auto read = [&](const char* name) { return slurp(out / name); };
    auto same = [&](const Files& f) {
        for (const auto& [name, text] : f) {
            INFO(name);
            CHECK(read(name.c_str()) == text);
        }
    };

    const Config cfg = Config::parse(read("config.txt"));
    const Panel panel = load_panel_csv((out / "panel.csv").string());
    CHECK(panel_to_csv(panel) == read("panel.csv"));
    same(stats_files(panel));
    same(adf_files(panel, cfg));
    same(johansen_files(panel, cfg));
    report::Json sel;
    const VarModel var = var_stage(panel, cfg, &sel);
    same(var_files(var, sel));
    same(diagnostics_files(report::var_from(report::read_json((out / "var.json").string())), cfg));

    const SvarLingamModel fitted = fit_svar_lingam(panel, var.p, svar_config(cfg));
    same(model_files(fitted));
    const SvarLingamModel model = report::model_from(report::read_json((out / "model.json").string()));
    same(model_files(model));

    const BootstrapOptions bo = bootstrap_options(cfg);
    const BootstrapDraws draws = bootstrap_draws(model, panel, bo);
    const BootstrapSummary summary = summarize_bootstrap(model, draws, bo);
    same(bootstrap_files(model, summary));
    const BootstrapSummary loaded = report::bootstrap_from(report::read_json((out / "bootstrap.json").string()));
    same(graph_files(model, &loaded, cfg));
    same(irf_files(irf_stage(model, &draws, cfg)));
    same(subperiod_files(panel, var.p, cfg));
    CHECK(bundle.count("irf_first.csv") == 1);
    CHECK(bundle.count("irf_second.json") == 1);
}

TEST_CASE("a failing stage names itself and leaves no output", "[pipeline][errors]") {
    TempDir dir;
    std::string csv = "date,a,b\n";
    for (int d = 1; d <= 9; ++d) csv += "2000-01-0" + std::to_string(d) + "," + std::to_string(d * d) + "," + std::to_string(d % 3) + "\n";
    Config c = Config::parse("panel = " + dir.file("short.csv", csv) + "\nseed = 1\n");
    c.set("output", (dir.path() / "out").string());
    try {
        run_pipeline(c);
        FAIL("short panel accepted");
    } catch (const Error& e) {
        CHECK(e.message().rfind("stage ", 0) == 0);
        CHECK(exit_code(e.code()) != 2);
    }
    CHECK_FALSE(std::filesystem::exists(dir.path() / "out"));
    CHECK_FALSE(std::filesystem::exists(dir.path() / "out.partial"));

    Config no_out = Config::parse("panel = x.csv\n");
    CHECK(code_of([&] { run_pipeline(no_out); }) == Errc::config);

    // An unrelated directory is never replaced.
    Config good = chain_config(dir);
    const auto keep = dir.path() / "keep";
    std::filesystem::create_directories(keep);
    dir.file("keep/notes.txt", "mine");
    good.set("output", keep.string());
    CHECK(code_of([&] { run_pipeline(good); }) == Errc::config);
    CHECK(slurp(keep / "notes.txt") == "mine");
}

TEST_CASE("panel assembly from per-variable price files", "[pipeline][ingest]") {
    TempDir dir;
    std::string a = "Date,Close\n", b = "Date,Close\n", eur = "Date,Close\n", usd = "Date,Close\n";
    for (int d = 1; d <= 9; ++d) {
        const std::string date = "2021-03-0" + std::to_string(d);
        a += date + "," + std::to_string(100 + d) + "\n";
        eur += date + "," + std::to_string(50.0 + d) + "\n";
        usd += date + "," + std::to_string(60.0 + d) + "\n";
        // 2021-03-06 and 07 are a weekend; b only trades on weekdays.
        if (d != 6 && d != 7) b += date + "," + std::to_string(10 + d) + "\n";
    }
    dir.file("a.csv", a);
    dir.file("b.csv", b);
    dir.file("eur.csv", eur);
    dir.file("usd.csv", usd);
    const std::string cfg_path = dir.file("run.cfg",
                                          "variables = A, B, C\nA.file = a.csv\nB.file = b.csv\nC.eur = eur.csv\n"
                                          "C.usd = usd.csv\nlog = false\nstart = 2021-03-02\n");
    const Panel p = build_panel(Config::load(cfg_path));
    REQUIRE(p.names == std::vector<std::string>{"A", "B", "C"});
    REQUIRE(p.rows() == 8);
    CHECK(p.values(0, 0) == 102.0);
    CHECK(p.values(4, 1) == 15.0);  // Saturday carries Friday's close
    CHECK(p.values(5, 1) == 15.0);
    CHECK(p.values(0, 2) == Catch::Approx(52.0 / 62.0).epsilon(1e-14));

    Config logged = Config::load(cfg_path);
    logged.set("log", "true");
    CHECK(build_panel(logged).values(0, 0) == Catch::Approx(std::log(102.0)).epsilon(1e-14));

    Config missing = Config::load(cfg_path);
    missing.set("variables", "A, D");
    CHECK(code_of([&] { build_panel(missing); }) == Errc::config);
    CHECK(code_of([] { build_panel(Config()); }) == Errc::config);
}

TEST_CASE("command-line exit codes and artifacts", "[pipeline][cli]") {
    TempDir dir;
    const auto d = dir.path().string();
    CHECK(run_cli("simulate --preset chain3 --T 1500 --seed 3 -o " + d + "/sim") == 0);
    const std::string panel = d + "/sim/panel.csv";
    REQUIRE(std::filesystem::exists(panel));
    const auto truth = report::read_json(d + "/sim/truth.json");
    CHECK(truth.at("order") == report::Json({0, 1, 2}));
    CHECK(run_cli("simulate --preset chain3 --T 1500 --seed 3 -o " + d + "/sim2") == 0);
    CHECK(slurp(d + "/sim/panel.csv") == slurp(d + "/sim2/panel.csv"));

    CHECK(run_cli("run --panel " + panel + " --seed 9 --set bootstrap_iterations=100 -o " + d + "/run") == 0);
    CHECK(run_cli("fit --panel " + panel + " --seed 9 -o " + d + "/fit") == 0);
    CHECK(slurp(d + "/fit/model.json") == slurp(d + "/run/model.json"));
    CHECK(run_cli("graph --model " + d + "/run/model.json --bootstrap " + d + "/run/bootstrap.json -o " + d + "/g") == 0);
    CHECK(slurp(d + "/g/graph.dot") == slurp(d + "/run/graph.dot"));
    CHECK(run_cli("bootstrap --panel " + panel + " --seed 9 --set bootstrap_iterations=100 --model " + d +
                  "/run/model.json -o " + d + "/b") == 0);
    CHECK(slurp(d + "/b/bootstrap.json") == slurp(d + "/run/bootstrap.json"));
    CHECK(run_cli("irf --panel " + panel + " --seed 9 --set bootstrap_iterations=100 --model " + d +
                  "/run/model.json -o " + d + "/i") == 0);
    CHECK(slurp(d + "/i/irf.csv") == slurp(d + "/run/irf.csv"));
    CHECK(run_cli("diagnose --var " + d + "/run/var.json -o " + d + "/dg") == 0);
    CHECK(slurp(d + "/dg/diagnostics.json") == slurp(d + "/run/diagnostics.json"));

    // config errors
    CHECK(run_cli("") == 2);
    CHECK(run_cli("var --panel " + panel + " --set no_such_key=1 -o " + d + "/x") == 2);
    CHECK(run_cli("var -c " + d + "/missing.cfg -o " + d + "/x") == 2);
    CHECK(run_cli("simulate --preset eq9 -o " + d + "/x") == 2);
    CHECK(run_cli("run --panel " + panel) == 2);

    // data errors
    const std::string bad = dir.file("bad.csv", "date,a,b\n2000-01-01,1,x\n");
    CHECK(run_cli("stats --panel " + bad + " -o " + d + "/x") == 3);
    CHECK(run_cli("stats --panel " + d + "/absent.csv -o " + d + "/x") == 3);

    // numerical failure: perfectly collinear columns
    Rng rng(4);
    std::normal_distribution<double> g;
    Matrix x(300, 2);
    for (Eigen::Index t = 0; t < x.rows(); ++t) {
        x(t, 0) = g(rng);
        x(t, 1) = 2.0 * x(t, 0);
    }
    const std::string dup = panel_to_csv(make_panel(x));
    CHECK(run_cli("var --panel " + dir.file("dup.csv", dup) + " -o " + d + "/x") == 4);
}
