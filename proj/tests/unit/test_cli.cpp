#include "fqcsim/commands.hpp"
#include "fqcsim/config.hpp"
#include "fqcsim/errors.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace fqcsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fqcsim_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FQCSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

}  // namespace

TEST_CASE("doubles are written with 17 significant digits") {
    CHECK(format_double(0.1) == "1.0000000000000001e-01");
    CHECK(format_double(-2.5) == "-2.5000000000000000e+00");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("config rejects unknown keys and wrong types") {
    const RunConfig base = default_config("decay");
    CHECK_THROWS_AS(apply_json(base, Json::parse(R"({"N": 3, "colour": 1})")), ConfigError);
    CHECK_THROWS_AS(apply_json(base, Json::parse(R"({"markov": {"pair": 3}})")), ConfigError);
    CHECK_THROWS_AS(apply_json(base, Json::parse(R"({"N": 3.5})")), ConfigError);
    CHECK_THROWS_AS(apply_json(base, Json::parse(R"({"v": "0.3"})")), ConfigError);
    CHECK_THROWS_AS(apply_json(base, Json::parse(R"([1, 2])")), ConfigError);
    CHECK_THROWS_AS(default_config("lindblad"), ConfigError);
}

TEST_CASE("config validation catches bad values before compute") {
    RunConfig c = apply_json(default_config("decay"), Json::parse(R"({"v": -0.3})"));
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = apply_json(default_config("decay"), Json::parse(R"({"initial": "g"})"));
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = apply_json(default_config("rabi"), Json::parse(R"({"markov": {"domain": "half"}})"));
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_THROWS_AS(run_command("decay", apply_json(default_config("decay"),
                                                    Json::parse(R"({"grid_points": 1})"))),
                    ConfigError);
}

TEST_CASE("config survives a JSON round trip") {
    RunConfig c = default_config("markov");
    c.hole = 2.5;
    c.initial.label.clear();
    c.initial.amplitudes = std::array<cplx, 2>{cplx(0.6, 0.0), cplx(0.0, 0.8)};
    c.sweep.v_values = {0.1, 0.2000000000000001};
    c.seed = 123456789012345ULL;
    RunConfig back = apply_json(default_config("decay"), to_json(c));
    back.out = c.out;
    CHECK(back == c);
}

TEST_CASE("range and list parsing") {
    const auto r = parse_real_list("0.25:0.4:0.005");
    CHECK(r.size() == 31);
    CHECK(r.front() == 0.25);
    CHECK(r.back() == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(parse_int_list("2,5,9") == std::vector<int>{2, 5, 9});
    CHECK(parse_int_list("2:40:1").size() == 39);
    CHECK_THROWS_AS(parse_int_list("1.5"), ConfigError);
    CHECK_THROWS_AS(parse_real_list("a:b"), ConfigError);
}

TEST_CASE("decay command writes series and metrics with provenance") {
    const auto out = run_command("decay", default_config("decay"));
    const auto& ts = out.file("timeseries.csv").content;
    CHECK(ts.rfind("# config: {", 0) == 0);
    const auto lines = data_lines(ts);
    CHECK(lines[0] == "t,pi_e,rho00_re,rho00_im");
    CHECK(lines.size() == 2002);
    const Json metrics = Json::parse(out.file("metrics.json").content);
    CHECK(metrics["d1"]["value"].get<double>() <= 0.01);
    CHECK_FALSE(metrics["revival"]["found"].get<bool>());
    CHECK(metrics["provenance"]["config"]["N"] == 15);
    CHECK(metrics["provenance"]["seed"] == 1);
}

TEST_CASE("decay command: v=0.45 revives near 5, v=0 stays at one") {
    RunConfig c = default_config("decay");
    c.v = 0.45;
    const Json m = Json::parse(run_command("decay", c).file("metrics.json").content);
    REQUIRE(m["revival"]["found"].get<bool>());
    CHECK(m["revival"]["parameters"]["T_r"].get<double>() == doctest::Approx(4.94).epsilon(0.02));

    c.v = 0.0;
    const auto out = run_command("decay", c);
    const auto lines = data_lines(out.file("timeseries.csv").content);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto comma = lines[i].find(',');
        CHECK(std::stod(lines[i].substr(comma + 1)) == 1.0);
    }
}

TEST_CASE("rabi command: D2, source terms and optional extras") {
    RunConfig c = default_config("rabi");
    c.sidebands.enabled = true;
    c.markov.enabled = true;
    c.markov.pairs = 8;
    c.markov.bootstrap = 0;
    const auto out = run_command("rabi", c, 1);
    const Json m = Json::parse(out.file("metrics.json").content);
    CHECK(m["d2"]["value"].get<double>() <= 0.02);
    CHECK(m["regime"] == "underdamped");
    CHECK(m["sidebands"]["n_max"] == 2);
    CHECK(data_lines(out.file("source.csv").content)[0].rfind("t,lit_gg_re", 0) == 0);
    CHECK_NOTHROW(out.file("sigma.csv"));
    CHECK_NOTHROW(out.file("spectrum.csv"));
}

TEST_CASE("every subcommand runs on a small config") {
    for (const std::string cmd : {"decay", "rabi", "sidebands", "markov", "fit", "adaptive-compare"}) {
        RunConfig c = default_config(cmd);
        c.t_final = std::min(c.t_final, 4.0);
        c.grid_points = 401;
        c.markov.pairs = 4;
        c.markov.bootstrap = 10;
        CHECK_NOTHROW(run_command(cmd, c, 1));
    }
    RunConfig s = default_config("sweep");
    s.sweep.n_values = {4, 6};
    s.sweep.v_values = {0.3};
    CHECK(run_command("sweep", s, 1).summary["cells"] == 2);
    s.sweep.size_scan = true;
    s.sweep.sizes = {15};
    s.model = "rabi";
    s.omega0 = 10.0;
    s.grid_points = 2001;
    CHECK_NOTHROW(run_command("sweep", s, 1).file("size_scan.csv"));
}

TEST_CASE("command outputs are bit-identical on re-run from the embedded config") {
    RunConfig c = default_config("markov");
    c.markov.pairs = 6;
    c.markov.bootstrap = 20;
    c.t_final = 5.0;
    c.grid_points = 501;
    c.seed = 77;
    const auto first = run_command("markov", c, 2);
    const Json embedded = Json::parse(first.file("resolved_config.json").content);
    const RunConfig again = apply_json(default_config("decay"), embedded);
    const auto second = run_command("markov", again, 1);
    REQUIRE(first.files.size() == second.files.size());
    for (std::size_t i = 0; i < first.files.size(); ++i)
        CHECK(first.files[i].content == second.files[i].content);
}

TEST_CASE("CLI exit codes and file output") {
    const fs::path dir = scratch("cli");
    CHECK(run_cli("decay --out " + (dir / "a").string()) == 0);
    CHECK(fs::exists(dir / "a" / "timeseries.csv"));
    CHECK(fs::exists(dir / "a" / "metrics.json"));
    CHECK(fs::exists(dir / "a" / "resolved_config.json"));

    // strict config file, flags override it
    write_text_file(dir / "cfg.json", R"({"N": 4, "v": 0.3, "t_f": 2})");
    CHECK(run_cli("decay --config " + (dir / "cfg.json").string() + " --N 6 --out " +
                  (dir / "b").string()) == 0);
    const Json resolved = Json::parse(read_text_file(dir / "b" / "resolved_config.json"));
    CHECK(resolved["N"] == 6);
    CHECK(resolved["t_f"] == 2.0);

    write_text_file(dir / "bad.json", R"({"N": 4, "unknown": 1})");
    CHECK(run_cli("decay --config " + (dir / "bad.json").string()) == 2);
    write_text_file(dir / "broken.json", "{ not json");
    CHECK(run_cli("decay --config " + (dir / "broken.json").string()) == 2);
    CHECK(run_cli("decay --no-such-flag") == 2);
    CHECK(run_cli("decay --v -1 --out " + (dir / "c").string()) == 2);
    CHECK(run_cli("decay --config " + (dir / "missing.json").string()) == 4);
    write_text_file(dir / "blocker", "x");
    CHECK(run_cli("decay --out " + (dir / "blocker" / "sub").string()) == 4);
    CHECK(run_cli("sweep --n-values 15 --v-values 0.3 --out " + (dir / "s").string()) == 0);
    CHECK(fs::exists(dir / "s" / "sweep.csv"));

    // re-running from the embedded config reproduces every file
    CHECK(run_cli("decay --config " + (dir / "b" / "resolved_config.json").string() + " --out " +
                  (dir / "b2").string()) == 0);
    for (const char* f : {"timeseries.csv", "reference.csv", "metrics.json"})
        CHECK(read_text_file(dir / "b" / f) == read_text_file(dir / "b2" / f));
    fs::remove_all(dir);
}
