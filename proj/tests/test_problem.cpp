#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "levystop/errors.hpp"
#include "levystop/problem.hpp"

using namespace levystop;
using nlohmann::json;

namespace {

const std::string kConfigs = LEVYSTOP_CONFIG_DIR;
const std::string kScratch = LEVYSTOP_SCRATCH_DIR;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ProblemConfig load(const std::string& name) { return parse_config_text(slurp(kConfigs + "/" + name)); }

std::string scratch_file(const std::string& name, const std::string& text) {
    const std::string path = kScratch + "/" + name;
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LEVYSTOP_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kBmQuadratic = R"({"model": {"type": "brownian", "drift": 0, "volatility": 1},
  "discount": 0.5, "reward": {"coefficients": [0, 0, 1]}})";

const char* kNotCertified = R"({"model": {"type": "spectrally_negative", "phi": 50},
  "discount": 0.5, "reward": {"roots": [0, 1, 2, 3, 4]}})";

std::vector<std::string> csv_rows(const std::string& csv) {
    std::vector<std::string> rows;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);) rows.push_back(line);
    return rows;
}

std::vector<double> csv_fields(const std::string& row) {
    std::vector<double> out;
    std::istringstream in(row);
    for (std::string f; std::getline(in, f, ',');) out.push_back(std::stod(f));
    return out;
}

}  // namespace

TEST_CASE("config parsing") {
    CHECK_NOTHROW(parse_config_text(kBmQuadratic));
    CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"discount": 0.5, "reward": {"coefficients": [0, 1]}})"), ConfigError);

    json j = json::parse(kBmQuadratic);
    auto with = [&](const json::json_pointer& ptr, json v) {
        json k = j;
        k[ptr] = std::move(v);
        return k;
    };
    CHECK_THROWS_AS(parse_config(with("/model/type"_json_pointer, "heston")), ConfigError);
    CHECK_THROWS_AS(parse_config(with("/model/volatility"_json_pointer, "one")), ConfigError);
    CHECK_THROWS_AS(parse_config(with("/discount"_json_pointer, -1.0)), ConfigError);
    CHECK_THROWS_AS(parse_config(with("/reward/roots"_json_pointer, json::array({0, 1}))), ConfigError);
    CHECK_THROWS_AS(parse_config(with("/reward/coefficients"_json_pointer, json::array())), ConfigError);
    CHECK_THROWS_AS(parse_config(with("/mc"_json_pointer, {{"paths", 1.5}})), ConfigError);
    CHECK_THROWS_AS(parse_config(with("/mc"_json_pointer, {{"paths", 0}})), ConfigError);
    CHECK_THROWS_AS(parse_config(with("/mc"_json_pointer, {{"weighting", "both"}})), ConfigError);
    CHECK_THROWS_AS(parse_config(with("/mc"_json_pointer, {{"seed", -4}})), ConfigError);
    CHECK_THROWS_AS(parse_config(with("/grid"_json_pointer, {{"from", 0}})), ConfigError);

    const auto kou = load("example3_kou_quartic.json");
    CHECK(kou.model.kind() == ModelKind::kou);
    CHECK(kou.reward().coeffs() == std::vector<double>{0.0, -6.0, 11.0, -6.0, 1.0});
    CHECK(parse_config_text(R"({"model": {"type": "brownian", "volatility": 1e0}, "discount": 5E-1,
        "reward": {"coefficients": [0, 0, 1]}})").discount == 0.5);
}

TEST_CASE("reward shape is enforced") {
    json j = json::parse(kBmQuadratic);
    j["reward"]["coefficients"] = {0, 0, 2};
    try {
        parse_config(j);
        FAIL("non-monic reward accepted");
    } catch (const ShapeError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("required form") != std::string::npos);
        CHECK(msg.find("normalized p coefficients") != std::string::npos);
    }
    j["reward"]["coefficients"] = {1, 0, 1};
    CHECK_THROWS_AS(parse_config(j), ShapeError);
    j["reward"]["coefficients"] = {0, 0, 0};
    CHECK_THROWS_AS(parse_config(j), ShapeError);
}

TEST_CASE("solve documents") {
    const auto cfg = load("example3_kou_quartic.json");
    const auto res = cmd_solve(cfg);
    CHECK(res.exit_code == kExitOk);
    const json& doc = res.document;
    CHECK(std::abs(doc["x_star"].get<double>() - 4.3706) < 5e-4);
    CHECK(doc["supremum_law"].size() == 2);
    CHECK(doc["value_function"]["exp_terms"].size() == 2);
    CHECK(doc["averaging_coefficients"].size() == 5);
    CHECK(doc["verification"]["certified"] == true);
    CHECK(doc["provenance"]["moments"].size() == 5);
    CHECK(std::abs(doc["provenance"]["root_residual"].get<double>()) < 1e-10);

    SUBCASE("byte-identical on repetition") {
        CHECK(cmd_solve(cfg).document.dump(2) == doc.dump(2));
    }
    SUBCASE("the echoed config reproduces the document") {
        const auto again = cmd_solve(parse_config(doc["config"]));
        CHECK(again.document.dump() == doc.dump());
        CHECK(to_json(parse_config(doc["config"])) == doc["config"]);
    }
    SUBCASE("Brownian cubic") {
        const auto cubic = cmd_solve(load("example2_cubic.json"));
        CHECK(cubic.exit_code == kExitOk);
        CHECK(std::abs(cubic.document["x_star"].get<double>() - 3.0) < 1e-10);
    }
    SUBCASE("a failed dominance check is exit 2") {
        CHECK(cmd_solve(parse_config_text(kNotCertified)).exit_code == kExitNotCertified);
    }
}

TEST_CASE("tables") {
    SUBCASE("layout and the boundary row") {
        const auto rows = csv_rows(cmd_table(parse_config_text(kBmQuadratic), 0.0, 4.0, 0.5));
        REQUIRE(rows.size() == 10);
        CHECK(rows[0] == "x,g,V,V_minus_g");
        CHECK(rows[5] == "2,4,4,0");
        const auto last = csv_fields(rows.back());
        CHECK(last[0] == 4.0);
        CHECK(last[3] == 0.0);
        CHECK(rows[1] == "0,0," + format_double(4.0 * std::exp(-2.0)) + "," + format_double(4.0 * std::exp(-2.0)));
    }
    SUBCASE("Kou row at the origin") {
        const auto rows = csv_rows(cmd_table(load("example3_kou_quartic.json"), 0.0, 1.0, 1.0));
        REQUIRE(rows.size() == 3);
        const auto f = csv_fields(rows[1]);
        CHECK(f[0] == 0.0);
        CHECK(f[1] == 0.0);
        CHECK(f[2] > 0.0);
    }
    SUBCASE("V dominates g for the quadratic with a = -1") {
        const auto rows = csv_rows(cmd_table(load("example1_quadratic_a_m1.json"), 0.0, 4.0, 0.01));
        CHECK(rows.size() == 402);
        for (std::size_t i = 1; i < rows.size(); ++i) CHECK(csv_fields(rows[i])[3] >= -1e-12);
    }
    SUBCASE("bad ranges") {
        const auto cfg = parse_config_text(kBmQuadratic);
        CHECK_THROWS_AS(cmd_table(cfg, 1.0, 0.0, 0.1), ConfigError);
        CHECK_THROWS_AS(cmd_table(cfg, 0.0, 1.0, 0.0), ConfigError);
        CHECK_THROWS_AS(cmd_table(cfg, 0.0, 1.0, -0.1), ConfigError);
        CHECK_THROWS_AS(cmd_table(cfg, 0.0, NAN, 0.1), ConfigError);
    }
}

TEST_CASE("mc command") {
    auto cfg = load("example3_kou_quartic.json");
    REQUIRE(cfg.mc);
    cfg.mc->path.paths = 2000;

    SUBCASE("value above x* is exact") {
        cfg.mc->path.x0 = 5.0;
        const auto res = cmd_mc(cfg, McMode::value);
        CHECK(res.exit_code == kExitOk);
        CHECK(res.document["estimate"]["mean"].get<double>() == cfg.reward()(5.0));
        CHECK(res.document["closed_form"].get<double>() == doctest::Approx(cfg.reward()(5.0)));
    }
    SUBCASE("identity and sweep pass") {
        CHECK(cmd_mc(cfg, McMode::identity).exit_code == kExitOk);
        const auto sweep = cmd_mc(cfg, McMode::sweep);
        CHECK(sweep.exit_code == kExitOk);
        CHECK(sweep.document["estimates"].size() == 3);
        CHECK(cmd_mc(cfg, McMode::sweep).document.dump() == sweep.document.dump());
    }
    SUBCASE("coarse monitoring is caught") {
        auto bm = load("example2_cubic.json");
        bm.mc->path.dt = 0.5;
        bm.mc->path.paths = 20000;
        bm.mc->path.seed = 3;
        CHECK(cmd_mc(bm, McMode::value).exit_code == kExitMcCheckFailed);
    }
    SUBCASE("missing block and bad mode") {
        CHECK_THROWS_AS(cmd_mc(parse_config_text(kBmQuadratic), McMode::value), ConfigError);
        CHECK_THROWS_AS(parse_mc_mode("bogus"), ConfigError);
    }
}

TEST_CASE("command line exit codes") {
    const std::string kou = kConfigs + "/example3_kou_quartic.json";
    const std::string out = kScratch + "/cli_solution.json";
    CHECK(run_cli("solve --config " + kou + " --out " + out) == 0);
    const json doc = json::parse(slurp(out));
    CHECK(std::abs(doc["x_star"].get<double>() - 4.3706) < 5e-4);
    CHECK(doc.dump() == cmd_solve(load("example3_kou_quartic.json")).document.dump());

    SUBCASE("echoed config round-trips through the binary") {
        const std::string echoed = scratch_file("cli_echo.json", doc["config"].dump(2));
        const std::string out2 = kScratch + "/cli_solution2.json";
        CHECK(run_cli("solve --config " + echoed + " --out " + out2) == 0);
        CHECK(slurp(out2) == slurp(out));
    }
    SUBCASE("failure codes") {
        CHECK(run_cli("solve --config " + scratch_file("cli_nc.json", kNotCertified)) == 2);
        CHECK(run_cli("solve --config " + scratch_file("cli_bad.json", "{\"model\": 1}")) == 3);
        CHECK(run_cli("solve --config " + scratch_file("cli_nonmonic.json",
                                                       R"({"model": {"type": "brownian", "volatility": 1},
              "discount": 0.5, "reward": {"coefficients": [0, 3, 2]}})")) == 3);
        CHECK(run_cli("solve --config " + kScratch + "/does_not_exist.json") == 3);
        CHECK(run_cli("table --config " + kou + " --from 2 --to 1 --step 0.1") == 3);
        CHECK(run_cli("mc --config " + scratch_file("cli_nomc.json", kBmQuadratic)) == 3);
        CHECK(run_cli("mc --config " + kou + " --paths 0") == 3);
    }
    SUBCASE("table and mc") {
        const std::string csv = kScratch + "/cli_table.csv";
        CHECK(run_cli("table --config " + kou + " --from 0 --to 5 --step 0.25 --out " + csv) == 0);
        CHECK(csv_rows(slurp(csv)).size() == 22);
        CHECK(slurp(csv) == cmd_table(load("example3_kou_quartic.json"), 0.0, 5.0, 0.25));

        const std::string r1 = kScratch + "/cli_mc1.json";
        const std::string r2 = kScratch + "/cli_mc2.json";
        CHECK(run_cli("mc --config " + kou + " --mode identity --seed 7 --paths 3000 --out " + r1) == 0);
        CHECK(run_cli("mc --config " + kou + " --mode identity --seed 7 --paths 3000 --out " + r2) == 0);
        CHECK(slurp(r1) == slurp(r2));
        CHECK(json::parse(slurp(r1))["estimate"]["seed"] == 7);
    }
}
