#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "levystop/errors.hpp"
#include "levystop/problem.hpp"

namespace {

using namespace levystop;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const ValidityError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const PoleError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"levystop: one-sided optimal stopping of Levy processes with polynomial rewards"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;

    auto* solve = app.add_subcommand("solve", "compute x*, the value function and its verification");
    solve->add_option("--config", config_path, "problem config (JSON)")->required();
    solve->add_option("--out", out_path, "write the solution document here");

    double from = 0.0, to = 0.0, step = 0.0;
    auto* table = app.add_subcommand("table", "tabulate x, g(x), V(x), V(x)-g(x) as CSV");
    table->add_option("--config", config_path, "problem config (JSON)")->required();
    auto* from_opt = table->add_option("--from", from, "first grid point");
    auto* to_opt = table->add_option("--to", to, "last grid point");
    auto* step_opt = table->add_option("--step", step, "grid spacing");
    table->add_option("--out", out_path, "write CSV here instead of standard output");

    std::string mode = "value";
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> paths;
    auto* mc = app.add_subcommand("mc", "Monte Carlo checks of the closed-form solution");
    mc->add_option("--config", config_path, "problem config (JSON) with an mc block")->required();
    mc->add_option("--mode", mode, "value | identity | sweep")
        ->check(CLI::IsMember({"value", "identity", "sweep"}));
    mc->add_option("--seed", seed, "override mc.seed");
    mc->add_option("--paths", paths, "override mc.paths");
    mc->add_option("--out", out_path, "write the report document here");

    CLI11_PARSE(app, argc, argv);

    return guarded([&]() -> int {
        ProblemConfig cfg = parse_config_text(read_file(config_path));

        if (solve->parsed()) {
            const auto res = cmd_solve(cfg);
            std::cout << res.summary;
            if (!out_path.empty()) write_file(out_path, res.document.dump(2) + "\n");
            return res.exit_code;
        }
        if (table->parsed()) {
            if (cfg.grid) {
                if (from_opt->count() == 0) from = cfg.grid->from;
                if (to_opt->count() == 0) to = cfg.grid->to;
                if (step_opt->count() == 0) step = cfg.grid->step;
            } else if (from_opt->count() == 0 || to_opt->count() == 0 || step_opt->count() == 0) {
                throw ConfigError("table: give --from, --to and --step or a grid block in the config");
            }
            const std::string csv = cmd_table(cfg, from, to, step);
            if (out_path.empty()) {
                std::cout << csv;
            } else {
                write_file(out_path, csv);
            }
            return kExitOk;
        }
        if (!cfg.mc) throw ConfigError("mc: config has no mc block");
        if (seed) cfg.mc->path.seed = *seed;
        if (paths) cfg.mc->path.paths = *paths;
        const auto res = cmd_mc(cfg, parse_mc_mode(mode));
        std::cout << res.summary;
        if (!out_path.empty()) write_file(out_path, res.document.dump(2) + "\n");
        return res.exit_code;
    });
}
