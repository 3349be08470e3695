#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "levystop/levy_model.hpp"
#include "levystop/monte_carlo.hpp"
#include "levystop/polynomial.hpp"
#include "levystop/valuation.hpp"

namespace levystop {

struct McBlock {
    PathConfig path;
    /// Level a for the identity check; defaults to x_star.
    std::optional<double> level;
    /// Thresholds for the sweep; defaults to x_star -/+ 0.5.
    std::vector<double> thresholds;
};

struct GridBlock {
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
};

/// Everything needed to pose and solve one problem, as read from a config file.
struct ProblemConfig {
    LevyModel model = LevyModel::brownian(0.0, 1.0);
    double discount = 0.5;
    /// Reward as given: either coefficients (ascending) or roots.
    std::vector<double> reward_coefficients;
    std::vector<double> reward_roots;
    std::optional<McBlock> mc;
    std::optional<GridBlock> grid;

    /// The reward polynomial; throws ShapeError (with a normalization hint)
    /// unless it is monic with p(0) = 0.
    Polynomial reward() const;
};

/// Throws ConfigError with a message naming the offending key.
ProblemConfig parse_config(const nlohmann::json& j);
ProblemConfig parse_config_text(const std::string& text);
nlohmann::json to_json(const ProblemConfig& cfg);

enum ExitCode : int {
    kExitOk = 0,
    kExitNotCertified = 2,
    kExitInvalidConfig = 3,
    kExitNumerical = 4,
    kExitMcCheckFailed = 5,
};

struct CommandResult {
    int exit_code = kExitOk;
    nlohmann::json document;
    std::string summary;
};

/// Full pipeline: supremum law, averaging polynomial, threshold, value
/// function and verification.
struct Solution {
    SupremumLaw law;
    AveragingResult averaging;
    PiecewiseValue value;
    VerificationReport report;
};
Solution solve(const ProblemConfig& cfg);

CommandResult cmd_solve(const ProblemConfig& cfg);

/// CSV with header x,g,V,V_minus_g. Throws ConfigError on a bad range.
std::string cmd_table(const ProblemConfig& cfg, double from, double to, double step);

enum class McMode { value, identity, sweep };
McMode parse_mc_mode(const std::string& s);
CommandResult cmd_mc(const ProblemConfig& cfg, McMode mode);

/// Shortest decimal text that reads back to the same double ("." decimal
/// point regardless of locale).
std::string format_double(double v);

}  // namespace levystop
