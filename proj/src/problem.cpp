#include "levystop/problem.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "levystop/averaging.hpp"
#include "levystop/errors.hpp"

namespace levystop {

using nlohmann::json;

namespace {

constexpr double kMcSigmas = 3.0;
constexpr long kMaxTableRows = 10'000'000;

double number_at(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + "." + key + ": missing");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
    return j.contains(key) ? number_at(j, key, where) : fallback;
}

std::vector<double> number_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError(where + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

LevyModel parse_model(const json& j) {
    if (!j.is_object()) throw ConfigError("model: expected an object");
    if (!j.contains("type") || !j.at("type").is_string()) throw ConfigError("model.type: missing");
    const auto type = j.at("type").get<std::string>();
    if (type == "brownian") {
        return LevyModel::brownian(number_or(j, "drift", 0.0, "model"),
                                   number_at(j, "volatility", "model"));
    }
    if (type == "kou") {
        return LevyModel::kou(number_at(j, "drift", "model"), number_at(j, "volatility", "model"),
                              number_at(j, "up_intensity", "model"),
                              number_at(j, "down_intensity", "model"),
                              number_at(j, "up_rate", "model"), number_at(j, "down_rate", "model"));
    }
    if (type == "spectrally_negative") {
        return LevyModel::spectrally_negative(number_at(j, "phi", "model"));
    }
    throw ConfigError("model.type: unknown model '" + type +
                      "' (expected brownian, kou or spectrally_negative)");
}

json model_json(const LevyModel& m) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, BrownianDrift>) {
                return {{"type", "brownian"}, {"drift", v.drift}, {"volatility", v.volatility}};
            } else if constexpr (std::is_same_v<T, KouJumpDiffusion>) {
                return {{"type", "kou"},
                        {"drift", v.drift},
                        {"volatility", v.volatility},
                        {"up_intensity", v.up_intensity},
                        {"down_intensity", v.down_intensity},
                        {"up_rate", v.up_rate},
                        {"down_rate", v.down_rate}};
            } else {
                return {{"type", "spectrally_negative"}, {"phi", v.phi}};
            }
        },
        m.variant());
}

McBlock parse_mc(const json& j) {
    if (!j.is_object()) throw ConfigError("mc: expected an object");
    McBlock mc;
    PathConfig& p = mc.path;
    p.dt = number_or(j, "dt", p.dt, "mc");
    p.horizon = number_or(j, "horizon", p.horizon, "mc");
    p.x0 = number_or(j, "x0", p.x0, "mc");
    if (j.contains("paths")) {
        if (!j.at("paths").is_number_integer()) throw ConfigError("mc.paths: expected an integer");
        p.paths = j.at("paths").get<std::int64_t>();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ConfigError("mc.seed: expected a non-negative integer");
        p.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("workers")) {
        if (!j.at("workers").is_number_unsigned()) throw ConfigError("mc.workers: expected a non-negative integer");
        p.workers = j.at("workers").get<unsigned>();
    }
    if (j.contains("weighting")) {
        const auto w = j.at("weighting").is_string() ? j.at("weighting").get<std::string>() : "";
        if (w == "discount") {
            p.weighting = Weighting::discount;
        } else if (w == "killing") {
            p.weighting = Weighting::killing;
        } else {
            throw ConfigError("mc.weighting: expected \"discount\" or \"killing\"");
        }
    }
    if (j.contains("level")) mc.level = number_at(j, "level", "mc");
    if (j.contains("thresholds")) mc.thresholds = number_list(j.at("thresholds"), "mc.thresholds");
    if (p.paths < 1) throw ConfigError("mc.paths: must be >= 1");
    if (!(p.dt > 0.0)) throw ConfigError("mc.dt: must be > 0");
    if (p.horizon < 0.0) throw ConfigError("mc.horizon: must be >= 0 (0 selects 12/r)");
    return mc;
}

json mc_json(const McBlock& mc) {
    json j = {{"dt", mc.path.dt},
              {"horizon", mc.path.horizon},
              {"paths", mc.path.paths},
              {"seed", mc.path.seed},
              {"x0", mc.path.x0},
              {"workers", mc.path.workers},
              {"weighting", mc.path.weighting == Weighting::discount ? "discount" : "killing"}};
    if (mc.level) j["level"] = *mc.level;
    if (!mc.thresholds.empty()) j["thresholds"] = mc.thresholds;
    return j;
}

json estimate_json(const McEstimate& e) {
    return {{"mean", e.mean},
            {"std_error", e.std_error},
            {"n", e.n},
            {"seed", e.seed},
            {"horizon", e.horizon},
            {"horizon_discount", e.horizon_discount},
            {"truncated_fraction", e.truncated_fraction}};
}

json report_json(const VerificationReport& r) {
    json j = {{"monotone_ok", r.monotone_ok},
              {"monotone_exact", r.monotone_exact},
              {"dominance_ok", r.dominance_ok},
              {"worst_margin", r.worst_margin},
              {"worst_margin_x", r.worst_margin_x},
              {"dominance_points", r.dominance_points},
              {"corollary_sign_ok", r.corollary_sign_ok},
              {"nonpositive_on_0_xstar", r.nonpositive_on_0_xstar},
              {"tol", r.tol_used},
              {"grid",
               {{"initial_points", r.grid.initial_points},
                {"min_spacing", r.grid.min_spacing},
                {"monotone_span", r.grid.monotone_span}}},
              {"certified", r.certified()}};
    if (!r.monotone_ok) j["monotone_witness"] = {r.monotone_witness_lo, r.monotone_witness_hi};
    return j;
}

std::string coeff_list(const std::vector<double>& c) {
    std::string s = "[";
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? ", " : "") + format_double(c[i]);
    return s + "]";
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Polynomial ProblemConfig::reward() const {
    const Polynomial p = reward_roots.empty() ? Polynomial(reward_coefficients)
                                              : Polynomial::from_roots(reward_roots);
    try {
        require_normalized_reward(p);
    } catch (const ShapeError& e) {
        std::string hint;
        try {
            const auto red = reduce_reward(p);
            hint = "; this reward equals " + format_double(red.scale) + " * p(x - " +
                   format_double(red.offset) + ") with normalized p coefficients " +
                   coeff_list(red.normalized.coeffs()) +
                   " (solve for p and map the value function back)";
        } catch (const ShapeError&) {
        }
        throw ShapeError(std::string("reward: ") + e.what() +
                         " (required form: ascending coefficients [0, a_1, ..., a_{n-1}, 1])" + hint);
    }
    return p;
}

ProblemConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    ProblemConfig cfg;
    if (!j.contains("model")) throw ConfigError("model: missing");
    cfg.model = parse_model(j.at("model"));
    cfg.discount = number_at(j, "discount", "config");
    if (!std::isfinite(cfg.discount) || cfg.discount < 0.0)
        throw ConfigError("config.discount: must be finite and >= 0");

    if (!j.contains("reward") || !j.at("reward").is_object()) throw ConfigError("reward: missing");
    const json& rw = j.at("reward");
    const bool has_coeffs = rw.contains("coefficients");
    const bool has_roots = rw.contains("roots");
    if (has_coeffs == has_roots)
        throw ConfigError("reward: give exactly one of \"coefficients\" (ascending) or \"roots\"");
    if (has_coeffs) {
        cfg.reward_coefficients = number_list(rw.at("coefficients"), "reward.coefficients");
        if (cfg.reward_coefficients.empty()) throw ConfigError("reward.coefficients: empty");
    } else {
        cfg.reward_roots = number_list(rw.at("roots"), "reward.roots");
        if (cfg.reward_roots.empty()) throw ConfigError("reward.roots: empty");
    }
    (void)cfg.reward();

    if (j.contains("mc")) cfg.mc = parse_mc(j.at("mc"));
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (!g.is_object()) throw ConfigError("grid: expected an object");
        cfg.grid = GridBlock{number_at(g, "from", "grid"), number_at(g, "to", "grid"),
                             number_at(g, "step", "grid")};
    }
    return cfg;
}

ProblemConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const ProblemConfig& cfg) {
    json j;
    j["model"] = model_json(cfg.model);
    j["discount"] = cfg.discount;
    if (cfg.reward_roots.empty()) {
        j["reward"] = {{"coefficients", cfg.reward_coefficients}};
    } else {
        j["reward"] = {{"roots", cfg.reward_roots}};
    }
    if (cfg.mc) j["mc"] = mc_json(*cfg.mc);
    if (cfg.grid) j["grid"] = {{"from", cfg.grid->from}, {"to", cfg.grid->to}, {"step", cfg.grid->step}};
    return j;
}

Solution solve(const ProblemConfig& cfg) {
    Solution s;
    s.law = supremum_law(cfg.model, cfg.discount);
    s.averaging = solve_threshold(cfg.reward(), s.law);
    s.value = build_value(s.averaging, s.law);
    s.report = verify(s.averaging, s.law, s.value);
    return s;
}

CommandResult cmd_solve(const ProblemConfig& cfg) {
    const Solution s = solve(cfg);
    CommandResult out;
    json law = json::array();
    for (const auto& t : s.law.terms) law.push_back({{"weight", t.weight}, {"rate", t.rate}});
    json exp_terms = json::array();
    for (const auto& t : s.value.exp_branch)
        exp_terms.push_back({{"coefficient", t.coefficient}, {"rate", t.rate}});

    out.document = {
        {"config", to_json(cfg)},
        {"supremum_law", law},
        {"averaging_coefficients", s.averaging.b_coeffs()},
        {"x_star", s.averaging.x_star},
        {"value_function",
         {{"x_star", s.value.x_star},
          {"poly_coefficients", s.value.poly_branch.coeffs()},
          {"exp_terms", exp_terms}}},
        {"verification", report_json(s.report)},
        {"provenance",
         {{"moments", s.averaging.moments},
          {"root_residual", s.averaging.root_residual},
          {"root_width", s.averaging.root_width},
          {"root_isolated", s.averaging.root_isolated}}},
    };
    out.exit_code = s.report.certified() ? kExitOk : kExitNotCertified;

    std::ostringstream os;
    os << "model            " << to_string(cfg.model.kind()) << ", r = " << format_double(cfg.discount)
       << "\n";
    for (std::size_t i = 0; i < s.law.terms.size(); ++i)
        os << "supremum term " << i + 1 << "  A = " << format_double(s.law.terms[i].weight)
           << ", rate = " << format_double(s.law.terms[i].rate) << "\n";
    os << "averaging poly   " << coeff_list(s.averaging.b_coeffs()) << " (ascending)\n";
    os << "threshold x*     " << format_double(s.averaging.x_star) << "\n";
    for (std::size_t i = 0; i < s.value.exp_branch.size(); ++i)
        os << "value term " << i + 1 << "     B = " << format_double(s.value.exp_branch[i].coefficient)
           << ", rate = " << format_double(s.value.exp_branch[i].rate) << "\n";
    os << "monotone         " << (s.report.monotone_ok ? "ok" : "FAILED") << "\n";
    os << "dominance        " << (s.report.dominance_ok ? "ok" : "FAILED")
       << " (worst margin " << format_double(s.report.worst_margin) << " at x = "
       << format_double(s.report.worst_margin_x) << ")\n";
    os << "sign pattern     " << (s.report.corollary_sign_ok ? "holds" : "does not hold") << "\n";
    os << (s.report.certified() ? "certified solution\n" : "NOT certified\n");
    out.summary = os.str();
    return out;
}

std::string cmd_table(const ProblemConfig& cfg, double from, double to, double step) {
    if (!std::isfinite(from) || !std::isfinite(to) || !std::isfinite(step) || !(from < to) ||
        !(step > 0.0))
        throw ConfigError("table: need finite from < to and step > 0");
    const double span = (to - from) / step;
    if (span > kMaxTableRows) throw ConfigError("table: too many rows");
    const long rows = static_cast<long>(std::floor(span * (1.0 + 1e-12) + 1e-9)) + 1;

    const Solution s = solve(cfg);
    const Polynomial& p = s.averaging.reward;
    std::string csv = "x,g,V,V_minus_g\n";
    for (long i = 0; i < rows; ++i) {
        const double x = from + static_cast<double>(i) * step;
        const double g = reward_g(p, x);
        const double v = s.value(x);
        csv += format_double(x) + "," + format_double(g) + "," + format_double(v) + "," +
               format_double(v - g) + "\n";
    }
    return csv;
}

McMode parse_mc_mode(const std::string& s) {
    if (s == "value") return McMode::value;
    if (s == "identity") return McMode::identity;
    if (s == "sweep") return McMode::sweep;
    throw ConfigError("mc mode must be value, identity or sweep");
}

CommandResult cmd_mc(const ProblemConfig& cfg, McMode mode) {
    if (!cfg.mc) throw ConfigError("mc: block missing from config");
    const McBlock& mc = *cfg.mc;
    const Solution s = solve(cfg);
    const double x_star = s.averaging.x_star;
    const double r = cfg.discount;
    const Polynomial& p = s.averaging.reward;

    CommandResult out;
    json doc = {{"config", to_json(cfg)}, {"x_star", x_star}, {"sigmas", kMcSigmas}};
    std::ostringstream os;
    bool pass = false;

    switch (mode) {
        case McMode::value: {
            const McEstimate est = simulate_discounted_reward(cfg.model, p, x_star, mc.path, r);
            const double closed = s.value(mc.path.x0);
            pass = std::abs(closed - est.mean) <=
                   kMcSigmas * est.std_error + 1e-9 * std::max(1.0, std::abs(closed));
            doc["mode"] = "value";
            doc["estimate"] = estimate_json(est);
            doc["closed_form"] = closed;
            os << "V(" << format_double(mc.path.x0) << ") closed form " << format_double(closed)
               << ", MC " << format_double(est.mean) << " +- " << format_double(est.std_error) << "\n";
            break;
        }
        case McMode::identity: {
            const double a = mc.level.value_or(x_star);
            const IdentityCheck chk = check_fluctuation_identity(cfg.model, s.averaging, s.law, a, mc.path, r);
            pass = chk.within(kMcSigmas);
            doc["mode"] = "identity";
            doc["level"] = a;
            doc["estimate"] = estimate_json(chk.rhs);
            doc["closed_form"] = chk.lhs;
            os << "level a = " << format_double(a) << ": closed form " << format_double(chk.lhs)
               << ", MC " << format_double(chk.rhs.mean) << " +- " << format_double(chk.rhs.std_error)
               << "\n";
            break;
        }
        case McMode::sweep: {
            std::vector<double> th = mc.thresholds;
            if (th.empty()) th = {x_star - 0.5, x_star + 0.5};
            th.insert(th.begin(), x_star);
            const auto est = threshold_sweep(cfg.model, p, mc.path, r, th);
            pass = true;
            json rows = json::array();
            for (std::size_t i = 0; i < th.size(); ++i) {
                json row = estimate_json(est[i]);
                row["threshold"] = th[i];
                if (i > 0) {
                    const double pooled = pooled_std_error(est[0], est[i]);
                    const bool ok = est[i].mean <= est[0].mean + kMcSigmas * pooled;
                    row["pooled_std_error"] = pooled;
                    row["not_above_optimum"] = ok;
                    pass = pass && ok;
                }
                rows.push_back(row);
                os << "threshold " << format_double(th[i]) << ": " << format_double(est[i].mean)
                   << " +- " << format_double(est[i].std_error) << (i == 0 ? "  (x*)" : "") << "\n";
            }
            doc["mode"] = "sweep";
            doc["estimates"] = rows;
            doc["closed_form"] = s.value(mc.path.x0);
            break;
        }
    }
    doc["pass"] = pass;
    os << (pass ? "pass" : "FAIL") << " at " << kMcSigmas << " standard errors\n";
    out.document = std::move(doc);
    out.summary = os.str();
    out.exit_code = pass ? kExitOk : kExitMcCheckFailed;
    return out;
}

}  // namespace levystop
