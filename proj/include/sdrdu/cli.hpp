#pragma once

// Command-line front end. `run` parses argv, executes one subcommand and
// writes its report; the return value is the process exit code:
//   0  completed
//   1  violation or negative verdict (dominance, falsify, verify-theorem)
//   2  input error

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sdrdu/dominance.hpp"
#include "sdrdu/indices.hpp"
#include "sdrdu/json_io.hpp"
#include "sdrdu/lab.hpp"
#include "sdrdu/rdu.hpp"
#include "sdrdu/report.hpp"
#include "sdrdu/suites.hpp"

namespace sdrdu::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitInput = 2;

struct RunConfig {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::string utility_path;
    std::string weighting_path;
    int n = 3;
    double tol = kDefaultDominanceTol;
    std::size_t trials = 10000;
    std::size_t consistency_trials = 200;
    std::uint64_t seed = 0;
    int atoms = 5;
    std::string format = "json";
    std::string output;
    std::string sweep = "default";
    std::string theorem_case = "ii";
    std::vector<double> domain{-1.0, 1.0};
};

namespace detail {

inline json read_json_file(const std::string& path, const std::string& field) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ValidationError(field, "cannot read '" + path + "'");
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw ValidationError(field, "malformed JSON in '" + path + "': " + e.what());
    }
}

inline json header(const RunConfig& cfg) {
    return json{{"schema", "sdrdu/" + cfg.subcommand + "-report"},
                {"schema_version", std::string(kReportSchemaVersion)},
                {"version", std::string(kVersion)},
                {"command", cfg.subcommand},
                {"seed", cfg.seed}};
}

inline Report start(const RunConfig& cfg) {
    Report r;
    r.document = header(cfg);
    r.seed = cfg.seed;
    return r;
}

inline json violation_or_null(const std::optional<Violation>& v) { return v ? io::to_json(*v) : json(nullptr); }

inline Domain config_domain(const RunConfig& cfg) {
    if (cfg.domain.size() != 2) throw ValidationError("domain", "expected two values a,b");
    Domain d{cfg.domain[0], cfg.domain[1]};
    validate_domain(d);
    return d;
}

inline int run_dominance(const RunConfig& cfg, Report& r) {
    if (cfg.inputs.size() != 2) throw ValidationError("inputs", "dominance takes exactly two distribution files");
    auto x = io::distribution_from_json(read_json_file(cfg.inputs[0], "X"), "X");
    auto y = io::distribution_from_json(read_json_file(cfg.inputs[1], "Y"), "Y");
    if (cfg.n < 1 || cfg.n > kMaxDominanceOrder) throw ValidationError("n", "must lie in [1, 7]");
    if (!(x.domain() == y.domain())) throw ValidationError("Y.domain", "X and Y must share a domain");
    auto v = dominates_n(x, y, cfg.n, cfg.tol);
    json inputs{{"n", cfg.n}, {"tol", cfg.tol}, {"X", io::to_json(x)}, {"Y", io::to_json(y)}};
    r.rows.push_back({"dominance", inputs_hash(inputs), v.holds ? "holds" : "fails", v.max_gap});
    r.document["inputs"] = inputs;
    r.document["result"] = io::to_json(v);
    return v.holds ? kExitOk : kExitNegative;
}

inline int run_rdu(const RunConfig& cfg, Report& r) {
    if (cfg.inputs.size() != 1) throw ValidationError("inputs", "rdu takes exactly one distribution file");
    auto u = io::utility_from_json(read_json_file(cfg.utility_path, "utility"), "utility");
    auto h = io::weighting_from_json(read_json_file(cfg.weighting_path, "weighting"), "weighting");
    auto x = io::distribution_from_json(read_json_file(cfg.inputs[0], "X"), "X");
    if (!(x.domain() == u.domain())) throw ValidationError("X.domain", "must equal the utility's domain");
    const double value = rdu_eval(RduModel{u, h}, x);
    json inputs{{"utility", io::to_json(u)}, {"weighting", io::to_json(h)}, {"X", io::to_json(x)}};
    r.rows.push_back({"rdu", inputs_hash(inputs), format_number(value), std::nullopt});
    r.document["inputs"] = inputs;
    r.document["result"] = json{{"value", value}};
    return kExitOk;
}

inline int run_falsify(const RunConfig& cfg, Report& r) {
    auto u = io::utility_from_json(read_json_file(cfg.utility_path, "utility"), "utility");
    auto h = io::weighting_from_json(read_json_file(cfg.weighting_path, "weighting"), "weighting");
    if (cfg.n < 1 || cfg.n > kMaxDominanceOrder) throw ValidationError("n", "must lie in [1, 7]");
    if (cfg.trials < 1) throw ValidationError("trials", "must be >= 1");
    if (cfg.atoms < 2) throw ValidationError("atoms", "must be >= 2");
    FalsifyOptions opts;
    opts.atom_budget = cfg.atoms;
    opts.tol = cfg.tol;
    auto res = falsify(RduModel{u, h}, cfg.n, cfg.trials, cfg.seed, opts);
    json inputs{{"utility", io::to_json(u)}, {"weighting", io::to_json(h)}, {"n", cfg.n},
                {"trials", cfg.trials},      {"atoms", cfg.atoms},        {"tol", cfg.tol}};
    const bool found = res.violation.has_value();
    r.rows.push_back({"falsify", inputs_hash(inputs), found ? "violation" : "none",
                      found ? std::optional<double>(res.violation->gap) : std::nullopt});
    r.document["inputs"] = inputs;
    r.document["result"] = json{{"violation", violation_or_null(res.violation)},
                                {"sweep_points", res.sweep_points},
                                {"random_pairs", res.random_pairs},
                                {"exhausted_trials", res.exhausted_trials}};
    return found ? kExitNegative : kExitOk;
}

inline std::vector<LemmaConstructionParams> load_sweep(const RunConfig& cfg, Domain d) {
    if (cfg.sweep == "default") return default_lemma_sweep(d);
    auto j = read_json_file(cfg.sweep, "sweep");
    if (!j.is_array()) throw ValidationError("sweep", "expected an array of parameter objects");
    std::vector<LemmaConstructionParams> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string path = "sweep[" + std::to_string(i) + "]";
        const auto& e = j[i];
        LemmaConstructionParams p;
        p.n_param = io::detail::integer(io::detail::require(e, "n", path), path + ".n");
        p.alpha = io::detail::number(io::detail::require(e, "alpha", path), path + ".alpha");
        p.epsilon = io::detail::number(io::detail::require(e, "epsilon", path), path + ".epsilon");
        p.y = io::detail::number(io::detail::require(e, "y", path), path + ".y");
        p.z = io::detail::number(io::detail::require(e, "z", path), path + ".z");
        p.domain = d;
        out.push_back(p);
    }
    return out;
}

inline int run_counterexample(const RunConfig& cfg, Report& r) {
    auto h = io::weighting_from_json(read_json_file(cfg.weighting_path, "weighting"), "weighting");
    std::optional<UtilityFunction> u;
    if (!cfg.utility_path.empty()) {
        u = io::utility_from_json(read_json_file(cfg.utility_path, "utility"), "utility");
    } else {
        u = UtilityFunction::identity(config_domain(cfg));
    }
    const Domain d = u->domain();
    auto sweep = load_sweep(cfg, d);
    const RduModel model{*u, h};
    auto res = lemma_sweep([&](const DiscreteDistribution& x) { return rdu_eval(model, x); }, sweep);
    json inputs{{"utility", io::to_json(*u)}, {"weighting", io::to_json(h)}, {"sweep", cfg.sweep}};
    const bool found = res.violation.has_value();
    r.rows.push_back({"counterexample", inputs_hash(inputs), found ? "violation" : "none",
                      found ? std::optional<double>(res.violation->gap) : std::nullopt});
    r.document["inputs"] = inputs;
    r.document["result"] = json{{"violation", violation_or_null(res.violation)},
                                {"points_examined", res.points_examined},
                                {"valid_points", res.valid_points}};
    return kExitOk;
}

inline int run_indices(const RunConfig& cfg, Report& r) {
    auto u = io::utility_from_json(read_json_file(cfg.utility_path, "utility"), "utility");
    auto h = io::weighting_from_json(read_json_file(cfg.weighting_path, "weighting"), "weighting");
    auto g = greediness(u);
    auto p = pessimism(h);
    auto q = q_index(h);
    const bool ra = g.value <= p.value;
    json inputs{{"utility", io::to_json(u)}, {"weighting", io::to_json(h)}};
    const auto hash = inputs_hash(inputs);
    auto text = [](const ExtendedReal& v) { return v.is_infinite() ? std::string("inf") : format_number(v.value()); };
    r.rows.push_back({"G_u", hash, text(g.value), std::nullopt});
    r.rows.push_back({"P_h", hash, text(p.value), std::nullopt});
    r.rows.push_back({"Q_h", hash, text(q.value), std::nullopt});
    r.rows.push_back({"G_u<=P_h", hash, ra ? "true" : "false", std::nullopt});
    r.document["inputs"] = inputs;
    r.document["result"] = json{{"G_u", io::to_json(g)},
                                {"P_h", io::to_json(p)},
                                {"Q_h", io::to_json(q)},
                                {"monotone_risk_averse", ra}};
    return kExitOk;
}

inline int run_verify_theorem(const RunConfig& cfg, Report& r) {
    if (cfg.theorem_case != "i" && cfg.theorem_case != "ii") throw ValidationError("case", "must be 'i' or 'ii'");
    if (cfg.trials < 1) throw ValidationError("trials", "must be >= 1");
    const bool worst_case = cfg.theorem_case == "i";
    const std::uint64_t identity_seed = Rng::derive_seed(cfg.seed, 0);
    const std::uint64_t consistency_seed = Rng::derive_seed(cfg.seed, 1);
    auto identity = worst_case ? indicator_identity_suite(cfg.trials, identity_seed)
                               : lambda_identity_suite(cfg.trials, identity_seed, kIdentityTol);
    std::vector<WeightingFunction> weightings = worst_case
                                                    ? std::vector<WeightingFunction>{WeightingFunction::indicator_one()}
                                                    : lambda_suite_weightings();
    std::optional<ConsistencySuiteResult> consistency;
    if (cfg.consistency_trials > 0) consistency = consistency_suite(weightings, cfg.consistency_trials, consistency_seed);

    json inputs{{"case", cfg.theorem_case},
                {"trials", cfg.trials},
                {"consistency_trials", cfg.consistency_trials},
                {"atom_budget", kSuiteAtomBudget},
                {"domain", {kSuiteDomain.lo, kSuiteDomain.hi}}};
    for (const auto& row : identity.rows) {
        json key{{"case", cfg.theorem_case}, {"trial", row.trial}, {"utility", row.utility},
                 {"lambda", row.lambda},     {"atoms", row.atoms}};
        const bool ok = worst_case ? row.gap == 0.0 : row.gap <= kIdentityTol;
        r.rows.push_back({"identity/" + std::to_string(row.trial) + "/" + row.utility + "/lambda=" +
                              format_number(row.lambda),
                          inputs_hash(key), ok ? "pass" : "fail", row.gap});
    }
    json runs = json::array();
    if (consistency) {
        for (const auto& row : consistency->rows) {
            json key{{"utility", row.utility}, {"weighting", row.weighting}, {"n", row.n},
                     {"trials", cfg.consistency_trials}};
            r.rows.push_back({"consistency/" + row.utility + "/" + row.weighting + "/n=" + std::to_string(row.n),
                              inputs_hash(key), row.violation_found ? "fail" : "pass",
                              row.violation_found ? std::optional<double>(row.gap) : std::nullopt});
            runs.push_back(json{{"utility", row.utility},
                                {"weighting", row.weighting},
                                {"n", row.n},
                                {"violation_found", row.violation_found},
                                {"gap", row.gap},
                                {"random_pairs", row.random_pairs},
                                {"sweep_points", row.sweep_points}});
        }
    }
    const bool pass = identity.pass && (!consistency || consistency->pass);
    r.document["inputs"] = inputs;
    r.document["result"] = json{
        {"identity",
         {{"check", worst_case ? "rdu(u, indicator_one, X) == u(min X)" : "rdu(u, lambda_jump, X) == closed form"},
          {"trials", cfg.trials},
          {"tol", worst_case ? 0.0 : kIdentityTol},
          {"max_gap", identity.max_gap},
          {"pass", identity.pass}}},
        {"consistency",
         consistency ? json{{"trials", cfg.consistency_trials}, {"runs", runs}, {"pass", consistency->pass}}
                     : json(nullptr)},
        {"pass", pass}};
    return pass ? kExitOk : kExitNegative;
}

inline std::optional<double> env_tol() {
    const char* raw = std::getenv("SDRDU_TOL");
    if (raw == nullptr || *raw == '\0') return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(raw, &end);
    if (end == raw || *end != '\0' || !(v >= 0.0) || !std::isfinite(v)) {
        throw ValidationError("SDRDU_TOL", "must be a finite nonnegative number");
    }
    return v;
}

}  // namespace detail

/// Parses argv and runs the selected subcommand. Reports go to `out` unless
/// --output names a file; diagnostics go to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic dominance and rank-dependent utility toolkit", "sdrdu"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));
    RunConfig cfg;
    std::optional<double> tol_flag;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--output,-o", cfg.output, "Write the report to this file instead of stdout");
        sub->add_option("--seed", cfg.seed, "Seed for every random draw (recorded in the report)");
        sub->add_option("--tol", tol_flag, "Dominance tolerance (default 1e-10, or SDRDU_TOL)");
    };

    auto* dom = app.add_subcommand("dominance", "Test X >=_n Y");
    dom->add_option("--n", cfg.n, "Dominance order")->required();
    dom->add_option("inputs", cfg.inputs, "X.json Y.json")->required();
    common(dom);

    auto* rdu = app.add_subcommand("rdu", "Evaluate the RDU functional on a distribution");
    rdu->add_option("--utility", cfg.utility_path)->required();
    rdu->add_option("--weighting", cfg.weighting_path)->required();
    rdu->add_option("inputs", cfg.inputs, "X.json")->required();
    common(rdu);

    auto* fal = app.add_subcommand("falsify", "Search for an nSD-consistency violation");
    fal->add_option("--utility", cfg.utility_path)->required();
    fal->add_option("--weighting", cfg.weighting_path)->required();
    fal->add_option("--n", cfg.n, "Dominance order")->required();
    fal->add_option("--trials", cfg.trials, "Random pairs to examine");
    fal->add_option("--atoms", cfg.atoms, "Atom budget for random distributions");
    common(fal);

    auto* cex = app.add_subcommand("counterexample", "Run the structured third-order sweep");
    cex->add_option("--weighting", cfg.weighting_path)->required();
    cex->add_option("--utility", cfg.utility_path, "Defaults to the identity on --domain");
    cex->add_option("--sweep", cfg.sweep, "'default' or a JSON file of sweep points");
    cex->add_option("--domain", cfg.domain, "a b (used when --utility is absent)")->expected(2);
    common(cex);

    auto* ind = app.add_subcommand("indices", "Greediness, pessimism and Q indices");
    ind->add_option("--utility", cfg.utility_path)->required();
    ind->add_option("--weighting", cfg.weighting_path)->required();
    common(ind);

    auto* thm = app.add_subcommand("verify-theorem", "Identity and consistency suites for the mixture weightings");
    thm->add_option("--case", cfg.theorem_case, "i (worst case) or ii (lambda mixture)")
        ->check(CLI::IsMember({"i", "ii"}));
    thm->add_option("--trials", cfg.trials, "Random (u, X) draws for the identity check");
    thm->add_option("--consistency-trials", cfg.consistency_trials, "Trials per falsify run (0 skips)");
    common(thm);

    cfg.trials = 10000;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    if (thm->parsed() && thm->count("--trials") == 0) cfg.trials = 1000;

    try {
        if (auto env = detail::env_tol()) cfg.tol = *env;
        if (tol_flag) {
            if (!(*tol_flag >= 0.0) || !std::isfinite(*tol_flag)) throw ValidationError("tol", "must be >= 0");
            cfg.tol = *tol_flag;
        }
        Report report;
        int code = kExitOk;
        for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
        report = detail::start(cfg);
        if (cfg.subcommand == "dominance") code = detail::run_dominance(cfg, report);
        else if (cfg.subcommand == "rdu") code = detail::run_rdu(cfg, report);
        else if (cfg.subcommand == "falsify") code = detail::run_falsify(cfg, report);
        else if (cfg.subcommand == "counterexample") code = detail::run_counterexample(cfg, report);
        else if (cfg.subcommand == "indices") code = detail::run_indices(cfg, report);
        else code = detail::run_verify_theorem(cfg, report);
        emit_report(report, cfg.format == "csv" ? ReportFormat::csv : ReportFormat::json, cfg.output, out);
        return code;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
}

}  // namespace sdrdu::cli
