#include "dqkit/cli.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "dqkit/ingest.hpp"
#include "dqkit/report.hpp"
#include "dqkit/service.hpp"
#include "dqkit/solver.hpp"

namespace dqkit::cli {

namespace {

// Raised for conditions that map to kUsageError.
struct UsageError : Error {
    using Error::Error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_json(const Json& json, const std::string& path, std::ostream& out) {
    const auto text = json.dump(2) + "\n";
    if (path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file || !(file << text)) throw UsageError("cannot write '" + path + "'");
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

std::string threshold_text(double t) {
    if (std::isinf(t)) return t > 0 ? "+inf" : "-inf";
    return format_number(t);
}

std::string join(const std::vector<std::string>& items, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

// solve ----------------------------------------------------------------------

struct SolveArgs {
    std::string model;
    std::string json_out;
    std::string voi_node;
    std::string voi_decision;
};

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
    InfluenceDiagram diagram;
    try {
        diagram = parse_diagram(read_file(args.model));
    } catch (const FormatError& e) {
        err << "error: " << args.model << ": " << e.what() << "\n";
        return kUsageError;
    }
    if (auto violations = validate(diagram); !violations.empty()) {
        err << "error: invalid model " << args.model << "\n";
        for (const auto& v : violations) err << "  " << v.node << ": " << v.reason << "\n";
        return kDomainError;
    }
    const auto result = solve(diagram);

    out << "expected value  " << format_number(result.expected_value) << "\n";
    out << "policy\n";
    for (const auto& rule : result.policy.rules) {
        out << "  decision " << rule.decision;
        out << "  [information: " << (rule.information.empty() ? "none" : join(rule.information, ", ")) << "]\n";
        for (const auto& e : rule.entries) {
            const auto config = e.configuration.empty() ? std::string("()") : join(e.configuration, ", ");
            out << "    " << pad(config, 24) << " -> " << pad(e.alternative, 12)
                << " p=" << pad(format_number(e.probability), 12) << " ev=" << format_number(e.expected_value)
                << (e.reachable ? "" : "  (unreachable)") << "\n";
        }
    }
    for (const auto& note : result.notes) out << "note: " << note << "\n";

    Json json = solve_result_json(result);
    if (!args.voi_node.empty()) {
        const std::string decision =
            args.voi_decision.empty() ? (diagram.decision_order.empty() ? "" : diagram.decision_order.front())
                                      : args.voi_decision;
        if (decision.empty()) {
            err << "error: model has no decision to attach --voi to\n";
            return kDomainError;
        }
        const double voi = value_of_information(diagram, decision, args.voi_node);
        out << "value of information (" << args.voi_node << " -> " << decision << ")  " << format_number(voi)
            << "\n";
        json["value_of_information"] = {{"decision", decision}, {"observed", args.voi_node}, {"value", voi}};
    }
    if (!args.json_out.empty()) write_json(json, args.json_out, out);
    return kSuccess;
}

// roc ------------------------------------------------------------------------

struct UtilityArgs {
    std::optional<double> p;
    double v_tp = 0, v_fp = 0, v_tn = 0, v_fn = 0;

    UtilityModel model(std::optional<double> default_p) const {
        UtilityModel u{p ? *p : default_p.value_or(0.0), v_tp, v_fp, v_tn, v_fn};
        try {
            u.validate();
        } catch (const ConfigError& e) {
            throw UsageError(e.what());
        }
        return u;
    }
};

void add_utility_flags(CLI::App* cmd, UtilityArgs& u, bool p_required) {
    auto* p = cmd->add_option("--p", u.p, "Prevalence of positives, in (0,1)");
    if (p_required) p->required();
    cmd->add_option("--v-tp", u.v_tp, "Value of a true positive")->required();
    cmd->add_option("--v-fp", u.v_fp, "Value of a false positive")->required();
    cmd->add_option("--v-tn", u.v_tn, "Value of a true negative")->required();
    cmd->add_option("--v-fn", u.v_fn, "Value of a false negative")->required();
}

struct RocArgs {
    std::string scores;
    UtilityArgs utility;
    std::size_t grid = kDefaultGridSize;
    std::string json_out;
};

int cmd_roc(const RocArgs& args, std::ostream& out, std::ostream& err) {
    ScoredDataset data;
    try {
        data = load_scored_csv(args.scores);
    } catch (const FormatError& e) {
        err << "error: " << args.scores << ": " << e.what() << "\n";
        return kDomainError;
    }
    if (data.single_class()) {
        err << "error: " << args.scores << ": dataset has a single class (" << data.positive_count << " positive, "
            << data.negative_count << " negative)\n";
        return kDomainError;
    }
    if (args.grid < 2) throw UsageError("--grid must be at least 2");
    const auto u = args.utility.model(data.prevalence());
    const auto curve = build_roc(data);
    const auto report = roc_report(curve, u, args.grid);
    const auto optimal = optimal_operating_point(curve, u);
    const auto baseline = baseline_value(u);
    const auto line = indifference_line(u);

    out << "cases         " << data.cases.size() << " (" << data.positive_count << " positive, "
        << data.negative_count << " negative)\n";
    out << "prevalence    " << format_number(u.prevalence) << "\n";
    out << "auc           " << format_number(area_under_curve(curve)) << "\n";
    out << "baseline      " << format_number(baseline.value) << " (" << to_string(baseline.policy) << ")\n";
    if (line)
        out << "indifference  tpr = " << format_number(line->slope) << " * fpr + " << format_number(line->intercept)
            << "\n";
    else
        out << "indifference  vertical (v_tp == v_fn)\n";
    out << "optimal       threshold=" << threshold_text(optimal.threshold) << " fpr=" << format_number(optimal.fpr)
        << " tpr=" << format_number(optimal.tpr) << " eu=" << format_number(optimal.expected_utility) << "\n\n";
    out << pad("threshold", 14) << pad("fpr", 14) << pad("tpr", 14) << "eu\n";
    for (const auto& p : curve.points)
        out << pad(threshold_text(p.threshold), 14) << pad(format_number(p.fpr), 14) << pad(format_number(p.tpr), 14)
            << format_number(expected_utility(p.fpr, p.tpr, u)) << "\n";

    if (!args.json_out.empty()) write_json(report, args.json_out, out);
    return kSuccess;
}

// choose ---------------------------------------------------------------------

struct ChooseArgs {
    std::vector<std::string> options;
    std::int64_t n_cases = 0;
    UtilityArgs utility;
    std::string json_out;
};

struct OptionSpec {
    std::string name;
    std::string path;
    double cost = 0.0;
};

OptionSpec parse_option_spec(const std::string& spec) {
    const auto eq = spec.find('=');
    const auto colon = spec.rfind(':');
    if (eq == std::string::npos || eq == 0 || colon == std::string::npos || colon <= eq + 1)
        throw UsageError("--option '" + spec + "' must look like name=curve.json:cost");
    OptionSpec out{spec.substr(0, eq), spec.substr(eq + 1, colon - eq - 1), 0.0};
    const auto cost_text = spec.substr(colon + 1);
    const auto [end, ec] = std::from_chars(cost_text.data(), cost_text.data() + cost_text.size(), out.cost);
    if (cost_text.empty() || ec != std::errc{} || end != cost_text.data() + cost_text.size() ||
        !std::isfinite(out.cost) || out.cost < 0.0)
        throw UsageError("--option '" + spec + "' has an invalid cost");
    return out;
}

// Accepts a curve array, {"curve": [...]} (e.g. `dqkit roc --json` output) or
// {"rule": {"fpr", "tpr"}}.
RocCurve load_curve(const std::string& path) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw UsageError(path + ": malformed JSON: " + e.what());
    }
    try {
        if (j.is_array()) return curve_from_json(j);
        if (j.is_object() && j.contains("curve")) return curve_from_json(j["curve"]);
        if (j.is_object() && j.contains("rule") && j["rule"].is_object() && j["rule"].contains("fpr") &&
            j["rule"].contains("tpr") && j["rule"]["fpr"].is_number() && j["rule"]["tpr"].is_number())
            return rule_curve(j["rule"]["fpr"].get<double>(), j["rule"]["tpr"].get<double>());
    } catch (const FormatError& e) {
        throw UsageError(path + ": " + e.what());
    }
    throw UsageError(path + ": expected a curve array, {\"curve\": [...]} or {\"rule\": {\"fpr\", \"tpr\"}}");
}

int cmd_choose(const ChooseArgs& args, std::ostream& out, std::ostream&) {
    const auto u = args.utility.model(std::nullopt);
    if (args.n_cases < 0) throw UsageError("--n-cases must be non-negative");
    std::vector<CurveOption> options;
    for (const auto& spec : args.options) {
        auto parsed = parse_option_spec(spec);
        options.push_back({parsed.name, load_curve(parsed.path), parsed.cost});
    }
    const auto choice = choose_curve_option(options, u, args.n_cases);

    out << pad("option", 20) << pad("gross", 14) << pad("cost", 14) << "net\n";
    for (const auto& o : choice.net_values)
        out << pad(o.id, 20) << pad(format_number(o.gross_value), 14) << pad(format_number(o.investment_cost), 14)
            << format_number(o.net_value) << "\n";
    out << "winner: " << choice.chosen_option << "\n";
    if (!args.json_out.empty()) write_json(investment_choice_json(choice), args.json_out, out);
    return kSuccess;
}

// generate / serve -----------------------------------------------------------

struct GenerateArgs {
    std::string config;
    std::string out;
};

int cmd_generate(const GenerateArgs& args, std::ostream& out, std::ostream& err) {
    WidgetLineConfig cfg;
    try {
        cfg = widget_config_from_json(Json::parse(read_file(args.config)));
    } catch (const Json::parse_error& e) {
        throw UsageError(args.config + ": malformed JSON: " + e.what());
    } catch (const FormatError& e) {
        throw UsageError(args.config + ": " + e.what());
    } catch (const ConfigError& e) {
        throw UsageError(args.config + ": " + e.what());
    }
    const auto data = generate_widget_line(cfg);
    if (args.out == "-") {
        out << format_scored_csv(data);
    } else {
        write_scored_csv(args.out, data);
        err << "wrote " << data.cases.size() << " cases (" << data.positive_count << " good) to " << args.out << "\n";
    }
    return kSuccess;
}

struct ServeArgs {
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string static_dir;
    std::vector<std::string> cors_origins;
};

int cmd_serve(const ServeArgs& args, std::ostream& out, std::ostream& err) {
    service::ServiceConfig config;
    if (!args.static_dir.empty()) config.static_dir = args.static_dir;
    if (!args.cors_origins.empty()) config.cors_origins = args.cors_origins;
    service::Server server(config);
    if (!server.bind(args.host, args.port)) {
        err << "error: cannot bind " << args.host << ":" << args.port << " (port in use?)\n";
        return kDomainError;
    }
    out << "serving on http://" << args.host << ":" << args.port << "\n" << std::flush;
    return server.listen() ? kSuccess : kDomainError;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decision-modelling toolkit: influence diagrams, value of information and ROC-utility analysis",
                 "dqkit"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Solve an influence diagram for its optimal policy");
    solve_cmd->add_option("model", solve_args.model, "Model JSON file")->required()->check(CLI::ExistingFile);
    solve_cmd->add_option("--json", solve_args.json_out, "Write the full result as JSON ('-' for stdout)");
    solve_cmd->add_option("--voi", solve_args.voi_node, "Also report the value of observing this node");
    solve_cmd->add_option("--decision", solve_args.voi_decision, "Decision for --voi (default: first in order)");

    RocArgs roc_args;
    auto* roc_cmd = app.add_subcommand("roc", "ROC-utility analysis of a scored dataset");
    roc_cmd->add_option("--scores", roc_args.scores, "CSV file with header score,label")
        ->required()
        ->check(CLI::ExistingFile);
    add_utility_flags(roc_cmd, roc_args.utility, false);
    roc_cmd->add_option("--grid", roc_args.grid, "Utility field grid size")->capture_default_str();
    roc_cmd->add_option("--json", roc_args.json_out, "Write the report as JSON ('-' for stdout)");

    ChooseArgs choose_args;
    auto* choose_cmd = app.add_subcommand("choose", "Choose among candidate models and the status quo");
    choose_cmd->add_option("--option", choose_args.options, "Candidate as name=curve.json:cost (repeatable)");
    choose_cmd->add_option("--n-cases", choose_args.n_cases, "Number of cases the decision applies to")->required();
    add_utility_flags(choose_cmd, choose_args.utility, true);
    choose_cmd->add_option("--json", choose_args.json_out, "Write the choice as JSON ('-' for stdout)");

    GenerateArgs generate_args;
    auto* generate_cmd = app.add_subcommand("generate", "Generate a synthetic widget-line dataset");
    generate_cmd->add_option("--config", generate_args.config, "Generator config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    generate_cmd->add_option("--out", generate_args.out, "Output CSV ('-' for stdout)")->required();

    ServeArgs serve_args;
    auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API and explorer assets");
    serve_cmd->add_option("--port", serve_args.port, "TCP port")->capture_default_str();
    serve_cmd->add_option("--host", serve_args.host, "Bind address")->capture_default_str();
    serve_cmd->add_option("--static-dir", serve_args.static_dir, "Directory of explorer assets")
        ->check(CLI::ExistingDirectory);
    serve_cmd->add_option("--cors-origin", serve_args.cors_origins, "Allowed CORS origin (repeatable, default *)");

    std::vector<std::string> argv_storage{"dqkit"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve_args, out, err);
        if (*roc_cmd) return cmd_roc(roc_args, out, err);
        if (*choose_cmd) return cmd_choose(choose_args, out, err);
        if (*generate_cmd) return cmd_generate(generate_args, out, err);
        if (*serve_cmd) return cmd_serve(serve_args, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDomainError;
    }
    return kUsageError;
}

} // namespace dqkit::cli
