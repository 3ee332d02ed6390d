#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "dms/analysis.hpp"
#include "dms/harness.hpp"
#include "dms/parser.hpp"
#include "dms/rewriter.hpp"
#include "dms/semantics.hpp"

namespace dms::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    std::size_t ground_cap = kDefaultGroundCap;
    std::uint64_t candidate_cap = kDefaultCandidateCap;
    std::string format = "text";

    std::string program_path;
    std::string query_text;

    // rewrite
    std::string sips = "default";
    // solve
    std::size_t max_models = 0;
    std::string method = "reduct";
    // query
    bool brave = false;
    bool cautious = false;
    std::string rewrite = "auto";
    // check
    bool stratified = false;
    bool odd_cycle_free = false;
    bool super_consistent = false;
    std::uint64_t budget = 100000;
    bool no_shortcut = false;
    // diff
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    double density = 0.3;
    // bench
    std::string bench_target;
    std::vector<std::size_t> sizes{1, 2, 3};
    std::string mode = "both";
    std::size_t reps = 1;
    std::string out_path;
    std::string report_path;
    double timeout_s = 60;
    std::string pattern = "right-down";

    bool structured() const { return format == "structured"; }

    SolverLimits limits() const {
        SolverLimits l;
        l.ground_cap = ground_cap;
        l.candidate_cap = candidate_cap;
        return l;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Program load_program(const Config& c) {
    try {
        return parse_program(read_file(c.program_path));
    } catch (const SourceError& e) {
        throw UsageError(c.program_path + ":" + e.what());
    }
}

Query load_query(const Config& c) {
    try {
        return parse_query(c.query_text);
    } catch (const SourceError& e) {
        throw UsageError("query " + std::string(e.what()));
    }
}

json atoms_json(const Interpretation& i) {
    json a = json::array();
    for (const auto& atom : i) a.push_back(print_atom(atom));
    return a;
}

json substitution_json(const Substitution& s) {
    json o = json::object();
    for (const auto& [var, term] : s) o[var] = term.name();
    return o;
}

int cmd_rewrite(const Config& c, std::ostream& out) {
    const auto p = load_program(c);
    const auto q = load_query(c);
    DmsOptions options;
    if (c.sips == "eager") options.sips = eager_sips;
    const auto result = dms_detailed(q, p, options);
    if (c.structured()) {
        auto rules = [](const std::vector<Rule>& rs) {
            json a = json::array();
            for (const auto& r : rs) a.push_back(print_rule(r));
            return a;
        };
        json doc{{"query", print_query(q)},
                 {"seed", print_rule(result.seed)},
                 {"magic_rules", rules(result.magic_rules)},
                 {"modified_rules", rules(result.modified_rules)},
                 {"edb_rules", rules(result.edb_rules)}};
        if (result.constants_fact) doc["constants_fact"] = print_rule(*result.constants_fact);
        out << doc.dump() << '\n';
        return kOk;
    }
    out << print_program(result.program);
    return kOk;
}

int cmd_solve(const Config& c, std::ostream& out) {
    const auto p = load_program(c);
    auto limits = c.limits();
    limits.max_models = c.max_models;
    const auto method = c.method == "unfounded" ? Method::UnfoundedFree : Method::ReductMinimality;
    const auto report = solve(ground(p, limits.ground_cap), method, limits);
    for (const auto& m : report.answer_sets) {
        if (c.structured())
            out << json{{"answer_set", atoms_json(m)}}.dump() << '\n';
        else
            out << print_interpretation(m) << '\n';
    }
    if (c.structured())
        out << json{{"answer_sets", report.answer_sets.size()},
                    {"ground_rules", report.ground_rules},
                    {"candidates", report.candidates_examined},
                    {"truncated", report.truncated}}
                   .dump()
            << '\n';
    return kOk;
}

int cmd_query(const Config& c, std::ostream& out, std::ostream& err) {
    if (c.brave == c.cautious) throw UsageError("query needs exactly one of --brave and --cautious");
    const auto p = load_program(c);
    const auto q = load_query(c);

    bool rewrite = false;
    if (c.rewrite == "on") {
        rewrite = true;
        if (!is_odd_cycle_free(p))
            err << "warning: program is not odd-cycle-free; unless it stays consistent under every added set of "
                   "facts, the rewritten program may give different answers\n";
    } else if (c.rewrite == "auto") {
        const bool bound = std::any_of(q.atom.args.begin(), q.atom.args.end(), [](const Term& t) { return t.is_constant(); });
        rewrite = bound && is_odd_cycle_free(p);
    }

    const Program program = rewrite ? dms(q, p) : p;
    const auto report = answer_sets(program, c.limits());
    const auto answers = c.brave ? brave_answers(q, report.answer_sets)
                                 : cautious_answers(q, report.answer_sets, universe(program));

    if (c.structured()) {
        json a = json::array();
        for (const auto& s : answers) a.push_back(substitution_json(s));
        json doc{{"query", print_query(q)},
                 {"mode", c.brave ? "brave" : "cautious"},
                 {"rewritten", rewrite},
                 {"answers", a},
                 {"ground_rules", report.ground_rules},
                 {"answer_sets", report.answer_sets.size()}};
        if (q.is_ground()) doc["holds"] = !answers.empty();
        out << doc.dump() << '\n';
        return kOk;
    }
    if (q.is_ground()) {
        out << (answers.empty() ? "no" : "yes") << '\n';
    } else {
        for (const auto& s : answers) out << print_substitution(s) << '\n';
    }
    return kOk;
}

int cmd_check(const Config& c, std::ostream& out) {
    const int chosen = int(c.stratified) + int(c.odd_cycle_free) + int(c.super_consistent);
    if (chosen != 1) throw UsageError("check needs exactly one of --stratified, --odd-cycle-free, --super-consistent");
    const auto p = load_program(c);
    if (c.stratified || c.odd_cycle_free) {
        const bool holds = c.stratified ? is_stratified(p) : is_odd_cycle_free(p);
        const char* what = c.stratified ? "stratified" : "odd-cycle-free";
        if (c.structured())
            out << json{{"property", what}, {"holds", holds}}.dump() << '\n';
        else
            out << (holds ? "" : "not ") << what << '\n';
        return kOk;
    }
    ScOptions options;
    options.odd_cycle_shortcut = !c.no_shortcut;
    options.ground_cap = c.ground_cap;
    options.candidate_cap = c.candidate_cap;
    const auto v = check_super_consistent(p, c.budget, options);
    if (c.structured()) {
        json doc{{"status", to_string(v.status)},
                 {"candidates_tested", v.candidates_tested},
                 {"candidate_atoms", v.candidate_atoms},
                 {"short_circuited", v.short_circuited}};
        if (v.counterexample) doc["counterexample"] = atoms_json(*v.counterexample);
        out << doc.dump() << '\n';
        return kOk;
    }
    out << to_string(v.status) << '\n';
    if (v.counterexample) out << "counterexample: " << print_interpretation(*v.counterexample) << '\n';
    out << "fact sets tested: " << v.candidates_tested << (v.short_circuited ? " (odd-cycle-free)" : "") << '\n';
    return kOk;
}

int cmd_diff(const Config& c, std::ostream& out) {
    const auto p = load_program(c);
    const auto q = load_query(c);
    const auto report = check_equivalence(p, q, c.trials, c.seed, c.density, c.limits(), c.program_path);
    if (c.structured()) {
        json trials = json::array();
        for (const auto& t : report.trials)
            trials.push_back({{"index", t.index},
                              {"facts", atoms_json(t.facts)},
                              {"ground_original", t.ground_original},
                              {"ground_rewritten", t.ground_rewritten},
                              {"ms_original", t.ms_original},
                              {"ms_rewritten", t.ms_rewritten},
                              {"skipped", t.skipped}});
        out << json{{"program", report.program_id},
                    {"query", print_query(q)},
                    {"fact_sets_tested", report.fact_sets_tested},
                    {"skipped", report.skipped},
                    {"brave_mismatches", report.brave_mismatches.size()},
                    {"cautious_mismatches", report.cautious_mismatches.size()},
                    {"trials", trials}}
                   .dump()
            << '\n';
    } else {
        out << summarize(report);
    }
    return report.equivalent() ? kOk : kMismatch;
}

int cmd_bench(const Config& c, std::ostream& out) {
    if (c.bench_target != "related") throw UsageError("unknown benchmark '" + c.bench_target + "'");
    std::vector<BenchMode> modes;
    if (c.mode == "plain" || c.mode == "both") modes.push_back(BenchMode::Plain);
    if (c.mode == "dms" || c.mode == "both") modes.push_back(BenchMode::Dms);
    const auto pattern = c.pattern == "right-down-diagonal" ? GridPattern::RightDownDiagonal : GridPattern::RightDown;
    const auto timeout = std::chrono::milliseconds(static_cast<long long>(c.timeout_s * 1000));
    const auto table = run_benchmark(c.sizes, modes, c.reps, timeout, pattern, c.limits());

    if (c.out_path.empty()) {
        out << (c.structured() ? table.to_json() + "\n" : table.to_csv());
    } else {
        std::ofstream(c.out_path) << table.to_csv();
    }
    const auto report = c.report_path.empty() && !c.out_path.empty() ? c.out_path + ".json" : c.report_path;
    if (!report.empty()) std::ofstream(report) << table.to_json() << '\n';
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Config c;
    CLI::App app{"Dynamic magic set rewriting for disjunctive logic programs", "dms"};
    app.require_subcommand(1);
    app.add_option("--ground-cap", c.ground_cap, "Maximum ground rule instances")->check(CLI::PositiveNumber);
    app.add_option("--candidate-cap", c.candidate_cap, "Maximum search leaves per solve")->check(CLI::PositiveNumber);
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "structured"}));

    auto* rewrite = app.add_subcommand("rewrite", "Print the magic-set rewriting of a program for a query");
    rewrite->fallthrough();
    rewrite->add_option("program", c.program_path, "Program file")->required();
    rewrite->add_option("--query", c.query_text, "Query atom, e.g. \"p(a,X)?\"")->required();
    rewrite->add_option("--sips", c.sips, "Information passing strategy")->check(CLI::IsMember({"default", "eager"}));

    auto* solve_cmd = app.add_subcommand("solve", "Print answer sets");
    solve_cmd->fallthrough();
    solve_cmd->add_option("program", c.program_path, "Program file")->required();
    solve_cmd->add_option("--max", c.max_models, "Stop after N answer sets (0 = all)");
    solve_cmd->add_option("--method", c.method, "Stability check")->check(CLI::IsMember({"reduct", "unfounded"}));

    auto* query = app.add_subcommand("query", "Answer a query bravely or cautiously");
    query->fallthrough();
    query->add_option("program", c.program_path, "Program file")->required();
    query->add_option("--query", c.query_text, "Query atom")->required();
    query->add_flag("--brave", c.brave, "Brave (credulous) reasoning");
    query->add_flag("--cautious", c.cautious, "Cautious (skeptical) reasoning");
    query->add_option("--rewrite", c.rewrite, "Apply magic sets: auto, on or off")
        ->check(CLI::IsMember({"auto", "on", "off"}));

    auto* check = app.add_subcommand("check", "Classify a program");
    check->fallthrough();
    check->add_option("program", c.program_path, "Program file")->required();
    check->add_flag("--stratified", c.stratified, "Stratified negation");
    check->add_flag("--odd-cycle-free", c.odd_cycle_free, "No cycle through an odd number of negations");
    check->add_flag("--super-consistent", c.super_consistent, "Consistent under every added set of facts");
    check->add_option("--budget", c.budget, "Fact sets to test for --super-consistent");
    check->add_flag("--no-shortcut", c.no_shortcut, "Enumerate even when the program is odd-cycle-free");

    auto* diff = app.add_subcommand("diff", "Compare original and rewritten answers on random fact sets");
    diff->fallthrough();
    diff->add_option("program", c.program_path, "Program file")->required();
    diff->add_option("--query", c.query_text, "Query atom")->required();
    diff->add_option("--trials", c.trials, "Number of fact sets");
    diff->add_option("--seed", c.seed, "Random seed");
    diff->add_option("--density", c.density, "Probability of each EDB atom")->check(CLI::Range(0.0, 1.0));

    auto* bench = app.add_subcommand("bench", "Run a benchmark");
    bench->fallthrough();
    bench->add_option("target", c.bench_target, "Benchmark name (related)")->required();
    bench->add_option("--sizes", c.sizes, "Grid sizes")->delimiter(',');
    bench->add_option("--mode", c.mode, "plain, dms or both")->check(CLI::IsMember({"plain", "dms", "both"}));
    bench->add_option("--reps", c.reps, "Repetitions per cell")->check(CLI::PositiveNumber);
    bench->add_option("--out", c.out_path, "CSV output path (default: stdout)");
    bench->add_option("--report", c.report_path, "JSON report path (default: <out>.json)");
    bench->add_option("--timeout", c.timeout_s, "Per-cell timeout in seconds")->check(CLI::PositiveNumber);
    bench->add_option("--pattern", c.pattern, "Grid edge pattern")
        ->check(CLI::IsMember({"right-down", "right-down-diagonal"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (*rewrite) return cmd_rewrite(c, out);
        if (*solve_cmd) return cmd_solve(c, out);
        if (*query) return cmd_query(c, out, err);
        if (*check) return cmd_check(c, out);
        if (*diff) return cmd_diff(c, out);
        if (*bench) return cmd_bench(c, out);
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kCapExceeded;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

}  // namespace dms::cli
