// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dms/analysis.hpp"
#include "dms/harness.hpp"
#include "dms/parser.hpp"
#include "dms/rewriter.hpp"
#include "dms/semantics.hpp"

using namespace dms;

namespace {

constexpr std::size_t kCorpusPrograms = 200;
constexpr std::size_t kFactSets = 5;
constexpr double kDensity = 0.3;

const char* const kRelatedRules =
    "father(X,Y) :- related(X,Y), not brother(X,Y).\n"
    "brother(X,Y) :- related(X,Y), not father(X,Y).\n"
    "ancestor(X,Y) :- father(X,Y).\n"
    "ancestor(X,Y) :- father(X,Z), ancestor(Z,Y).\n";
const char* const kKill = "edb(a).\nq(X) v p(X) :- edb(X).\nco(X) :- q(X), not co(X).\n";
const char* const kOdd = "a v b.\na :- not a, not b.\n";

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    Outcome& o;
    std::ostringstream notes;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            o.pass = false;
            notes << "[" << what << "] ";
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Variables renamed by order of first occurrence, so rules compare up to renaming.
std::string canonical(const Rule& r) {
    std::map<std::string, std::string> names;
    auto rename = [&](const Atom& a) {
        Atom out = a;
        for (auto& t : out.args)
            if (t.is_variable()) {
                auto [it, fresh] = names.emplace(t.name(), "V" + std::to_string(names.size()));
                t = Term::variable(it->second);
            }
        return out;
    };
    std::vector<Atom> head, pos, neg;
    for (const auto& a : r.head()) head.push_back(rename(a));
    for (const auto& a : r.pos_body()) pos.push_back(rename(a));
    for (const auto& a : r.neg_body()) neg.push_back(rename(a));
    return print_rule(Rule(head, pos, neg));
}

std::multiset<std::string> canonical_set(const std::vector<Rule>& rules) {
    std::multiset<std::string> out;
    for (const auto& r : rules) out.insert(canonical(r));
    return out;
}

std::multiset<std::string> canonical_set(const std::string& text) {
    return canonical_set(parse_program(text).rules());
}

struct CorpusEntry {
    std::uint64_t seed;
    Program program;
    Query query;
    std::vector<std::set<Atom>> fact_sets;
};

const std::vector<CorpusEntry>& corpus() {
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> out;
        for (std::uint64_t seed = 0; seed < kCorpusPrograms; ++seed) {
            CorpusEntry e{seed, random_program(seed, Profile::OddCycleFree), {}, {}};
            e.query = random_query(e.program, seed);
            for (std::size_t i = 0; i < kFactSets; ++i)
                e.fact_sets.push_back(random_edb(e.program, seed * kFactSets + i, kDensity));
            out.push_back(std::move(e));
        }
        return out;
    }();
    return entries;
}

// The fixed programs, each with a query.
std::vector<std::pair<Program, Query>> fixed_programs() {
    return {{parse_program(std::string(kRelatedRules) + "related(p1,p2). related(p2,p3)."),
             parse_query("ancestor(p1,p3)?")},
            {parse_program(kKill), parse_query("q(a)?")},
            {parse_program(kOdd), parse_query("a?")}};
}

Outcome golden_rewriting() {
    Outcome o;
    Check c{o, {}};
    const auto r = dms_detailed(parse_query("ancestor(p1,p2)?"), parse_program(kRelatedRules));
    c.require(print_rule(r.seed) == "magic_ancestor_bb(p1,p2).", "seed");
    c.require(canonical_set(r.magic_rules) == canonical_set("magic_father_bb(X,Y) :- magic_ancestor_bb(X,Y).\n"
                                                            "magic_father_bf(X) :- magic_ancestor_bb(X,Y).\n"
                                                            "magic_ancestor_bb(Z,Y) :- magic_ancestor_bb(X,Y), father(X,Z).\n"
                                                            "magic_brother_bb(X,Y) :- magic_father_bb(X,Y).\n"
                                                            "magic_brother_bb(X,Y) :- magic_father_bf(X), related(X,Y).\n"
                                                            "magic_father_bb(X,Y) :- magic_brother_bb(X,Y).\n"),
              "magic rules");
    c.require(canonical_set(r.modified_rules) ==
                  canonical_set("ancestor(X,Y) :- magic_ancestor_bb(X,Y), father(X,Y).\n"
                                "ancestor(X,Y) :- magic_ancestor_bb(X,Y), father(X,Z), ancestor(Z,Y).\n"
                                "father(X,Y) :- magic_father_bb(X,Y), related(X,Y), not brother(X,Y).\n"
                                "father(X,Y) :- magic_father_bf(X), related(X,Y), not brother(X,Y).\n"
                                "brother(X,Y) :- magic_brother_bb(X,Y), related(X,Y), not father(X,Y).\n"),
              "modified rules");
    // Nothing else besides the injected query-constants fact (the rules mention no constants).
    const std::size_t extra = r.constants_fact ? 1 : 0;
    c.require(r.edb_rules.empty() && r.program.size() == 1 + 6 + 5 + extra, "program size");
    std::ostringstream d;
    d << "seed + " << r.magic_rules.size() << " magic + " << r.modified_rules.size() << " modified rules";
    if (r.constants_fact) d << " + " << print_rule(*r.constants_fact);
    d << ' ' << c.notes.str();
    o.detail = d.str();
    return o;
}

Outcome disjunctive_kill() {
    Outcome o;
    Check c{o, {}};
    const auto p = parse_program(kKill);
    const auto q = parse_query("q(a)?");
    const auto original = answer_sets(p).answer_sets;
    c.require(original == std::set<Interpretation>{{parse_atom("edb(a)"), parse_atom("p(a)")}}, "original");

    const auto rewritten_program = dms::dms(q, p);
    c.require(rewritten_program == parse_program("edb(a).\nmagic_q_b(a).\nmagic_p_b(X) :- magic_q_b(X).\n"
                                                 "magic_q_b(X) :- magic_p_b(X).\n"
                                                 "q(X) v p(X) :- magic_q_b(X), magic_p_b(X), edb(X).\n"),
              "rewritten program");
    const auto rewritten = answer_sets(rewritten_program).answer_sets;
    const Interpretation base{parse_atom("magic_q_b(a)"), parse_atom("magic_p_b(a)"), parse_atom("edb(a)")};
    auto with = [&](const char* a) {
        auto m = base;
        m.insert(parse_atom(a));
        return m;
    };
    c.require(rewritten == std::set<Interpretation>{with("p(a)"), with("q(a)")}, "rewritten answer sets");
    c.require(brave_answers(q, original).empty() && !brave_answers(q, rewritten).empty(), "brave differs");

    const auto v = check_super_consistent(p, 1000);
    c.require(v.status == ScStatus::NotSuperConsistent && v.counterexample &&
                  *v.counterexample == Interpretation{parse_atom("q(a)")},
              "counterexample");
    std::ostringstream d;
    d << original.size() << " vs " << rewritten.size() << " answer sets; counterexample "
      << (v.counterexample ? print_interpretation(*v.counterexample) : "none") << " after " << v.candidates_tested
      << " fact sets " << c.notes.str();
    o.detail = d.str();
    return o;
}

Outcome odd_loop() {
    Outcome o;
    Check c{o, {}};
    const auto p = parse_program(kOdd);
    c.require(!is_odd_cycle_free(p), "odd cycle");
    ScOptions full;
    full.odd_cycle_shortcut = false;
    const auto candidates = sc_candidate_atoms(p).size();
    const std::uint64_t space = std::uint64_t{1} << candidates;
    const auto v = check_super_consistent(p, space, full);
    c.require(v.status == ScStatus::SuperConsistent, "verdict");
    c.require(v.candidates_tested == space, "full enumeration");
    const auto models = answer_sets(p).answer_sets;
    c.require(models == std::set<Interpretation>{{Atom("a")}, {Atom("b")}}, "answer sets");
    std::ostringstream d;
    d << to_string(v.status) << " over " << v.candidates_tested << "/" << space << " fact sets; answer sets";
    for (const auto& m : models) d << ' ' << print_interpretation(m);
    d << ' ' << c.notes.str();
    o.detail = d.str();
    return o;
}

Outcome equivalence_suite() {
    Outcome o;
    std::size_t tested = 0, skipped = 0, brave = 0, cautious = 0, answered = 0, disjunctive = 0;
    std::string first;
    for (const auto& e : corpus()) {
        for (const auto& r : e.program.rules()) disjunctive += r.head().size() > 1;
        for (const auto& f : e.fact_sets)
            if (!brave_answers(e.query, answer_sets(with_facts(e.program, f)).answer_sets).empty()) ++answered;
        const auto r = check_equivalence_on(e.program, e.query, e.fact_sets, {}, "seed " + std::to_string(e.seed));
        tested += r.fact_sets_tested;
        skipped += r.skipped;
        brave += r.brave_mismatches.size();
        cautious += r.cautious_mismatches.size();
        if (!r.equivalent() && first.empty()) first = " first: seed " + std::to_string(e.seed);
    }
    o.pass = brave == 0 && cautious == 0 && skipped == 0;
    std::ostringstream d;
    d << kCorpusPrograms << " programs (" << disjunctive << " disjunctive rules), " << tested << " fact sets ("
      << answered << " with brave answers), " << skipped << " skipped, " << brave
      << " brave / " << cautious << " cautious mismatches" << first;
    o.detail = d.str();
    return o;
}

Outcome oracle_agreement() {
    Outcome o;
    std::size_t compared = 0, differing = 0, skipped = 0;
    std::string first;
    auto compare = [&](const Program& p, const std::string& label) {
        try {
            const auto g = ground(p);
            const auto a = answer_sets(g).answer_sets;
            const auto b = answer_sets_via_unfounded(g).answer_sets;
            ++compared;
            if (a != b) {
                ++differing;
                if (first.empty()) first = " first: " + label;
            }
        } catch (const CapExceeded&) {
            ++skipped;
        }
    };
    for (const auto& e : corpus())
        for (std::size_t i = 0; i < e.fact_sets.size(); ++i) {
            const auto label = "seed " + std::to_string(e.seed) + " set " + std::to_string(i);
            const auto pf = with_facts(e.program, e.fact_sets[i]);
            compare(pf, label);
            compare(dms::dms(e.query, pf), label + " rewritten");
        }
    for (const auto& [p, q] : fixed_programs()) {
        compare(p, "fixed");
        compare(dms::dms(q, p), "fixed rewritten");
    }
    o.pass = differing == 0 && skipped == 0;
    std::ostringstream d;
    d << compared << " programs compared, " << differing << " differing, " << skipped << " skipped" << first;
    o.detail = d.str();
    return o;
}

Outcome proof_artifacts() {
    Outcome o;
    std::size_t variants = 0, killed = 0, violations = 0, skipped = 0;
    std::string first;
    auto run = [&](const Program& p, const Query& q, std::uint64_t seed, const std::string& label) {
        try {
            const auto mv = check_magic_variants(p, q);
            const auto ku = check_killed_unfounded(p, q, seed);
            variants += mv.instances;
            killed += ku.instances;
            violations += mv.violations.size() + ku.violations.size();
            if ((!mv.ok() || !ku.ok()) && first.empty()) first = " first: " + label;
        } catch (const CapExceeded&) {
            ++skipped;
        }
    };
    for (const auto& e : corpus())
        for (std::size_t i = 0; i < e.fact_sets.size(); ++i)
            run(with_facts(e.program, e.fact_sets[i]), e.query, e.seed * kFactSets + i,
                "seed " + std::to_string(e.seed) + " set " + std::to_string(i));
    std::uint64_t s = 0;
    for (const auto& [p, q] : fixed_programs()) run(p, q, s++, "fixed");
    o.pass = violations == 0 && skipped == 0;
    std::ostringstream d;
    d << killed << " killed-set instances, " << variants << " magic-variant instances, " << violations
      << " violations, " << skipped << " skipped" << first;
    o.detail = d.str();
    return o;
}

Outcome related_benchmark() {
    Outcome o;
    Check c{o, {}};
    const auto table = run_benchmark({1, 2, 3}, {BenchMode::Plain, BenchMode::Dms}, 1);
    std::map<std::size_t, std::map<BenchMode, BenchRow>> cells;
    for (const auto& r : table.rows) cells[r.n][r.mode] = r;
    std::ostringstream d;
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto& plain = cells[n][BenchMode::Plain];
        const auto& magic = cells[n][BenchMode::Dms];
        c.require(plain.answer == magic.answer && (plain.answer == "yes" || plain.answer == "no"),
                  "n=" + std::to_string(n) + " answers");
        c.require(plain.ground_rules > 0 && magic.ground_rules > 0, "ground counts");
        d << "n=" << n << " " << plain.answer << "/" << magic.answer << " ground " << plain.ground_rules << "/"
          << magic.ground_rules << " sets " << plain.answer_sets << "/" << magic.answer_sets << "; ";
    }
    c.require(cells[3][BenchMode::Plain].answer_sets == 4096, "4096 answer sets");
    d << c.notes.str();
    o.detail = d.str();
    return o;
}

}  // namespace

int main() {
    const std::vector<std::tuple<int, const char*, double, std::function<Outcome()>>> criteria{
        {1, "golden rewriting", 1, golden_rewriting},
        {2, "disjunctive kill reproduction", 5, disjunctive_kill},
        {3, "odd loop classification", 30, odd_loop},
        {4, "equivalence on odd-cycle-free corpus", 600, equivalence_suite},
        {5, "oracle agreement", 0, oracle_agreement},
        {6, "proof-artifact checks", 0, proof_artifacts},
        {7, "related benchmark", 0, related_benchmark},
    };
    int failures = 0;
    for (const auto& [id, name, limit, fn] : criteria) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = seconds_since(t0);
        if (limit > 0 && secs >= limit) {
            o.pass = false;
            o.detail += " [over " + std::to_string(static_cast<int>(limit)) + " s]";
        }
        if (!o.pass) ++failures;
        std::printf("%s %d %s (%.3f s): %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
