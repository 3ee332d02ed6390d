#include "dms/harness.hpp"

#include <algorithm>
#include <json.hpp>
#include <random>
#include <sstream>

#include "dms/analysis.hpp"
#include "dms/parser.hpp"
#include "dms/rewriter.hpp"

namespace dms {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

Term fresh_constant(const std::set<Term>& taken, const std::string& stem, std::size_t& counter) {
    while (true) {
        auto t = Term::constant(stem + std::to_string(++counter));
        if (!taken.count(t)) return t;
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Related

const char* to_string(GridPattern g) {
    return g == GridPattern::RightDown ? "right-down" : "right-down-diagonal";
}

Program related_rules() {
    return parse_program(
        "father(X,Y) :- related(X,Y), not brother(X,Y).\n"
        "brother(X,Y) :- related(X,Y), not father(X,Y).\n"
        "ancestor(X,Y) :- father(X,Y).\n"
        "ancestor(X,Y) :- father(X,Z), ancestor(Z,Y).\n");
}

std::string person_name(std::size_t i, std::size_t j) {
    return "p_" + std::to_string(i) + "_" + std::to_string(j);
}

Program RelatedInstance::program() const { return with_facts(related_rules(), facts); }

std::size_t RelatedInstance::person_count() const {
    std::set<Term> persons;
    for (const auto& f : facts) persons.insert(f.args.begin(), f.args.end());
    return persons.size();
}

RelatedInstance gen_related_instance(std::size_t n, GridPattern pattern) {
    if (n == 0) throw std::invalid_argument("grid side must be at least 1");
    RelatedInstance inst;
    inst.n = n;
    inst.pattern = pattern;
    auto person = [](std::size_t i, std::size_t j) { return Term::constant(person_name(i, j)); };
    auto edge = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
        inst.facts.insert(Atom("related", {person(i, j), person(k, l)}));
    };
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j) {
            if (j < n) edge(i, j, i, j + 1);
            if (i < n) edge(i, j, i + 1, j);
            if (pattern == GridPattern::RightDownDiagonal && i < n && j < n) edge(i, j, i + 1, j + 1);
        }
    inst.query = Query{Atom("ancestor", {person(1, 1), person(n, n)})};
    return inst;
}

// ---------------------------------------------------------------------------
// Generators

std::set<Atom> random_edb(const Program& p, std::uint64_t seed, double density, std::size_t fresh) {
    const auto split = edb_idb_split(p);
    if (split.edb_predicates.empty()) throw std::invalid_argument("program has no EDB predicate");
    auto constants = universe(p);
    std::size_t counter = 0;
    for (std::size_t k = 0; k < fresh; ++k) constants.insert(fresh_constant(constants, "n", counter));
    const std::vector<Term> domain(constants.begin(), constants.end());

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution keep(std::clamp(density, 0.0, 1.0));
    std::set<Atom> out;
    for (const auto& pred : split.edb_predicates) {
        const auto arity = p.predicates().at(pred);
        std::vector<std::size_t> idx(arity, 0);
        while (true) {
            std::vector<Term> args;
            for (auto i : idx) args.push_back(domain[i]);
            // Draw for every atom so the stream does not depend on density.
            if (keep(rng)) out.emplace(pred, std::move(args));
            std::size_t k = arity;
            while (k > 0 && ++idx[k - 1] == domain.size()) idx[--k] = 0;
            if (k == 0) break;
        }
    }
    return out;
}

const char* to_string(Profile profile) {
    switch (profile) {
        case Profile::Stratified: return "stratified";
        case Profile::OddCycleFree: return "odd_cycle_free";
        case Profile::Arbitrary: return "arbitrary";
    }
    return "?";
}

std::optional<Profile> parse_profile(const std::string& s) {
    if (s == "stratified") return Profile::Stratified;
    if (s == "odd_cycle_free" || s == "odd-cycle-free") return Profile::OddCycleFree;
    if (s == "arbitrary") return Profile::Arbitrary;
    return std::nullopt;
}

namespace {

struct PredicateSpec {
    std::string name;
    std::size_t arity;
    int stratum;  // -1 for EDB
};

class ProgramGenerator {
public:
    ProgramGenerator(std::uint64_t seed, Profile profile) : rng_(seed), profile_(profile) {}

    Program next() {
        while (true) {
            auto p = attempt();
            if (profile_ == Profile::OddCycleFree && !is_odd_cycle_free(p)) continue;
            const auto split = edb_idb_split(p);
            if (split.idb_predicates.empty() || split.edb_predicates.empty()) continue;
            return p;
        }
    }

private:
    std::size_t pick(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

    Program attempt() {
        preds_.clear();
        const std::size_t n_edb = pick(1, 2);
        const std::size_t n_idb = pick(1, 6);
        const int strata = static_cast<int>(pick(1, 3));
        for (std::size_t i = 1; i <= n_edb; ++i) preds_.push_back({"e" + std::to_string(i), pick(1, 2), -1});
        for (std::size_t i = 1; i <= n_idb; ++i)
            preds_.push_back({"p" + std::to_string(i), pick(0, 2), static_cast<int>(pick(0, strata - 1))});

        Program p;
        const std::size_t n_facts = pick(0, 3);
        for (std::size_t k = 0; k < n_facts; ++k) {
            const auto& e = preds_[pick(0, n_edb - 1)];
            std::vector<Term> args;
            for (std::size_t i = 0; i < e.arity; ++i) args.push_back(constant());
            p.add(Rule::fact(Atom(e.name, std::move(args))));
        }
        const std::size_t n_rules = pick(1, 12 - n_facts);
        for (std::size_t k = 0; k < n_rules; ++k) p.add(rule(n_edb));
        return p;
    }

    Term constant() {
        static const char* names[] = {"a", "b", "c"};
        return Term::constant(names[pick(0, 2)]);
    }

    Term variable() {
        static const char* names[] = {"X", "Y", "Z"};
        return Term::variable(names[pick(0, 2)]);
    }

    Atom atom_of(const PredicateSpec& s, const std::vector<Term>* vars) {
        std::vector<Term> args;
        for (std::size_t i = 0; i < s.arity; ++i) {
            if (chance(0.15) || (vars && vars->empty())) {
                args.push_back(constant());
            } else if (vars) {
                args.push_back((*vars)[pick(0, vars->size() - 1)]);
            } else {
                args.push_back(variable());
            }
        }
        return Atom(s.name, std::move(args));
    }

    Rule rule(std::size_t n_edb) {
        const std::size_t n_idb = preds_.size() - n_edb;
        std::vector<const PredicateSpec*> head_preds;
        const std::size_t n_head = chance(0.25) ? 2 : 1;
        for (std::size_t i = 0; i < n_head; ++i) head_preds.push_back(&preds_[n_edb + pick(0, n_idb - 1)]);
        int top = head_preds.front()->stratum;
        for (const auto* h : head_preds) top = std::min(top, h->stratum);

        auto allowed = [&](bool negative) {
            std::vector<const PredicateSpec*> out;
            for (const auto& s : preds_) {
                if (profile_ == Profile::Stratified && (negative ? s.stratum >= top : s.stratum > top)) continue;
                out.push_back(&s);
            }
            return out;
        };

        std::vector<Atom> pos, neg, head;
        const auto pos_choices = allowed(false);
        const std::size_t n_pos = pick(1, 2);
        for (std::size_t i = 0; i < n_pos; ++i) pos.push_back(atom_of(*pos_choices[pick(0, pos_choices.size() - 1)], nullptr));

        std::vector<Term> bound;
        for (const auto& a : pos)
            for (const auto& t : a.args)
                if (t.is_variable() && std::find(bound.begin(), bound.end(), t) == bound.end()) bound.push_back(t);

        const auto neg_choices = allowed(true);
        const std::size_t n_neg = neg_choices.empty() ? 0 : pick(0, 2) / 2 + (chance(0.3) ? 1 : 0);
        for (std::size_t i = 0; i < n_neg; ++i) neg.push_back(atom_of(*neg_choices[pick(0, neg_choices.size() - 1)], &bound));
        for (const auto* h : head_preds) head.push_back(atom_of(*h, &bound));
        return Rule(std::move(head), std::move(pos), std::move(neg));
    }

    std::mt19937_64 rng_;
    Profile profile_;
    std::vector<PredicateSpec> preds_;
};

}  // namespace

Program random_program(std::uint64_t seed, Profile profile) { return ProgramGenerator(seed, profile).next(); }

Query random_query(const Program& p, std::uint64_t seed) {
    const auto split = edb_idb_split(p);
    if (split.idb_predicates.empty()) throw std::invalid_argument("program has no IDB predicate");
    std::mt19937_64 rng(seed);
    const std::vector<std::string> preds(split.idb_predicates.begin(), split.idb_predicates.end());
    const auto& pred = preds[std::uniform_int_distribution<std::size_t>(0, preds.size() - 1)(rng)];
    const auto u = universe(p);
    const std::vector<Term> constants(u.begin(), u.end());
    std::vector<Term> args;
    for (std::size_t i = 0; i < p.predicates().at(pred); ++i) {
        if (std::bernoulli_distribution(0.5)(rng))
            args.push_back(constants[std::uniform_int_distribution<std::size_t>(0, constants.size() - 1)(rng)]);
        else
            args.push_back(Term::variable("V" + std::to_string(i + 1)));
    }
    return Query{Atom(pred, std::move(args))};
}

// ---------------------------------------------------------------------------
// Differential equivalence

EquivReport check_equivalence_on(const Program& p, const Query& q, const std::vector<std::set<Atom>>& fact_sets,
                                 const SolverLimits& limits, std::string program_id) {
    EquivReport report;
    report.program_id = std::move(program_id);
    report.query = q;
    const Program rewritten = dms(q, p);

    for (std::size_t i = 0; i < fact_sets.size(); ++i) {
        TrialRecord trial;
        trial.index = i;
        trial.facts = fact_sets[i];
        try {
            const auto original = with_facts(p, trial.facts);
            const auto magic = with_facts(rewritten, trial.facts);

            auto started = Clock::now();
            const auto a = answer_sets(original, limits);
            trial.ms_original = elapsed_ms(started);
            trial.ground_original = a.ground_rules;

            started = Clock::now();
            const auto b = answer_sets(magic, limits);
            trial.ms_rewritten = elapsed_ms(started);
            trial.ground_rewritten = b.ground_rules;

            auto brave_a = brave_answers(q, a.answer_sets), brave_b = brave_answers(q, b.answer_sets);
            if (brave_a != brave_b) report.brave_mismatches.push_back({trial.facts, brave_a, brave_b});
            auto cautious_a = cautious_answers(q, a.answer_sets, universe(original));
            auto cautious_b = cautious_answers(q, b.answer_sets, universe(magic));
            if (cautious_a != cautious_b) report.cautious_mismatches.push_back({trial.facts, cautious_a, cautious_b});
            ++report.fact_sets_tested;
        } catch (const CapExceeded& e) {
            trial.skipped = true;
            trial.skip_reason = e.what();
            ++report.skipped;
        }
        report.trials.push_back(std::move(trial));
    }
    return report;
}

EquivReport check_equivalence(const Program& p, const Query& q, std::size_t trials, std::uint64_t seed,
                              double density, const SolverLimits& limits, std::string program_id) {
    std::vector<std::set<Atom>> fact_sets;
    for (std::size_t i = 0; i < trials; ++i) fact_sets.push_back(random_edb(p, seed + i, density));
    return check_equivalence_on(p, q, fact_sets, limits, std::move(program_id));
}

std::string summarize(const EquivReport& r) {
    std::ostringstream out;
    if (!r.program_id.empty()) out << r.program_id << ": ";
    out << "query " << print_query(r.query) << ", " << r.fact_sets_tested << " fact sets tested, " << r.skipped
        << " skipped, " << r.brave_mismatches.size() << " brave mismatches, " << r.cautious_mismatches.size()
        << " cautious mismatches\n";
    auto answers = [](const std::set<Substitution>& s) {
        std::string text = "[";
        for (const auto& theta : s) text += (text.size() > 1 ? ", " : "") + print_substitution(theta);
        return text + "]";
    };
    for (const auto* list : {&r.brave_mismatches, &r.cautious_mismatches}) {
        const char* kind = list == &r.brave_mismatches ? "brave" : "cautious";
        for (const auto& m : *list)
            out << "  " << kind << " mismatch with F = " << print_interpretation(m.facts) << ": original "
                << answers(m.original) << ", rewritten " << answers(m.rewritten) << "\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Proof-artifact checks

namespace {

Interpretation restrict_to(const Interpretation& m, const std::set<Atom>& b) {
    Interpretation out;
    for (const auto& a : m)
        if (b.count(a)) out.insert(a);
    return out;
}

}  // namespace

ArtifactReport check_magic_variants(const Program& p, const Query& q, const SolverLimits& limits) {
    ArtifactReport report;
    const Program rewritten = dms(q, p);
    const auto g = ground(rewritten, limits.ground_cap);
    const auto b_p = base(p);
    for (const auto& m : answer_sets(p, limits).answer_sets) {
        ++report.instances;
        const auto trace = magic_variant_trace(m, p, rewritten, limits.ground_cap);
        const auto& v = trace.back();
        for (std::size_t k = 1; k < trace.size(); ++k)
            if (!std::includes(trace[k].begin(), trace[k].end(), trace[k - 1].begin(), trace[k - 1].end()))
                report.violations.push_back("magic variant sequence not increasing for " + print_interpretation(m));
        const auto inside = restrict_to(v, b_p);
        if (!std::includes(m.begin(), m.end(), inside.begin(), inside.end()))
            report.violations.push_back("magic variant leaves " + print_interpretation(m));
        if (!is_answer_set(v, g))
            report.violations.push_back("magic variant " + print_interpretation(v) + " of " + print_interpretation(m) +
                                        " is not an answer set of the rewriting");
        if (matches(q, m) != matches(q, v))
            report.violations.push_back("magic variant of " + print_interpretation(m) + " disagrees on the query");
    }
    return report;
}

ArtifactReport check_killed_unfounded(const Program& p, const Query& q, std::uint64_t seed, std::size_t extra_models,
                                      const SolverLimits& limits) {
    ArtifactReport report;
    const Program rewritten = dms(q, p);
    const auto g = ground(rewritten, limits.ground_cap);
    const auto gp = ground(p, limits.ground_cap);
    const auto b_p = base(p);

    std::vector<Interpretation> models;
    const auto answers = answer_sets(g, limits).answer_sets;
    models.insert(models.end(), answers.begin(), answers.end());
    Interpretation everything;
    for (AtomId id = 0; id < g.atoms->size(); ++id) everything.insert((*g.atoms)[id]);
    models.push_back(everything);

    std::mt19937_64 rng(seed);
    std::bernoulli_distribution add(0.3);
    const std::vector<Interpretation> seeds(answers.begin(), answers.end());
    for (std::size_t k = 0; k < extra_models && !seeds.empty(); ++k) {
        auto m = seeds[std::uniform_int_distribution<std::size_t>(0, seeds.size() - 1)(rng)];
        for (AtomId id = 0; id < g.atoms->size(); ++id)
            if (add(rng)) m.insert((*g.atoms)[id]);
        if (is_model(m, g)) models.push_back(std::move(m));
    }

    for (const auto& m : models) {
        const auto red = reduct(g, m);
        auto below = minimal_models_below(red, m, limits);
        below.insert(m);
        const auto i = restrict_to(m, b_p);
        for (const auto& n : below) {
            ++report.instances;
            const auto killed = killed_atoms(m, n, p, rewritten);
            if (!is_unfounded_set(killed, gp, i))
                report.violations.push_back("killed set " + print_interpretation(killed) + " for M = " +
                                            print_interpretation(m) + ", N = " + print_interpretation(n) +
                                            " is not unfounded");
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Related benchmark

const char* to_string(BenchMode m) { return m == BenchMode::Plain ? "plain" : "dms"; }

std::string BenchTable::to_csv() const {
    std::ostringstream out;
    out << "n,mode,time_ms,ground_rules,candidates,answer\n";
    out.setf(std::ios::fixed);
    out.precision(3);
    for (const auto& r : rows)
        out << r.n << ',' << to_string(r.mode) << ',' << r.time_ms << ',' << r.ground_rules << ',' << r.candidates
            << ',' << r.answer << '\n';
    return out.str();
}

std::string BenchTable::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows)
        rows_json.push_back({{"n", r.n},
                             {"mode", to_string(r.mode)},
                             {"rep", r.rep},
                             {"time_ms", r.time_ms},
                             {"ground_rules", r.ground_rules},
                             {"candidates", r.candidates},
                             {"answer_sets", r.answer_sets},
                             {"answer", r.answer}});
    nlohmann::json doc{{"benchmark", "related"}, {"pattern", to_string(pattern)}, {"rows", rows_json}};
    return doc.dump(2);
}

BenchTable run_benchmark(const std::vector<std::size_t>& sizes, const std::vector<BenchMode>& modes,
                         std::size_t repetitions, std::chrono::milliseconds timeout, GridPattern pattern,
                         const SolverLimits& limits) {
    BenchTable table;
    table.pattern = pattern;
    for (auto n : sizes) {
        const auto inst = gen_related_instance(n, pattern);
        const auto plain = inst.program();
        for (auto mode : modes)
            for (std::size_t rep = 0; rep < repetitions; ++rep) {
                BenchRow row;
                row.n = n;
                row.mode = mode;
                row.rep = rep;
                const auto started = Clock::now();
                SolverLimits cell = limits;
                cell.max_models = 0;
                cell.deadline = started + timeout;
                try {
                    const auto program = mode == BenchMode::Plain ? plain : dms(inst.query, plain);
                    const auto g = ground(program, cell.ground_cap);
                    row.ground_rules = g.size();
                    const auto report = answer_sets(g, cell);
                    row.candidates = report.candidates_examined;
                    row.answer_sets = report.answer_sets.size();
                    row.answer = brave_answers(inst.query, report.answer_sets).empty() ? "no" : "yes";
                } catch (const SolveTimeout&) {
                    row.answer = "timeout";
                } catch (const CapExceeded&) {
                    row.answer = "cap";
                }
                row.time_ms = elapsed_ms(started);
                table.rows.push_back(std::move(row));
            }
    }
    return table;
}

}  // namespace dms
