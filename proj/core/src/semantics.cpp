#include "dms/semantics.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <unordered_set>

#include "dms/parser.hpp"
#include "dms/rewriter.hpp"

namespace dms {

// ---------------------------------------------------------------------------
// Atom table and grounding

std::size_t AtomHash::operator()(const Atom& a) const noexcept {
    std::size_t h = std::hash<std::string>{}(a.predicate);
    for (const auto& t : a.args) h = h * 1000003u ^ std::hash<std::string>{}(t.name()) ^ (t.is_variable() ? 0x9e37u : 0u);
    return h;
}

AtomId AtomTable::intern(const Atom& atom) {
    auto [it, inserted] = ids_.emplace(atom, static_cast<AtomId>(atoms_.size()));
    if (inserted) atoms_.push_back(atom);
    return it->second;
}

std::optional<AtomId> AtomTable::find(const Atom& atom) const {
    auto it = ids_.find(atom);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

Rule GroundProgram::to_rule(const GroundRule& r) const {
    auto conv = [&](const std::vector<AtomId>& ids) {
        std::vector<Atom> out;
        out.reserve(ids.size());
        for (auto id : ids) out.push_back((*atoms)[id]);
        return out;
    };
    return Rule(conv(r.head), conv(r.pos), conv(r.neg));
}

std::set<Rule> GroundProgram::to_rules() const {
    std::set<Rule> out;
    for (const auto& r : rules) out.insert(to_rule(r));
    return out;
}

namespace {

struct KeyHash {
    std::size_t operator()(const std::vector<AtomId>& v) const noexcept {
        std::size_t h = v.size();
        for (auto x : v) h = h * 0x100000001b3ULL ^ x;
        return h;
    }
};

std::vector<AtomId> unique_ids(std::vector<AtomId> ids) {
    std::vector<AtomId> out;
    out.reserve(ids.size());
    for (auto id : ids)
        if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
    return out;
}

std::vector<AtomId> rule_key(const GroundRule& r) {
    std::vector<AtomId> key;
    auto part = [&](std::vector<AtomId> ids) {
        std::sort(ids.begin(), ids.end());
        key.push_back(static_cast<AtomId>(ids.size()));
        key.insert(key.end(), ids.begin(), ids.end());
    };
    part(r.head);
    part(r.pos);
    part(r.neg);
    return key;
}

}  // namespace

GroundProgram ground(const Program& p, std::size_t cap) {
    const auto u = universe(p);
    const std::vector<Term> constants(u.begin(), u.end());

    std::size_t total = 0;
    for (const auto& r : p.rules()) {
        std::size_t count = 1;
        for (std::size_t k = 0; k < r.variables().size(); ++k) {
            if (count > cap / constants.size() + 1) {
                count = cap + 1;
                break;
            }
            count *= constants.size();
        }
        total += count;
        if (total > cap)
            throw GroundingTooLarge("grounding would produce more than " + std::to_string(cap) + " rule instances");
    }

    auto table = std::make_shared<AtomTable>();
    GroundProgram g;
    std::unordered_set<std::vector<AtomId>, KeyHash> seen;

    for (const auto& r : p.rules()) {
        const auto vars = r.variables();
        std::vector<std::size_t> idx(vars.size(), 0);
        std::map<std::string, Term> binding;
        while (true) {
            binding.clear();
            for (std::size_t k = 0; k < vars.size(); ++k) binding.emplace(vars[k], constants[idx[k]]);
            auto inst = [&](const std::vector<Atom>& atoms) {
                std::vector<AtomId> ids;
                ids.reserve(atoms.size());
                for (const auto& a : atoms) ids.push_back(table->intern(substitute(a, binding)));
                return unique_ids(std::move(ids));
            };
            GroundRule gr{inst(r.head()), inst(r.pos_body()), inst(r.neg_body())};
            if (seen.insert(rule_key(gr)).second) g.rules.push_back(std::move(gr));

            std::size_t k = vars.size();
            while (k > 0 && ++idx[k - 1] == constants.size()) idx[--k] = 0;
            if (k == 0) break;
        }
    }
    g.atoms = std::move(table);
    return g;
}

namespace {

std::vector<char> membership(const AtomTable& table, const Interpretation& i) {
    std::vector<char> in(table.size(), 0);
    for (const auto& a : i)
        if (auto id = table.find(a)) in[*id] = 1;
    return in;
}

Interpretation to_interpretation(const AtomTable& table, const std::vector<char>& in) {
    Interpretation out;
    for (AtomId id = 0; id < in.size(); ++id)
        if (in[id]) out.insert(table[id]);
    return out;
}

bool any_in(const std::vector<AtomId>& ids, const std::vector<char>& in) {
    return std::any_of(ids.begin(), ids.end(), [&](AtomId id) { return in[id] != 0; });
}

bool all_in(const std::vector<AtomId>& ids, const std::vector<char>& in) {
    return std::all_of(ids.begin(), ids.end(), [&](AtomId id) { return in[id] != 0; });
}

}  // namespace

GroundProgram reduct(const GroundProgram& g, const Interpretation& i) {
    const auto in = membership(*g.atoms, i);
    GroundProgram out{g.atoms, {}};
    for (const auto& r : g.rules)
        if (!any_in(r.neg, in)) out.rules.push_back(GroundRule{r.head, r.pos, {}});
    return out;
}

bool is_model(const Interpretation& i, const GroundProgram& g) {
    const auto in = membership(*g.atoms, i);
    for (const auto& r : g.rules)
        if (all_in(r.pos, in) && !any_in(r.neg, in) && !any_in(r.head, in)) return false;
    return true;
}

const char* to_string(Method m) {
    return m == Method::ReductMinimality ? "reduct-minimality" : "unfounded-free";
}

// ---------------------------------------------------------------------------
// Small clause solver used by the stability checks.

namespace {

/// Literal encoding: 2 * var for positive, 2 * var + 1 for negated.
class ClauseSet {
public:
    explicit ClauseSet(std::size_t vars) : vars_(vars) {}

    void add(std::vector<std::uint32_t> clause) { clauses_.push_back(std::move(clause)); }

    /// A satisfying assignment, trying `false` first for every variable.
    std::optional<std::vector<signed char>> solve() const {
        std::vector<signed char> value(vars_, -1);
        if (search(value)) return value;
        return std::nullopt;
    }

private:
    bool propagate(std::vector<signed char>& value) const {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& c : clauses_) {
                std::size_t open = 0;
                std::uint32_t last = 0;
                bool sat = false;
                for (auto lit : c) {
                    const auto v = value[lit >> 1];
                    if (v == -1) {
                        ++open;
                        last = lit;
                    } else if ((v == 1) != ((lit & 1u) != 0)) {
                        sat = true;
                        break;
                    }
                }
                if (sat) continue;
                if (open == 0) return false;
                if (open == 1) {
                    value[last >> 1] = (last & 1u) ? 0 : 1;
                    changed = true;
                }
            }
        }
        return true;
    }

    bool search(std::vector<signed char>& value) const {
        if (!propagate(value)) return false;
        const auto it = std::find(value.begin(), value.end(), static_cast<signed char>(-1));
        if (it == value.end()) return true;
        const auto var = static_cast<std::size_t>(it - value.begin());
        for (signed char choice : {0, 1}) {
            auto copy = value;
            copy[var] = choice;
            if (search(copy)) {
                value = std::move(copy);
                return true;
            }
        }
        return false;
    }

    std::size_t vars_;
    std::vector<std::vector<std::uint32_t>> clauses_;
};

/// Is `in` a subset-minimal model of the positive rules (head, pos) of the
/// reduct of `g` with respect to `in`?
bool minimal_model_of_reduct(const GroundProgram& g, const std::vector<char>& in) {
    std::vector<const GroundRule*> relevant;
    for (const auto& r : g.rules) {
        if (any_in(r.neg, in)) continue;
        if (!all_in(r.pos, in)) continue;
        if (!any_in(r.head, in)) return false;
        relevant.push_back(&r);
    }

    // Atoms forced into every model below `in`: derived through rules whose
    // head meets `in` in exactly one atom.
    std::vector<char> forced(in.size(), 0);
    std::size_t forced_count = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto* r : relevant) {
            if (!all_in(r->pos, forced)) continue;
            AtomId only = 0;
            std::size_t hits = 0;
            for (auto h : r->head)
                if (in[h]) {
                    ++hits;
                    only = h;
                }
            if (hits == 1 && !forced[only]) {
                forced[only] = 1;
                ++forced_count;
                changed = true;
            }
        }
    }
    const auto size = static_cast<std::size_t>(std::count(in.begin(), in.end(), 1));
    if (forced_count == size) return true;

    // Search for a model N with forced ⊆ N ⊊ in.
    std::vector<std::uint32_t> var_of(in.size(), std::numeric_limits<std::uint32_t>::max());
    std::uint32_t n = 0;
    for (AtomId id = 0; id < in.size(); ++id)
        if (in[id] && !forced[id]) var_of[id] = n++;
    ClauseSet clauses(n);
    for (const auto* r : relevant) {
        if (any_in(r->head, forced)) continue;
        std::vector<std::uint32_t> c;
        for (auto h : r->head)
            if (in[h]) c.push_back(2 * var_of[h]);
        for (auto b : r->pos)
            if (!forced[b]) c.push_back(2 * var_of[b] + 1);
        clauses.add(std::move(c));
    }
    std::vector<std::uint32_t> smaller;
    for (std::uint32_t v = 0; v < n; ++v) smaller.push_back(2 * v + 1);
    clauses.add(std::move(smaller));
    return !clauses.solve().has_value();
}

bool unfounded_set_ids(const GroundProgram& g, const std::vector<char>& x, const std::vector<char>& i) {
    for (const auto& r : g.rules) {
        if (!any_in(r.head, x)) continue;
        if (!all_in(r.pos, i)) continue;   // (1.a)
        if (any_in(r.neg, i)) continue;    // (1.b)
        if (any_in(r.pos, x)) continue;    // (2)
        bool founded_elsewhere = false;    // (3)
        for (auto h : r.head)
            if (i[h] && !x[h]) founded_elsewhere = true;
        if (!founded_elsewhere) return false;
    }
    return true;
}

/// Does `in` model g and contain no nonempty unfounded subset?
bool unfounded_free_model(const GroundProgram& g, const std::vector<char>& in) {
    std::vector<std::uint32_t> var_of(in.size(), std::numeric_limits<std::uint32_t>::max());
    std::vector<AtomId> atom_of;
    for (AtomId id = 0; id < in.size(); ++id)
        if (in[id]) {
            var_of[id] = static_cast<std::uint32_t>(atom_of.size());
            atom_of.push_back(id);
        }

    // x_a says "a belongs to the unfounded set X". A rule whose body is true
    // in `in` violates Def. (2)/(3) iff it has a head atom in X, no positive
    // body atom in X and every true head atom in X.
    ClauseSet clauses(atom_of.size());
    for (const auto& r : g.rules) {
        if (!all_in(r.pos, in) || any_in(r.neg, in)) continue;
        if (!any_in(r.head, in)) return false;
        std::vector<std::uint32_t> c;
        for (auto b : r.pos) c.push_back(2 * var_of[b]);
        for (auto h : r.head)
            if (in[h]) c.push_back(2 * var_of[h] + 1);
        clauses.add(std::move(c));
    }
    if (atom_of.empty()) return true;
    std::vector<std::uint32_t> nonempty;
    for (std::uint32_t v = 0; v < atom_of.size(); ++v) nonempty.push_back(2 * v);
    clauses.add(std::move(nonempty));

    const auto witness = clauses.solve();
    if (!witness) return true;
    std::vector<char> x(in.size(), 0);
    for (std::uint32_t v = 0; v < atom_of.size(); ++v)
        if ((*witness)[v] == 1) x[atom_of[v]] = 1;
    if (!unfounded_set_ids(g, x, in))
        throw std::logic_error("unfounded-set search produced a set violating the definition");
    return false;
}

// ---------------------------------------------------------------------------
// Candidate search: supported models of the ground program.

class CandidateSearch {
public:
    CandidateSearch(const GroundProgram& g, Method method, const SolverLimits& limits)
        : g_(g), method_(method), limits_(limits), n_(g.atoms->size()) {
        prepare();
    }

    AnswerSetReport run() {
        AnswerSetReport report;
        report.method = method_;
        report.ground_rules = g_.rules.size();
        report_ = &report;
        if (!contradiction_) search();
        report.candidates_examined = candidates_;
        return report;
    }

private:
    struct ActiveRule {
        std::vector<AtomId> head, pos, neg;
    };

    void prepare() {
        // Atoms derivable when negation is ignored; everything else is false
        // in every answer set.
        std::vector<std::size_t> missing(g_.rules.size());
        std::vector<std::vector<std::size_t>> waiting(n_);
        std::vector<AtomId> queue;
        possible_.assign(n_, 0);
        auto reach = [&](AtomId a) {
            if (!possible_[a]) {
                possible_[a] = 1;
                queue.push_back(a);
            }
        };
        for (std::size_t r = 0; r < g_.rules.size(); ++r) {
            missing[r] = g_.rules[r].pos.size();
            for (auto b : g_.rules[r].pos) waiting[b].push_back(r);
            if (missing[r] == 0)
                for (auto h : g_.rules[r].head) reach(h);
        }
        while (!queue.empty()) {
            const AtomId a = queue.back();
            queue.pop_back();
            for (auto r : waiting[a])
                if (--missing[r] == 0)
                    for (auto h : g_.rules[r].head) reach(h);
        }

        occ_.assign(n_, {});
        head_occ_.assign(n_, {});
        body_occ_.assign(n_, {});
        for (std::size_t r = 0; r < g_.rules.size(); ++r) {
            if (missing[r] != 0) continue;
            const auto& src = g_.rules[r];
            ActiveRule ar{src.head, src.pos, {}};
            for (auto c : src.neg)
                if (possible_[c]) ar.neg.push_back(c);
            // A rule that needs c both true and false can never fire.
            bool blocked = false;
            for (auto c : ar.neg)
                if (std::find(ar.pos.begin(), ar.pos.end(), c) != ar.pos.end()) blocked = true;
            if (blocked) continue;
            const auto idx = rules_.size();
            rules_.push_back(std::move(ar));
            const auto& stored = rules_.back();
            std::vector<AtomId> touched;
            for (const auto* part : {&stored.head, &stored.pos, &stored.neg}) touched.insert(touched.end(), part->begin(), part->end());
            for (auto a : unique_ids(std::move(touched))) occ_[a].push_back(idx);
            for (auto h : stored.head) head_occ_[h].push_back(idx);
            for (auto b : stored.pos) body_occ_[b].push_back(idx);
        }

        value_.assign(n_, -1);
        for (AtomId a = 0; a < n_; ++a)
            if (!possible_[a]) value_[a] = 0;
        rule_dirty_.assign(rules_.size(), 1);
        for (std::size_t r = 0; r < rules_.size(); ++r) rule_queue_.push_back(r);
        atom_dirty_.assign(n_, 0);
        for (AtomId a = 0; a < n_; ++a)
            if (possible_[a]) {
                atom_dirty_[a] = 1;
                atom_queue_.push_back(a);
            }
    }

    void mark_rule(std::size_t r) {
        if (!rule_dirty_[r]) {
            rule_dirty_[r] = 1;
            rule_queue_.push_back(r);
        }
    }

    void mark_atom(AtomId a) {
        if (!atom_dirty_[a]) {
            atom_dirty_[a] = 1;
            atom_queue_.push_back(a);
        }
    }

    bool assign(AtomId a, signed char v) {
        if (value_[a] == v) return true;
        if (value_[a] != -1) return false;
        value_[a] = v;
        trail_.push_back(a);
        mark_atom(a);
        for (auto r : occ_[a]) {
            mark_rule(r);
            for (auto h : rules_[r].head) mark_atom(h);
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            value_[trail_.back()] = -1;
            trail_.pop_back();
        }
    }

    bool body_false(const ActiveRule& r) const {
        for (auto b : r.pos)
            if (value_[b] == 0) return true;
        for (auto c : r.neg)
            if (value_[c] == 1) return true;
        return false;
    }

    bool check_rule(const ActiveRule& r) {
        std::size_t open_lits = 0;
        AtomId last_lit = 0;
        bool last_positive = true;
        for (auto b : r.pos) {
            if (value_[b] == 0) return true;
            if (value_[b] == -1) {
                ++open_lits;
                last_lit = b;
                last_positive = true;
            }
        }
        for (auto c : r.neg) {
            if (value_[c] == 1) return true;
            if (value_[c] == -1) {
                ++open_lits;
                last_lit = c;
                last_positive = false;
            }
        }
        std::size_t open_heads = 0;
        AtomId last_head = 0;
        for (auto h : r.head) {
            if (value_[h] == 1) return true;
            if (value_[h] == -1) {
                ++open_heads;
                last_head = h;
            }
        }
        if (open_lits == 0) {
            if (open_heads == 0) return false;
            if (open_heads == 1) return assign(last_head, 1);
        } else if (open_heads == 0 && open_lits == 1) {
            return assign(last_lit, last_positive ? 0 : 1);
        }
        return true;
    }

    // A true atom needs a rule with a true body whose head it alone makes true.
    bool check_support(AtomId a) {
        if (value_[a] == 0) return true;
        std::size_t count = 0;
        std::size_t only = 0;
        for (auto r : head_occ_[a]) {
            const auto& rule = rules_[r];
            if (body_false(rule)) continue;
            bool other_true = false;
            for (auto h : rule.head)
                if (h != a && value_[h] == 1) other_true = true;
            if (other_true) continue;
            only = r;
            if (++count > 1) break;
        }
        if (count == 0) return value_[a] == -1 ? assign(a, 0) : false;
        if (count == 1 && value_[a] == 1) {
            const auto& rule = rules_[only];
            for (auto b : rule.pos)
                if (!assign(b, 1)) return false;
            for (auto c : rule.neg)
                if (!assign(c, 0)) return false;
            for (auto h : rule.head)
                if (h != a && !assign(h, 0)) return false;
        }
        return true;
    }

    void clear_queues() {
        for (auto r : rule_queue_) rule_dirty_[r] = 0;
        for (auto a : atom_queue_) atom_dirty_[a] = 0;
        rule_queue_.clear();
        atom_queue_.clear();
    }

    bool propagate() {
        while (!rule_queue_.empty() || !atom_queue_.empty()) {
            if (!rule_queue_.empty()) {
                const auto r = rule_queue_.back();
                rule_queue_.pop_back();
                rule_dirty_[r] = 0;
                if (!check_rule(rules_[r])) {
                    clear_queues();
                    return false;
                }
            } else {
                const auto a = atom_queue_.back();
                atom_queue_.pop_back();
                atom_dirty_[a] = 0;
                if (!check_support(a)) {
                    clear_queues();
                    return false;
                }
            }
        }
        return true;
    }

    void count_candidate() {
        ++candidates_;
        if (candidates_ > limits_.candidate_cap)
            throw CandidateSpaceTooLarge("answer-set search examined more than " +
                                         std::to_string(limits_.candidate_cap) + " candidates");
        if (limits_.deadline && (candidates_ & 0xff) == 0 && std::chrono::steady_clock::now() > *limits_.deadline)
            throw SolveTimeout("answer-set search exceeded its deadline");
    }

    void accept_leaf() {
        std::vector<char> in(n_, 0);
        for (AtomId a = 0; a < n_; ++a) in[a] = value_[a] == 1;
        const bool stable = method_ == Method::ReductMinimality ? minimal_model_of_reduct(g_, in)
                                                                : unfounded_free_model(g_, in);
        if (!stable) return;
        report_->answer_sets.insert(to_interpretation(*g_.atoms, in));
        if (limits_.max_models && report_->answer_sets.size() >= limits_.max_models) {
            report_->truncated = true;
            stop_ = true;
        }
    }

    // Atoms outside the closure of rules still applicable under the current
    // assignment cannot belong to a minimal model of the reduct, so they are
    // false. Catches positive loops that support propagation cannot see.
    bool falsify_unfounded() {
        derivable_.assign(n_, 0);
        missing_.resize(rules_.size());
        std::vector<AtomId> queue;
        auto fire = [&](const ActiveRule& r) {
            for (auto h : r.head)
                if (value_[h] != 0 && !derivable_[h]) {
                    derivable_[h] = 1;
                    queue.push_back(h);
                }
        };
        for (std::size_t r = 0; r < rules_.size(); ++r) {
            const auto& rule = rules_[r];
            const bool applicable = !body_false(rule) && std::any_of(rule.head.begin(), rule.head.end(),
                                                                      [&](AtomId h) { return value_[h] != 0; });
            missing_[r] = applicable ? rule.pos.size() : std::numeric_limits<std::size_t>::max();
            if (missing_[r] == 0) fire(rule);
        }
        while (!queue.empty()) {
            const AtomId a = queue.back();
            queue.pop_back();
            for (auto r : body_occ_[a])
                if (missing_[r] != std::numeric_limits<std::size_t>::max() && --missing_[r] == 0) fire(rules_[r]);
        }
        for (AtomId a = 0; a < n_; ++a)
            if (!derivable_[a] && !assign(a, 0)) return false;
        return true;
    }

    bool propagate_all() {
        while (true) {
            if (!propagate()) return false;
            const auto before = trail_.size();
            if (!falsify_unfounded()) {
                clear_queues();
                return false;
            }
            if (trail_.size() == before) return true;
        }
    }

    void search() {
        if (!propagate_all()) {
            count_candidate();
            return;
        }
        while (cursor_hint_ < n_ && value_[cursor_hint_] != -1) ++cursor_hint_;
        AtomId pick = cursor_hint_;
        if (pick == n_) {
            count_candidate();
            accept_leaf();
            return;
        }
        const AtomId saved_hint = cursor_hint_;
        for (signed char v : {1, 0}) {
            const auto mark = trail_.size();
            assign(pick, v);
            search();
            undo(mark);
            cursor_hint_ = saved_hint;
            if (stop_) return;
        }
    }

    const GroundProgram& g_;
    Method method_;
    SolverLimits limits_;
    std::size_t n_;
    bool contradiction_ = false;
    bool stop_ = false;
    std::uint64_t candidates_ = 0;
    AnswerSetReport* report_ = nullptr;

    std::vector<char> possible_;
    std::vector<ActiveRule> rules_;
    std::vector<std::vector<std::size_t>> occ_, head_occ_, body_occ_;
    std::vector<char> derivable_;
    std::vector<std::size_t> missing_;
    std::vector<signed char> value_;
    std::vector<AtomId> trail_;
    std::vector<char> rule_dirty_, atom_dirty_;
    std::vector<std::size_t> rule_queue_;
    std::vector<AtomId> atom_queue_;
    AtomId cursor_hint_ = 0;
};

}  // namespace

AnswerSetReport solve(const GroundProgram& g, Method method, const SolverLimits& limits) {
    return CandidateSearch(g, method, limits).run();
}

AnswerSetReport answer_sets(const GroundProgram& g, const SolverLimits& limits) {
    return solve(g, Method::ReductMinimality, limits);
}

AnswerSetReport answer_sets(const Program& p, const SolverLimits& limits) {
    return answer_sets(ground(p, limits.ground_cap), limits);
}

AnswerSetReport answer_sets_via_unfounded(const GroundProgram& g, const SolverLimits& limits) {
    return solve(g, Method::UnfoundedFree, limits);
}

AnswerSetReport answer_sets_via_unfounded(const Program& p, const SolverLimits& limits) {
    return answer_sets_via_unfounded(ground(p, limits.ground_cap), limits);
}

bool is_answer_set(const Interpretation& m, const GroundProgram& g) {
    // Atoms that occur in no ground rule can never be derived.
    for (const auto& a : m)
        if (!g.atoms->find(a)) return false;
    return minimal_model_of_reduct(g, membership(*g.atoms, m));
}

bool is_answer_set(const Interpretation& m, const Program& p) { return is_answer_set(m, ground(p)); }

std::set<Interpretation> minimal_models_below(const GroundProgram& g, const Interpretation& upper,
                                              const SolverLimits& limits) {
    const auto in = membership(*g.atoms, upper);
    GroundProgram restricted{g.atoms, {}};
    for (const auto& r : g.rules) {
        if (!r.neg.empty()) throw std::invalid_argument("minimal_models_below expects a positive program");
        if (!all_in(r.pos, in)) continue;
        GroundRule gr{{}, r.pos, {}};
        for (auto h : r.head)
            if (in[h]) gr.head.push_back(h);
        if (gr.head.empty()) return {};
        restricted.rules.push_back(std::move(gr));
    }
    return answer_sets(restricted, limits).answer_sets;
}

bool is_unfounded_set(const std::set<Atom>& x, const GroundProgram& g, const Interpretation& i) {
    return unfounded_set_ids(g, membership(*g.atoms, x), membership(*g.atoms, i));
}

bool is_unfounded_set(const std::set<Atom>& x, const Program& p, const Interpretation& i) {
    return is_unfounded_set(x, ground(p), i);
}

// ---------------------------------------------------------------------------
// Query answering

std::string print_substitution(const Substitution& s) {
    if (s.empty()) return "{}";
    std::string out = "{";
    bool first = true;
    for (const auto& [var, term] : s) {
        if (!first) out += ", ";
        first = false;
        out += var + "=" + term.name();
    }
    return out + "}";
}

std::set<Substitution> matches(const Query& q, const Interpretation& m) {
    std::set<Substitution> out;
    for (auto it = m.lower_bound(Atom{q.atom.predicate, {}}); it != m.end() && it->predicate == q.atom.predicate; ++it) {
        if (it->arity() != q.atom.arity()) continue;
        Substitution theta;
        bool ok = true;
        for (std::size_t k = 0; ok && k < q.atom.arity(); ++k) {
            const Term& pattern = q.atom.args[k];
            const Term& value = it->args[k];
            if (pattern.is_constant()) {
                ok = pattern == value;
            } else {
                auto [pos, inserted] = theta.emplace(pattern.name(), value);
                ok = inserted || pos->second == value;
            }
        }
        if (ok) out.insert(std::move(theta));
    }
    return out;
}

std::set<Substitution> brave_answers(const Query& q, const std::set<Interpretation>& answer_sets) {
    std::set<Substitution> out;
    for (const auto& m : answer_sets) {
        auto found = matches(q, m);
        out.insert(found.begin(), found.end());
    }
    return out;
}

std::set<Substitution> cautious_answers(const Query& q, const std::set<Interpretation>& answer_sets,
                                        const std::set<Term>& universe_constants) {
    if (answer_sets.empty()) {
        const auto vars = q.atom.variables();
        const std::vector<Term> constants(universe_constants.begin(), universe_constants.end());
        std::set<Substitution> out;
        if (constants.empty() && !vars.empty()) return out;
        std::vector<std::size_t> idx(vars.size(), 0);
        while (true) {
            Substitution theta;
            for (std::size_t k = 0; k < vars.size(); ++k) theta.emplace(vars[k], constants[idx[k]]);
            out.insert(std::move(theta));
            std::size_t k = vars.size();
            while (k > 0 && ++idx[k - 1] == constants.size()) idx[--k] = 0;
            if (k == 0) break;
        }
        return out;
    }
    auto it = answer_sets.begin();
    auto out = matches(q, *it);
    for (++it; it != answer_sets.end() && !out.empty(); ++it) {
        const auto here = matches(q, *it);
        std::set<Substitution> keep;
        std::set_intersection(out.begin(), out.end(), here.begin(), here.end(), std::inserter(keep, keep.end()));
        out = std::move(keep);
    }
    return out;
}

std::set<Substitution> brave(const Program& p, const Query& q, const SolverLimits& limits) {
    return brave_answers(q, answer_sets(p, limits).answer_sets);
}

std::set<Substitution> cautious(const Program& p, const Query& q, const SolverLimits& limits) {
    return cautious_answers(q, answer_sets(p, limits).answer_sets, universe(p));
}

// ---------------------------------------------------------------------------
// Killed atoms and magic variants

namespace {

/// predicate -> adornments for which a magic atom occurs in `n`.
std::map<std::string, std::set<Adornment>> magic_adornments(const Interpretation& n) {
    std::map<std::string, std::set<Adornment>> out;
    for (const auto& a : n)
        if (auto ap = parse_magic_predicate(a.predicate)) out[ap->predicate].insert(ap->adornment);
    return out;
}

bool has_magic(const Atom& a, const std::map<std::string, std::set<Adornment>>& adornments, const Interpretation& n) {
    auto it = adornments.find(a.predicate);
    if (it == adornments.end()) return false;
    for (const auto& ad : it->second)
        if (ad.size() == a.arity() && n.count(magic_atom(a, ad))) return true;
    return false;
}

}  // namespace

std::set<Atom> killed_atoms(const Interpretation& /*m*/, const Interpretation& n, const Program& p,
                            const Program& /*rewritten*/) {
    const auto split = edb_idb_split(p);
    const auto adornments = magic_adornments(n);
    std::set<Atom> out;
    for (const auto& a : base(p)) {
        if (n.count(a)) continue;
        if (split.edb_predicates.count(a.predicate) || has_magic(a, adornments, n)) out.insert(a);
    }
    return out;
}

std::vector<Interpretation> magic_variant_trace(const Interpretation& i, const Program& p, const Program& rewritten,
                                                std::size_t ground_cap) {
    const auto g = ground(rewritten, ground_cap);
    std::vector<const GroundRule*> magic_rules;
    for (const auto& r : g.rules)
        if (r.head.size() == 1 && is_magic_predicate((*g.atoms)[r.head.front()].predicate)) magic_rules.push_back(&r);

    // Stage 0: facts of EDB predicates. Facts the rewriting introduced for
    // query constants count as EDB as well.
    Interpretation stage;
    const auto p_split = edb_idb_split(p);
    for (const auto& r : p_split.edb_rules) stage.insert(r.head().front());
    const auto r_split = edb_idb_split(rewritten);
    for (const auto& r : r_split.edb_rules) {
        const auto& a = r.head().front();
        if (!is_magic_predicate(a.predicate) && !p.predicates().count(a.predicate)) stage.insert(a);
    }

    std::vector<Interpretation> trace{stage};
    while (true) {
        Interpretation next = stage;
        const auto adornments = magic_adornments(stage);
        for (const auto& a : i)
            if (has_magic(a, adornments, stage)) next.insert(a);
        const auto in = membership(*g.atoms, stage);
        for (const auto* r : magic_rules)
            if (all_in(r->pos, in)) next.insert((*g.atoms)[r->head.front()]);
        if (next == stage) break;
        stage = std::move(next);
        trace.push_back(stage);
    }
    return trace;
}

Interpretation magic_variant(const Interpretation& i, const Program& p, const Program& rewritten,
                             std::size_t ground_cap) {
    return magic_variant_trace(i, p, rewritten, ground_cap).back();
}

Interpretation magic_variant(const Interpretation& i, const Query& q, const Program& p) {
    return magic_variant(i, p, dms(q, p));
}

}  // namespace dms
