#include "support.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dms::test {

Interpretation atoms(const std::string& text) {
    Interpretation out;
    std::istringstream in(text);
    std::string token;
    while (in >> token) out.insert(parse_atom(token));
    return out;
}

std::set<Rule> brute_force_ground(const Program& p) {
    std::set<Term> constants;
    for (const auto& r : p.rules())
        for (const auto* part : {&r.head(), &r.pos_body(), &r.neg_body()})
            for (const auto& a : *part)
                for (const auto& t : a.args)
                    if (t.is_constant()) constants.insert(t);
    if (constants.empty()) constants.insert(Term::constant("u0"));

    std::set<Rule> out;
    for (const auto& r : p.rules()) {
        std::set<std::string> vars;
        for (const auto* part : {&r.head(), &r.pos_body(), &r.neg_body()})
            for (const auto& a : *part)
                for (const auto& t : a.args)
                    if (t.is_variable()) vars.insert(t.name());
        std::map<std::string, Term> theta;
        std::function<void(std::set<std::string>::const_iterator)> bind = [&](auto it) {
            if (it == vars.end()) {
                auto apply = [&](const std::vector<Atom>& as) {
                    std::vector<Atom> res;
                    for (const auto& a : as) {
                        Atom g = a;
                        for (auto& t : g.args)
                            if (t.is_variable()) t = theta.at(t.name());
                        res.push_back(g);
                    }
                    return res;
                };
                out.insert(Rule(apply(r.head()), apply(r.pos_body()), apply(r.neg_body())));
                return;
            }
            for (const auto& c : constants) {
                theta.insert_or_assign(*it, c);
                bind(std::next(it));
            }
        };
        bind(vars.begin());
    }
    return out;
}

namespace {

bool subset(const std::vector<Atom>& xs, const Interpretation& m) {
    for (const auto& x : xs)
        if (!m.count(x)) return false;
    return true;
}

bool meets(const std::vector<Atom>& xs, const Interpretation& m) {
    for (const auto& x : xs)
        if (m.count(x)) return true;
    return false;
}

bool models_positive(const Interpretation& m, const std::vector<const Rule*>& rules) {
    for (const auto* r : rules)
        if (subset(r->pos_body(), m) && !meets(r->head(), m)) return false;
    return true;
}

}  // namespace

std::set<Interpretation> brute_force_answer_sets(const Program& p) {
    const auto rules = brute_force_ground(p);
    std::set<Atom> universe_atoms;
    for (const auto& r : rules)
        for (const auto* part : {&r.head(), &r.pos_body(), &r.neg_body()}) universe_atoms.insert(part->begin(), part->end());
    const std::vector<Atom> all(universe_atoms.begin(), universe_atoms.end());
    if (all.size() > 20) throw std::invalid_argument("too many atoms for brute force");

    std::set<Interpretation> out;
    for (std::uint64_t mask = 0; mask < (1ULL << all.size()); ++mask) {
        Interpretation m;
        for (std::size_t k = 0; k < all.size(); ++k)
            if (mask >> k & 1) m.insert(all[k]);
        std::vector<const Rule*> reduct;
        for (const auto& r : rules)
            if (!meets(r.neg_body(), m)) reduct.push_back(&r);
        if (!models_positive(m, reduct)) continue;
        bool minimal = true;
        for (std::uint64_t sub = (mask - 1) & mask; minimal; sub = (sub - 1) & mask) {
            Interpretation n;
            for (std::size_t k = 0; k < all.size(); ++k)
                if (sub >> k & 1) n.insert(all[k]);
            if (models_positive(n, reduct)) minimal = false;
            if (sub == 0) break;
        }
        if (mask == 0) minimal = true;
        if (minimal) out.insert(std::move(m));
    }
    return out;
}

bool brute_force_unfounded(const std::set<Atom>& x, const std::set<Rule>& ground_rules, const Interpretation& i) {
    for (const auto& r : ground_rules) {
        if (!meets(r.head(), x)) continue;
        if (!subset(r.pos_body(), i)) continue;
        if (meets(r.neg_body(), i)) continue;
        if (meets(r.pos_body(), x)) continue;
        bool outside = false;
        for (const auto& h : r.head())
            if (i.count(h) && !x.count(h)) outside = true;
        if (!outside) return false;
    }
    return true;
}

bool brute_force_odd_cycle_free(const Program& p) {
    // (from, to) -> polarities present; 0 positive, 1 negative.
    std::map<std::string, std::vector<std::pair<std::string, int>>> adj;
    std::set<std::string> nodes;
    for (const auto& r : p.rules())
        for (const auto& h : r.head()) {
            nodes.insert(h.predicate);
            for (const auto& b : r.pos_body()) adj[h.predicate].emplace_back(b.predicate, 0);
            for (const auto& c : r.neg_body()) adj[h.predicate].emplace_back(c.predicate, 1);
        }
    // Simple cycles rooted at their smallest node.
    bool odd = false;
    for (const auto& start : nodes) {
        std::set<std::string> on_path{start};
        std::function<void(const std::string&, int)> walk = [&](const std::string& v, int parity) {
            for (const auto& [w, pol] : adj[v]) {
                if (odd) return;
                if (w == start) {
                    if ((parity ^ pol) == 1) odd = true;
                    continue;
                }
                if (w < start || on_path.count(w)) continue;
                on_path.insert(w);
                walk(w, parity ^ pol);
                on_path.erase(w);
            }
        };
        walk(start, 0);
        if (odd) return false;
    }
    return true;
}

}  // namespace dms::test
