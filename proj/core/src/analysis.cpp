#include "dms/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "dms/semantics.hpp"

namespace dms {

DependencyGraph dependency_graph(const Program& p) {
    DependencyGraph g;
    for (const auto& [pred, arity] : p.predicates()) g.nodes.insert(pred);
    for (const auto& r : p.rules())
        for (const auto& h : r.head()) {
            for (const auto& b : r.pos_body()) g.edges.insert({h.predicate, b.predicate, Polarity::Positive});
            for (const auto& c : r.neg_body()) g.edges.insert({h.predicate, c.predicate, Polarity::Negative});
        }
    return g;
}

namespace {

/// Tarjan over an index graph; returns the component id of each node, with
/// ids assigned in reverse topological order.
std::vector<std::size_t> tarjan(const std::vector<std::vector<std::size_t>>& adj) {
    const std::size_t n = adj.size();
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    std::size_t counter = 0, comps = 0;

    // Iterative to survive large generated graphs.
    struct Frame {
        std::size_t v, next;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            auto& f = frames.back();
            if (f.next < adj[f.v].size()) {
                const auto w = adj[f.v][f.next++];
                if (index[w] == unset) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const auto v = f.v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = comps;
                } while (w != v);
                ++comps;
            }
        }
    }
    return comp;
}

struct Indexed {
    std::vector<std::string> names;
    std::map<std::string, std::size_t> id;
};

Indexed index_nodes(const DependencyGraph& g) {
    Indexed ix;
    auto add = [&](const std::string& s) {
        if (ix.id.emplace(s, ix.names.size()).second) ix.names.push_back(s);
    };
    for (const auto& n : g.nodes) add(n);
    for (const auto& e : g.edges) {
        add(e.from);
        add(e.to);
    }
    return ix;
}

}  // namespace

std::vector<std::vector<std::string>> strongly_connected_components(const DependencyGraph& g) {
    const auto ix = index_nodes(g);
    std::vector<std::vector<std::size_t>> adj(ix.names.size());
    for (const auto& e : g.edges) adj[ix.id.at(e.from)].push_back(ix.id.at(e.to));
    const auto comp = tarjan(adj);
    const std::size_t count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<std::vector<std::string>> out(count);
    for (std::size_t v = 0; v < comp.size(); ++v) out[comp[v]].push_back(ix.names[v]);
    for (auto& c : out) std::sort(c.begin(), c.end());
    return out;
}

bool is_stratified(const DependencyGraph& g) {
    const auto ix = index_nodes(g);
    std::vector<std::vector<std::size_t>> adj(ix.names.size());
    for (const auto& e : g.edges) adj[ix.id.at(e.from)].push_back(ix.id.at(e.to));
    const auto comp = tarjan(adj);
    for (const auto& e : g.edges)
        if (e.polarity == Polarity::Negative && comp[ix.id.at(e.from)] == comp[ix.id.at(e.to)]) return false;
    return true;
}

bool is_stratified(const Program& p) { return is_stratified(dependency_graph(p)); }

bool is_odd_cycle_free(const DependencyGraph& g) {
    const auto ix = index_nodes(g);
    const std::size_t n = ix.names.size();
    // Node 2v is the even copy of v, 2v + 1 the odd copy.
    std::vector<std::vector<std::size_t>> adj(2 * n);
    for (const auto& e : g.edges) {
        const auto from = ix.id.at(e.from), to = ix.id.at(e.to);
        const std::size_t flip = e.polarity == Polarity::Negative ? 1 : 0;
        for (std::size_t parity = 0; parity < 2; ++parity) adj[2 * from + parity].push_back(2 * to + (parity ^ flip));
    }
    const auto comp = tarjan(adj);
    for (std::size_t v = 0; v < n; ++v)
        if (comp[2 * v] == comp[2 * v + 1]) return false;
    return true;
}

bool is_odd_cycle_free(const Program& p) { return is_odd_cycle_free(dependency_graph(p)); }

const char* to_string(ScStatus s) {
    switch (s) {
        case ScStatus::SuperConsistent: return "SuperConsistent";
        case ScStatus::NotSuperConsistent: return "NotSuperConsistent";
        case ScStatus::BudgetExceeded: return "BudgetExceeded";
    }
    return "?";
}

std::vector<Atom> sc_candidate_atoms(const Program& p) {
    std::set<Term> constants;
    for (const auto& r : p.rules())
        for (const auto* part : {&r.head(), &r.pos_body(), &r.neg_body()})
            for (const auto& a : *part)
                for (const auto& t : a.args)
                    if (t.is_constant()) constants.insert(t);

    std::size_t fresh = 0;
    for (const auto& r : p.rules()) fresh += r.variables().size();
    for (std::size_t k = 1; fresh > 0; ++k) {
        auto xi = Term::constant("xi" + std::to_string(k));
        if (constants.count(xi)) continue;
        constants.insert(std::move(xi));
        --fresh;
    }
    if (constants.empty()) constants.insert(Term::constant(kFreshUniverseConstant));

    const std::vector<Term> domain(constants.begin(), constants.end());
    std::vector<Atom> out;
    for (const auto& [pred, arity] : p.predicates()) {
        std::vector<std::size_t> idx(arity, 0);
        while (true) {
            std::vector<Term> args;
            args.reserve(arity);
            for (auto i : idx) args.push_back(domain[i]);
            out.emplace_back(pred, std::move(args));
            std::size_t k = arity;
            while (k > 0 && ++idx[k - 1] == domain.size()) idx[--k] = 0;
            if (k == 0) break;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

ScVerdict check_super_consistent(const Program& p, std::uint64_t budget, const ScOptions& options) {
    ScVerdict verdict{ScStatus::BudgetExceeded, std::nullopt, 0, 0, false};
    const auto atoms = sc_candidate_atoms(p);
    verdict.candidate_atoms = atoms.size();
    if (options.odd_cycle_shortcut && is_odd_cycle_free(p)) {
        verdict.status = ScStatus::SuperConsistent;
        verdict.short_circuited = true;
        return verdict;
    }

    SolverLimits limits;
    limits.ground_cap = options.ground_cap;
    limits.candidate_cap = options.candidate_cap;
    limits.max_models = 1;

    const std::size_t n = atoms.size();
    for (std::size_t k = 0; k <= n; ++k) {
        // Lexicographic k-combinations of atom indices.
        std::vector<std::size_t> pick(k);
        for (std::size_t i = 0; i < k; ++i) pick[i] = i;
        while (true) {
            if (verdict.candidates_tested >= budget) return verdict;
            std::set<Atom> facts;
            for (auto i : pick) facts.insert(atoms[i]);
            ++verdict.candidates_tested;
            if (answer_sets(with_facts(p, facts), limits).answer_sets.empty()) {
                verdict.status = ScStatus::NotSuperConsistent;
                verdict.counterexample = std::move(facts);
                return verdict;
            }
            std::size_t i = k;
            while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
            if (i == 0) break;
            ++pick[i - 1];
            for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
        }
    }
    verdict.status = ScStatus::SuperConsistent;
    return verdict;
}

}  // namespace dms
