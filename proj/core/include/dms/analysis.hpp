#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dms/core.hpp"

namespace dms {

enum class Polarity : unsigned char { Positive, Negative };

struct DependencyEdge {
    std::string from;
    std::string to;
    Polarity polarity;

    friend bool operator==(const DependencyEdge&, const DependencyEdge&) = default;
    friend auto operator<=>(const DependencyEdge&, const DependencyEdge&) = default;
};

/// Predicate dependency graph: an edge from each head predicate of a rule
/// to each of its body predicates, labelled with the literal's polarity.
struct DependencyGraph {
    std::set<std::string> nodes;
    std::set<DependencyEdge> edges;

    bool has_edge(const std::string& from, const std::string& to, Polarity pol) const {
        return edges.count(DependencyEdge{from, to, pol}) != 0;
    }
};

DependencyGraph dependency_graph(const Program& p);

/// Strongly connected components, each listed in ascending node order;
/// components appear in reverse topological order.
std::vector<std::vector<std::string>> strongly_connected_components(const DependencyGraph& g);

bool is_stratified(const Program& p);
bool is_stratified(const DependencyGraph& g);

/// Checked on the parity-doubled graph: an odd cycle exists iff some
/// predicate's even and odd copies share a strongly connected component.
bool is_odd_cycle_free(const Program& p);
bool is_odd_cycle_free(const DependencyGraph& g);

enum class ScStatus { SuperConsistent, NotSuperConsistent, BudgetExceeded };

const char* to_string(ScStatus s);

struct ScVerdict {
    ScStatus status;
    /// Present iff status == NotSuperConsistent; p together with these facts has no answer set.
    std::optional<std::set<Atom>> counterexample;
    std::uint64_t candidates_tested = 0;
    /// Size of the candidate space as log2 (number of candidate atoms).
    std::size_t candidate_atoms = 0;
    bool short_circuited = false;
};

struct ScOptions {
    /// Report odd-cycle-free programs as SuperConsistent without enumeration.
    bool odd_cycle_shortcut = true;
    std::size_t ground_cap = 1'000'000;
    std::uint64_t candidate_cap = 1ULL << 22;
};

/// Candidate atoms for the super-consistency search: predicates of `p` over
/// its universe extended with one fresh constant per variable of the
/// renamed-apart rules. Sorted.
std::vector<Atom> sc_candidate_atoms(const Program& p);

/// Budgeted super-consistency check. Fact sets are enumerated by ascending
/// cardinality, lexicographically within a cardinality; `budget` bounds the
/// number tested. The search space is taken to be complete for the decision,
/// which relies on fresh constants being interchangeable.
ScVerdict check_super_consistent(const Program& p, std::uint64_t budget, const ScOptions& options = {});

}  // namespace dms
