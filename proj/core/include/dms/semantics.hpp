#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dms/core.hpp"

namespace dms {

/// A solver limit was hit. Never a silent truncation.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class GroundingTooLarge : public CapExceeded {
public:
    using CapExceeded::CapExceeded;
};

class CandidateSpaceTooLarge : public CapExceeded {
public:
    using CapExceeded::CapExceeded;
};

class SolveTimeout : public CapExceeded {
public:
    using CapExceeded::CapExceeded;
};

using AtomId = std::uint32_t;

struct AtomHash {
    std::size_t operator()(const Atom& a) const noexcept;
};

/// Interning table for ground atoms.
class AtomTable {
public:
    AtomId intern(const Atom& atom);
    std::optional<AtomId> find(const Atom& atom) const;
    const Atom& operator[](AtomId id) const { return atoms_[id]; }
    std::size_t size() const noexcept { return atoms_.size(); }

private:
    std::vector<Atom> atoms_;
    std::unordered_map<Atom, AtomId, AtomHash> ids_;
};

struct GroundRule {
    std::vector<AtomId> head;
    std::vector<AtomId> pos;
    std::vector<AtomId> neg;
};

struct GroundProgram {
    std::shared_ptr<const AtomTable> atoms;
    std::vector<GroundRule> rules;

    std::size_t size() const noexcept { return rules.size(); }
    Rule to_rule(const GroundRule& r) const;
    /// Set of the ground rules as ordinary rules.
    std::set<Rule> to_rules() const;
};

inline constexpr std::size_t kDefaultGroundCap = 1'000'000;
inline constexpr std::uint64_t kDefaultCandidateCap = 1ULL << 22;

/// Every instance of every rule over universe(p); duplicates collapse.
/// Throws GroundingTooLarge if the instance count would exceed `cap`.
GroundProgram ground(const Program& p, std::size_t cap = kDefaultGroundCap);

/// Deletes rules whose negative body meets `i` and strips the remaining
/// negative literals.
GroundProgram reduct(const GroundProgram& g, const Interpretation& i);

bool is_model(const Interpretation& i, const GroundProgram& g);

enum class Method { ReductMinimality, UnfoundedFree };

const char* to_string(Method m);

struct SolverLimits {
    std::size_t ground_cap = kDefaultGroundCap;
    /// Bound on search leaves (complete candidate interpretations plus conflicts).
    std::uint64_t candidate_cap = kDefaultCandidateCap;
    /// Stop after this many answer sets (0 = all).
    std::size_t max_models = 0;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct AnswerSetReport {
    std::set<Interpretation> answer_sets;
    std::uint64_t candidates_examined = 0;
    Method method = Method::ReductMinimality;
    std::size_t ground_rules = 0;
    /// True if max_models stopped the enumeration early.
    bool truncated = false;
};

/// Answer sets as subset-minimal models of the reduct.
///
/// Candidates are produced by a backtracking search over atoms that can
/// occur in some head (atoms outside that closure are false in every answer
/// set); propagation keeps only supported models of the ground program. Each
/// complete candidate is accepted iff it is a minimal model of its reduct.
AnswerSetReport answer_sets(const Program& p, const SolverLimits& limits = {});
AnswerSetReport answer_sets(const GroundProgram& g, const SolverLimits& limits = {});

/// Same candidates, accepted iff they model the ground program and contain
/// no nonempty unfounded subset.
AnswerSetReport answer_sets_via_unfounded(const Program& p, const SolverLimits& limits = {});
AnswerSetReport answer_sets_via_unfounded(const GroundProgram& g, const SolverLimits& limits = {});

AnswerSetReport solve(const GroundProgram& g, Method method, const SolverLimits& limits = {});

bool is_answer_set(const Interpretation& m, const GroundProgram& g);
bool is_answer_set(const Interpretation& m, const Program& p);

/// Minimal models N of the (positive) `g` with N ⊆ upper.
std::set<Interpretation> minimal_models_below(const GroundProgram& g, const Interpretation& upper,
                                              const SolverLimits& limits = {});

bool is_unfounded_set(const std::set<Atom>& x, const GroundProgram& g, const Interpretation& i);
bool is_unfounded_set(const std::set<Atom>& x, const Program& p, const Interpretation& i);

/// Variable -> constant.
using Substitution = std::map<std::string, Term>;

std::string print_substitution(const Substitution& s);

/// Substitutions θ with q.atom θ ∈ m.
std::set<Substitution> matches(const Query& q, const Interpretation& m);

/// Over an empty family, cautious yields every ground substitution over
/// `universe_constants` and brave yields nothing.
std::set<Substitution> brave_answers(const Query& q, const std::set<Interpretation>& answer_sets);
std::set<Substitution> cautious_answers(const Query& q, const std::set<Interpretation>& answer_sets,
                                        const std::set<Term>& universe_constants);

std::set<Substitution> brave(const Program& p, const Query& q, const SolverLimits& limits = {});
std::set<Substitution> cautious(const Program& p, const Query& q, const SolverLimits& limits = {});

/// Atoms of base(p) outside `n` that are EDB in `p` or have a magic
/// counterpart in `n`.
std::set<Atom> killed_atoms(const Interpretation& m, const Interpretation& n, const Program& p,
                            const Program& rewritten);

/// Successive stages of the magic variant construction for `i`; the last
/// element is the fixpoint. `rewritten` must be dms(q, p).
std::vector<Interpretation> magic_variant_trace(const Interpretation& i, const Program& p, const Program& rewritten,
                                                std::size_t ground_cap = kDefaultGroundCap);
Interpretation magic_variant(const Interpretation& i, const Program& p, const Program& rewritten,
                             std::size_t ground_cap = kDefaultGroundCap);
Interpretation magic_variant(const Interpretation& i, const Query& q, const Program& p);

}  // namespace dms
