#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dms/core.hpp"
#include "dms/semantics.hpp"

namespace dms {

// ---------------------------------------------------------------------------
// Related benchmark instances

/// Edge layout of the genealogy grid. The pictured layout is not
/// recoverable from its description, so RightDown is an assumption.
enum class GridPattern { RightDown, RightDownDiagonal };

const char* to_string(GridPattern g);

/// Persons p_i_j on an n x n grid, related facts along the pattern's edges,
/// and the corner query ancestor(p_1_1, p_n_n)?.
struct RelatedInstance {
    std::size_t n = 0;
    GridPattern pattern = GridPattern::RightDown;
    std::set<Atom> facts;
    Query query;

    /// The four ancestor rules plus the related facts.
    Program program() const;
    /// Distinct constants mentioned by the facts.
    std::size_t person_count() const;
};

/// father/brother/ancestor rules over related/2.
Program related_rules();
std::string person_name(std::size_t i, std::size_t j);
RelatedInstance gen_related_instance(std::size_t n, GridPattern pattern = GridPattern::RightDown);

// ---------------------------------------------------------------------------
// Generators

/// Each EDB ground atom over universe(p) plus `fresh` new constants is kept
/// with probability `density`. Throws std::invalid_argument if p has no EDB
/// predicate.
std::set<Atom> random_edb(const Program& p, std::uint64_t seed, double density, std::size_t fresh = 2);

enum class Profile { Stratified, OddCycleFree, Arbitrary };

const char* to_string(Profile profile);
std::optional<Profile> parse_profile(const std::string& s);

/// At most 8 predicates, 12 rules, arity 2. Always has at least one EDB and
/// one IDB predicate.
Program random_program(std::uint64_t seed, Profile profile);

/// Query over an IDB predicate of p; each argument is a constant of p with
/// probability 1/2, otherwise a variable.
Query random_query(const Program& p, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Differential equivalence

struct Mismatch {
    std::set<Atom> facts;
    std::set<Substitution> original;
    std::set<Substitution> rewritten;
};

struct TrialRecord {
    std::size_t index = 0;
    std::set<Atom> facts;
    std::size_t ground_original = 0;
    std::size_t ground_rewritten = 0;
    double ms_original = 0;
    double ms_rewritten = 0;
    bool skipped = false;
    std::string skip_reason;
};

struct EquivReport {
    std::string program_id;
    Query query;
    std::size_t fact_sets_tested = 0;
    std::size_t skipped = 0;
    std::vector<Mismatch> brave_mismatches;
    std::vector<Mismatch> cautious_mismatches;
    std::vector<TrialRecord> trials;

    bool equivalent() const { return brave_mismatches.empty() && cautious_mismatches.empty(); }
};

/// Compares brave and cautious answers of p ∪ F and dms(q, p) ∪ F for every
/// F in `fact_sets`. Cap errors skip the trial and are counted.
EquivReport check_equivalence_on(const Program& p, const Query& q, const std::vector<std::set<Atom>>& fact_sets,
                                 const SolverLimits& limits = {}, std::string program_id = {});

/// Same, with trial i using random_edb(p, seed + i, density).
EquivReport check_equivalence(const Program& p, const Query& q, std::size_t trials, std::uint64_t seed,
                              double density, const SolverLimits& limits = {}, std::string program_id = {});

std::string summarize(const EquivReport& r);

// ---------------------------------------------------------------------------
// Proof-artifact checks

struct ArtifactReport {
    std::size_t instances = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Every answer set M of p: magic_variant(M) is an answer set of dms(q, p)
/// with the same instances of q.
ArtifactReport check_magic_variants(const Program& p, const Query& q, const SolverLimits& limits = {});

/// Killed sets for pairs (M, N): M a model of dms(q, p), N ⊆ M a model of
/// the reduct. M ranges over the answer sets of dms(q, p), the full atom set
/// of its grounding, and `extra_models` random supersets of answer sets that
/// are models; N over M itself (when it qualifies) and every minimal model of
/// the reduct below M.
ArtifactReport check_killed_unfounded(const Program& p, const Query& q, std::uint64_t seed,
                                      std::size_t extra_models = 2, const SolverLimits& limits = {});

// ---------------------------------------------------------------------------
// Related benchmark

enum class BenchMode { Plain, Dms };

const char* to_string(BenchMode m);

struct BenchRow {
    std::size_t n = 0;
    BenchMode mode = BenchMode::Plain;
    std::size_t rep = 0;
    double time_ms = 0;
    std::size_t ground_rules = 0;
    std::uint64_t candidates = 0;
    std::size_t answer_sets = 0;
    /// "yes", "no", "timeout" or "cap".
    std::string answer;
};

struct BenchTable {
    GridPattern pattern = GridPattern::RightDown;
    std::vector<BenchRow> rows;

    /// Columns n,mode,time_ms,ground_rules,candidates,answer.
    std::string to_csv() const;
    /// JSON object with the pattern and one record per row.
    std::string to_json() const;
};

/// Brave corner query per size x mode x repetition; every answer set is
/// enumerated so the count is reported.
BenchTable run_benchmark(const std::vector<std::size_t>& sizes, const std::vector<BenchMode>& modes,
                         std::size_t repetitions, std::chrono::milliseconds timeout = std::chrono::seconds(60),
                         GridPattern pattern = GridPattern::RightDown, const SolverLimits& limits = {});

}  // namespace dms
