#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dms/core.hpp"

namespace dms {

class RewriteError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bound/free labels, one per argument.
class Adornment {
public:
    Adornment() = default;
    explicit Adornment(std::string labels);

    /// `b` at constant positions, `f` at variable positions.
    static Adornment of_query(const Atom& atom);

    const std::string& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }
    bool bound(std::size_t i) const { return labels_[i] == 'b'; }
    std::size_t bound_count() const;

    friend bool operator==(const Adornment&, const Adornment&) = default;
    friend auto operator<=>(const Adornment&, const Adornment&) = default;

private:
    std::string labels_;
};

struct AdornedPredicate {
    std::string predicate;
    Adornment adornment;

    friend bool operator==(const AdornedPredicate&, const AdornedPredicate&) = default;
    friend auto operator<=>(const AdornedPredicate&, const AdornedPredicate&) = default;
};

std::string to_string(const AdornedPredicate& ap);

inline constexpr const char* kMagicPrefix = "magic_";

/// `magic_<pred>_<labels>`.
std::string magic_predicate_name(const AdornedPredicate& ap);
/// Inverse of magic_predicate_name; nullopt for non-magic names.
std::optional<AdornedPredicate> parse_magic_predicate(const std::string& name);
bool is_magic_predicate(const std::string& name);

/// The magic version of an adorned atom: arguments at `f` positions dropped.
Atom magic_atom(const Atom& atom, const Adornment& adornment);

/// Position of an atom occurrence inside a rule.
struct AtomRef {
    enum class Part : unsigned char { Head, Positive, Negative };
    Part part;
    std::size_t index;

    friend bool operator==(const AtomRef&, const AtomRef&) = default;
    friend auto operator<=>(const AtomRef&, const AtomRef&) = default;
};

const Atom& atom_at(const Rule& r, AtomRef ref);
/// All occurrences, head first, then positive, then negative body.
std::vector<AtomRef> occurrences(const Rule& r);

/// Sideways information passing strategy for a rule with respect to an
/// adorned head occurrence: a strict partial order over the rule's atom
/// occurrences plus the variables each occurrence makes bound.
class Sips {
public:
    Sips(const Rule& rule, std::size_t head_index);

    std::size_t head_index() const noexcept { return head_; }
    bool precedes(AtomRef a, AtomRef b) const;
    void set_precedes(AtomRef a, AtomRef b, bool value = true);
    const std::set<std::string>& bound_vars(AtomRef a) const;
    void set_bound_vars(AtomRef a, std::set<std::string> vars);

    /// Closes `precedes` transitively.
    void close();

    /// Checks the strict-partial-order and binding-source conditions:
    /// the selected head precedes everything else, non-selected head atoms
    /// and negative body atoms precede nothing, the order is irreflexive
    /// and transitive, and bound variables belong to their atom.
    bool valid(const Rule& rule) const;

private:
    std::size_t flat(AtomRef a) const;

    std::size_t head_;
    std::size_t n_head_, n_pos_, n_neg_;
    std::vector<std::vector<bool>> order_;
    std::vector<std::set<std::string>> bound_;
};

using SipsStrategy = std::function<Sips(const Rule&, std::size_t head_index, const Adornment&)>;

/// Binding-passing SIPS matching the running example: the selected head
/// binds its `b` variables and precedes every other atom; a positive body
/// atom precedes a later positive or any negative body atom when it binds
/// one of that atom's variables not already bound by the head; the order is
/// closed transitively. Positive body atoms bind all their variables.
Sips default_sips(const Rule& r, std::size_t head_index, const Adornment& adornment);

/// Eager left-to-right SIPS: every positive body atom precedes every later
/// positive body atom, every negative body atom and every non-selected head
/// atom. Valid, but yields more (still correct) magic rule bodies.
Sips eager_sips(const Rule& r, std::size_t head_index, const Adornment& adornment);

struct AdornedRule {
    Rule rule;
    std::size_t head_index;
    AdornedPredicate head_predicate;
    /// One entry per occurrence; nullopt for EDB atoms.
    std::vector<std::optional<Adornment>> head_adornments;
    std::vector<std::optional<Adornment>> pos_adornments;
    std::vector<std::optional<Adornment>> neg_adornments;

    const std::optional<Adornment>& adornment_at(AtomRef ref) const;
};

std::string print_adorned_rule(const AdornedRule& ra);

/// Adorns `r` for the occurrence `head_index` (whose predicate must be
/// `ap.predicate`). IDB predicates are those in `idb_predicates`; adorned
/// predicates not yet in `seen` are inserted there and appended to `fresh`.
AdornedRule adorn(const Rule& r, const AdornedPredicate& ap, std::size_t head_index, const Sips& sips,
                  const std::set<std::string>& idb_predicates, std::set<AdornedPredicate>& seen,
                  std::vector<AdornedPredicate>* fresh = nullptr);

/// Magic rules for every adorned occurrence other than the selected head.
std::vector<Rule> generate(const AdornedRule& ra, const Sips& sips);

/// The original rule guarded by the magic atoms of all its head atoms.
Rule modify(const AdornedRule& ra);

struct QuerySeed {
    Rule seed;
    AdornedPredicate predicate;
    /// Fact carrying query constants absent from the program, if any.
    std::optional<Rule> constants_fact;
};

/// Magic seed for `q`. Inserts the seed's adorned predicate into `seen`.
QuerySeed build_query_seed(const Query& q, const Program& p, std::set<AdornedPredicate>& seen);

struct DmsOptions {
    SipsStrategy sips = default_sips;
};

struct DmsResult {
    Program program;
    Rule seed;
    std::vector<Rule> magic_rules;
    std::vector<Rule> modified_rules;
    std::vector<Rule> edb_rules;
    std::optional<Rule> constants_fact;
    /// Adorned predicates in the order the worklist processed them.
    std::vector<AdornedPredicate> processed;
    std::vector<AdornedRule> adorned_rules;
    bool query_is_edb = false;
};

/// Dynamic magic set rewriting. Worklist is FIFO, rules are scanned in
/// program order and head occurrences left to right. Throws RewriteError if
/// `p` already uses a `magic_` predicate.
DmsResult dms_detailed(const Query& q, const Program& p, const DmsOptions& options = {});
Program dms(const Query& q, const Program& p, const DmsOptions& options = {});

}  // namespace dms
