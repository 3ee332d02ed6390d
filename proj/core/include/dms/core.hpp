#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dms {

/// Raised when a rule or program violates a structural invariant
/// (empty head, unsafe variable, arity clash).
class ProgramError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Term {
public:
    enum class Kind : unsigned char { Constant, Variable };

    static Term constant(std::string name);
    static Term variable(std::string name);

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    bool is_variable() const noexcept { return kind_ == Kind::Variable; }
    bool is_constant() const noexcept { return kind_ == Kind::Constant; }

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;

private:
    Term(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    Kind kind_;
    std::string name_;
};

/// True if `name` lexically denotes a variable (leading uppercase letter).
bool is_variable_name(const std::string& name);
/// True if `name` lexically denotes a constant (leading lowercase letter or digit).
bool is_constant_name(const std::string& name);

struct Atom {
    std::string predicate;
    std::vector<Term> args;

    Atom() = default;
    Atom(std::string pred, std::vector<Term> arguments = {})
        : predicate(std::move(pred)), args(std::move(arguments)) {}

    std::size_t arity() const noexcept { return args.size(); }
    bool is_ground() const;
    /// Variable names in order of first occurrence.
    std::vector<std::string> variables() const;

    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Literal {
    Atom atom;
    bool negated = false;

    friend bool operator==(const Literal&, const Literal&) = default;
};

/// A disjunctive rule `h1 v ... v hn :- b1, ..., bj, not c1, ..., not ck.`
///
/// Head and bodies keep their textual order (the default SIPS reads it) but
/// drop repeated atoms. Equality and ordering are set-based: two rules that
/// differ only in the order of their atoms compare equal.
class Rule {
public:
    Rule(std::vector<Atom> head, std::vector<Atom> pos_body = {}, std::vector<Atom> neg_body = {});

    static Rule fact(Atom atom);

    const std::vector<Atom>& head() const noexcept { return head_; }
    const std::vector<Atom>& pos_body() const noexcept { return pos_; }
    const std::vector<Atom>& neg_body() const noexcept { return neg_; }

    bool is_fact() const noexcept { return pos_.empty() && neg_.empty() && head_.size() == 1; }
    bool is_normal() const noexcept { return head_.size() == 1; }
    bool is_positive() const noexcept { return neg_.empty(); }
    bool is_ground() const;

    /// Variable names in order of first occurrence (head, positive body, negative body).
    std::vector<std::string> variables() const;

    friend bool operator==(const Rule& a, const Rule& b) { return a.key_ == b.key_; }
    friend auto operator<=>(const Rule& a, const Rule& b) { return a.key_ <=> b.key_; }

private:
    struct Key {
        std::vector<Atom> head, pos, neg;
        friend bool operator==(const Key&, const Key&) = default;
        friend auto operator<=>(const Key&, const Key&) = default;
    };

    std::vector<Atom> head_, pos_, neg_;
    Key key_;
};

/// A finite set of rules. Insertion order is kept for deterministic
/// iteration; duplicates (under set-based rule equality) collapse.
class Program {
public:
    Program() = default;
    explicit Program(std::vector<Rule> rules);

    /// Adds a rule; returns false if an equal rule was already present.
    /// Throws ProgramError on an arity clash.
    bool add(Rule rule);
    void add_all(const Program& other);

    const std::vector<Rule>& rules() const noexcept { return rules_; }
    std::size_t size() const noexcept { return rules_.size(); }
    bool empty() const noexcept { return rules_.empty(); }
    bool contains(const Rule& rule) const { return index_.count(rule) != 0; }

    /// Predicate symbol -> arity, for every predicate occurring anywhere.
    const std::map<std::string, std::size_t>& predicates() const noexcept { return arities_; }

    friend bool operator==(const Program& a, const Program& b) { return a.index_ == b.index_; }

private:
    void note_arity(const Atom& atom);

    std::vector<Rule> rules_;
    std::set<Rule> index_;
    std::map<std::string, std::size_t> arities_;
};

struct Query {
    Atom atom;

    bool is_ground() const { return atom.is_ground(); }
    friend bool operator==(const Query&, const Query&) = default;
};

/// A set of ground atoms.
using Interpretation = std::set<Atom>;

struct EdbIdbSplit {
    std::vector<Rule> edb_rules;
    std::vector<Rule> idb_rules;
    std::set<std::string> edb_predicates;
    std::set<std::string> idb_predicates;
};

/// A predicate is EDB iff every defining rule is a fact (vacuously true
/// for predicates without defining rules). IDB rules are those with some
/// IDB predicate in the head.
EdbIdbSplit edb_idb_split(const Program& p);

/// Name of the constant added to the universe of a constant-free program.
inline constexpr const char* kFreshUniverseConstant = "u0";

/// Constants of `p`, or {u0} if it has none.
std::set<Term> universe(const Program& p);

/// Every ground atom over the predicates of `p` and `universe(p)`.
std::set<Atom> base(const Program& p);

/// Applies a variable -> term mapping; unmapped variables stay.
Atom substitute(const Atom& atom, const std::map<std::string, Term>& binding);

/// Union of two programs (rules of `b` appended after those of `a`).
Program merge(const Program& a, const Program& b);
Program with_facts(const Program& p, const std::set<Atom>& facts);

}  // namespace dms
