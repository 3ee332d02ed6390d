#pragma once

#include <set>
#include <string>
#include <vector>

#include "dms/core.hpp"
#include "dms/parser.hpp"

namespace dms::test {

inline const char* const kGenealogy =
    "father(X,Y) :- related(X,Y), not brother(X,Y).\n"
    "brother(X,Y) :- related(X,Y), not father(X,Y).\n"
    "ancestor(X,Y) :- father(X,Y).\n"
    "ancestor(X,Y) :- father(X,Z), ancestor(Z,Y).\n";

inline const char* const kDisjunctiveKill =
    "edb(a).\n"
    "q(X) v p(X) :- edb(X).\n"
    "co(X) :- q(X), not co(X).\n";

inline const char* const kOddLoop = "a v b.\na :- not a, not b.\n";

Interpretation atoms(const std::string& text);

/// Answer sets straight from the definition: every subset M of the atoms
/// occurring in the grounding is tested for being a model of its reduct with
/// no model of that reduct strictly inside it. Independent of the search
/// solver; feasible up to about 14 atoms.
std::set<Interpretation> brute_force_answer_sets(const Program& p);

/// All ground instances of every rule, computed by a separate substitution
/// loop over universe(p).
std::set<Rule> brute_force_ground(const Program& p);

/// Unfounded-set condition evaluated rule by rule on a ground rule set.
bool brute_force_unfounded(const std::set<Atom>& x, const std::set<Rule>& ground_rules, const Interpretation& i);

/// Odd cycle detection by explicit enumeration of simple cycles.
bool brute_force_odd_cycle_free(const Program& p);

}  // namespace dms::test
