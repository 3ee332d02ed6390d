#include "dms/core.hpp"

#include <algorithm>
#include <cctype>

namespace dms {

bool is_variable_name(const std::string& name) {
    return !name.empty() && std::isupper(static_cast<unsigned char>(name.front()));
}

bool is_constant_name(const std::string& name) {
    if (name.empty()) return false;
    const auto c = static_cast<unsigned char>(name.front());
    return std::islower(c) || std::isdigit(c);
}

Term Term::constant(std::string name) {
    if (!is_constant_name(name)) throw ProgramError("invalid constant name '" + name + "'");
    return Term(Kind::Constant, std::move(name));
}

Term Term::variable(std::string name) {
    if (!is_variable_name(name)) throw ProgramError("invalid variable name '" + name + "'");
    return Term(Kind::Variable, std::move(name));
}

bool Atom::is_ground() const {
    return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

std::vector<std::string> Atom::variables() const {
    std::vector<std::string> out;
    for (const auto& t : args)
        if (t.is_variable() && std::find(out.begin(), out.end(), t.name()) == out.end())
            out.push_back(t.name());
    return out;
}

namespace {

std::vector<Atom> dedupe(std::vector<Atom> atoms) {
    std::vector<Atom> out;
    out.reserve(atoms.size());
    for (auto& a : atoms)
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
    return out;
}

std::vector<Atom> sorted(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end());
    return atoms;
}

std::string describe(const Atom& a) {
    std::string s = a.predicate;
    if (!a.args.empty()) {
        s += '(';
        for (std::size_t i = 0; i < a.args.size(); ++i) {
            if (i) s += ',';
            s += a.args[i].name();
        }
        s += ')';
    }
    return s;
}

}  // namespace

Rule::Rule(std::vector<Atom> head, std::vector<Atom> pos_body, std::vector<Atom> neg_body)
    : head_(dedupe(std::move(head))), pos_(dedupe(std::move(pos_body))), neg_(dedupe(std::move(neg_body))) {
    if (head_.empty()) throw ProgramError("rule with empty head");
    for (const auto* part : {&head_, &pos_, &neg_})
        for (const auto& a : *part)
            if (a.predicate.empty() || !std::islower(static_cast<unsigned char>(a.predicate.front())))
                throw ProgramError("invalid predicate name '" + a.predicate + "'");

    std::set<std::string> bound;
    for (const auto& a : pos_)
        for (const auto& v : a.variables()) bound.insert(v);
    auto check = [&](const Atom& a, const char* where) {
        for (const auto& v : a.variables())
            if (!bound.count(v))
                throw ProgramError("unsafe variable " + v + " in " + where + " atom " + describe(a));
    };
    for (const auto& a : head_) check(a, "head");
    for (const auto& a : neg_) check(a, "negative body");

    key_ = Key{sorted(head_), sorted(pos_), sorted(neg_)};
}

Rule Rule::fact(Atom atom) { return Rule({std::move(atom)}); }

bool Rule::is_ground() const {
    for (const auto* part : {&head_, &pos_, &neg_})
        for (const auto& a : *part)
            if (!a.is_ground()) return false;
    return true;
}

std::vector<std::string> Rule::variables() const {
    std::vector<std::string> out;
    for (const auto* part : {&head_, &pos_, &neg_})
        for (const auto& a : *part)
            for (const auto& v : a.variables())
                if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    return out;
}

Program::Program(std::vector<Rule> rules) {
    for (auto& r : rules) add(std::move(r));
}

void Program::note_arity(const Atom& atom) {
    auto [it, inserted] = arities_.emplace(atom.predicate, atom.arity());
    if (!inserted && it->second != atom.arity())
        throw ProgramError("predicate " + atom.predicate + " used with arities " + std::to_string(it->second) +
                           " and " + std::to_string(atom.arity()));
}

bool Program::add(Rule rule) {
    if (index_.count(rule)) return false;
    auto saved = arities_;
    try {
        for (const auto* part : {&rule.head(), &rule.pos_body(), &rule.neg_body()})
            for (const auto& a : *part) note_arity(a);
    } catch (...) {
        arities_ = std::move(saved);
        throw;
    }
    index_.insert(rule);
    rules_.push_back(std::move(rule));
    return true;
}

void Program::add_all(const Program& other) {
    for (const auto& r : other.rules()) add(r);
}

EdbIdbSplit edb_idb_split(const Program& p) {
    EdbIdbSplit out;
    for (const auto& r : p.rules())
        if (!r.is_fact())
            for (const auto& h : r.head()) out.idb_predicates.insert(h.predicate);
    for (const auto& [pred, arity] : p.predicates())
        if (!out.idb_predicates.count(pred)) out.edb_predicates.insert(pred);
    for (const auto& r : p.rules()) {
        const bool idb = std::any_of(r.head().begin(), r.head().end(),
                                     [&](const Atom& h) { return out.idb_predicates.count(h.predicate) != 0; });
        (idb ? out.idb_rules : out.edb_rules).push_back(r);
    }
    return out;
}

std::set<Term> universe(const Program& p) {
    std::set<Term> out;
    for (const auto& r : p.rules())
        for (const auto* part : {&r.head(), &r.pos_body(), &r.neg_body()})
            for (const auto& a : *part)
                for (const auto& t : a.args)
                    if (t.is_constant()) out.insert(t);
    if (out.empty()) out.insert(Term::constant(kFreshUniverseConstant));
    return out;
}

std::set<Atom> base(const Program& p) {
    const auto u = universe(p);
    const std::vector<Term> constants(u.begin(), u.end());
    std::set<Atom> out;
    for (const auto& [pred, arity] : p.predicates()) {
        std::vector<std::size_t> idx(arity, 0);
        while (true) {
            Atom a{pred, {}};
            for (auto i : idx) a.args.push_back(constants[i]);
            out.insert(std::move(a));
            std::size_t k = arity;
            while (k > 0 && ++idx[k - 1] == constants.size()) idx[--k] = 0;
            if (k == 0) break;
        }
    }
    return out;
}

Atom substitute(const Atom& atom, const std::map<std::string, Term>& binding) {
    Atom out{atom.predicate, {}};
    out.args.reserve(atom.args.size());
    for (const auto& t : atom.args) {
        if (t.is_variable()) {
            auto it = binding.find(t.name());
            out.args.push_back(it == binding.end() ? t : it->second);
        } else {
            out.args.push_back(t);
        }
    }
    return out;
}

Program merge(const Program& a, const Program& b) {
    Program out = a;
    out.add_all(b);
    return out;
}

Program with_facts(const Program& p, const std::set<Atom>& facts) {
    Program out = p;
    for (const auto& f : facts) out.add(Rule::fact(f));
    return out;
}

}  // namespace dms
