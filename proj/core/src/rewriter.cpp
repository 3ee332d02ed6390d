#include "dms/rewriter.hpp"

#include <algorithm>
#include <deque>

#include "dms/parser.hpp"

namespace dms {

Adornment::Adornment(std::string labels) : labels_(std::move(labels)) {
    if (!std::all_of(labels_.begin(), labels_.end(), [](char c) { return c == 'b' || c == 'f'; }))
        throw RewriteError("adornment labels must be 'b' or 'f': '" + labels_ + "'");
}

Adornment Adornment::of_query(const Atom& atom) {
    std::string labels;
    for (const auto& t : atom.args) labels += t.is_constant() ? 'b' : 'f';
    return Adornment(std::move(labels));
}

std::size_t Adornment::bound_count() const { return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 'b')); }

std::string to_string(const AdornedPredicate& ap) { return ap.predicate + "^" + ap.adornment.labels(); }

std::string magic_predicate_name(const AdornedPredicate& ap) {
    return std::string(kMagicPrefix) + ap.predicate + "_" + ap.adornment.labels();
}

bool is_magic_predicate(const std::string& name) { return name.rfind(kMagicPrefix, 0) == 0; }

std::optional<AdornedPredicate> parse_magic_predicate(const std::string& name) {
    if (!is_magic_predicate(name)) return std::nullopt;
    const std::string rest = name.substr(std::char_traits<char>::length(kMagicPrefix));
    const auto cut = rest.rfind('_');
    if (cut == std::string::npos || cut == 0) return std::nullopt;
    std::string labels = rest.substr(cut + 1);
    if (!std::all_of(labels.begin(), labels.end(), [](char c) { return c == 'b' || c == 'f'; })) return std::nullopt;
    return AdornedPredicate{rest.substr(0, cut), Adornment(std::move(labels))};
}

Atom magic_atom(const Atom& atom, const Adornment& adornment) {
    if (adornment.size() != atom.arity())
        throw RewriteError("adornment '" + adornment.labels() + "' does not fit " + print_atom(atom));
    Atom out{magic_predicate_name({atom.predicate, adornment}), {}};
    for (std::size_t i = 0; i < atom.arity(); ++i)
        if (adornment.bound(i)) out.args.push_back(atom.args[i]);
    return out;
}

const Atom& atom_at(const Rule& r, AtomRef ref) {
    switch (ref.part) {
        case AtomRef::Part::Head: return r.head().at(ref.index);
        case AtomRef::Part::Positive: return r.pos_body().at(ref.index);
        case AtomRef::Part::Negative: return r.neg_body().at(ref.index);
    }
    return r.head().at(ref.index);
}

std::vector<AtomRef> occurrences(const Rule& r) {
    std::vector<AtomRef> out;
    for (std::size_t i = 0; i < r.head().size(); ++i) out.push_back({AtomRef::Part::Head, i});
    for (std::size_t i = 0; i < r.pos_body().size(); ++i) out.push_back({AtomRef::Part::Positive, i});
    for (std::size_t i = 0; i < r.neg_body().size(); ++i) out.push_back({AtomRef::Part::Negative, i});
    return out;
}

// ---------------------------------------------------------------------------
// Sips

Sips::Sips(const Rule& rule, std::size_t head_index)
    : head_(head_index), n_head_(rule.head().size()), n_pos_(rule.pos_body().size()), n_neg_(rule.neg_body().size()) {
    if (head_index >= n_head_) throw RewriteError("SIPS head index out of range");
    const std::size_t n = n_head_ + n_pos_ + n_neg_;
    order_.assign(n, std::vector<bool>(n, false));
    bound_.assign(n, {});
}

std::size_t Sips::flat(AtomRef a) const {
    switch (a.part) {
        case AtomRef::Part::Head: return a.index;
        case AtomRef::Part::Positive: return n_head_ + a.index;
        case AtomRef::Part::Negative: return n_head_ + n_pos_ + a.index;
    }
    return a.index;
}

bool Sips::precedes(AtomRef a, AtomRef b) const { return order_[flat(a)][flat(b)]; }

void Sips::set_precedes(AtomRef a, AtomRef b, bool value) { order_[flat(a)][flat(b)] = value; }

const std::set<std::string>& Sips::bound_vars(AtomRef a) const { return bound_[flat(a)]; }

void Sips::set_bound_vars(AtomRef a, std::set<std::string> vars) { bound_[flat(a)] = std::move(vars); }

void Sips::close() {
    const std::size_t n = order_.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (order_[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (order_[k][j]) order_[i][j] = true;
}

bool Sips::valid(const Rule& rule) const {
    if (rule.head().size() != n_head_ || rule.pos_body().size() != n_pos_ || rule.neg_body().size() != n_neg_)
        return false;
    const auto refs = occurrences(rule);
    const AtomRef selected{AtomRef::Part::Head, head_};
    for (const auto& a : refs) {
        if (precedes(a, a)) return false;
        if (a != selected && !precedes(selected, a)) return false;
        const bool passive = (a.part == AtomRef::Part::Head && a != selected) || a.part == AtomRef::Part::Negative;
        for (const auto& b : refs) {
            if (passive && precedes(a, b)) return false;
            if (precedes(a, b))
                for (const auto& c : refs)
                    if (precedes(b, c) && !precedes(a, c)) return false;
        }
        const auto vars = atom_at(rule, a).variables();
        for (const auto& v : bound_vars(a))
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) return false;
    }
    return true;
}

namespace {

std::set<std::string> head_bound_vars(const Atom& head, const Adornment& adornment) {
    if (adornment.size() != head.arity())
        throw RewriteError("adornment '" + adornment.labels() + "' does not fit " + print_atom(head));
    std::set<std::string> out;
    for (std::size_t i = 0; i < head.arity(); ++i)
        if (adornment.bound(i) && head.args[i].is_variable()) out.insert(head.args[i].name());
    return out;
}

Sips base_sips(const Rule& r, std::size_t head_index, const Adornment& adornment) {
    Sips s(r, head_index);
    const AtomRef selected{AtomRef::Part::Head, head_index};
    s.set_bound_vars(selected, head_bound_vars(r.head().at(head_index), adornment));
    for (const auto& ref : occurrences(r))
        if (ref != selected) s.set_precedes(selected, ref);
    for (std::size_t i = 0; i < r.pos_body().size(); ++i) {
        const auto vars = r.pos_body()[i].variables();
        s.set_bound_vars({AtomRef::Part::Positive, i}, {vars.begin(), vars.end()});
    }
    return s;
}

bool binds_new(const Atom& source, const Atom& target, const std::set<std::string>& already) {
    const auto target_vars = target.variables();
    for (const auto& v : source.variables())
        if (!already.count(v) && std::find(target_vars.begin(), target_vars.end(), v) != target_vars.end())
            return true;
    return false;
}

}  // namespace

Sips default_sips(const Rule& r, std::size_t head_index, const Adornment& adornment) {
    Sips s = base_sips(r, head_index, adornment);
    const auto& head_bound = s.bound_vars({AtomRef::Part::Head, head_index});
    const auto& pos = r.pos_body();
    for (std::size_t i = 0; i < pos.size(); ++i) {
        for (std::size_t j = i + 1; j < pos.size(); ++j)
            if (binds_new(pos[i], pos[j], head_bound))
                s.set_precedes({AtomRef::Part::Positive, i}, {AtomRef::Part::Positive, j});
        for (std::size_t k = 0; k < r.neg_body().size(); ++k)
            if (binds_new(pos[i], r.neg_body()[k], head_bound))
                s.set_precedes({AtomRef::Part::Positive, i}, {AtomRef::Part::Negative, k});
    }
    s.close();
    return s;
}

Sips eager_sips(const Rule& r, std::size_t head_index, const Adornment& adornment) {
    Sips s = base_sips(r, head_index, adornment);
    for (std::size_t i = 0; i < r.pos_body().size(); ++i) {
        const AtomRef from{AtomRef::Part::Positive, i};
        for (std::size_t j = i + 1; j < r.pos_body().size(); ++j) s.set_precedes(from, {AtomRef::Part::Positive, j});
        for (std::size_t k = 0; k < r.neg_body().size(); ++k) s.set_precedes(from, {AtomRef::Part::Negative, k});
        for (std::size_t h = 0; h < r.head().size(); ++h)
            if (h != head_index) s.set_precedes(from, {AtomRef::Part::Head, h});
    }
    s.close();
    return s;
}

// ---------------------------------------------------------------------------
// Adorn / Generate / Modify

const std::optional<Adornment>& AdornedRule::adornment_at(AtomRef ref) const {
    switch (ref.part) {
        case AtomRef::Part::Head: return head_adornments.at(ref.index);
        case AtomRef::Part::Positive: return pos_adornments.at(ref.index);
        case AtomRef::Part::Negative: return neg_adornments.at(ref.index);
    }
    return head_adornments.at(ref.index);
}

namespace {

std::string print_adorned_atom(const Atom& a, const std::optional<Adornment>& ad) {
    Atom shown = a;
    if (ad) shown.predicate += "^" + ad->labels();
    return print_atom(shown);
}

}  // namespace

std::string print_adorned_rule(const AdornedRule& ra) {
    const Rule& r = ra.rule;
    std::string s;
    for (std::size_t i = 0; i < r.head().size(); ++i) {
        if (i) s += " v ";
        s += print_adorned_atom(r.head()[i], ra.head_adornments[i]);
    }
    std::vector<std::string> body;
    for (std::size_t i = 0; i < r.pos_body().size(); ++i)
        body.push_back(print_adorned_atom(r.pos_body()[i], ra.pos_adornments[i]));
    for (std::size_t i = 0; i < r.neg_body().size(); ++i)
        body.push_back("not " + print_adorned_atom(r.neg_body()[i], ra.neg_adornments[i]));
    if (!body.empty()) {
        s += " :- ";
        for (std::size_t i = 0; i < body.size(); ++i) s += (i ? ", " : "") + body[i];
    }
    return s + ".";
}

AdornedRule adorn(const Rule& r, const AdornedPredicate& ap, std::size_t head_index, const Sips& sips,
                  const std::set<std::string>& idb_predicates, std::set<AdornedPredicate>& seen,
                  std::vector<AdornedPredicate>* fresh) {
    if (head_index >= r.head().size() || r.head()[head_index].predicate != ap.predicate)
        throw RewriteError("adorn: head occurrence does not match " + to_string(ap));
    if (ap.adornment.size() != r.head()[head_index].arity())
        throw RewriteError("adorn: adornment arity mismatch for " + to_string(ap));

    AdornedRule out{r, head_index, ap, {}, {}, {}};
    out.head_adornments.resize(r.head().size());
    out.pos_adornments.resize(r.pos_body().size());
    out.neg_adornments.resize(r.neg_body().size());

    const AtomRef selected{AtomRef::Part::Head, head_index};
    const auto& head_bound = sips.bound_vars(selected);
    const auto refs = occurrences(r);

    auto slot = [&](AtomRef ref) -> std::optional<Adornment>& {
        switch (ref.part) {
            case AtomRef::Part::Head: return out.head_adornments[ref.index];
            case AtomRef::Part::Positive: return out.pos_adornments[ref.index];
            case AtomRef::Part::Negative: return out.neg_adornments[ref.index];
        }
        return out.head_adornments[ref.index];
    };

    for (const auto& ref : refs) {
        if (ref == selected) {
            slot(ref) = ap.adornment;
            continue;
        }
        const Atom& a = atom_at(r, ref);
        if (!idb_predicates.count(a.predicate)) continue;
        std::string labels;
        for (const auto& t : a.args) {
            bool bound = t.is_constant() || head_bound.count(t.name());
            for (std::size_t i = 0; !bound && i < r.pos_body().size(); ++i) {
                const AtomRef src{AtomRef::Part::Positive, i};
                if (src != ref && sips.precedes(src, ref) && sips.bound_vars(src).count(t.name())) bound = true;
            }
            labels += bound ? 'b' : 'f';
        }
        slot(ref) = Adornment(std::move(labels));
        AdornedPredicate adorned{a.predicate, *slot(ref)};
        if (seen.insert(adorned).second && fresh) fresh->push_back(std::move(adorned));
    }
    return out;
}

std::vector<Rule> generate(const AdornedRule& ra, const Sips& sips) {
    const Rule& r = ra.rule;
    const AtomRef selected{AtomRef::Part::Head, ra.head_index};
    const Atom head_magic = magic_atom(r.head()[ra.head_index], ra.head_predicate.adornment);
    const auto refs = occurrences(r);
    std::vector<Rule> out;
    for (const auto& target : refs) {
        if (target == selected) continue;
        const auto& ad = ra.adornment_at(target);
        if (!ad) continue;
        std::vector<Atom> body{head_magic};
        for (const auto& src : refs)
            if (src != selected && src != target && sips.precedes(src, target)) body.push_back(atom_at(r, src));
        Rule magic({magic_atom(atom_at(r, target), *ad)}, std::move(body));
        if (std::find(out.begin(), out.end(), magic) == out.end()) out.push_back(std::move(magic));
    }
    return out;
}

Rule modify(const AdornedRule& ra) {
    const Rule& r = ra.rule;
    std::vector<Atom> body;
    for (std::size_t i = 0; i < r.head().size(); ++i) {
        if (!ra.head_adornments[i]) throw RewriteError("modify: head atom without adornment in " + print_rule(r));
        body.push_back(magic_atom(r.head()[i], *ra.head_adornments[i]));
    }
    body.insert(body.end(), r.pos_body().begin(), r.pos_body().end());
    return Rule(r.head(), std::move(body), r.neg_body());
}

// ---------------------------------------------------------------------------
// Seed and driver

namespace {

inline constexpr const char* kQueryConstantsPredicate = "dms_query_constants";

std::set<Term> occurring_constants(const Program& p) {
    std::set<Term> out;
    for (const auto& r : p.rules())
        for (const auto* part : {&r.head(), &r.pos_body(), &r.neg_body()})
            for (const auto& a : *part)
                for (const auto& t : a.args)
                    if (t.is_constant()) out.insert(t);
    return out;
}

}  // namespace

QuerySeed build_query_seed(const Query& q, const Program& p, std::set<AdornedPredicate>& seen) {
    const Adornment alpha = Adornment::of_query(q.atom);
    AdornedPredicate ap{q.atom.predicate, alpha};
    seen.insert(ap);
    QuerySeed out{Rule::fact(magic_atom(q.atom, alpha)), ap, std::nullopt};

    const auto known = occurring_constants(p);
    std::vector<Term> constants;
    bool missing = false;
    for (const auto& t : q.atom.args) {
        if (!t.is_constant()) continue;
        constants.push_back(t);
        if (!known.count(t)) missing = true;
    }
    if (missing) {
        std::string name = kQueryConstantsPredicate;
        for (int k = 1; p.predicates().count(name); ++k) name = std::string(kQueryConstantsPredicate) + std::to_string(k);
        out.constants_fact = Rule::fact(Atom{name, constants});
    }
    return out;
}

DmsResult dms_detailed(const Query& q, const Program& p, const DmsOptions& options) {
    for (const auto& [pred, arity] : p.predicates())
        if (is_magic_predicate(pred))
            throw RewriteError("predicate " + pred + " clashes with the reserved magic_ prefix");
    if (is_magic_predicate(q.atom.predicate))
        throw RewriteError("query predicate " + q.atom.predicate + " clashes with the reserved magic_ prefix");
    if (auto it = p.predicates().find(q.atom.predicate); it != p.predicates().end() && it->second != q.atom.arity())
        throw RewriteError("query arity does not match predicate " + q.atom.predicate);

    const auto split = edb_idb_split(p);
    std::set<AdornedPredicate> seen;
    QuerySeed seed = build_query_seed(q, p, seen);

    DmsResult out{Program{}, seed.seed, {}, {}, split.edb_rules, seed.constants_fact, {}, {}, false};
    out.query_is_edb = !split.idb_predicates.count(q.atom.predicate);

    if (!out.query_is_edb) {
        std::deque<AdornedPredicate> worklist{seed.predicate};
        Program magic, modified;
        while (!worklist.empty()) {
            const AdornedPredicate ap = worklist.front();
            worklist.pop_front();
            out.processed.push_back(ap);
            for (const auto& r : p.rules()) {
                for (std::size_t h = 0; h < r.head().size(); ++h) {
                    if (r.head()[h].predicate != ap.predicate) continue;
                    const Sips sips = options.sips(r, h, ap.adornment);
                    std::vector<AdornedPredicate> fresh;
                    AdornedRule ra = adorn(r, ap, h, sips, split.idb_predicates, seen, &fresh);
                    worklist.insert(worklist.end(), fresh.begin(), fresh.end());
                    for (auto& m : generate(ra, sips))
                        if (magic.add(m)) out.magic_rules.push_back(std::move(m));
                    Rule mod = modify(ra);
                    if (modified.add(mod)) out.modified_rules.push_back(std::move(mod));
                    out.adorned_rules.push_back(std::move(ra));
                }
            }
        }
    }

    out.program.add(out.seed);
    for (const auto& r : out.magic_rules) out.program.add(r);
    for (const auto& r : out.modified_rules) out.program.add(r);
    for (const auto& r : out.edb_rules) out.program.add(r);
    if (out.constants_fact) out.program.add(*out.constants_fact);
    return out;
}

Program dms(const Query& q, const Program& p, const DmsOptions& options) { return dms_detailed(q, p, options).program; }

}  // namespace dms
