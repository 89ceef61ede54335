#include "ltlfsynth/decomp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lsynth {

Prop letter_of(Prop p) {
    switch (p->kind) {
    case PK::Atom:
    case PK::NegAtom: return p_lit(Lit{p->atom, true});
    case PK::Last:
    case PK::NegLast: return p_last();
    default: return p;
    }
}

Abstraction::Abstraction() {
    letters_.push_back(p_last());
    ids_.emplace(p_last(), kLastId);
}

long Abstraction::id_of(Prop letter) const {
    auto it = ids_.find(letter);
    return it == ids_.end() ? -1 : static_cast<long>(it->second);
}

long Abstraction::id_of_atom(AtomP a) const { return id_of(p_lit(Lit{a, true})); }

void Abstraction::register_letters(Prop p) {
    std::vector<Prop> atoms, temporal;
    std::vector<Prop> stack{p};
    while (!stack.empty()) {
        Prop q = stack.back();
        stack.pop_back();
        if (q->kind == PK::And || q->kind == PK::Or) {
            for (Prop k : q->kids) stack.push_back(k);
            continue;
        }
        if (is_const(q)) continue;
        Prop l = letter_of(q);
        if (ids_.count(l)) continue;
        (l->kind == PK::Atom ? atoms : temporal).push_back(l);
    }
    auto uniq = [](std::vector<Prop>& v, auto less) {
        std::sort(v.begin(), v.end(), less);
        v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    uniq(atoms, [](Prop a, Prop b) { return atom_less(a->atom, b->atom); });
    std::vector<std::pair<std::string, Prop>> named;
    for (Prop t : temporal) named.emplace_back(prop_str(t), t);
    std::sort(named.begin(), named.end());
    named.erase(std::unique(named.begin(), named.end()), named.end());
    for (Prop a : atoms) {
        ids_.emplace(a, static_cast<std::uint32_t>(letters_.size()));
        letters_.push_back(a);
    }
    for (auto& [s, t] : named) {
        if (ids_.count(t)) continue;
        ids_.emplace(t, static_cast<std::uint32_t>(letters_.size()));
        letters_.push_back(t);
    }
}

Bdd::Ref Abstraction::encode(Prop p) {
    register_letters(p);
    return enc(p);
}

Bdd::Ref Abstraction::enc(Prop p) {
    switch (p->kind) {
    case PK::True: return Bdd::kTrue;
    case PK::False: return Bdd::kFalse;
    case PK::NegAtom:
    case PK::NegLast: return bdd_.nvar(ids_.at(letter_of(p)));
    case PK::And:
    case PK::Or: break;
    default: return bdd_.var(ids_.at(letter_of(p)));
    }
    auto it = enc_cache_.find(p);
    if (it != enc_cache_.end()) return it->second;
    bool conj = p->kind == PK::And;
    Bdd::Ref r = conj ? Bdd::kTrue : Bdd::kFalse;
    for (Prop k : p->kids) r = conj ? bdd_.apply_and(r, enc(k)) : bdd_.apply_or(r, enc(k));
    enc_cache_.emplace(p, r);
    return r;
}

Prop Abstraction::decode_cubes(const std::vector<Bdd::Cube>& cubes) const {
    std::vector<Prop> ds;
    for (const auto& c : cubes) {
        std::vector<Prop> cs;
        for (auto [v, pos] : c) cs.push_back(pos ? letters_[v] : p_not(letters_[v]));
        ds.push_back(p_and(cs));
    }
    return p_or(ds);
}

Prop Abstraction::decode(Bdd::Ref f) { return decode_cubes(bdd_.isop(f, f)); }

Decomposition decompose(Abstraction& abs, Prop p, const std::vector<AtomP>& C) {
    Bdd& b = abs.bdd();
    Bdd::Ref f = abs.encode(p);
    std::vector<std::uint32_t> cvars;
    auto sup = b.support(f);
    for (AtomP a : C) {
        long id = abs.id_of_atom(a);
        if (id >= 0 && std::binary_search(sup.begin(), sup.end(), static_cast<std::uint32_t>(id)))
            cvars.push_back(static_cast<std::uint32_t>(id));
    }
    std::sort(cvars.begin(), cvars.end());
    cvars.erase(std::unique(cvars.begin(), cvars.end()), cvars.end());

    std::vector<std::pair<Bdd::Ref, Bdd::Ref>> groups;  // (residual, prm)
    std::map<Bdd::Ref, std::size_t> by_residual;
    std::function<void(Bdd::Ref, std::size_t, Bdd::Ref)> go = [&](Bdd::Ref r, std::size_t i, Bdd::Ref cube) {
        if (i == cvars.size()) {
            auto it = by_residual.find(r);
            if (it == by_residual.end()) {
                by_residual.emplace(r, groups.size());
                groups.emplace_back(r, cube);
            } else {
                groups[it->second].second = b.apply_or(groups[it->second].second, cube);
            }
            return;
        }
        std::uint32_t v = cvars[i];
        if (!b.depends_on(r, v)) {
            go(r, i + 1, cube);
            return;
        }
        go(b.restrict(r, v, true), i + 1, b.apply_and(cube, b.var(v)));
        go(b.restrict(r, v, false), i + 1, b.apply_and(cube, b.nvar(v)));
    };
    go(f, 0, Bdd::kTrue);

    Decomposition d;
    for (auto& [res, prm] : groups) d.pairs.emplace_back(abs.decode(prm), abs.decode(res));
    return d;
}

Decomposition decompose(Prop p, const std::vector<AtomP>& C) {
    Abstraction abs;
    return decompose(abs, p, C);
}

bool prop_equiv(Abstraction& abs, Prop p, Prop q) {
    if (p == q) return true;
    return abs.encode(p) == abs.encode(q);
}

bool prop_equiv(Prop p, Prop q) {
    Abstraction abs;
    return prop_equiv(abs, p, q);
}

bool eval_letters(Prop p, const std::function<bool(Prop)>& val) {
    switch (p->kind) {
    case PK::True: return true;
    case PK::False: return false;
    case PK::And:
        for (Prop k : p->kids)
            if (!eval_letters(k, val)) return false;
        return true;
    case PK::Or:
        for (Prop k : p->kids)
            if (eval_letters(k, val)) return true;
        return false;
    case PK::NegAtom:
    case PK::NegLast: return !val(letter_of(p));
    default: return val(letter_of(p));
    }
}

}  // namespace lsynth
