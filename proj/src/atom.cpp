#include "ltlfsynth/atom.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace lsynth {

namespace {

struct AtomStore {
    std::mutex mu;
    std::unordered_multimap<std::size_t, std::unique_ptr<Atom>> atoms;
};

AtomStore& store() {
    static AtomStore s;
    return s;
}

std::size_t atom_hash(Rel rel, const Z& mod, const LinExpr& e, bool weak) {
    return e.hash() * 31 + static_cast<std::size_t>(rel) * 7 + hash_q(Q(mod)) + (weak ? 0 : 0x51ed27);
}

// Leading variable by name decides sign for symmetric relations.
Q leading_coef(const LinExpr& e) {
    Key best = 0;
    Q c;
    bool found = false;
    for (auto& [k, v] : e.terms())
        if (!found || key_name_less(k, best)) {
            best = k;
            c = v;
            found = true;
        }
    return c;
}

std::string rel_text(Rel rel, const Z& mod, const LinExpr& e) {
    LinExpr lin = e;
    lin.add_constant(-e.constant());
    std::string r = lin.sexpr() + " " + q_str(-e.constant());
    switch (rel) {
    case Rel::Eq: return "(= " + r + ")";
    case Rel::Le: return "(<= " + r + ")";
    case Rel::Mod: return "(equiv " + mod.get_str() + " " + r + ")";
    }
    return "";
}

}  // namespace

AtomP intern_atom(Rel rel, const Z& mod, const LinExpr& e, bool weak) {
    auto& s = store();
    weak = weak || !e.has_pre();
    std::size_t h = atom_hash(rel, mod, e, weak);
    std::lock_guard<std::mutex> lk(s.mu);
    auto range = s.atoms.equal_range(h);
    for (auto it = range.first; it != range.second; ++it) {
        const Atom& a = *it->second;
        if (a.rel == rel && a.mod == mod && a.weak == weak && a.e == e) return it->second.get();
    }
    auto a = std::make_unique<Atom>(Atom{rel, mod, e, weak, h, rel_text(rel, mod, e) + (weak ? "" : "~")});
    AtomP p = a.get();
    s.atoms.emplace(h, std::move(a));
    return p;
}

LitOrConst make_cmp(Cmp cmp, LinExpr e, bool user_atom) {
    bool pos = true;
    Rel rel = Rel::Le;
    switch (cmp) {
    case Cmp::Eq: rel = Rel::Eq; break;
    case Cmp::Neq: rel = Rel::Eq; pos = false; break;
    case Cmp::Le: break;                           // e <= 0
    case Cmp::Gt: pos = false; break;              // not (e <= 0)
    case Cmp::Ge: e = -e; break;                   // -e <= 0
    case Cmp::Lt: e = -e; pos = false; break;      // not (-e <= 0)
    }
    if (e.is_const()) {
        bool v = rel == Rel::Eq ? e.constant() == 0 : e.constant() <= 0;
        return LitOrConst::of(v == pos);
    }
    e.integerize(true);
    if (rel == Rel::Eq && leading_coef(e) < 0) e = -e;
    return {-1, Lit{intern_atom(rel, Z(0), e, !user_atom || pos), pos}};
}

LitOrConst make_mod(const Z& k0, LinExpr e, bool user_atom) {
    (void)user_atom;  // the written form is always the positive literal
    Z k = abs(k0);
    if (k == 0) return make_cmp(Cmp::Eq, e);
    Z d = 1;
    for (auto& [key, c] : e.terms()) d = lcm_z(d, c.get_den());
    d = lcm_z(d, e.constant().get_den());
    if (d != 1) {
        e = e * Q(d);
        k *= d;
    }
    // Reduce coefficients into [0, k).
    LinExpr r(Q(mod_z(e.constant().get_num(), k)));
    for (auto& [key, c] : e.terms()) {
        Z m = mod_z(c.get_num(), k);
        if (m != 0) r += LinExpr::var(key, Q(m));
    }
    if (r.is_const()) return LitOrConst::of(r.constant() == 0);
    Z g = k;
    for (auto& [key, c] : r.terms()) g = gcd_z(g, c.get_num());
    if (mod_z(r.constant().get_num(), g) != 0) return LitOrConst::of(false);
    if (g > 1) {
        r = r * Q(Z(1), g);
        k /= g;
    }
    if (k == 1) return LitOrConst::of(true);
    // Scale by the inverse of the leading coefficient when it is a unit mod k.
    Q lead;
    Key best = 0;
    bool found = false;
    for (auto& [key, c] : r.terms())
        if (!found || key_name_less(key, best)) {
            best = key;
            lead = c;
            found = true;
        }
    Z inv;
    if (mpz_invert(inv.get_mpz_t(), lead.get_num().get_mpz_t(), k.get_mpz_t()) != 0 && inv != 1) {
        LinExpr s(Q(mod_z(Z(r.constant().get_num() * inv), k)));
        for (auto& [key, c] : r.terms()) {
            Z m = mod_z(Z(c.get_num() * inv), k);
            if (m != 0) s += LinExpr::var(key, Q(m));
        }
        r = s;
    }
    return {-1, Lit{intern_atom(Rel::Mod, k, r), true}};
}

Lit plain_lit(const Lit& l) {
    if (l.atom->weak) return l;
    return {intern_atom(l.atom->rel, l.atom->mod, l.atom->e, true), l.pos};
}

bool atom_less(AtomP a, AtomP b) {
    if (a == b) return false;
    return a->key < b->key;
}

bool lit_less(const Lit& a, const Lit& b) {
    if (a.atom != b.atom) return atom_less(a.atom, b.atom);
    return a.pos > b.pos;
}

std::optional<bool> eval_atom(AtomP a, const std::function<std::optional<Q>(Key)>& val) {
    auto v = a->e.eval(val);
    if (!v) return std::nullopt;
    switch (a->rel) {
    case Rel::Eq: return *v == 0;
    case Rel::Le: return *v <= 0;
    case Rel::Mod: {
        if (!is_int(*v)) return false;
        return mod_z(v->get_num(), a->mod) == 0;
    }
    }
    return false;
}

namespace {

// Split e into (variable part with positive leading coefficient, rhs constant, flipped).
struct Sides {
    LinExpr lhs;
    Q rhs;
    bool flipped;
};

Sides sides(const LinExpr& e, bool allow_flip) {
    LinExpr lin = e;
    lin.add_constant(-e.constant());
    Q rhs = -e.constant();
    bool flip = allow_flip && leading_coef(lin) < 0;
    if (flip) {
        lin = -lin;
        rhs = -rhs;
    }
    return {lin, rhs, flip};
}

}  // namespace

std::string lit_str(const Lit& l) {
    const Atom& a = *l.atom;
    if (a.rel == Rel::Mod) {
        Sides s = sides(a.e, false);
        std::string t = s.lhs.str() + " ≡_" + a.mod.get_str() + " " + mod_z(s.rhs.get_num(), a.mod).get_str();
        return l.pos ? t : "not (" + t + ")";
    }
    Sides s = sides(a.e, true);
    std::string op;
    if (a.rel == Rel::Eq) {
        op = l.pos ? "=" : "!=";
    } else if (l.pos) {
        op = s.flipped ? ">=" : "<=";
    } else {
        op = s.flipped ? "<" : ">";
    }
    return s.lhs.str() + " " + op + " " + q_str(s.rhs);
}

std::string lit_sexpr(const Lit& l) {
    const Atom& a = *l.atom;
    if (a.rel != Rel::Mod && a.has_pre() && a.weak != l.pos) return "(not " + lit_sexpr(l.negate()) + ")";
    if (a.rel == Rel::Mod) {
        Sides s = sides(a.e, false);
        std::string t = "(equiv " + a.mod.get_str() + " " + s.lhs.sexpr() + " " +
                        mod_z(s.rhs.get_num(), a.mod).get_str() + ")";
        return l.pos ? t : "(not " + t + ")";
    }
    Sides s = sides(a.e, true);
    std::string op;
    if (a.rel == Rel::Eq) {
        op = l.pos ? "=" : "distinct";
    } else if (l.pos) {
        op = s.flipped ? ">=" : "<=";
    } else {
        op = s.flipped ? "<" : ">";
    }
    return "(" + op + " " + s.lhs.sexpr() + " " + q_str(s.rhs) + ")";
}

std::string atom_str(AtomP a) { return lit_str(Lit{a, true}); }

namespace {
LitOrConst rebuild(const Lit& l, const LinExpr& e) {
    LitOrConst r;
    switch (l.atom->rel) {
    case Rel::Eq: r = make_cmp(Cmp::Eq, e); break;
    case Rel::Le: r = make_cmp(Cmp::Le, e); break;
    case Rel::Mod: r = make_mod(l.atom->mod, e); break;
    }
    if (!l.pos) {
        if (r.is_const())
            r.konst = 1 - r.konst;
        else
            r.lit.pos = !r.lit.pos;
    }
    return r;
}
}  // namespace

LitOrConst map_lit(const Lit& l, const std::function<Key(Key)>& f) { return rebuild(l, l.atom->e.map_keys(f)); }

LitOrConst subst_lit(const Lit& l, Key k, const LinExpr& by) { return rebuild(l, l.atom->e.subst(k, by)); }

}  // namespace lsynth
