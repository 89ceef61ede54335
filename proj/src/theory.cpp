#include "ltlfsynth/theory.hpp"

#include "ltlfsynth/bdd.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace lsynth {

namespace {

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

LinExpr var_part(const LinExpr& e) {
    LinExpr r = e;
    r.add_constant(-e.constant());
    return r;
}

Fo lit_fo(const LitOrConst& lc, bool pos) {
    if (lc.is_const()) return f_bool((lc.konst == 1) == pos);
    return f_lit(pos ? lc.lit : lc.lit.negate());
}

// Literal `e rel 0` (Mod: `e = 0 mod k`), polarity pos, normalized for th.
Fo mk(Theory th, Rel rel, bool pos, const Z& k, const LinExpr& e) {
    LitOrConst lc = rel == Rel::Mod ? make_mod(k, e) : make_cmp(rel == Rel::Eq ? Cmp::Eq : Cmp::Le, e);
    if (lc.is_const()) return f_bool((lc.konst == 1) == pos);
    return lit_fo(normalize_lit(th, lc.lit), pos);
}

}  // namespace

LitOrConst normalize_lit(Theory th, const Lit& l0) {
    Lit l = plain_lit(l0);
    if (th == Theory::LRA || l.atom->rel == Rel::Mod) return {-1, l};
    const LinExpr& e = l.atom->e;
    Z g = 0;
    for (auto& [k, c] : e.terms()) g = gcd_z(g, c.get_num());
    Q k = e.constant();
    LinExpr lin = var_part(e);
    if (l.atom->rel == Rel::Eq) {
        if (!is_int(k / Q(g))) return LitOrConst::of(!l.pos);
        LitOrConst r = make_cmp(Cmp::Eq, lin * Q(Z(1), g) + LinExpr(k / Q(g)));
        if (r.is_const()) return LitOrConst::of((r.konst == 1) == l.pos);
        return {-1, l.pos ? r.lit : r.lit.negate()};
    }
    LinExpr t = lin * Q(Z(1), g) + LinExpr(Q(ceil_q(k / Q(g))));
    bool pos = l.pos;
    if (leading_coef(t) < 0) {
        t = LinExpr(Q(1)) - t;
        pos = !pos;
    }
    LitOrConst r = make_cmp(Cmp::Le, t);
    if (r.is_const()) return LitOrConst::of((r.konst == 1) == pos);
    return {-1, pos ? r.lit : r.lit.negate()};
}

Fo normalize(Theory th, const Fo& f) {
    switch (f->kind) {
    case FK::True:
    case FK::False: return f;
    case FK::Lit: return lit_fo(normalize_lit(th, f->lit), true);
    case FK::And:
    case FK::Or: {
        std::vector<Fo> ks;
        for (auto& k : f->kids) ks.push_back(normalize(th, k));
        return f->kind == FK::And ? f_and(ks) : f_or(ks);
    }
    case FK::Forall:
    case FK::Exists: {
        Fo b = normalize(th, f->kids[0]);
        return f->kind == FK::Forall ? f_forall(f->bound, b) : f_exists(f->bound, b);
    }
    }
    return f;
}

namespace {

// Boolean skeleton of a quantifier-free formula over its atoms.
struct Skeleton {
    Bdd bdd;
    std::vector<AtomP> atoms;
    std::unordered_map<AtomP, std::uint32_t> ids;

    // Atoms satisfying `first` get the lowest identifiers.
    Skeleton(const Fo& f, const std::function<bool(AtomP)>& first = nullptr) {
        std::vector<Lit> lits;
        f_literals(f, lits);
        std::vector<AtomP> a, b;
        for (auto& l : lits) (first && first(l.atom) ? a : b).push_back(l.atom);
        for (auto* v : {&a, &b}) {
            std::sort(v->begin(), v->end(), atom_less);
            v->erase(std::unique(v->begin(), v->end()), v->end());
            for (AtomP x : *v) {
                ids.emplace(x, static_cast<std::uint32_t>(atoms.size()));
                atoms.push_back(x);
            }
        }
    }

    Bdd::Ref enc(const Fo& f) {
        switch (f->kind) {
        case FK::True: return Bdd::kTrue;
        case FK::False: return Bdd::kFalse;
        case FK::Lit: {
            std::uint32_t v = ids.at(f->lit.atom);
            return f->lit.pos ? bdd.var(v) : bdd.nvar(v);
        }
        case FK::And:
        case FK::Or: {
            bool conj = f->kind == FK::And;
            Bdd::Ref r = conj ? Bdd::kTrue : Bdd::kFalse;
            for (auto& k : f->kids) r = conj ? bdd.apply_and(r, enc(k)) : bdd.apply_or(r, enc(k));
            return r;
        }
        default: throw std::logic_error("skeleton of a quantified formula");
        }
    }

    std::vector<Lit> cube_lits(const Bdd::Cube& c) const {
        std::vector<Lit> out;
        for (auto [v, pos] : c) out.push_back(Lit{atoms[v], pos});
        return out;
    }

    Fo cover_fo(const std::vector<Bdd::Cube>& cover) const {
        std::vector<Fo> ds;
        for (auto& c : cover) {
            std::vector<Fo> cs;
            for (auto& l : cube_lits(c)) cs.push_back(f_lit(l));
            ds.push_back(f_and(cs));
        }
        return f_or(ds);
    }

    Fo dec(Bdd::Ref r) { return cover_fo(bdd.isop(r, r)); }
};

struct Bound {
    LinExpr e;
    bool strict;
};

// Exists x over a conjunction of literals that all mention x (LRA).
Fo elim_cube_lra(Key x, std::vector<Lit> lits, QeStats* st) {
    for (std::size_t i = 0; i < lits.size(); ++i) {
        const Lit& l = lits[i];
        if (l.atom->rel == Rel::Mod) throw std::logic_error("congruence under LRA");
        if (l.atom->rel == Rel::Eq && !l.pos) {
            std::vector<Lit> a = lits, b = lits;
            LitOrConst lt = make_cmp(Cmp::Lt, l.atom->e), gt = make_cmp(Cmp::Gt, l.atom->e);
            a[i] = lt.lit;
            b[i] = gt.lit;
            return f_or(elim_cube_lra(x, a, st), elim_cube_lra(x, b, st));
        }
    }
    for (std::size_t i = 0; i < lits.size(); ++i) {
        const Lit& l = lits[i];
        if (l.atom->rel != Rel::Eq) continue;
        Q a = l.atom->e.coef(x);
        LinExpr t = l.atom->e.without(x) * Q(-1 / a);
        std::vector<Fo> out;
        for (std::size_t j = 0; j < lits.size(); ++j)
            if (j != i) out.push_back(f_lit(subst_lit(lits[j], x, t)));
        return f_and(out);
    }
    std::vector<Bound> lo, hi;
    for (auto& l : lits) {
        Q a = l.atom->e.coef(x);
        LinExpr b = l.atom->e.without(x) * Q(-1 / a);  // a x + r <= 0  <=>  x <= -r/a for a > 0
        bool upper = (a > 0) == l.pos;
        (upper ? hi : lo).push_back({b, !l.pos});
    }
    std::vector<Fo> out;
    for (auto& L : lo)
        for (auto& U : hi) {
            out.push_back(f_lit(make_cmp(L.strict || U.strict ? Cmp::Lt : Cmp::Le, L.e - U.e)));
            if (st) ++st->literals;
        }
    return f_and(out);
}

// a*x + rest REL 0, integer coefficients.
struct XLit {
    Rel rel;
    bool pos;
    Z mod;
    Z a;
    LinExpr rest;
};

Fo xlit_fo(const XLit& l, const LinExpr& xval) {
    LinExpr e = xval * Q(l.a) + l.rest;
    return mk(Theory::LIA, l.rel, l.pos, l.mod, e);
}

Fo elim_cube_lia(Key x, const std::vector<Lit>& lits, QeStats* st) {
    std::vector<XLit> xs;
    for (std::size_t i = 0; i < lits.size(); ++i) {
        const Lit& l = lits[i];
        const LinExpr& e = l.atom->e;
        Z a = e.coef(x).get_num();
        LinExpr rest = e.without(x);
        if (l.atom->rel == Rel::Eq && !l.pos) {
            // e <= -1 or e >= 1
            std::vector<Lit> p = lits, q = lits;
            p[i] = make_cmp(Cmp::Le, e + LinExpr(Q(1))).lit;
            q[i] = make_cmp(Cmp::Ge, e - LinExpr(Q(1))).lit;
            return f_or(elim_cube_lia(x, p, st), elim_cube_lia(x, q, st));
        }
        if (l.atom->rel == Rel::Le && !l.pos)
            xs.push_back({Rel::Le, true, Z(0), -a, LinExpr(Q(1)) - rest});
        else
            xs.push_back({l.atom->rel, l.pos, l.atom->mod, a, rest});
    }

    // Equality: scale the others by |a| and substitute a*x = -rest.
    std::size_t eq = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i].rel == Rel::Eq && (eq == xs.size() || abs(xs[i].a) < abs(xs[eq].a))) eq = i;
    if (eq < xs.size()) {
        const XLit& E = xs[eq];
        Z m = abs(E.a);
        Z s = sgn(E.a);
        std::vector<Fo> out;
        if (m > 1) out.push_back(mk(Theory::LIA, Rel::Mod, true, m, E.rest));
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j == eq) continue;
            const XLit& l = xs[j];
            LinExpr e = E.rest * Q(-l.a * s) + l.rest * Q(m);
            out.push_back(mk(Theory::LIA, l.rel, l.pos, l.rel == Rel::Mod ? l.mod * m : Z(0), e));
        }
        return f_and(out);
    }

    // Cooper: make every coefficient of x equal to +-delta, then x' = delta*x.
    Z delta = 1;
    for (auto& l : xs) delta = lcm_z(delta, abs(l.a));
    std::vector<XLit> ys;
    for (auto& l : xs) {
        Z m = delta / abs(l.a);
        ys.push_back({l.rel, l.pos, l.rel == Rel::Mod ? l.mod * m : Z(0), Z(sgn(l.a)), l.rest * Q(m)});
    }
    if (delta > 1) ys.push_back({Rel::Mod, true, delta, Z(1), LinExpr()});
    Z D = 1;
    std::vector<LinExpr> lower, upper;  // x' >= L, x' <= U
    for (auto& l : ys) {
        if (l.rel == Rel::Mod) {
            D = lcm_z(D, l.mod);
        } else if (l.a > 0) {
            upper.push_back(-l.rest);
        } else {
            lower.push_back(l.rest);
        }
    }
    auto conj_at = [&](const LinExpr& v) {
        std::vector<Fo> cs;
        for (auto& l : ys) cs.push_back(xlit_fo(l, v));
        if (st) st->literals += cs.size();
        return f_and(cs);
    };
    std::vector<Fo> out;
    long period = D.get_si();
    if (lower.empty() || upper.empty()) {
        for (long j = 0; j < period; ++j) {
            std::vector<Fo> cs;
            for (auto& l : ys)
                if (l.rel == Rel::Mod) cs.push_back(xlit_fo(l, LinExpr(Q(j))));
            out.push_back(f_and(cs));
        }
    } else if (lower.size() <= upper.size()) {
        for (auto& L : lower)
            for (long j = 0; j < period; ++j) out.push_back(conj_at(L + LinExpr(Q(j))));
    } else {
        for (auto& U : upper)
            for (long j = 0; j < period; ++j) out.push_back(conj_at(U - LinExpr(Q(j))));
    }
    return f_or(out);
}

Fo elim_cube(Theory th, Key x, const std::vector<Lit>& lits, QeStats* st) {
    if (lits.empty()) return f_true();
    return th == Theory::LRA ? elim_cube_lra(x, lits, st) : elim_cube_lia(x, lits, st);
}

struct SatCache {
    std::map<std::vector<std::pair<AtomP, bool>>, bool> memo;
};

bool conj_sat(Theory th, std::vector<Lit> lits, SatCache* cache) {
    std::vector<std::pair<AtomP, bool>> key;
    for (auto& l : lits) key.emplace_back(l.atom, l.pos);
    std::sort(key.begin(), key.end());
    if (cache) {
        auto it = cache->memo.find(key);
        if (it != cache->memo.end()) return it->second;
    }
    std::vector<Fo> cs;
    for (auto& l : lits) cs.push_back(f_lit(l));
    Fo f = f_and(cs);
    for (Key k : f_free(f)) {
        f = eliminate_exists(th, k, f);
        if (f_is_true(f) || f_is_false(f)) break;
    }
    if (!f_is_true(f) && !f_is_false(f)) throw std::logic_error("satisfiability check left free variables");
    bool r = f_is_true(f);
    if (cache) cache->memo.emplace(std::move(key), r);
    return r;
}

}  // namespace

Fo eliminate_exists(Theory th, Key x, const Fo& qf, QeStats* st) {
    auto mentions = [&](AtomP a) { return a->e.has(x); };
    Skeleton sk(qf, mentions);
    std::uint32_t m = 0;
    while (m < sk.atoms.size() && mentions(sk.atoms[m])) ++m;
    if (m == 0) return qf;
    if (st) ++st->eliminations;
    Bdd& b = sk.bdd;
    Bdd::Ref f = sk.enc(qf);

    std::vector<std::pair<Bdd::Ref, Bdd::Ref>> groups;  // (residual, x-part)
    std::map<Bdd::Ref, std::size_t> index;
    std::function<void(Bdd::Ref, std::uint32_t, Bdd::Ref)> go = [&](Bdd::Ref r, std::uint32_t v, Bdd::Ref cube) {
        if (r == Bdd::kFalse) return;
        if (v == m || b.is_const(r) || b.top(r) >= m) {
            auto it = index.find(r);
            if (it == index.end()) {
                index.emplace(r, groups.size());
                groups.emplace_back(r, cube);
            } else {
                groups[it->second].second = b.apply_or(groups[it->second].second, cube);
            }
            return;
        }
        std::uint32_t t = b.top(r);
        go(b.hi(r), t + 1, b.apply_and(cube, b.var(t)));
        go(b.lo(r), t + 1, b.apply_and(cube, b.nvar(t)));
    };
    go(f, 0, Bdd::kTrue);

    std::vector<Fo> out;
    for (auto& [res, xpart] : groups) {
        std::vector<Fo> ds;
        for (auto& c : b.isop(xpart, xpart)) ds.push_back(elim_cube(th, x, sk.cube_lits(c), st));
        Fo d = f_or(ds);
        if (f_is_false(d)) continue;
        out.push_back(f_and(d, sk.dec(res)));
    }
    return f_or(out);
}

namespace {

// Assignments to atoms over one linear form that no value satisfies:
// different residues of one congruence, no residue at all, and bounds out of order.
Bdd::Ref lemma_dont_cares(Skeleton& sk) {
    Bdd& b = sk.bdd;
    std::map<std::pair<std::string, Z>, std::vector<std::uint32_t>> mods;
    std::map<std::string, std::vector<std::uint32_t>> cmps;
    for (std::uint32_t i = 0; i < sk.atoms.size(); ++i) {
        AtomP a = sk.atoms[i];
        std::string form = var_part(a->e).sexpr();
        if (a->rel == Rel::Mod)
            mods[{form, a->mod}].push_back(i);
        else
            cmps[form].push_back(i);
    }
    Bdd::Ref dc = Bdd::kFalse;
    for (auto& [key, ids] : mods) {
        Bdd::Ref none = Bdd::kTrue;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            none = b.apply_and(none, b.nvar(ids[i]));
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                dc = b.apply_or(dc, b.apply_and(b.var(ids[i]), b.var(ids[j])));
        }
        if (Z(static_cast<long>(ids.size())) == key.second) dc = b.apply_or(dc, none);
    }
    for (auto& [form, ids] : cmps) {
        // v + k <= 0  <=>  v <= -k ; v + k = 0  <=>  v = -k
        for (std::uint32_t i : ids)
            for (std::uint32_t j : ids) {
                if (i == j) continue;
                AtomP p = sk.atoms[i], q = sk.atoms[j];
                Q vp = -p->e.constant(), vq = -q->e.constant();
                if (p->rel == Rel::Eq && q->rel == Rel::Eq) {
                    if (i < j) dc = b.apply_or(dc, b.apply_and(b.var(i), b.var(j)));
                } else if (p->rel == Rel::Eq) {
                    // v = vp decides v <= vq
                    dc = b.apply_or(dc, b.apply_and(b.var(i), vp <= vq ? b.nvar(j) : b.var(j)));
                } else if (p->rel == Rel::Le && q->rel == Rel::Le && vp < vq) {
                    dc = b.apply_or(dc, b.apply_and(b.var(i), b.nvar(j)));
                }
            }
    }
    return dc;
}

}  // namespace

Fo simplify(Theory th, const Fo& f0) {
    if (!f_quantifier_free(f0)) throw std::logic_error("simplify expects a quantifier-free formula");
    Fo f = normalize(th, f0);
    if (f_is_true(f) || f_is_false(f)) return f;
    Skeleton sk(f);
    Bdd& b = sk.bdd;
    Bdd::Ref r = sk.enc(f);
    if (b.is_const(r)) return f_bool(r == Bdd::kTrue);
    SatCache cache;
    auto sat = [&](const std::vector<Lit>& ls) { return conj_sat(th, ls, &cache); };

    Bdd::Ref dc = lemma_dont_cares(sk);
    for (auto& c : b.isop(r, r))
        if (!sat(sk.cube_lits(c))) dc = b.apply_or(dc, b.cube(c));
    Bdd::Ref nr = b.apply_not(r);
    if (auto ncover = b.isop_bounded(nr, nr, 64))
        for (auto& c : *ncover)
            if (!sat(sk.cube_lits(c))) dc = b.apply_or(dc, b.cube(c));

    auto cover = b.isop(b.apply_and(r, b.apply_not(dc)), b.apply_or(r, dc));
    Bdd::Ref g = Bdd::kFalse;
    for (auto& c : cover) {
        // Drop literals implied by the rest of the cube.
        for (std::size_t i = 0; i < c.size();) {
            std::vector<Lit> ls = sk.cube_lits(c);
            Lit l = ls[i];
            ls.erase(ls.begin() + static_cast<long>(i));
            ls.push_back(l.negate());
            if (!sat(ls))
                c.erase(c.begin() + static_cast<long>(i));
            else
                ++i;
        }
        if (c.empty()) return f_true();
        g = b.apply_or(g, b.cube(c));
    }
    cover = b.isop(b.apply_and(g, b.apply_not(dc)), b.apply_or(g, dc));
    return sk.cover_fo(cover);
}

namespace {

Fo qe_rec(Theory th, const Fo& f, QeStats* st) {
    switch (f->kind) {
    case FK::True:
    case FK::False: return f;
    case FK::Lit: return lit_fo(normalize_lit(th, f->lit), true);
    case FK::And:
    case FK::Or: {
        std::vector<Fo> ks;
        for (auto& k : f->kids) ks.push_back(qe_rec(th, k, st));
        return f->kind == FK::And ? f_and(ks) : f_or(ks);
    }
    case FK::Forall:
    case FK::Exists: {
        bool forall = f->kind == FK::Forall;
        Fo body = qe_rec(th, f->kids[0], st);
        if (forall) body = f_not(body);
        for (auto it = f->bound.rbegin(); it != f->bound.rend(); ++it) {
            body = eliminate_exists(th, *it, body, st);
            if (f_size(body) > 48) body = simplify(th, body);
        }
        body = simplify(th, body);
        return forall ? f_not(body) : body;
    }
    }
    return f;
}

}  // namespace

Fo qe(Theory th, const Fo& f, QeStats* st) { return simplify(th, qe_rec(th, f, st)); }

bool is_sat(Theory th, const Fo& f) {
    Fo r = qe(th, f_exists(f_free(f), f));
    if (!f_is_true(r) && !f_is_false(r)) throw std::logic_error("closed formula did not reduce to a constant");
    return f_is_true(r);
}

bool is_valid(Theory th, const Fo& f) { return !is_sat(th, f_not(f)); }

bool equiv(Theory th, const Fo& a, const Fo& b) {
    return !is_sat(th, f_or(f_and(a, f_not(b)), f_and(f_not(a), b)));
}

bool implies(Theory th, const Fo& a, const Fo& b) { return !is_sat(th, f_and(a, f_not(b))); }

namespace {

// Value for x in a conjunction of single-variable literals, or nullopt.
std::optional<Q> pick_in_cube(Theory th, Key x, const std::vector<Lit>& lits) {
    std::optional<Q> lo, hi, fixed;
    bool lo_strict = false, hi_strict = false;
    std::vector<Q> excluded;
    Z period = 1;
    for (auto& l : lits) {
        Q a = l.atom->e.coef(x);
        Q bnd = -l.atom->e.constant() / a;
        switch (l.atom->rel) {
        case Rel::Eq:
            if (l.pos) {
                if (fixed && *fixed != bnd) return std::nullopt;
                fixed = bnd;
            } else {
                excluded.push_back(bnd);
            }
            break;
        case Rel::Le: {
            bool upper = (a > 0) == l.pos;
            bool strict = !l.pos;
            if (upper) {
                if (!hi || bnd < *hi || (bnd == *hi && strict)) {
                    hi = bnd;
                    hi_strict = strict;
                }
            } else if (!lo || bnd > *lo || (bnd == *lo && strict)) {
                lo = bnd;
                lo_strict = strict;
            }
            break;
        }
        case Rel::Mod: period = lcm_z(period, l.atom->mod); break;
        }
    }
    auto ok = [&](const Q& v) {
        return std::all_of(lits.begin(), lits.end(), [&](const Lit& l) {
            auto r = eval_atom(l.atom, [&](Key) { return std::optional<Q>(v); });
            return r && *r == l.pos;
        });
    };
    if (fixed) return ok(*fixed) ? fixed : std::nullopt;
    if (th == Theory::LIA) {
        if (lo) {
            lo = lo_strict ? Q(floor_q(*lo) + 1) : Q(ceil_q(*lo));
            lo_strict = false;
        }
        if (hi) {
            hi = hi_strict ? Q(ceil_q(*hi) - 1) : Q(floor_q(*hi));
            hi_strict = false;
        }
    }
    if (lo && hi && (*lo > *hi || (*lo == *hi && (lo_strict || hi_strict)))) return std::nullopt;

    if (th == Theory::LRA) {
        Q c = lo && hi ? (*lo + *hi) / 2 : lo ? *lo + 1 : hi ? *hi - 1 : Q(0);
        if (lo && hi && *lo == *hi) c = *lo;
        for (std::size_t n = 0; n <= excluded.size() + 1; ++n) {
            if (ok(c)) return c;
            if (lo && hi)
                c = (*lo + c) / 2;
            else if (hi)
                c -= 1;
            else
                c += 1;
        }
        return std::nullopt;
    }

    // LIA: scan integers around the preferred point.
    Z window = period * Z(static_cast<long>(excluded.size() + 1)) + 1;
    Q c = lo && hi ? Q(floor_q((*lo + *hi) / 2)) : lo ? *lo + 1 : hi ? *hi - 1 : Q(0);
    if (lo && hi && c < *lo) c = *lo;
    auto inside = [&](const Q& v) { return (!lo || v >= *lo) && (!hi || v <= *hi); };
    for (Z d = 0; d <= window; ++d) {
        for (int sgn_ : {1, -1}) {
            if (d == 0 && sgn_ < 0) continue;
            // one-sided ranges only scan away from the bound
            if (lo && !hi && sgn_ < 0) continue;
            if (hi && !lo && sgn_ > 0) continue;
            Q v = c + Q(d * sgn_);
            if (inside(v) && ok(v)) return v;
        }
    }
    return std::nullopt;
}

std::optional<Q> pick_value(Theory th, Key x, const Fo& h) {
    if (f_is_true(h)) return Q(0);
    if (f_is_false(h)) return std::nullopt;
    Skeleton sk(h);
    Bdd::Ref r = sk.enc(h);
    for (auto& c : sk.bdd.isop(r, r)) {
        auto v = pick_in_cube(th, x, sk.cube_lits(c));
        if (v) return v;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Assignment> witness(Theory th, const Fo& f, const Assignment& partial, const std::vector<Key>& vars) {
    Fo g = f;
    for (auto& [k, v] : partial) g = f_subst(g, k, LinExpr(v));
    if (!f_quantifier_free(g)) g = qe(th, g);
    g = normalize(th, g);
    std::vector<Key> rem = f_free(g);
    for (Key k : vars)
        if (!partial.count(k)) rem.push_back(k);
    std::sort(rem.begin(), rem.end());
    rem.erase(std::unique(rem.begin(), rem.end()), rem.end());

    std::vector<Fo> chain(rem.size() + 1);
    chain[rem.size()] = g;
    for (std::size_t i = rem.size(); i > 0; --i) {
        Fo e = eliminate_exists(th, rem[i - 1], chain[i]);
        chain[i - 1] = f_is_true(e) || f_is_false(e) ? e : simplify(th, e);
    }
    if (!f_is_true(chain[0])) return std::nullopt;
    Assignment out;
    for (std::size_t i = 0; i < rem.size(); ++i) {
        Fo h = chain[i + 1];
        for (auto& [k, v] : out) h = f_subst(h, k, LinExpr(v));
        auto v = pick_value(th, rem[i], h);
        if (!v) throw std::logic_error("witness: back-substitution failed for " + key_name(rem[i]));
        out[rem[i]] = *v;
    }
    return out;
}

AtomShape atom_shape(AtomP a) {
    AtomShape s;
    const auto& ts = a->e.terms();
    const Q& k = a->e.constant();
    if (a->rel == Rel::Mod) {
        s.modulus = a->mod;
        auto unit = [&](const Q& c) { return gcd_z(c.get_num(), a->mod) == 1; };
        if (ts.size() == 1) s.ipc = unit(ts[0].second);
        if (ts.size() == 2)
            s.ipc = unit(ts[0].second) && mod_z(Q(ts[0].second + ts[1].second).get_num(), a->mod) == 0;
        return s;
    }
    if (ts.size() == 1) {
        s.mc = s.ipc = true;
        s.constant = -k / ts[0].second;
    } else if (ts.size() == 2 && k == 0 && ts[0].second == -ts[1].second) {
        s.mc = true;
        s.ipc = a->rel == Rel::Eq;
    }
    return s;
}

namespace {

bool constant_ok(Theory th, const Lit& l, const Q& c, const std::set<Q>& K) {
    if (K.count(c)) return true;
    if (th != Theory::LIA || l.atom->rel != Rel::Le) return false;
    // x <= c is x < c+1; x >= c is x > c-1
    Q a = l.atom->e.terms()[0].second;
    return a > 0 ? K.count(c + 1) > 0 : K.count(c - 1) > 0;
}

}  // namespace

bool lit_in_mc(Theory th, const Lit& l, const std::set<Q>& K) {
    AtomShape s = atom_shape(l.atom);
    if (!s.mc) return false;
    return !s.constant || constant_ok(th, l, *s.constant, K);
}

bool lit_in_ipc(const Lit& l, const std::set<Q>& K, const Z& modulus) {
    AtomShape s = atom_shape(l.atom);
    if (!s.ipc) return false;
    if (l.atom->rel == Rel::Mod) return modulus != 0 && mod_z(modulus, s.modulus) == 0;
    return !s.constant || constant_ok(Theory::LIA, l, *s.constant, K);
}

bool fo_in_mc(Theory th, const Fo& f, const std::set<Q>& K) {
    std::vector<Lit> ls;
    f_literals(f, ls);
    return std::all_of(ls.begin(), ls.end(), [&](const Lit& l) { return lit_in_mc(th, l, K); });
}

bool fo_in_ipc(const Fo& f, const std::set<Q>& K, const Z& modulus) {
    std::vector<Lit> ls;
    f_literals(f, ls);
    return std::all_of(ls.begin(), ls.end(), [&](const Lit& l) { return lit_in_ipc(l, K, modulus); });
}

}  // namespace lsynth
