#pragma once
// Brute-force first-order oracles over machine integers, independent of the
// elimination code. LRA values are dyadic rationals stored scaled by kScale.

#include "gen.hpp"
#include "ltlfsynth/theory.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace lsynth::testing {

struct QeInstance {
    Fo f;
    std::vector<Key> free;
    int quantifiers = 0;
};

// Random formula over `vars` with up to `nq` nested quantifier blocks.
// LRA atoms are difference constraints (coefficients +-1); LIA atoms use
// coefficients in [-2, 3] and congruences modulo 2 or 3. Constants in [-4, 4].
inline QeInstance random_qe_instance(Rng& r, Theory th, const std::vector<Key>& vars) {
    auto atom = [&](const std::vector<Key>& scope) -> Fo {
        int c = r.uni(-4, 4);
        Key a = scope[r.uni(0, static_cast<int>(scope.size()) - 1)];
        LinExpr e;
        if (th == Theory::LRA) {
            int s = r.coin() ? 1 : -1;
            e = LinExpr::var(a, Q(s));
            if (scope.size() > 1 && r.coin()) {
                Key b = scope[r.uni(0, static_cast<int>(scope.size()) - 1)];
                if (b != a) e += LinExpr::var(b, Q(-s));
            }
        } else {
            int ca = 0;
            while (ca == 0) ca = r.uni(-2, 3);
            e = LinExpr::var(a, Q(ca));
            if (scope.size() > 1 && r.coin()) {
                Key b = scope[r.uni(0, static_cast<int>(scope.size()) - 1)];
                int cb = 0;
                while (cb == 0) cb = r.uni(-2, 2);
                if (b != a) e += LinExpr::var(b, Q(cb));
            }
        }
        e.add_constant(Q(c));
        int kind = r.uni(0, th == Theory::LIA ? 6 : 5);
        LitOrConst l;
        switch (kind) {
        case 0: l = make_cmp(Cmp::Eq, e); break;
        case 1: l = make_cmp(Cmp::Neq, e); break;
        case 2: l = make_cmp(Cmp::Lt, e); break;
        case 3: l = make_cmp(Cmp::Le, e); break;
        case 4: l = make_cmp(Cmp::Gt, e); break;
        case 5: l = make_cmp(Cmp::Ge, e); break;
        default: l = make_mod(Z(r.uni(2, 3)), e); break;
        }
        return f_lit(l);
    };
    std::function<Fo(const std::vector<Key>&, int)> qf = [&](const std::vector<Key>& scope, int d) -> Fo {
        if (d == 0 || r.uni(0, 2) == 0) return atom(scope);
        return r.coin() ? f_and(qf(scope, d - 1), qf(scope, d - 1)) : f_or(qf(scope, d - 1), qf(scope, d - 1));
    };
    int nq = r.uni(1, static_cast<int>(std::min<std::size_t>(3, vars.size())));
    QeInstance inst;
    inst.quantifiers = nq;
    std::vector<Key> bound(vars.end() - nq, vars.end());
    inst.free.assign(vars.begin(), vars.end() - nq);
    // innermost first
    Fo body = qf(vars, 3);
    for (int i = nq - 1; i >= 0; --i) {
        std::vector<Key> scope(vars.begin(), vars.end() - (nq - 1 - i));
        if (r.uni(0, 3) == 0) body = r.coin() ? f_and(body, qf(scope, 1)) : f_or(body, qf(scope, 1));
        body = r.coin() ? f_exists({bound[i]}, body) : f_forall({bound[i]}, body);
    }
    inst.f = body;
    return inst;
}

// Compiled formula with machine-integer atoms.
struct IntForm {
    enum Kind { T, F, Atom, And, Or, All, Ex } kind;
    Rel rel{};
    bool pos = true;
    std::int64_t mod = 0, c = 0;
    std::vector<std::pair<Key, std::int64_t>> coefs;
    std::vector<IntForm> kids;
    Key var = 0;
};

inline IntForm compile(const Fo& f) {
    IntForm n;
    switch (f->kind) {
    case FK::True: n.kind = IntForm::T; break;
    case FK::False: n.kind = IntForm::F; break;
    case FK::Lit:
        n.kind = IntForm::Atom;
        n.rel = f->lit.atom->rel;
        n.pos = f->lit.pos;
        n.mod = f->lit.atom->mod.get_si();
        n.c = f->lit.atom->e.constant().get_num().get_si();
        for (auto& [k, c] : f->lit.atom->e.terms()) n.coefs.emplace_back(k, c.get_num().get_si());
        break;
    case FK::And:
    case FK::Or:
        n.kind = f->kind == FK::And ? IntForm::And : IntForm::Or;
        for (auto& k : f->kids) n.kids.push_back(compile(k));
        break;
    case FK::Forall:
    case FK::Exists: {
        // one node per bound variable, outermost first
        IntForm body = compile(f->kids[0]);
        for (auto it = f->bound.rbegin(); it != f->bound.rend(); ++it) {
            IntForm q;
            q.kind = f->kind == FK::Forall ? IntForm::All : IntForm::Ex;
            q.var = *it;
            q.kids.push_back(std::move(body));
            body = std::move(q);
        }
        return body;
    }
    }
    return n;
}

using IntEnv = std::map<Key, std::int64_t>;

inline std::int64_t pmod(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// LIA brute force. A quantifier at nesting depth d ranges over [-R[d], R[d]],
// searched from 0 outward; radii grow with depth so that inner variables can
// leave the range of every outer choice.
inline bool eval_lia(const IntForm& f, IntEnv& env, const std::vector<std::int64_t>& R, std::size_t d = 0) {
    switch (f.kind) {
    case IntForm::T: return true;
    case IntForm::F: return false;
    case IntForm::Atom: {
        std::int64_t v = f.c;
        for (auto& [k, c] : f.coefs) v += c * env.at(k);
        bool b = f.rel == Rel::Eq ? v == 0 : f.rel == Rel::Le ? v <= 0 : pmod(v, f.mod) == 0;
        return b == f.pos;
    }
    case IntForm::And:
        for (auto& k : f.kids)
            if (!eval_lia(k, env, R, d)) return false;
        return true;
    case IntForm::Or:
        for (auto& k : f.kids)
            if (eval_lia(k, env, R, d)) return true;
        return false;
    case IntForm::All:
    case IntForm::Ex: {
        bool ex = f.kind == IntForm::Ex;
        auto saved = env.count(f.var) ? std::optional<std::int64_t>(env[f.var]) : std::nullopt;
        bool result = !ex;
        for (std::int64_t v = 0; v <= R.at(d) && result == !ex; ++v)
            for (std::int64_t s : {1, -1}) {
                if (v == 0 && s < 0) continue;
                env[f.var] = v * s;
                if (eval_lia(f.kids[0], env, R, d + 1) == ex) {
                    result = ex;
                    break;
                }
            }
        if (saved)
            env[f.var] = *saved;
        else
            env.erase(f.var);
        return result;
    }
    }
    return false;
}

// LRA: values scaled by kScale. Atoms are difference constraints, so the truth
// of a subformula in x is piecewise constant with breakpoints at v + k for fixed
// values v (or 0) and |k| bounded by the summed constants of the remaining chain.
constexpr std::int64_t kScale = 1 << 12;

inline bool eval_lra(const IntForm& f, IntEnv& env, int remaining) {
    switch (f.kind) {
    case IntForm::T: return true;
    case IntForm::F: return false;
    case IntForm::Atom: {
        std::int64_t v = f.c * kScale;
        for (auto& [k, c] : f.coefs) v += c * env.at(k);
        bool b = f.rel == Rel::Eq ? v == 0 : v <= 0;
        return b == f.pos;
    }
    case IntForm::And:
        for (auto& k : f.kids)
            if (!eval_lra(k, env, remaining)) return false;
        return true;
    case IntForm::Or:
        for (auto& k : f.kids)
            if (eval_lra(k, env, remaining)) return true;
        return false;
    case IntForm::All:
    case IntForm::Ex: {
        bool ex = f.kind == IntForm::Ex;
        std::int64_t K = 4 * (remaining + 1);
        std::set<std::int64_t> pts;
        std::vector<std::int64_t> base{0};
        for (auto& [k, v] : env) base.push_back(v);
        for (auto v : base)
            for (std::int64_t k = -K; k <= K; ++k) pts.insert(v + k * kScale);
        std::vector<std::int64_t> cand(pts.begin(), pts.end());
        std::vector<std::int64_t> all = cand;
        for (std::size_t i = 0; i + 1 < cand.size(); ++i) all.push_back((cand[i] + cand[i + 1]) / 2);
        all.push_back(cand.front() - kScale);
        all.push_back(cand.back() + kScale);
        bool result = !ex;
        for (auto v : all) {
            env[f.var] = v;
            if (eval_lra(f.kids[0], env, remaining - 1) == ex) {
                result = ex;
                break;
            }
        }
        env.erase(f.var);
        return result;
    }
    }
    return false;
}

// Evaluates a quantifier-free Fo at an integer-scaled point.
inline bool eval_qf_scaled(const Fo& f, const IntEnv& env, std::int64_t scale) {
    return f_eval(f, [&](Key k) -> std::optional<Q> {
        auto it = env.find(k);
        if (it == env.end()) return std::nullopt;
        return Q(Z(static_cast<long>(it->second)), Z(static_cast<long>(scale)));
    });
}

// Compares qe(th, inst.f) with the oracle on every point of the box [-12, 12]^free
// (LRA: half-integer points). Returns false on a mismatch; `inconclusive` is set
// when the LIA enumeration depends on the search radius.
inline bool check_qe_instance(Theory th, const QeInstance& inst, bool* inconclusive = nullptr) {
    Fo out = qe(th, inst.f);
    if (!f_quantifier_free(out)) return false;
    IntForm cf = compile(inst.f);
    std::int64_t scale = th == Theory::LRA ? kScale : 1;
    std::int64_t step = th == Theory::LRA ? kScale / 2 : 1;
    std::vector<std::int64_t> axis;
    for (std::int64_t v = -12 * scale; v <= 12 * scale; v += step) axis.push_back(v);
    std::size_t n = inst.free.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= axis.size();
    if (inconclusive) *inconclusive = false;
    for (std::size_t idx = 0; idx < total; ++idx) {
        IntEnv env;
        std::size_t x = idx;
        for (Key k : inst.free) {
            env[k] = axis[x % axis.size()];
            x /= axis.size();
        }
        bool want;
        if (th == Theory::LIA) {
            IntEnv e1 = env, e2 = env;
            static const std::vector<std::int64_t> r1{46, 148, 454}, r2{60, 200, 620};
            bool a = eval_lia(cf, e1, r1), b = eval_lia(cf, e2, r2);
            if (a != b) {
                if (inconclusive) *inconclusive = true;
                return true;
            }
            want = a;
        } else {
            want = eval_lra(cf, env, inst.quantifiers);
        }
        if (eval_qf_scaled(out, env, scale) != want) return false;
    }
    return true;
}

}  // namespace lsynth::testing
