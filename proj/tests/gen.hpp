#pragma once
// Hand-rolled generators and brute-force enumerators shared by the test suites.

#include "ltlfsynth/semantics.hpp"

#include <functional>
#include <random>
#include <vector>

namespace lsynth::testing {

struct Rng {
    std::mt19937_64 g;
    explicit Rng(std::uint64_t seed) : g(seed) {}
    int uni(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
    bool coin() { return uni(0, 1) == 1; }
};

inline Prop lit_prop(const Lit& l) { return p_lit(l); }

// Random NNF property over the given literals.
inline Prop random_prop(Rng& r, const std::vector<Lit>& lits, int depth, bool temporal = true) {
    if (depth <= 0 || r.uni(0, 5) == 0) {
        int c = r.uni(0, 11);
        if (c == 0) return p_true();
        if (c == 1) return p_false();
        Lit l = lits[r.uni(0, static_cast<int>(lits.size()) - 1)];
        return p_lit(r.coin() ? l : l.negate());
    }
    int op = r.uni(0, temporal ? 7 : 1);
    auto sub = [&] { return random_prop(r, lits, depth - 1, temporal); };
    switch (op) {
    case 0: return p_and(sub(), sub());
    case 1: return p_or(sub(), sub());
    case 2: return p_next(sub());
    case 3: return p_wnext(sub());
    case 4: return p_until(sub(), sub());
    case 5: return p_release(sub(), sub());
    case 6: return p_eventually(sub());
    default: return p_globally(sub());
    }
}

// Every trace over `vars` with values in [lo, hi] and length in [1, maxlen].
inline void for_each_trace(const std::vector<VarId>& vars, int lo, int hi, std::size_t maxlen, Theory th,
                           const std::function<void(const Trace&)>& f) {
    std::vector<Valuation> states;
    std::size_t width = static_cast<std::size_t>(hi - lo + 1);
    std::size_t count = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) count *= width;
    for (std::size_t c = 0; c < count; ++c) {
        Valuation v;
        std::size_t x = c;
        for (VarId id : vars) {
            v[id] = Q(lo + static_cast<int>(x % width));
            x /= width;
        }
        states.push_back(v);
    }
    Trace t;
    t.theory = th;
    std::function<void()> rec = [&] {
        if (!t.steps.empty()) f(t);
        if (t.steps.size() == maxlen) return;
        for (auto& s : states) {
            t.steps.push_back(s);
            rec();
            t.steps.pop_back();
        }
    };
    rec();
}

inline Trace random_trace(Rng& r, const std::vector<VarId>& vars, int lo, int hi, std::size_t maxlen, Theory th) {
    Trace t;
    t.theory = th;
    std::size_t n = static_cast<std::size_t>(r.uni(1, static_cast<int>(maxlen)));
    for (std::size_t i = 0; i < n; ++i) {
        Valuation v;
        for (VarId id : vars) v[id] = Q(r.uni(lo, hi));
        t.steps.push_back(v);
    }
    return t;
}

inline LinExpr V(const char* n) { return LinExpr::var(cur_key(intern_var(n))); }
inline LinExpr P(const char* n) { return LinExpr::var(pre_key(intern_var(n))); }
inline LinExpr C(long c) { return LinExpr(Q(c)); }
inline Lit L(Cmp c, const LinExpr& a, const LinExpr& b) { return make_cmp(c, a - b).lit; }
inline Prop A(Cmp c, const LinExpr& a, const LinExpr& b) { return p_lit(make_cmp(c, a - b)); }

}  // namespace lsynth::testing
