#pragma once

#include "ltlfsynth/fo.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace lsynth {

struct QeStats {
    std::size_t eliminations = 0;
    std::size_t literals = 0;
};

using Assignment = std::map<Key, Q>;

// Theory-canonical literal. LIA: bounds tightened to integers, gcd-reduced, and
// `e <= 0` with a negative leading coefficient rewritten as `not (1 - e <= 0)`.
// Weak-lookback flags are dropped.
LitOrConst normalize_lit(Theory th, const Lit& l);
Fo normalize(Theory th, const Fo& f);

// Quantifier-free, T-equivalent formula (Fourier-Motzkin for LRA, Cooper for LIA).
Fo qe(Theory th, const Fo& f, QeStats* stats = nullptr);
// Exists x. qf, for quantifier-free qf, without simplification.
Fo eliminate_exists(Theory th, Key x, const Fo& qf, QeStats* stats = nullptr);

// Free variables existentially closed.
bool is_sat(Theory th, const Fo& f);
// Free variables universally closed.
bool is_valid(Theory th, const Fo& f);
bool equiv(Theory th, const Fo& a, const Fo& b);
bool implies(Theory th, const Fo& a, const Fo& b);

// T-equivalent quantifier-free formula: normalized literals, T-unsat cubes and
// implied literals removed, propositionally minimized.
Fo simplify(Theory th, const Fo& f);

// Values for the free variables of f not fixed by `partial` (plus `vars`),
// or nullopt when f is unsatisfiable under `partial`.
std::optional<Assignment> witness(Theory th, const Fo& f, const Assignment& partial,
                                  const std::vector<Key>& vars = {});

// Shape of an atom with respect to the decidable fragments.
struct AtomShape {
    bool mc = false;   // x ~ y or x ~ c
    bool ipc = false;  // x = y, x ~ c, x = y + d (mod k), x = d (mod k)
    std::optional<Q> constant;  // c for single-variable comparisons
    Z modulus = 0;              // k for congruences
};
AtomShape atom_shape(AtomP a);

// Closure checks. K is the constant set; under LIA a bound c is also accepted
// when the equivalent strict/non-strict form uses a constant of K.
bool lit_in_mc(Theory th, const Lit& l, const std::set<Q>& K);
bool lit_in_ipc(const Lit& l, const std::set<Q>& K, const Z& modulus);
bool fo_in_mc(Theory th, const Fo& f, const std::set<Q>& K);
bool fo_in_ipc(const Fo& f, const std::set<Q>& K, const Z& modulus);

}  // namespace lsynth
