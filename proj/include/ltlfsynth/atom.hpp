#pragma once

#include "ltlfsynth/linexpr.hpp"

#include <functional>
#include <optional>
#include <string>

namespace lsynth {

// Canonical atom kinds; every comparison is a literal over these.
//   Eq:  e = 0
//   Le:  e <= 0
//   Mod: e = 0 (mod k)
enum class Rel { Eq, Le, Mod };

struct Atom {
    Rel rel;
    Z mod;      // > 1 for Mod, 0 otherwise
    LinExpr e;  // integer coefficients, gcd-reduced
    // Truth value when a lookback term is undefined (instant 0). Always true for
    // atoms without lookback; false for a lookback atom that stands for the
    // negation of a user-written comparison.
    bool weak;
    std::size_t hash;
    std::string key;  // canonical text, used for deterministic ordering
    bool has_pre() const { return e.has_pre(); }
};
using AtomP = const Atom*;

struct Lit {
    AtomP atom = nullptr;
    bool pos = true;
    Lit negate() const { return {atom, !pos}; }
    bool operator==(const Lit& o) const { return atom == o.atom && pos == o.pos; }
};

// Result of building a comparison: either a constant or a literal.
struct LitOrConst {
    int konst = -1;  // -1: literal, 0: false, 1: true
    Lit lit;
    static LitOrConst of(bool b) { return {b ? 1 : 0, {}}; }
    bool is_const() const { return konst >= 0; }
};

enum class Cmp { Eq, Neq, Lt, Le, Gt, Ge };

// e `cmp` 0. With `user_atom`, the literal keeps the weak-lookback truth of a
// written comparison: true at instant 0 when a lookback term is undefined.
LitOrConst make_cmp(Cmp cmp, LinExpr e, bool user_atom = false);
// e = 0 (mod k), k >= 1.
LitOrConst make_mod(const Z& k, LinExpr e, bool user_atom = false);
// Interns an already-normalized atom.
AtomP intern_atom(Rel rel, const Z& mod, const LinExpr& e, bool weak = true);
// Same constraint with the default weak flag; used when leaving the temporal layer.
Lit plain_lit(const Lit& l);

bool atom_less(AtomP a, AtomP b);
bool lit_less(const Lit& a, const Lit& b);

std::optional<bool> eval_atom(AtomP a, const std::function<std::optional<Q>(Key)>& val);

std::string lit_str(const Lit& l);    // infix
std::string lit_sexpr(const Lit& l);  // parsable
std::string atom_str(AtomP a);

// Rebuild the literal with keys renamed (result may fold to a constant).
LitOrConst map_lit(const Lit& l, const std::function<Key(Key)>& f);
// Substitute a key by an expression. The caller guarantees integrality for Mod atoms.
LitOrConst subst_lit(const Lit& l, Key k, const LinExpr& by);

}  // namespace lsynth
