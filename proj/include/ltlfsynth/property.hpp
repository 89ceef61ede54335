#pragma once

#include "ltlfsynth/atom.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lsynth {

enum class PK : std::uint8_t { True, False, Atom, NegAtom, And, Or, Next, WeakNext, Until, Release, Last, NegLast };

struct PNode;
// Hash-consed NNF property. Pointer equality is structural equality.
using Prop = const PNode*;

struct PNode {
    PK kind;
    AtomP atom;               // Atom / NegAtom
    std::vector<Prop> kids;   // And/Or: sorted by id, deduplicated; temporal: 1 or 2
    std::size_t hash;
    std::uint32_t id;
    bool lookback;            // some atom below mentions a lookback variable
    bool temporal;            // some temporal operator below (or at) this node
};

Prop p_true();
Prop p_false();
Prop p_last();
Prop p_neglast();
Prop p_lit(const Lit& l);
Prop p_lit(const LitOrConst& l);
Prop p_and(std::vector<Prop> ps);
Prop p_or(std::vector<Prop> ps);
Prop p_and(Prop a, Prop b);
Prop p_or(Prop a, Prop b);
Prop p_next(Prop p);
Prop p_wnext(Prop p);
Prop p_until(Prop a, Prop b);
Prop p_release(Prop a, Prop b);
Prop p_eventually(Prop p);
Prop p_globally(Prop p);

// NNF dual.
Prop p_not(Prop p);
Prop p_implies(Prop a, Prop b);

inline bool is_const(Prop p) { return p->kind == PK::True || p->kind == PK::False; }
inline bool is_literal(Prop p) {
    return p->kind == PK::Atom || p->kind == PK::NegAtom || p->kind == PK::Last || p->kind == PK::NegLast;
}
inline bool is_temporal_root(Prop p) {
    return p->kind == PK::Next || p->kind == PK::WeakNext || p->kind == PK::Until || p->kind == PK::Release;
}
inline Lit lit_of(Prop p) { return Lit{p->atom, p->kind == PK::Atom}; }

Prop xnf(Prop p);
// Strips X/Xw at top level per the rmX table. Throws std::logic_error on a bare atom.
Prop rmX(Prop p);
std::vector<Prop> tnps(Prop p);
// Deduplicated atoms, ordered canonically.
std::vector<AtomP> foa(Prop p);
bool in_xnf(Prop p);

struct WellFormed {
    bool ok = true;
    AtomP offending = nullptr;
};
WellFormed is_well_formed(Prop p);
// Replaces top-level lookback literals of xnf(p) by their instant-0 value
// (atom true, negation false). The result is well-formed and agrees with p at instant 0.
Prop weak_lookback_initial(Prop p);

// Substitute Last/NegLast by a constant.
Prop fix_last(Prop p, bool last);

std::string prop_str(Prop p);    // infix
std::string prop_sexpr(Prop p);  // parsable by the property grammar
std::size_t prop_size(Prop p);
bool has_lookback(Prop p);

}  // namespace lsynth
