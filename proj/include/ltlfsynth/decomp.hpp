#pragma once

#include "ltlfsynth/bdd.hpp"
#include "ltlfsynth/property.hpp"

#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lsynth {

// Propositional view of properties: atoms, X/Xw/U/R-rooted subproperties and
// Last are opaque letters. Identifier 0 is reserved for Last. New letters get
// identifiers in canonical text order (atoms before temporal letters), so the
// numbering does not depend on hash-consing history.
class Abstraction {
public:
    static constexpr std::uint32_t kLastId = 0;

    Abstraction();

    // Registers the letters of p (in canonical order) and returns its encoding.
    Bdd::Ref encode(Prop p);
    // Sum-of-products property of f (irredundant cover).
    Prop decode(Bdd::Ref f);
    Prop decode_cubes(const std::vector<Bdd::Cube>& cubes) const;

    // Letter for an identifier: p_last(), a positive atom literal, or a temporal root.
    Prop letter(std::uint32_t id) const { return letters_[id]; }
    std::size_t size() const { return letters_.size(); }
    // -1 if the atom has no identifier yet.
    long id_of_atom(AtomP a) const;
    long id_of(Prop letter) const;

    Bdd& bdd() { return bdd_; }

private:
    void register_letters(Prop p);
    Bdd::Ref enc(Prop p);

    Bdd bdd_;
    std::vector<Prop> letters_;
    std::unordered_map<Prop, std::uint32_t> ids_;
    std::unordered_map<Prop, Bdd::Ref> enc_cache_;
};

// Letter of a literal or temporal subproperty: the positive atom for Atom/NegAtom,
// p_last() for Last/NegLast, the node itself otherwise.
Prop letter_of(Prop p);

struct Decomposition {
    std::vector<std::pair<Prop, Prop>> pairs;  // (prm, sub)
};

// Shannon cofactoring over the C-letters in the support of p, residuals grouped
// by propositional equivalence. Groups are ordered by their first assignment,
// enumerating each letter true before false in identifier order.
Decomposition decompose(Abstraction& abs, Prop p, const std::vector<AtomP>& C);
Decomposition decompose(Prop p, const std::vector<AtomP>& C);

bool prop_equiv(Abstraction& abs, Prop p, Prop q);
bool prop_equiv(Prop p, Prop q);

// Evaluates p treating letters as opaque propositions.
bool eval_letters(Prop p, const std::function<bool(Prop)>& val);

}  // namespace lsynth
