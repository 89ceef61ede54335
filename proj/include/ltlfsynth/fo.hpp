#pragma once

#include "ltlfsynth/atom.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace lsynth {

enum class Theory { LRA, LIA };

enum class FK { True, False, Lit, And, Or, Forall, Exists };

struct FNode;
// Immutable first-order formula in NNF.
using Fo = std::shared_ptr<const FNode>;

struct FNode {
    FK kind;
    Lit lit;                 // FK::Lit
    std::vector<Fo> kids;    // And/Or: flattened; quantifiers: one body
    std::vector<Key> bound;  // quantifiers
};

Fo f_true();
Fo f_false();
Fo f_bool(bool b);
Fo f_lit(const Lit& l);
Fo f_lit(const LitOrConst& l);
Fo f_and(std::vector<Fo> fs);
Fo f_or(std::vector<Fo> fs);
Fo f_and(Fo a, Fo b);
Fo f_or(Fo a, Fo b);
Fo f_not(const Fo& f);
Fo f_implies(const Fo& a, const Fo& b);
Fo f_forall(std::vector<Key> vars, Fo body);
Fo f_exists(std::vector<Key> vars, Fo body);

inline bool f_is_true(const Fo& f) { return f->kind == FK::True; }
inline bool f_is_false(const Fo& f) { return f->kind == FK::False; }
bool f_quantifier_free(const Fo& f);

// Free variable keys, sorted.
std::vector<Key> f_free(const Fo& f);
// All literals (quantifier-free part).
void f_literals(const Fo& f, std::vector<Lit>& out);

// Rename free keys (bound keys are left untouched).
Fo f_map_keys(const Fo& f, const std::function<Key(Key)>& g);
// pre v -> v and v -> pre v over every key.
Fo f_rename_from_pre(const Fo& f);
Fo f_rename_to_pre(const Fo& f);
Fo f_subst(const Fo& f, Key k, const LinExpr& e);

// Direct evaluation of a quantifier-free formula. Missing keys are an error.
bool f_eval(const Fo& f, const std::function<std::optional<Q>(Key)>& val);

bool f_struct_eq(const Fo& a, const Fo& b);
std::string f_str(const Fo& f);                           // infix
std::string f_sexpr(const Fo& f, Theory th = Theory::LRA);  // parsable
std::size_t f_size(const Fo& f);

}  // namespace lsynth
