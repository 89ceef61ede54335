#pragma once

#include "ltlfsynth/fo.hpp"
#include "ltlfsynth/property.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsynth {

enum class Sort { Real, Int };

enum class ErrKind { Syntax, Undeclared, Duplicate, SortMismatch, PreOfPre, NonLinear, IllFormed };

class SpecError : public std::runtime_error {
public:
    SpecError(ErrKind k, const std::string& msg, int line = 0, int col = 0);
    ErrKind kind;
    int line, col;
};

struct SExpr {
    bool list = false;
    std::string atom;
    std::vector<SExpr> items;
    int line = 0, col = 0;
};

// Reads exactly one s-expression (';' starts a comment).
SExpr read_sexpr(const std::string& text);

struct VarDecl {
    std::string name;
    Sort sort;
    VarId id;
};

struct Scope {
    Theory theory = Theory::LRA;
    std::map<std::string, Sort> vars;
    bool auto_declare = false;  // unknown names become variables of the theory sort
    bool allow_last = false;    // accept the internal `last` proposition
};

LinExpr parse_term(const SExpr& s, const Scope& sc);
Prop parse_prop(const SExpr& s, const Scope& sc);
Fo parse_fo(const SExpr& s, const Scope& sc);

struct SpecProblem {
    Theory theory = Theory::LRA;
    std::vector<VarDecl> env, agent;
    std::optional<Prop> assumption;
    Prop goal = nullptr;
    Prop effective = nullptr;  // NNF of assumption -> goal
    // Effective property with top-level lookback literals fixed to their instant-0 value.
    Prop initial = nullptr;
    bool weak_lookback_rewrite = false;
    std::string text;

    Scope scope() const;
    std::vector<VarId> env_ids() const;
    std::vector<VarId> agent_ids() const;
    std::vector<VarId> all_ids() const;
    bool is_env(VarId v) const;
    bool is_agent(VarId v) const;
};

// strict: reject properties that are not well-formed instead of rewriting them.
SpecProblem parse_spec(const std::string& text, bool strict = false);

const char* theory_name(Theory t);

}  // namespace lsynth
