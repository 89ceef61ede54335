#pragma once

#include "ltlfsynth/spec.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lsynth {

using Valuation = std::map<VarId, Q>;

struct Trace {
    Theory theory = Theory::LRA;
    std::vector<Valuation> steps;
    std::size_t size() const { return steps.size(); }
};

// Value of a key at instant i; nullopt for lookback at instant 0.
std::optional<Q> trace_value(const Trace& t, std::size_t i, Key k);
std::optional<Q> eval_term(const LinExpr& e, const Trace& t, std::size_t i);
bool eval(const Trace& t, Prop p, std::size_t i = 0);

// Atom set with an optional last marker: -1 none, 0 not last, 1 last.
struct AtomSet {
    std::set<AtomP> atoms;
    int last = -1;
    bool operator==(const AtomSet& o) const { return atoms == o.atoms && last == o.last; }
};

Prop progress(Prop p, const AtomSet& a);
Prop progress_seq(Prop p, const std::vector<AtomSet>& seq);
std::vector<AtomSet> seq_of_trace(Prop p, const Trace& t);

// Propositional LTLf over atom sets; the marker of the last set is ignored in
// favour of the position in the sequence.
bool eval_seq(const std::vector<AtomSet>& seq, Prop p, std::size_t i = 0);

Trace parse_trace_json(const std::string& text, const SpecProblem& sp);
std::string trace_to_json(const Trace& t);

}  // namespace lsynth
