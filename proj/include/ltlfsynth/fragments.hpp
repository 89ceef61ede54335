#pragma once

#include "ltlfsynth/arena.hpp"
#include "ltlfsynth/theory.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace lsynth {

// Instant-indexed copy of a variable.
struct CgVertex {
    VarId var;
    std::size_t instant;
    auto operator<=>(const CgVertex&) const = default;
};

struct CgEdge {
    std::size_t u, v;
    Lit lit;
    bool equality = false;            // u = v literal, removed by collapsing
    std::set<std::size_t> instants;   // instants of the literal's variables
};

struct ComputationGraph {
    std::vector<std::vector<CgVertex>> nodes;  // one member each until collapsed
    std::vector<CgEdge> edges;
    bool collapsed = false;
};

// rho[i] is the formula of step i: pre keys refer to instant i-1 (dropped at i = 0),
// current keys to instant i.
ComputationGraph computation_graph(const std::vector<Fo>& rho);
ComputationGraph collapse_equalities(const ComputationGraph& g);
// Longest simple path, measured as the number of distinct instants its edges
// touch; 0 when no edge crosses instants.
std::size_t max_acyclic_path(const ComputationGraph& g);

struct ArenaPath {
    std::uint32_t start = 0;
    std::vector<std::pair<std::size_t, std::size_t>> steps;  // (env edge, agent edge)
};
std::vector<Fo> path_formulas(const AndOrGraph& g, const ArenaPath& p);

struct LookbackCheck {
    bool exceeded = false;
    std::size_t depth = 0;      // all paths up to this length were examined
    std::size_t max_seen = 0;   // largest measure found
    std::optional<ArenaPath> witness;
    bool budget_hit = false;
};

// Explores arena paths from every AND-node by increasing length up to d.
// A violation (measure > K) stops the search; `budget` bounds the number of
// path extensions.
LookbackCheck check_bounded_lookback(const AndOrGraph& g, std::size_t K, std::size_t d,
                                     std::size_t budget = 2'000'000);

struct FragmentReport {
    bool lookback_free = false;
    bool mc = false;
    bool ipc = false;
    std::set<Q> constants;
    Z modulus = 1;  // lcm of congruence moduli (IPC)
    // K-bounded lookback: K observed up to `depth`, or a growing chain
    std::optional<std::size_t> lookback_k;
    std::size_t lookback_depth = 0;
    bool lookback_exceeded = false;  // the measure kept growing with depth
    std::string lookback_note;
};

std::size_t default_lookback_depth(const AndOrGraph& g, std::size_t K);
FragmentReport classify(const SpecProblem& sp, std::optional<std::size_t> depth = std::nullopt);
std::string report_text(const FragmentReport& r, Theory th);

}  // namespace lsynth
