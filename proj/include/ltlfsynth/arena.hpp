#pragma once

#include "ltlfsynth/decomp.hpp"
#include "ltlfsynth/fo.hpp"
#include "ltlfsynth/spec.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lsynth {

struct AndNode {
    std::uint32_t id;
    Prop label;  // in XNF; p_true() for the final node, p_false() for the dead node
    bool final = false;
    bool dead = false;
};

struct OrNode {
    std::uint32_t id;
    std::uint32_t from;  // AND-node
};

struct GraphEdge {
    std::uint32_t from, to;
    Prop guard_prop;  // propositional, over atoms only
    Fo guard;         // same constraint in the first-order layer
};

struct AndOrGraph {
    Theory theory = Theory::LRA;
    std::vector<AndNode> and_nodes;
    std::vector<OrNode> or_nodes;
    std::vector<GraphEdge> env_edges;  // AND -> OR
    std::vector<GraphEdge> ag_edges;   // OR -> AND
    std::uint32_t initial = 0;
    std::optional<std::uint32_t> final_node;
    std::vector<AtomP> c_env, c_ag;
    std::vector<VarId> env, agent;
    // Edge indices by source node.
    std::vector<std::vector<std::size_t>> env_out, ag_out;
};

struct GraphOptions {
    // Place atoms mentioning a lookback agent variable on agent edges.
    bool pre_agent_side = false;
    std::size_t max_nodes = 5000;
};

// C_env: atoms whose variables are all in X, pre X or pre Y. C_ag: the rest.
std::pair<std::vector<AtomP>, std::vector<AtomP>> split_atoms(const std::vector<AtomP>& atoms,
                                                              const std::vector<VarId>& env,
                                                              const std::vector<VarId>& agent,
                                                              bool pre_agent_side = false);

AndOrGraph build_graph(const SpecProblem& sp, const GraphOptions& opt = {});
AndOrGraph build_graph(Prop property, Theory th, const std::vector<VarId>& env, const std::vector<VarId>& agent,
                       const GraphOptions& opt = {});

// Propositional guard to first-order formula.
Fo guard_fo(Prop guard);

std::string export_dot(const AndOrGraph& g);

}  // namespace lsynth
