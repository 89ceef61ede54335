#pragma once

#include "ltlfsynth/semantics.hpp"
#include "ltlfsynth/winning.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsynth {

struct StrategyArtifact {
    Theory theory = Theory::LRA;
    std::vector<VarDecl> env, agent;
    Prop property = nullptr;  // effective property, instant-0 rewritten
    AndOrGraph graph;
    WinTable win;  // levels 0..K
    std::size_t K = 0;

    Scope scope() const;
    SpecProblem problem() const;  // enough of a problem to read traces
};

class StrategyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Builds graph and Win table; throws StrategyError unless realizable.
StrategyArtifact synthesize(const SpecProblem& sp, const WinOptions& opt = {}, const GraphOptions& gopt = {});
StrategyArtifact make_artifact(const SpecProblem& sp, AndOrGraph g, WinTable w);

std::string save_artifact(const StrategyArtifact& a);
// Graph portion of the artifact schema (without Win levels).
std::string graph_to_json(const AndOrGraph& g);
StrategyArtifact load_artifact(const std::string& text);
bool artifact_equal(const StrategyArtifact& a, const StrategyArtifact& b);

struct PlayState {
    std::size_t k = 0;
    std::uint32_t node = 0;
    std::optional<Valuation> prev;
    Trace history;
    bool done = false;
};

PlayState init_play(const StrategyArtifact& a);

struct Response {
    Valuation gamma;
    PlayState next;
    std::size_t env_edge = 0, agent_edge = 0;
};

// One controller step for the environment move beta. On a final node the
// agent is unconstrained and answers 0.
Response respond(const StrategyArtifact& a, const PlayState& st, const Valuation& beta);

// g_j and Win_{K-1-k}(u_j): what the answer at step k (0-based) must satisfy
// for agent edge j, before eta is substituted.
Fo step_obligation(const StrategyArtifact& a, const PlayState& st, std::size_t agent_edge);

enum class Adversary { Random, Boundary };

struct SimReport {
    std::size_t episodes = 0, passed = 0, failed = 0, unfinished = 0;
    std::size_t max_length = 0;
    std::optional<Trace> counterexample;
};

SimReport simulate(const StrategyArtifact& a, std::size_t episodes, std::uint64_t seed, Adversary adv);

}  // namespace lsynth
