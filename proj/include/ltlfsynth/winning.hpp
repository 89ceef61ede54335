#pragma once

#include "ltlfsynth/arena.hpp"
#include "ltlfsynth/theory.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lsynth {

enum class Verdict { Realizable, NotBoundedlyRealizable, Unknown };

const char* verdict_name(Verdict v);

struct WinTable {
    // per_node[s][i] = Win_i(s), a state formula over the current variables
    std::vector<std::vector<Fo>> per_node;
    std::optional<std::size_t> fixpoint_index;
    std::size_t K = 0;  // meaningful for Realizable
    Verdict verdict = Verdict::Unknown;
    std::size_t rounds = 0;
    std::vector<std::string> diagnostics;

    const Fo& at(std::uint32_t s, std::size_t i) const { return per_node.at(s).at(i); }
    std::size_t levels() const { return per_node.empty() ? 0 : per_node[0].size(); }
};

// Controllable preimage of C at AND-node s:
//   (and_i forall X. (w_i -> or_j exists Y. (g_j and C(s_j))))[pre V / V]
Fo pre_image(const AndOrGraph& g, const std::vector<Fo>& C, std::uint32_t s);

struct WinOptions {
    std::size_t max_iter = 50;
};

WinTable iterate_win(const AndOrGraph& g, const WinOptions& opt = {});

}  // namespace lsynth
