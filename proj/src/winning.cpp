#include "ltlfsynth/winning.hpp"

#include <stdexcept>

namespace lsynth {

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Realizable: return "realizable";
    case Verdict::NotBoundedlyRealizable: return "not-boundedly-realizable";
    case Verdict::Unknown: return "unknown";
    }
    return "?";
}

namespace {

std::vector<Key> cur_keys(const std::vector<VarId>& vs) {
    std::vector<Key> out;
    for (VarId v : vs) out.push_back(cur_key(v));
    return out;
}

}  // namespace

Fo pre_image(const AndOrGraph& g, const std::vector<Fo>& C, std::uint32_t s) {
    const Theory th = g.theory;
    const AndNode& n = g.and_nodes.at(s);
    if (n.final) return f_true();
    std::vector<Key> xs = cur_keys(g.env), ys = cur_keys(g.agent);
    std::vector<Fo> conj;
    for (auto ei : g.env_out[s]) {
        const GraphEdge& e = g.env_edges[ei];
        std::vector<Fo> moves;
        for (auto ai : g.ag_out[e.to]) {
            const GraphEdge& a = g.ag_edges[ai];
            const Fo& target = C.at(a.to);
            if (f_is_false(target)) continue;
            Fo body = f_and(a.guard, target);
            moves.push_back(ys.empty() ? body : qe(th, f_exists(ys, body)));
        }
        Fo inner = f_implies(e.guard, f_or(moves));
        Fo q = xs.empty() ? inner : qe(th, f_forall(xs, inner));
        q = simplify(th, q);
        if (f_is_false(q)) return f_false();
        conj.push_back(q);
    }
    Fo r = simplify(th, f_and(conj));
    // only lookback keys remain: they are the previous instant's values
    return f_rename_from_pre(r);
}

WinTable iterate_win(const AndOrGraph& g, const WinOptions& opt) {
    if (opt.max_iter == 0) throw std::invalid_argument("max_iter must be positive");
    const Theory th = g.theory;
    const std::size_t N = g.and_nodes.size();
    WinTable w;
    w.per_node.assign(N, {});
    for (auto& n : g.and_nodes) w.per_node[n.id].push_back(n.final ? f_true() : f_false());

    auto initial_sat = [&](const Fo& f) {
        if (!f_free(f).empty()) {
            w.diagnostics.push_back("Win formula of the initial node is not closed; closing existentially");
        }
        return is_sat(th, f);
    };

    std::size_t i = 0;
    if (initial_sat(w.at(g.initial, 0))) {
        w.verdict = Verdict::Realizable;
        w.K = 0;
        return w;
    }
    while (w.rounds < opt.max_iter) {
        std::vector<Fo> C(N);
        for (std::size_t s = 0; s < N; ++s) C[s] = w.per_node[s][i];
        bool changed = false;
        for (auto& n : g.and_nodes) {
            const Fo& cur = C[n.id];
            Fo next;
            if (n.final || n.dead || f_is_true(cur))
                next = cur;
            else {
                next = simplify(th, f_or(cur, pre_image(g, C, n.id)));
                if (!changed && !equiv(th, cur, next)) changed = true;
            }
            w.per_node[n.id].push_back(next);
        }
        ++i;
        ++w.rounds;
        if (initial_sat(w.at(g.initial, i))) {
            w.verdict = Verdict::Realizable;
            w.K = i;
            return w;
        }
        if (!changed) {
            w.fixpoint_index = i - 1;
            w.verdict = Verdict::NotBoundedlyRealizable;
            return w;
        }
    }
    w.verdict = Verdict::Unknown;
    w.diagnostics.push_back("iteration budget of " + std::to_string(opt.max_iter) +
                            " rounds exhausted; bounded realizability is undecided (realizability may need "
                            "unboundedly long strategies)");
    return w;
}

}  // namespace lsynth
