#include "ltlfsynth/fragments.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace lsynth {

namespace {

bool is_var_equality(const Lit& l) {
    const Atom& a = *l.atom;
    if (!l.pos || a.rel != Rel::Eq || a.e.constant() != 0 || a.e.terms().size() != 2) return false;
    auto it = a.e.terms().begin();
    Q c1 = it->second;
    Q c2 = std::next(it)->second;
    return c1 == -c2 && (c1 == 1 || c1 == -1);
}

}  // namespace

ComputationGraph computation_graph(const std::vector<Fo>& rho) {
    ComputationGraph g;
    std::map<CgVertex, std::size_t> index;
    auto vertex = [&](CgVertex v) {
        auto it = index.find(v);
        if (it != index.end()) return it->second;
        std::size_t id = g.nodes.size();
        g.nodes.push_back({v});
        index.emplace(v, id);
        return id;
    };
    for (std::size_t i = 0; i < rho.size(); ++i) {
        std::vector<Lit> lits;
        f_literals(rho[i], lits);
        for (const Lit& l : lits) {
            std::vector<std::size_t> vs;
            std::set<std::size_t> inst;
            for (auto& [k, c] : l.atom->e.terms()) {
                if (key_is_pre(k) && i == 0) continue;
                std::size_t t = key_is_pre(k) ? i - 1 : i;
                vs.push_back(vertex({key_var(k), t}));
                inst.insert(t);
            }
            bool eq = is_var_equality(l) && vs.size() == 2;
            for (std::size_t a = 0; a < vs.size(); ++a)
                for (std::size_t b = a + 1; b < vs.size(); ++b) {
                    std::set<std::size_t> ends{g.nodes[vs[a]][0].instant, g.nodes[vs[b]][0].instant};
                    g.edges.push_back({vs[a], vs[b], l, eq, ends});
                }
        }
    }
    return g;
}

ComputationGraph collapse_equalities(const ComputationGraph& g) {
    std::vector<std::size_t> parent(g.nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (auto& e : g.edges)
        if (e.equality) parent[find(e.u)] = find(e.v);
    ComputationGraph out;
    out.collapsed = true;
    std::map<std::size_t, std::size_t> rep;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        std::size_t r = find(i);
        auto [it, fresh] = rep.emplace(r, out.nodes.size());
        if (fresh) out.nodes.push_back({});
        for (auto& m : g.nodes[i]) out.nodes[it->second].push_back(m);
    }
    for (auto& e : g.edges) {
        std::size_t u = rep.at(find(e.u)), v = rep.at(find(e.v));
        if (u == v) continue;
        CgEdge c = e;
        c.u = u;
        c.v = v;
        out.edges.push_back(c);
    }
    return out;
}

std::size_t max_acyclic_path(const ComputationGraph& g) {
    std::vector<std::vector<std::size_t>> adj(g.nodes.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        adj[g.edges[i].u].push_back(i);
        adj[g.edges[i].v].push_back(i);
    }
    std::size_t best = 0;
    std::vector<bool> on(g.nodes.size(), false);
    std::map<std::size_t, int> inst;  // instant -> multiplicity along the path
    std::function<void(std::size_t)> dfs = [&](std::size_t n) {
        on[n] = true;
        if (inst.size() >= 2) best = std::max(best, inst.size());
        for (auto ei : adj[n]) {
            const CgEdge& e = g.edges[ei];
            std::size_t m = e.u == n ? e.v : e.u;
            if (on[m]) continue;
            for (auto t : e.instants) ++inst[t];
            dfs(m);
            for (auto t : e.instants)
                if (--inst[t] == 0) inst.erase(t);
        }
        on[n] = false;
    };
    for (std::size_t n = 0; n < g.nodes.size(); ++n) dfs(n);
    return best;
}

std::vector<Fo> path_formulas(const AndOrGraph& g, const ArenaPath& p) {
    std::vector<Fo> out;
    for (auto [e, a] : p.steps) out.push_back(f_and(g.env_edges.at(e).guard, g.ag_edges.at(a).guard));
    return out;
}

namespace {

// Variable footprint of a step: literals reduced to (vars with pre flag, equality?).
using Footprint = std::set<std::pair<std::vector<Key>, bool>>;

Footprint footprint(const Fo& f) {
    std::vector<Lit> lits;
    f_literals(f, lits);
    Footprint fp;
    for (auto& l : lits) {
        std::vector<Key> ks;
        for (auto& [k, c] : l.atom->e.terms()) ks.push_back(k);
        if (ks.size() >= 2) fp.insert({ks, is_var_equality(l)});
    }
    return fp;
}

}  // namespace

LookbackCheck check_bounded_lookback(const AndOrGraph& g, std::size_t K, std::size_t d, std::size_t budget) {
    // Moves per AND-node, deduplicated by footprint: equal footprints give
    // equal computation graphs.
    struct Move {
        std::size_t env, ag;
        std::uint32_t to;
        Fo f;
    };
    std::vector<std::vector<Move>> moves(g.and_nodes.size());
    for (auto& n : g.and_nodes) {
        std::set<std::pair<Footprint, std::uint32_t>> seen;
        for (auto ei : g.env_out[n.id])
            for (auto ai : g.ag_out[g.env_edges[ei].to]) {
                Fo f = f_and(g.env_edges[ei].guard, g.ag_edges[ai].guard);
                auto key = std::make_pair(footprint(f), g.ag_edges[ai].to);
                if (seen.insert(key).second) moves[n.id].push_back({ei, ai, key.second, f});
            }
    }
    LookbackCheck res;
    std::size_t work = 0;
    for (std::size_t depth = 1; depth <= d; ++depth) {
        ArenaPath path;
        std::vector<Fo> rho;
        std::function<bool(std::uint32_t)> extend = [&](std::uint32_t s) -> bool {
            if (rho.size() == depth) {
                std::size_t m = max_acyclic_path(collapse_equalities(computation_graph(rho)));
                res.max_seen = std::max(res.max_seen, m);
                if (m > K) {
                    res.exceeded = true;
                    res.witness = path;
                    return false;
                }
                return true;
            }
            for (auto& mv : moves[s]) {
                if (++work > budget) {
                    res.budget_hit = true;
                    return false;
                }
                path.steps.push_back({mv.env, mv.ag});
                rho.push_back(mv.f);
                bool go = extend(mv.to);
                path.steps.pop_back();
                rho.pop_back();
                if (!go) return false;
            }
            return true;
        };
        bool complete = true;
        for (auto& n : g.and_nodes) {
            path.start = n.id;
            if (!extend(n.id)) {
                complete = false;
                break;
            }
        }
        if (!complete) break;
        res.depth = depth;
    }
    return res;
}

std::size_t default_lookback_depth(const AndOrGraph& g, std::size_t K) { return 2 * g.and_nodes.size() * (K + 2); }

FragmentReport classify(const SpecProblem& sp, std::optional<std::size_t> depth) {
    FragmentReport r;
    Prop p = sp.effective;
    std::vector<AtomP> atoms = foa(p);
    r.lookback_free = !has_lookback(p);
    bool mc = sp.theory == Theory::LRA, ipc = sp.theory == Theory::LIA;
    for (AtomP a : atoms) {
        AtomShape s = atom_shape(a);
        mc = mc && s.mc;
        ipc = ipc && s.ipc;
        if (s.constant) r.constants.insert(*s.constant);
        if (s.modulus != 0) r.modulus = lcm_z(r.modulus, s.modulus);
    }
    r.mc = mc;
    r.ipc = ipc;
    if (r.lookback_free) {
        r.lookback_k = 0;
        r.lookback_note = "lookback-free";
        return r;
    }
    AndOrGraph g = build_graph(sp);
    // Grow the depth until the observed measure stops changing for a while.
    std::size_t d = depth ? *depth : std::min<std::size_t>(default_lookback_depth(g, 2), 12);
    LookbackCheck full = check_bounded_lookback(g, static_cast<std::size_t>(-1), d);
    LookbackCheck half = check_bounded_lookback(g, static_cast<std::size_t>(-1), std::max<std::size_t>(1, full.depth / 2));
    r.lookback_depth = full.depth;
    r.lookback_k = full.max_seen;
    if (full.max_seen > half.max_seen) {
        r.lookback_exceeded = true;
        r.lookback_note = "dependency chains keep growing with path length (" + std::to_string(half.max_seen) + " at depth " +
                          std::to_string(half.depth) + ", " + std::to_string(full.max_seen) + " at depth " +
                          std::to_string(full.depth) + ")";
    } else {
        r.lookback_note = "proved up to unroll depth " + std::to_string(full.depth);
    }
    if (full.budget_hit) r.lookback_note += "; exploration budget reached";
    return r;
}

std::string report_text(const FragmentReport& r, Theory th) {
    std::ostringstream os;
    os << "theory: " << theory_name(th) << "\n";
    os << "lookback-free: " << (r.lookback_free ? "yes" : "no") << "\n";
    os << "MC: " << (r.mc ? "yes" : "no") << "\n";
    os << "IPC: " << (r.ipc ? "yes" : "no") << "\n";
    os << "constants:";
    for (auto& c : r.constants) os << " " << q_str(c);
    os << "\n";
    if (r.ipc) os << "modulus: " << r.modulus.get_str() << "\n";
    os << "bounded lookback: ";
    if (r.lookback_exceeded)
        os << "no (" << r.lookback_note << ")\n";
    else if (r.lookback_k)
        os << "K = " << *r.lookback_k << " (" << r.lookback_note << ")\n";
    else
        os << "unknown\n";
    os << "termination guarantee: "
       << (r.lookback_free ? "yes (lookback-free)"
           : r.mc          ? "yes (MC)"
           : r.ipc         ? "yes (IPC)"
           : (r.lookback_k && !r.lookback_exceeded) ? "yes (bounded lookback, checked up to the unroll depth)"
                           : "none; bounded realizability only")
       << "\n";
    return os.str();
}

}  // namespace lsynth
