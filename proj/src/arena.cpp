#include "ltlfsynth/arena.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lsynth {

std::pair<std::vector<AtomP>, std::vector<AtomP>> split_atoms(const std::vector<AtomP>& atoms,
                                                              const std::vector<VarId>& env,
                                                              const std::vector<VarId>& agent,
                                                              bool pre_agent_side) {
    auto is_agent = [&](VarId v) { return std::find(agent.begin(), agent.end(), v) != agent.end(); };
    (void)env;
    std::vector<AtomP> ce, ca;
    for (AtomP a : atoms) {
        bool env_side = true;
        for (auto& [k, c] : a->e.terms()) {
            if (!is_agent(key_var(k))) continue;
            if (!key_is_pre(k) || pre_agent_side) env_side = false;
        }
        (env_side ? ce : ca).push_back(a);
    }
    return {ce, ca};
}

Fo guard_fo(Prop p) {
    switch (p->kind) {
    case PK::True: return f_true();
    case PK::False: return f_false();
    case PK::Atom:
    case PK::NegAtom: return f_lit(plain_lit(lit_of(p)));
    case PK::And:
    case PK::Or: {
        std::vector<Fo> ks;
        for (Prop k : p->kids) ks.push_back(guard_fo(k));
        return p->kind == PK::And ? f_and(ks) : f_or(ks);
    }
    default: throw std::logic_error("guard with a temporal letter: " + prop_str(p));
    }
}

namespace {

// Residual when the trace ends at the current instant.
Prop at_end(Prop p) {
    switch (p->kind) {
    case PK::Next: return p_false();
    case PK::WeakNext: return p_true();
    case PK::Last: return p_true();
    case PK::NegLast: return p_false();
    case PK::And:
    case PK::Or: {
        std::vector<Prop> ks;
        for (Prop k : p->kids) ks.push_back(at_end(k));
        return p->kind == PK::And ? p_and(ks) : p_or(ks);
    }
    default: return p;
    }
}

}  // namespace

AndOrGraph build_graph(const SpecProblem& sp, const GraphOptions& opt) {
    WellFormed wf = is_well_formed(sp.initial);
    if (!wf.ok)
        throw SpecError(ErrKind::IllFormed, "property is not well-formed: lookback atom " + atom_str(wf.offending) +
                                                " at the initial instant");
    return build_graph(sp.initial, sp.theory, sp.env_ids(), sp.agent_ids(), opt);
}

AndOrGraph build_graph(Prop property, Theory th, const std::vector<VarId>& env, const std::vector<VarId>& agent,
                       const GraphOptions& opt) {
    AndOrGraph g;
    g.theory = th;
    auto [ce, ca] = split_atoms(foa(property), env, agent, opt.pre_agent_side);
    g.c_env = ce;
    g.c_ag = ca;
    g.env = env;
    g.agent = agent;

    Abstraction abs;
    std::map<Bdd::Ref, std::uint32_t> by_label;
    std::deque<std::uint32_t> work;
    auto node_for = [&](Prop label) -> std::uint32_t {
        Prop x = xnf(label);
        Bdd::Ref key = abs.encode(x);
        auto it = by_label.find(key);
        if (it != by_label.end()) return it->second;
        if (g.and_nodes.size() >= opt.max_nodes)
            throw std::runtime_error("AND-OR graph exceeds " + std::to_string(opt.max_nodes) + " nodes");
        std::uint32_t id = static_cast<std::uint32_t>(g.and_nodes.size());
        AndNode n{id, key == Bdd::kTrue ? p_true() : key == Bdd::kFalse ? p_false() : x};
        n.final = key == Bdd::kTrue;
        n.dead = key == Bdd::kFalse;
        if (n.final) g.final_node = id;
        g.and_nodes.push_back(n);
        by_label.emplace(key, id);
        work.push_back(id);
        return id;
    };
    auto add_or = [&](std::uint32_t from, Prop guard) {
        std::uint32_t id = static_cast<std::uint32_t>(g.or_nodes.size());
        g.or_nodes.push_back({id, from});
        g.env_edges.push_back({from, id, guard, guard_fo(guard)});
        return id;
    };
    auto add_ag = [&](std::uint32_t from, Prop guard, std::uint32_t to) {
        g.ag_edges.push_back({from, to, guard, guard_fo(guard)});
    };

    g.initial = node_for(property);
    while (!work.empty()) {
        std::uint32_t s = work.front();
        work.pop_front();
        const AndNode n = g.and_nodes[s];
        if (n.final) continue;
        if (n.dead) {
            add_ag(add_or(s, p_true()), p_true(), s);
            continue;
        }
        Decomposition de = decompose(abs, fix_last(n.label, false), g.c_env);
        for (auto& [prm, sub] : de.pairs) {
            std::uint32_t o = add_or(s, prm);
            Decomposition da = decompose(abs, xnf(sub), g.c_ag);
            for (auto& [prm2, sub2] : da.pairs) {
                std::uint32_t t;
                if (prop_equiv(abs, at_end(sub2), p_true()))
                    t = node_for(p_true());
                else {
                    Prop next = fix_last(rmX(sub2), false);
                    // the trace must go on even though nothing else is required
                    t = node_for(next == p_true() ? p_neglast() : next);
                }
                add_ag(o, prm2, t);
            }
        }
    }
    g.env_out.assign(g.and_nodes.size(), {});
    g.ag_out.assign(g.or_nodes.size(), {});
    for (std::size_t i = 0; i < g.env_edges.size(); ++i) g.env_out[g.env_edges[i].from].push_back(i);
    for (std::size_t i = 0; i < g.ag_edges.size(); ++i) g.ag_out[g.ag_edges[i].from].push_back(i);
    return g;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '"' || c == '\\') o += '\\';
        o += c;
    }
    return o;
}

}  // namespace

std::string export_dot(const AndOrGraph& g) {
    std::ostringstream os;
    os << "digraph arena {\n  rankdir=LR;\n";
    for (auto& n : g.and_nodes) {
        os << "  s" << n.id << " [shape=box";
        if (n.final) os << ", peripheries=2";
        if (n.id == g.initial) os << ", style=bold";
        os << ", label=\"s" << n.id << ": " << dot_escape(prop_str(n.label)) << "\"];\n";
    }
    for (auto& n : g.or_nodes) os << "  n" << n.id << " [shape=circle, label=\"n" << n.id << "\"];\n";
    for (auto& e : g.env_edges)
        os << "  s" << e.from << " -> n" << e.to << " [label=\"" << dot_escape(prop_str(e.guard_prop)) << "\"];\n";
    for (auto& e : g.ag_edges)
        os << "  n" << e.from << " -> s" << e.to << " [style=dashed, label=\"" << dot_escape(prop_str(e.guard_prop))
           << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace lsynth
