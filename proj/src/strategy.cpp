#include "ltlfsynth/strategy.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <set>

namespace lsynth {

using nlohmann::json;

Scope StrategyArtifact::scope() const {
    Scope sc;
    sc.theory = theory;
    sc.allow_last = true;
    for (auto& d : env) sc.vars[d.name] = d.sort;
    for (auto& d : agent) sc.vars[d.name] = d.sort;
    return sc;
}

SpecProblem StrategyArtifact::problem() const {
    SpecProblem sp;
    sp.theory = theory;
    sp.env = env;
    sp.agent = agent;
    sp.goal = sp.effective = sp.initial = property;
    return sp;
}

StrategyArtifact make_artifact(const SpecProblem& sp, AndOrGraph g, WinTable w) {
    if (w.verdict != Verdict::Realizable) throw StrategyError(std::string("no strategy: verdict is ") + verdict_name(w.verdict));
    StrategyArtifact a;
    a.theory = sp.theory;
    a.env = sp.env;
    a.agent = sp.agent;
    a.property = sp.initial;
    a.K = w.K;
    a.graph = std::move(g);
    a.win = std::move(w);
    return a;
}

StrategyArtifact synthesize(const SpecProblem& sp, const WinOptions& opt, const GraphOptions& gopt) {
    AndOrGraph g = build_graph(sp, gopt);
    WinTable w = iterate_win(g, opt);
    return make_artifact(sp, std::move(g), std::move(w));
}

namespace {

const char* sort_name(Sort s) { return s == Sort::Int ? "int" : "real"; }

json decls_json(const std::vector<VarDecl>& ds) {
    json out = json::array();
    for (auto& d : ds) out.push_back({{"name", d.name}, {"sort", sort_name(d.sort)}});
    return out;
}

std::vector<VarDecl> decls_of(const json& j, Theory th) {
    std::vector<VarDecl> out;
    for (auto& d : j) {
        VarDecl v;
        v.name = d.at("name").get<std::string>();
        std::string s = d.value("sort", th == Theory::LIA ? "int" : "real");
        if (s != "int" && s != "real") throw StrategyError("artifact: unknown sort '" + s + "'");
        v.sort = s == "int" ? Sort::Int : Sort::Real;
        v.id = intern_var(v.name);
        out.push_back(v);
    }
    return out;
}

std::vector<Key> keys_of(const std::vector<VarDecl>& ds) {
    std::vector<Key> out;
    for (auto& d : ds) out.push_back(cur_key(d.id));
    return out;
}

}  // namespace

namespace {

json graph_doc(const AndOrGraph& g, const WinTable* win, std::size_t K) {
    json j;
    j["initial"] = g.initial;
    j["and_nodes"] = json::array();
    for (auto& n : g.and_nodes) {
        json node = {{"id", n.id}, {"label", prop_sexpr(n.label)}, {"final", n.final}};
        if (win) {
            json levels = json::array();
            for (std::size_t i = 0; i <= K; ++i) levels.push_back(f_sexpr(win->at(n.id, i), g.theory));
            node["win"] = levels;
        }
        j["and_nodes"].push_back(node);
    }
    j["or_nodes"] = json::array();
    for (auto& o : g.or_nodes) j["or_nodes"].push_back(o.id);
    auto edges = [&](const std::vector<GraphEdge>& es) {
        json out = json::array();
        for (auto& e : es) out.push_back({{"from", e.from}, {"to", e.to}, {"guard", prop_sexpr(e.guard_prop)}});
        return out;
    };
    j["env_edges"] = edges(g.env_edges);
    j["agent_edges"] = edges(g.ag_edges);
    return j;
}

}  // namespace

std::string graph_to_json(const AndOrGraph& g) { return graph_doc(g, nullptr, 0).dump(2) + "\n"; }

std::string save_artifact(const StrategyArtifact& a) {
    json j;
    j["version"] = 1;
    j["theory"] = theory_name(a.theory);
    j["env"] = decls_json(a.env);
    j["agent"] = decls_json(a.agent);
    j["property"] = prop_sexpr(a.property);
    j["K"] = a.K;
    j.update(graph_doc(a.graph, &a.win, a.K));
    return j.dump(2) + "\n";
}

StrategyArtifact load_artifact(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw StrategyError(std::string("artifact: parse error: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("version", 0) != 1) throw StrategyError("artifact: unsupported version");
        StrategyArtifact a;
        std::string th = j.at("theory").get<std::string>();
        if (th != "lra" && th != "lia") throw StrategyError("artifact: unknown theory '" + th + "'");
        a.theory = th == "lia" ? Theory::LIA : Theory::LRA;
        a.env = decls_of(j.at("env"), a.theory);
        a.agent = decls_of(j.at("agent"), a.theory);
        a.K = j.at("K").get<std::size_t>();
        Scope sc = a.scope();
        auto prop = [&](const json& s) { return parse_prop(read_sexpr(s.get<std::string>()), sc); };
        auto fo = [&](const json& s) { return parse_fo(read_sexpr(s.get<std::string>()), sc); };
        a.property = prop(j.at("property"));

        AndOrGraph& g = a.graph;
        g.theory = a.theory;
        for (auto& d : a.env) g.env.push_back(d.id);
        for (auto& d : a.agent) g.agent.push_back(d.id);
        g.initial = j.at("initial").get<std::uint32_t>();
        auto& nodes = j.at("and_nodes");
        a.win.per_node.assign(nodes.size(), {});
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            auto& n = nodes[i];
            if (n.at("id").get<std::size_t>() != i) throw StrategyError("artifact: AND-node ids must be 0..n-1 in order");
            AndNode an{static_cast<std::uint32_t>(i), prop(n.at("label"))};
            an.final = n.at("final").get<bool>();
            an.dead = an.label == p_false();
            if (an.final) g.final_node = an.id;
            g.and_nodes.push_back(an);
            auto& win = n.at("win");
            if (win.size() != a.K + 1) throw StrategyError("artifact: node " + std::to_string(i) + " needs K+1 Win levels");
            for (auto& f : win) a.win.per_node[i].push_back(fo(f));
        }
        auto& ors = j.at("or_nodes");
        for (std::size_t i = 0; i < ors.size(); ++i) {
            if (ors[i].get<std::size_t>() != i) throw StrategyError("artifact: OR-node ids must be 0..n-1 in order");
            g.or_nodes.push_back({static_cast<std::uint32_t>(i), 0});
        }
        auto edges = [&](const json& es, std::vector<GraphEdge>& out, std::size_t nfrom, std::size_t nto) {
            for (auto& e : es) {
                Prop gp = prop(e.at("guard"));
                GraphEdge ge{e.at("from").get<std::uint32_t>(), e.at("to").get<std::uint32_t>(), gp, guard_fo(gp)};
                if (ge.from >= nfrom || ge.to >= nto) throw StrategyError("artifact: edge endpoint out of range");
                out.push_back(ge);
            }
        };
        edges(j.at("env_edges"), g.env_edges, g.and_nodes.size(), g.or_nodes.size());
        edges(j.at("agent_edges"), g.ag_edges, g.or_nodes.size(), g.and_nodes.size());
        if (g.initial >= g.and_nodes.size()) throw StrategyError("artifact: initial node out of range");
        for (auto& e : g.env_edges) g.or_nodes[e.to].from = e.from;
        g.env_out.assign(g.and_nodes.size(), {});
        g.ag_out.assign(g.or_nodes.size(), {});
        for (std::size_t i = 0; i < g.env_edges.size(); ++i) g.env_out[g.env_edges[i].from].push_back(i);
        for (std::size_t i = 0; i < g.ag_edges.size(); ++i) g.ag_out[g.ag_edges[i].from].push_back(i);
        auto [ce, ca] = split_atoms(foa(a.property), g.env, g.agent);
        g.c_env = ce;
        g.c_ag = ca;
        a.win.verdict = Verdict::Realizable;
        a.win.K = a.K;
        return a;
    } catch (const json::exception& e) {
        throw StrategyError(std::string("artifact: malformed document: ") + e.what());
    } catch (const SpecError& e) {
        throw StrategyError(std::string("artifact: bad formula: ") + e.what());
    }
}

bool artifact_equal(const StrategyArtifact& a, const StrategyArtifact& b) {
    auto same_decls = [](const std::vector<VarDecl>& x, const std::vector<VarDecl>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].name != y[i].name || x[i].sort != y[i].sort) return false;
        return true;
    };
    if (a.theory != b.theory || a.K != b.K || a.property != b.property || !same_decls(a.env, b.env) ||
        !same_decls(a.agent, b.agent))
        return false;
    const AndOrGraph &g = a.graph, &h = b.graph;
    if (g.initial != h.initial || g.and_nodes.size() != h.and_nodes.size() || g.or_nodes.size() != h.or_nodes.size() ||
        g.env_edges.size() != h.env_edges.size() || g.ag_edges.size() != h.ag_edges.size())
        return false;
    for (std::size_t i = 0; i < g.and_nodes.size(); ++i) {
        if (g.and_nodes[i].label != h.and_nodes[i].label || g.and_nodes[i].final != h.and_nodes[i].final) return false;
        for (std::size_t l = 0; l <= a.K; ++l)
            if (f_sexpr(a.win.at(i, l), a.theory) != f_sexpr(b.win.at(i, l), b.theory)) return false;
    }
    auto same_edges = [](const std::vector<GraphEdge>& x, const std::vector<GraphEdge>& y) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i].from != y[i].from || x[i].to != y[i].to || x[i].guard_prop != y[i].guard_prop) return false;
        return true;
    };
    return same_edges(g.env_edges, h.env_edges) && same_edges(g.ag_edges, h.ag_edges);
}

PlayState init_play(const StrategyArtifact& a) {
    PlayState st;
    st.node = a.graph.initial;
    st.done = a.graph.and_nodes[st.node].final;
    st.history.theory = a.theory;
    return st;
}

namespace {

// eta_k: current environment values and the previous instant under pre-keys.
Assignment eta(const StrategyArtifact& a, const PlayState& st, const Valuation& beta) {
    Assignment out;
    for (auto& d : a.env) out[cur_key(d.id)] = beta.at(d.id);
    if (st.prev)
        for (auto& [v, q] : *st.prev) out[pre_key(v)] = q;
    return out;
}

void check_beta(const StrategyArtifact& a, const Valuation& beta) {
    for (auto& d : a.env) {
        auto it = beta.find(d.id);
        if (it == beta.end()) throw StrategyError("missing value for environment variable '" + d.name + "'");
        if (d.sort == Sort::Int && !is_int(it->second))
            throw StrategyError("non-integer value for '" + d.name + "'");
    }
    for (auto& [v, q] : beta) {
        bool known = std::any_of(a.env.begin(), a.env.end(), [&](const VarDecl& d) { return d.id == v; });
        if (!known) throw StrategyError("'" + var_name(v) + "' is not an environment variable");
    }
}

bool holds(const Fo& f, const Assignment& env) {
    return f_eval(f, [&](Key k) -> std::optional<Q> {
        auto it = env.find(k);
        if (it == env.end()) return std::nullopt;
        return it->second;
    });
}

}  // namespace

Fo step_obligation(const StrategyArtifact& a, const PlayState& st, std::size_t agent_edge) {
    const GraphEdge& e = a.graph.ag_edges.at(agent_edge);
    // pi|_{k+1} in the 1-based prefix notation: Win_{K-(k+1)} at the target
    if (st.k >= a.K) throw StrategyError("internal: run exceeded K steps without reaching the final node");
    std::size_t level = a.K - st.k - 1;
    return f_and(e.guard, a.win.at(e.to, level));
}

Response respond(const StrategyArtifact& a, const PlayState& st, const Valuation& beta) {
    check_beta(a, beta);
    const AndOrGraph& g = a.graph;
    Response r;
    r.next = st;
    if (g.and_nodes[st.node].final) {
        // nothing left to satisfy
        for (auto& d : a.agent) r.gamma[d.id] = Q(0);
    } else {
        Assignment h = eta(a, st, beta);
        std::optional<std::size_t> ei;
        for (auto e : g.env_out[st.node])
            if (holds(g.env_edges[e].guard, h)) {
                ei = e;
                break;
            }
        if (!ei) throw StrategyError("internal: no applicable environment edge at node " + std::to_string(st.node));
        std::uint32_t o = g.env_edges[*ei].to;
        std::vector<Key> ys = keys_of(a.agent);
        std::optional<Assignment> w;
        for (auto ai : g.ag_out[o]) {
            w = witness(a.theory, step_obligation(a, st, ai), h, ys);
            if (w) {
                r.agent_edge = ai;
                break;
            }
        }
        if (!w) throw StrategyError("internal: no satisfiable agent branch at node " + std::to_string(st.node));
        r.env_edge = *ei;
        for (auto& d : a.agent) r.gamma[d.id] = w->at(cur_key(d.id));
        r.next.node = g.ag_edges[r.agent_edge].to;
    }
    Valuation step = beta;
    for (auto& [v, q] : r.gamma) step[v] = q;
    r.next.history.steps.push_back(step);
    r.next.prev = step;
    r.next.k = st.k + 1;
    r.next.done = g.and_nodes[r.next.node].final;
    return r;
}

namespace {

struct EnvSampler {
    const StrategyArtifact& a;
    Adversary adv;
    std::mt19937_64 rng;
    std::vector<Q> consts;
    Q lo, hi;

    EnvSampler(const StrategyArtifact& art, Adversary ad, std::uint64_t seed) : a(art), adv(ad), rng(seed) {
        std::set<Q> cs{Q(0)};
        for (AtomP at : foa(a.property)) {
            // constants of single-variable views: c / coefficient for each variable
            Q c = at->e.constant();
            cs.insert(-c);
            for (auto& [k, coef] : at->e.terms()) cs.insert(-c / coef);
        }
        consts.assign(cs.begin(), cs.end());
        lo = consts.front() - 5;
        hi = consts.back() + 5;
    }

    Q uniform() {
        bool lia = a.theory == Theory::LIA;
        std::int64_t den = lia ? 1 : 4;
        Z span = Z((hi - lo) * den);
        std::uniform_int_distribution<long> d(0, span.get_si());
        return lo + Q(Z(d(rng)), Z(den));
    }

    Q boundary(const std::optional<Valuation>& prev) {
        std::vector<Q> cand;
        std::vector<Q> deltas{Q(0), Q(1), Q(-1)};
        if (a.theory == Theory::LRA) {
            deltas.push_back(Q(1, 2));
            deltas.push_back(Q(-1, 2));
        }
        for (const Q& c : consts)
            for (const Q& d : deltas) cand.push_back(c + d);
        if (prev)
            for (auto& [v, q] : *prev)
                for (const Q& c : consts)
                    for (const Q& d : deltas) cand.push_back(q + c + d);
        std::vector<Q> ok;
        for (auto& q : cand)
            if (a.theory == Theory::LRA || is_int(q)) ok.push_back(q);
        std::uniform_int_distribution<std::size_t> d(0, ok.size() - 1);
        return ok[d(rng)];
    }

    Valuation next(const std::optional<Valuation>& prev) {
        Valuation v;
        for (auto& d : a.env) v[d.id] = adv == Adversary::Random ? uniform() : boundary(prev);
        return v;
    }
};

}  // namespace

SimReport simulate(const StrategyArtifact& a, std::size_t episodes, std::uint64_t seed, Adversary adv) {
    SimReport rep;
    SpecProblem sp = a.problem();
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        std::seed_seq ss{seed, static_cast<std::uint64_t>(ep)};
        std::array<std::uint32_t, 2> words{};
        ss.generate(words.begin(), words.end());
        EnvSampler env(a, adv, (std::uint64_t(words[0]) << 32) | words[1]);
        PlayState st = init_play(a);
        bool crashed = false;
        // a trace has at least one instant
        try {
            do {
                st = respond(a, st, env.next(st.prev)).next;
            } while (!st.done && st.k < a.K);
        } catch (const StrategyError&) {
            crashed = true;
        }
        ++rep.episodes;
        rep.max_length = std::max(rep.max_length, st.history.size());
        bool ok = !crashed && st.done && !st.history.steps.empty() && st.history.size() <= std::max<std::size_t>(a.K, 1) && eval(st.history, a.property);
        if (!st.done) ++rep.unfinished;
        if (ok) {
            ++rep.passed;
        } else {
            ++rep.failed;
            if (!rep.counterexample) rep.counterexample = st.history;
        }
    }
    return rep;
}

}  // namespace lsynth
