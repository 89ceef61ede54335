#include "doctest.h"
#include "gen.hpp"

#include "ltlfsynth/arena.hpp"
#include "ltlfsynth/theory.hpp"

#include <regex>

using namespace lsynth;
using namespace lsynth::testing;

namespace {

const char* kRunning = R"((spec (theory lra) (env (x real)) (agent (y real))
  (assume (and (G (>= x 0)) (WX (G (<= (- x (pre x)) 2)))))
  (property (X (> (pre y) x)))))";

Scope lra_scope() {
    Scope sc;
    sc.theory = Theory::LRA;
    sc.auto_declare = true;
    return sc;
}

Prop prop(const std::string& s) {
    Scope sc = lra_scope();
    return parse_prop(read_sexpr(s), sc);
}

AtomP atom(const std::string& s) { return foa(prop(s)).at(0); }

bool holds(Prop guard, const std::set<AtomP>& a) {
    return eval_letters(guard, [&](Prop l) { return a.count(l->atom) > 0; });
}

// Every subset of `atoms`.
std::vector<std::set<AtomP>> subsets(const std::vector<AtomP>& atoms) {
    std::vector<std::set<AtomP>> out;
    for (std::size_t m = 0; m < (std::size_t(1) << atoms.size()); ++m) {
        std::set<AtomP> s;
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (m >> i & 1) s.insert(atoms[i]);
        out.push_back(s);
    }
    return out;
}

void check_guards(const AndOrGraph& g, const std::vector<AtomP>& atoms) {
    auto sets = subsets(atoms);
    for (auto& n : g.and_nodes) {
        if (n.final) {
            CHECK(g.env_out[n.id].empty());
            continue;
        }
        for (auto& s : sets) {
            int hits = 0;
            for (auto e : g.env_out[n.id]) hits += holds(g.env_edges[e].guard_prop, s);
            CHECK(hits == 1);
        }
    }
    for (auto& o : g.or_nodes)
        for (auto& s : sets) {
            int hits = 0;
            for (auto e : g.ag_out[o.id]) hits += holds(g.ag_edges[e].guard_prop, s);
            CHECK(hits == 1);
        }
}

// Follows the unique edges matched by sigma; returns the number of steps after
// which the final node is reached, or -1. `labels` receives the visited nodes.
int walk(const AndOrGraph& g, const std::vector<std::set<AtomP>>& sigma, std::vector<std::uint32_t>* nodes = nullptr) {
    std::uint32_t s = g.initial;
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        if (g.and_nodes[s].final) return static_cast<int>(k);
        std::optional<std::uint32_t> o, t;
        for (auto e : g.env_out[s])
            if (holds(g.env_edges[e].guard_prop, sigma[k])) {
                REQUIRE(!o);
                o = g.env_edges[e].to;
            }
        REQUIRE(o);
        for (auto e : g.ag_out[*o])
            if (holds(g.ag_edges[e].guard_prop, sigma[k])) {
                REQUIRE(!t);
                t = g.ag_edges[e].to;
            }
        REQUIRE(t);
        s = *t;
        if (nodes) nodes->push_back(s);
    }
    return g.and_nodes[s].final ? static_cast<int>(sigma.size()) : -1;
}

std::vector<AtomSet> marked(const std::vector<std::set<AtomP>>& sigma, std::size_t len, bool mark_end) {
    std::vector<AtomSet> out;
    for (std::size_t i = 0; i < len; ++i) out.push_back({sigma[i], mark_end && i + 1 == len ? 1 : 0});
    return out;
}

// Walk/progression correspondence in both directions for every sigma of length <= maxlen.
void check_walks(Prop psi, const AndOrGraph& g, std::size_t maxlen) {
    auto atoms = foa(psi);
    auto sets = subsets(atoms);
    std::vector<std::set<AtomP>> sigma;
    std::function<void()> rec = [&] {
        if (!sigma.empty()) {
            std::vector<std::uint32_t> nodes;
            int reached = walk(g, sigma, &nodes);
            int first = -1;
            for (std::size_t l = 1; l <= sigma.size() && first < 0; ++l)
                if (progress_seq(psi, marked(sigma, l, true)) == p_true()) first = static_cast<int>(l);
            // (1) reaching the final node means the consumed prefix is accepted
            // (2) an accepted sigma is matched by exactly one path, ending at the
            //     shortest accepted prefix
            CHECK_MESSAGE(reached == first, prop_str(psi));
            // labels track progression while the trace continues
            for (std::size_t k = 0; k < nodes.size() && (first < 0 || int(k) + 1 < first); ++k) {
                Prop p = progress_seq(psi, marked(sigma, k + 1, false));
                CHECK_MESSAGE(prop_equiv(xnf(p), fix_last(g.and_nodes[nodes[k]].label, false)), prop_str(psi));
            }
        }
        if (sigma.size() == maxlen) return;
        for (auto& s : sets) {
            sigma.push_back(s);
            rec();
            sigma.pop_back();
        }
    };
    rec();
}

bool has_pre(const Fo& f) {
    for (Key k : f_free(f))
        if (key_is_pre(k)) return true;
    return false;
}

void check_shape(const AndOrGraph& g) {
    int finals = 0;
    for (auto& n : g.and_nodes) finals += n.final;
    CHECK(finals <= 1);
    if (g.final_node) CHECK(g.and_nodes[*g.final_node].label == p_true());
    for (std::size_t i = 0; i < g.and_nodes.size(); ++i)
        for (std::size_t j = i + 1; j < g.and_nodes.size(); ++j)
            CHECK(!prop_equiv(g.and_nodes[i].label, g.and_nodes[j].label));
    for (auto& e : g.env_edges) {
        CHECK(e.from < g.and_nodes.size());
        CHECK(e.to < g.or_nodes.size());
    }
    for (auto& e : g.ag_edges) {
        CHECK(e.from < g.or_nodes.size());
        CHECK(e.to < g.and_nodes.size());
    }
    // no lookback on the first move
    for (auto e : g.env_out[g.initial]) {
        CHECK(!has_pre(g.env_edges[e].guard));
        for (auto a : g.ag_out[g.env_edges[e].to]) CHECK(!has_pre(g.ag_edges[a].guard));
    }
}

}  // namespace

TEST_CASE("split_atoms follows the variable sides") {
    VarId x = intern_var("x"), y = intern_var("y");
    std::vector<AtomP> ex4{atom("(< x 0)"), atom("(> (- x (pre x)) 2)"), atom("(> (pre y) x)")};
    auto [ce, ca] = split_atoms(ex4, {x}, {y});
    CHECK(ce.size() == 3);
    CHECK(ca.empty());
    auto [ce2, ca2] = split_atoms(ex4, {x}, {y}, true);
    CHECK(ce2.size() == 2);
    CHECK(ca2 == std::vector<AtomP>{ex4[2]});
    CHECK(split_atoms({atom("(= x y)")}, {x}, {y}).second.size() == 1);
    CHECK(split_atoms({atom("(= y (pre x))")}, {x}, {y}).second.size() == 1);
}

TEST_CASE("graph of the running example") {
    SpecProblem sp = parse_spec(kRunning);
    for (bool fig1 : {false, true}) {
        GraphOptions opt;
        opt.pre_agent_side = fig1;
        AndOrGraph g = build_graph(sp, opt);
        CHECK(g.and_nodes.size() == 4);
        CHECK(g.or_nodes.size() == 6);
        REQUIRE(g.final_node);
        check_shape(g);
        check_guards(g, foa(sp.initial));

        auto fo = [](const char* t) {
            Scope sc = lra_scope();
            return parse_fo(read_sexpr(t), sc);
        };
        auto env_guards = [&](std::uint32_t s) {
            std::vector<Fo> out;
            for (auto e : g.env_out[s]) out.push_back(g.env_edges[e].guard);
            return out;
        };
        auto has_guard = [&](const std::vector<Fo>& gs, const char* want) {
            for (const Fo& f : gs)
                if (equiv(Theory::LRA, f, fo(want))) return true;
            return false;
        };
        auto s0 = env_guards(g.initial);
        CHECK(s0.size() == 2);
        CHECK(has_guard(s0, "(< x 0)"));
        CHECK(has_guard(s0, "(>= x 0)"));

        // psi_2 = F(x<0) or F(x - pre x > 2): the non-final node without pre y
        std::optional<std::uint32_t> n2;
        for (auto& n : g.and_nodes) {
            if (n.final) continue;
            bool pre_y = false;
            for (AtomP a : foa(n.label)) pre_y = pre_y || atom_str(a).find("pre y") != std::string::npos;
            if (!pre_y) n2 = n.id;
        }
        REQUIRE(n2);
        auto s2 = env_guards(*n2);
        CHECK(s2.size() == 2);
        CHECK(has_guard(s2, "(or (< x 0) (> (- x (pre x)) 2))"));
        CHECK(has_guard(s2, "(and (>= x 0) (<= (- x (pre x)) 2))"));

        std::string dot = export_dot(g);
        auto count = [&](const char* re) {
            std::regex r(re);
            return std::distance(std::sregex_iterator(dot.begin(), dot.end(), r), std::sregex_iterator());
        };
        CHECK(count("shape=box") == 4);
        CHECK(count("shape=circle") == 6);
        CHECK(count(" -> ") == static_cast<long>(g.env_edges.size() + g.ag_edges.size()));
        CHECK(export_dot(build_graph(sp, opt)) == dot);
    }
}

TEST_CASE("walks track progression on the running example") {
    SpecProblem sp = parse_spec(kRunning);
    check_walks(sp.initial, build_graph(sp), 4);
    GraphOptions opt;
    opt.pre_agent_side = true;
    check_walks(sp.initial, build_graph(sp, opt), 4);
}

TEST_CASE("trivial and one-atom graphs") {
    VarId x = intern_var("x"), y = intern_var("y");
    AndOrGraph t = build_graph(p_true(), Theory::LRA, {x}, {y});
    CHECK(t.and_nodes.size() == 1);
    CHECK(t.or_nodes.empty());
    CHECK(t.env_edges.empty());
    CHECK(t.final_node == std::optional<std::uint32_t>(0));
    std::string dot = export_dot(t);
    CHECK(std::count(dot.begin(), dot.end(), '[') == 1);

    // G(x=y), built by hand:
    //   s0 = G(x=y)  --true-->  n0
    //   n0 --x=y--> final s1,  n0 --x!=y--> dead s2
    //   s2 --true--> n1 --true--> s2
    Prop eq = prop("(= x y)");
    Prop psi = p_globally(eq);
    AndOrGraph g = build_graph(psi, Theory::LRA, {x}, {y});
    check_shape(g);
    REQUIRE(g.and_nodes.size() == 3);
    CHECK(prop_equiv(g.and_nodes[0].label, xnf(psi)));
    CHECK(g.and_nodes[1].final);
    CHECK(g.and_nodes[2].dead);
    REQUIRE(g.env_edges.size() == 2);
    CHECK(g.env_edges[0].guard_prop == p_true());
    CHECK(g.env_edges[1].from == 2);
    REQUIRE(g.ag_edges.size() == 3);
    std::map<std::uint32_t, Prop> from_n0;
    for (auto e : g.ag_out[0]) from_n0[g.ag_edges[e].to] = g.ag_edges[e].guard_prop;
    CHECK(prop_equiv(from_n0.at(1), eq));
    CHECK(prop_equiv(from_n0.at(2), p_not(eq)));
    CHECK(g.ag_edges[2].from == 1);
    CHECK(g.ag_edges[2].to == 2);
    CHECK(g.c_ag.size() == 1);
    CHECK(f_struct_eq(g.ag_edges[g.ag_out[0][0]].guard, guard_fo(g.ag_edges[g.ag_out[0][0]].guard_prop)));
    check_walks(psi, g, 4);
}

TEST_CASE("ill-formed properties are rejected") {
    SpecProblem sp = parse_spec(kRunning);
    sp.initial = prop("(> (pre y) x)");
    CHECK_THROWS_AS(build_graph(sp), SpecError);
}

TEST_CASE("random properties: guards and walk correspondence") {
    Rng r(314);
    VarId x = intern_var("x"), y = intern_var("y");
    std::vector<std::string> pool{"(< x 0)", "(= x y)", "(> y (pre x))", "(> (pre y) x)", "(<= (- x (pre x)) 2)",
                                  "(>= y 1)"};
    int built = 0;
    for (int i = 0; built < 50 && i < 400; ++i) {
        std::vector<Lit> lits;
        for (int k = 0; k < 3; ++k) {
            Prop a = prop(pool[r.uni(0, static_cast<int>(pool.size()) - 1)]);
            lits.push_back(lit_of(a));
        }
        Prop psi = random_prop(r, lits, 3);
        if (!is_well_formed(psi).ok) continue;
        if (foa(psi).size() > 3) continue;
        AndOrGraph g = build_graph(psi, Theory::LRA, {x}, {y});
        ++built;
        check_shape(g);
        check_guards(g, foa(psi));
        check_walks(psi, g, 3);
    }
    CHECK(built == 50);
}
