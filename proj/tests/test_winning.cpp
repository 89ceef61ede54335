#include "doctest.h"

#include "ltlfsynth/winning.hpp"

using namespace lsynth;

namespace {

const char* kRunning = R"((spec (theory lra) (env (x real)) (agent (y real))
  (assume (and (G (>= x 0)) (WX (G (<= (- x (pre x)) 2)))))
  (property (X (> (pre y) x)))))";

std::string spec(const char* theory, const std::string& env, const std::string& agent, const std::string& prop) {
    const char* sort = std::string(theory) == "lia" ? "int" : "real";
    std::string s = "(spec (theory " + std::string(theory) + ") (env";
    for (char c : env) s += std::string(" (") + c + " " + sort + ")";
    s += ") (agent";
    for (char c : agent) s += std::string(" (") + c + " " + sort + ")";
    return s + ") (property " + prop + "))";
}

Fo F(const std::string& text, Theory th = Theory::LRA) {
    Scope sc;
    sc.theory = th;
    sc.auto_declare = true;
    return parse_fo(read_sexpr(text), sc);
}

WinTable solve(const std::string& text, std::size_t max_iter = 20, AndOrGraph* out = nullptr) {
    SpecProblem sp = parse_spec(text);
    AndOrGraph g = build_graph(sp);
    WinOptions o;
    o.max_iter = max_iter;
    WinTable w = iterate_win(g, o);
    if (out) *out = g;
    return w;
}

void check_table(const AndOrGraph& g, const WinTable& w) {
    for (auto& n : g.and_nodes) {
        CHECK(w.per_node[n.id].size() == w.levels());
        CHECK(f_is_true(w.at(n.id, 0)) == n.final);
        CHECK((n.final || f_is_false(w.at(n.id, 0))));
        for (std::size_t i = 0; i + 1 < w.levels(); ++i)
            CHECK(is_valid(g.theory, f_implies(w.at(n.id, i), w.at(n.id, i + 1))));
    }
    for (std::size_t i = 0; i < w.levels(); ++i) CHECK(f_free(w.at(g.initial, i)).empty());
    if (w.fixpoint_index)
        for (auto& n : g.and_nodes)
            CHECK(equiv(g.theory, w.at(n.id, *w.fixpoint_index), w.at(n.id, *w.fixpoint_index + 1)));
}

}  // namespace

TEST_CASE("winning regions of the running example") {
    AndOrGraph g;
    WinTable w = solve(kRunning, 20, &g);
    check_table(g, w);
    REQUIRE(w.verdict == Verdict::Realizable);
    CHECK(w.K == 2);
    CHECK(is_valid(Theory::LRA, w.at(g.initial, 2)));
    // s1: the successor of the initial node on x >= 0
    std::uint32_t s1 = g.ag_edges[g.ag_out[g.env_edges[g.env_out[g.initial][0]].to][0]].to;
    REQUIRE(!g.and_nodes[s1].final);
    CHECK(equiv(Theory::LRA, w.at(s1, 1), F("(or (> y (+ x 2)) (< x -2))")));

    std::vector<Fo> win0;
    for (auto& n : g.and_nodes) win0.push_back(w.at(n.id, 0));
    CHECK(equiv(Theory::LRA, pre_image(g, win0, s1), F("(or (> y (+ x 2)) (< x -2))")));
    // psi_2 only admits configurations with x < -2, which no run reaches: it is
    // entered after x >= 0
    for (auto& n : g.and_nodes)
        if (!n.final && n.id != s1 && n.id != g.initial) {
            CHECK(equiv(Theory::LRA, w.at(n.id, 2), F("(< x -2)")));
            CHECK(!is_sat(Theory::LRA, f_and(w.at(n.id, 2), F("(>= x 0)"))));
        }

    // agent-side placement gives the same regions
    GraphOptions fig1;
    fig1.pre_agent_side = true;
    AndOrGraph g1 = build_graph(parse_spec(kRunning), fig1);
    WinTable w1 = iterate_win(g1);
    CHECK(w1.verdict == Verdict::Realizable);
    CHECK(w1.K == 2);
    CHECK(equiv(Theory::LRA, w1.at(s1, 1), w.at(s1, 1)));
}

TEST_CASE("realizability battery") {
    for (const char* th : {"lra", "lia"}) {
        CAPTURE(th);
        CHECK(solve(spec(th, "x", "y", "(= x y)")).verdict == Verdict::Realizable);
        CHECK(solve(spec(th, "x", "y", "(G (= x y))")).verdict == Verdict::Realizable);
        CHECK(solve(spec(th, "x", "y", "(G (= y (pre x)))")).verdict == Verdict::Realizable);
        CHECK(solve(spec(th, "x", "y", "(= (pre y) x)")).verdict == Verdict::Realizable);
        AndOrGraph g;
        WinTable w = solve(spec(th, "x", "y", "(X (= (pre y) x))"), 20, &g);
        check_table(g, w);
        CHECK(w.verdict == Verdict::NotBoundedlyRealizable);
        // Win_1 = Win_0 everywhere
        CHECK(w.fixpoint_index == std::optional<std::size_t>(0));
        CHECK(w.rounds == 1);
    }
}

TEST_CASE("the environment can dodge a delayed equality") {
    // F(x=1) -> XF(pre y = x): whenever x starts at 1 the environment picks
    // each later x after the agent has committed to pre y.
    for (const char* th : {"lra", "lia"}) {
        AndOrGraph g;
        WinTable w = solve(spec(th, "x", "y", "(implies (F (= x 1)) (X (F (= (pre y) x))))"), 20, &g);
        check_table(g, w);
        CHECK(w.verdict == Verdict::NotBoundedlyRealizable);
    }
}

TEST_CASE("theory sensitivity") {
    const char* p = "(G (and (implies (< x 2) (X (> y 1))) (implies (>= x 2) (< y x))))";
    AndOrGraph gi, gr;
    WinTable li = solve(spec("lia", "x", "y", p), 20, &gi);
    WinTable lr = solve(spec("lra", "x", "y", p), 20, &gr);
    check_table(gi, li);
    check_table(gr, lr);
    CHECK(li.verdict == Verdict::NotBoundedlyRealizable);
    // A finite trace cannot end while x < 2, and the environment can keep x < 2.
    CHECK(lr.verdict == Verdict::NotBoundedlyRealizable);

    // Two-instant unrolling: after x < 2 the agent must answer x >= 2 with 1 < y < x.
    const char* q = "(and (implies (< x 2) (X (> y 1))) (implies (>= x 2) (< y x)) "
                    "(WX (implies (>= x 2) (< y x))))";
    WinTable qi = solve(spec("lia", "x", "y", q), 20, &gi);
    WinTable qr = solve(spec("lra", "x", "y", q), 20, &gr);
    check_table(gi, qi);
    check_table(gr, qr);
    CHECK(qi.verdict == Verdict::NotBoundedlyRealizable);
    CHECK(qr.verdict == Verdict::Realizable);
    CHECK(qr.K == 2);
}

TEST_CASE("the counter spec needs unboundedly long strategies") {
    std::string text = R"((spec (theory lia) (env (x int) (u int)) (agent (y int))
      (assume (and (>= u 0) (= x 0) (WX (G (= x (+ (pre x) 1))))))
      (property (and (= y u) (F (= x y)) (X (G (= y (pre y))))))))";
    AndOrGraph g;
    WinTable w = solve(text, 20, &g);
    CHECK(w.verdict == Verdict::Unknown);
    CHECK(w.rounds == 20);
    CHECK(!w.diagnostics.empty());
    check_table(g, w);

    // With a strong X in the assumption the agent ends the trace at once:
    // the negated assumption contains Xw F(...), true on a one-instant trace.
    std::string strong = text;
    strong.replace(strong.find("(WX (G"), 6, "(X (G");
    WinTable ws = solve(strong, 20);
    CHECK(ws.verdict == Verdict::Realizable);
    CHECK(ws.K == 1);
}

TEST_CASE("trivial property") {
    WinTable w = solve(spec("lra", "x", "y", "true"));
    CHECK(w.verdict == Verdict::Realizable);
    CHECK(w.K == 0);
}
