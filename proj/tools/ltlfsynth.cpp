#include "ltlfsynth/fragments.hpp"
#include "ltlfsynth/service.hpp"
#include "ltlfsynth/strategy.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace lsynth;

namespace {

constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

int exit_for(Verdict v) {
    switch (v) {
    case Verdict::Realizable: return 0;
    case Verdict::NotBoundedlyRealizable: return 1;
    case Verdict::Unknown: return 2;
    }
    return 2;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

struct Solved {
    SpecProblem sp;
    AndOrGraph graph;
    WinTable win;
    double t_parse = 0, t_graph = 0, t_win = 0;
};

Solved solve(const std::string& file, std::size_t max_iter, bool strict, bool pre_agent_side) {
    Solved s;
    auto t0 = std::chrono::steady_clock::now();
    s.sp = parse_spec(slurp(file), strict);
    s.t_parse = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    s.graph = build_graph(s.sp, GraphOptions{pre_agent_side});
    s.t_graph = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    s.win = iterate_win(s.graph, WinOptions{max_iter});
    s.t_win = ms_since(t0);
    return s;
}

void print_verdict(const Solved& s) {
    std::cout << "verdict: " << verdict_name(s.win.verdict) << "\n";
    if (s.win.verdict == Verdict::Realizable) std::cout << "K: " << s.win.K << "\n";
    std::cout << "theory: " << theory_name(s.sp.theory) << "\n";
    std::cout << "and-nodes: " << s.graph.and_nodes.size() << "\n";
    std::cout << "or-nodes: " << s.graph.or_nodes.size() << "\n";
    std::cout << "rounds: " << s.win.rounds << "\n";
    if (s.win.fixpoint_index) std::cout << "fixpoint-index: " << *s.win.fixpoint_index << "\n";
    std::size_t win_size = 0;
    for (auto& levels : s.win.per_node)
        for (auto& f : levels) win_size = std::max(win_size, f_size(f));
    std::cout << "max-win-size: " << win_size << "\n";
    std::cout << "time-parse-ms: " << s.t_parse << "\n";
    std::cout << "time-graph-ms: " << s.t_graph << "\n";
    std::cout << "time-win-ms: " << s.t_win << "\n";
    if (s.sp.weak_lookback_rewrite)
        std::cout << "note: top-level lookback atoms were fixed to their instant-0 value\n";
    for (auto& d : s.win.diagnostics) std::cout << "note: " << d << "\n";
}

std::optional<Q> read_value(const std::string& line, Sort sort) {
    std::string t = line;
    t.erase(0, t.find_first_not_of(" \t\r"));
    t.erase(t.find_last_not_of(" \t\r") + 1);
    try {
        Q q = parse_q(t);
        if (sort == Sort::Int && !is_int(q)) return std::nullopt;
        return q;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

int play(const StrategyArtifact& a) {
    PlayState st = init_play(a);
    std::cout << "K: " << a.K << "\n";
    std::cout << "node: " << prop_str(a.graph.and_nodes[st.node].label) << "\n";
    std::string line;
    while (!st.done) {
        Valuation beta;
        for (auto& d : a.env) {
            for (;;) {
                std::cout << "[" << st.k << "] " << d.name << " = " << std::flush;
                if (!std::getline(std::cin, line)) {
                    std::cout << "\naborted\n";
                    return 1;
                }
                auto q = read_value(line, d.sort);
                if (q) {
                    beta[d.id] = *q;
                    break;
                }
                std::cout << "not a" << (d.sort == Sort::Int ? "n integer" : " number") << ", try again\n";
            }
        }
        Response r = respond(a, st, beta);
        for (auto& d : a.agent) std::cout << "[" << st.k << "] " << d.name << " := " << q_str(r.gamma.at(d.id)) << "\n";
        st = r.next;
        std::cout << "node: " << prop_str(a.graph.and_nodes[st.node].label) << "\n";
    }
    std::cout << "trace: " << trace_to_json(st.history) << "\n";
    bool ok = st.history.size() > 0 && eval(st.history, a.property);
    std::cout << (ok ? "satisfied" : "violated") << "\n";
    return ok ? 0 : 1;
}

int run(int argc, char** argv) {
    CLI::App app{"LTLf modulo LRA/LIA reactive synthesis with lookback"};
    app.require_subcommand(1);

    std::string spec_file, out_file, artifact_file, trace_file, dot_file, formula_file, theory = "lra",
                                                                                       adversary = "random";
    std::string host = "127.0.0.1", cors = "*";
    std::size_t max_iter = 50, episodes = 100, depth = 0, ttl = 1800;
    std::uint64_t seed = 1;
    int port = 8080;
    bool strict = false, pre_agent = false;

    auto add_solve_flags = [&](CLI::App* c) {
        c->add_option("spec", spec_file, "spec file")->required();
        c->add_option("--max-iter", max_iter, "Win iteration budget")->capture_default_str();
        c->add_flag("--strict", strict, "reject properties that are not well-formed");
        c->add_flag("--pre-agent-side", pre_agent, "put atoms over lookback agent variables on agent edges");
    };

    auto* check = app.add_subcommand("check", "decide bounded realizability");
    add_solve_flags(check);
    auto* synth = app.add_subcommand("synth", "synthesize a strategy artifact");
    add_solve_flags(synth);
    synth->add_option("--out", out_file, "artifact output file")->required();
    auto* playc = app.add_subcommand("play", "play against a strategy artifact in the terminal");
    playc->add_option("artifact", artifact_file)->required();
    auto* sim = app.add_subcommand("simulate", "simulate episodes against an artifact");
    sim->add_option("artifact", artifact_file)->required();
    sim->add_option("--episodes", episodes)->capture_default_str();
    sim->add_option("--seed", seed)->capture_default_str();
    sim->add_option("--adversary", adversary)->check(CLI::IsMember({"random", "boundary", "both"}))->capture_default_str();
    auto* tc = app.add_subcommand("trace-check", "evaluate a trace against a spec");
    tc->add_option("spec", spec_file)->required();
    tc->add_option("trace", trace_file)->required();
    auto* graph = app.add_subcommand("graph", "export the AND-OR graph");
    graph->add_option("spec", spec_file)->required();
    graph->add_option("--dot", dot_file, "DOT output file (default: stdout)");
    graph->add_option("--json", out_file, "graph JSON output file");
    graph->add_flag("--pre-agent-side", pre_agent);
    auto* frag = app.add_subcommand("fragment", "classify the spec into decidable fragments");
    frag->add_option("spec", spec_file)->required();
    frag->add_option("--depth", depth, "bounded-lookback search depth");
    auto* qec = app.add_subcommand("qe", "eliminate quantifiers from a formula");
    qec->add_option("formula", formula_file)->required();
    qec->add_option("--theory", theory)->check(CLI::IsMember({"lra", "lia"}))->capture_default_str();
    auto* serve = app.add_subcommand("serve", "start the HTTP service");
    serve->add_option("--port", port)->capture_default_str();
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--max-iter", max_iter)->capture_default_str();
    serve->add_option("--session-ttl", ttl, "idle seconds before a session expires")->capture_default_str();
    serve->add_option("--cors-origin", cors)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (*check) {
        Solved s = solve(spec_file, max_iter, strict, pre_agent);
        print_verdict(s);
        return exit_for(s.win.verdict);
    }
    if (*synth) {
        Solved s = solve(spec_file, max_iter, strict, pre_agent);
        print_verdict(s);
        if (s.win.verdict != Verdict::Realizable) {
            std::cerr << "error: no strategy: spec is " << verdict_name(s.win.verdict) << "\n";
            return exit_for(s.win.verdict);
        }
        spit(out_file, save_artifact(make_artifact(s.sp, s.graph, s.win)));
        std::cout << "artifact: " << out_file << "\n";
        return 0;
    }
    if (*playc) return play(load_artifact(slurp(artifact_file)));
    if (*sim) {
        StrategyArtifact a = load_artifact(slurp(artifact_file));
        bool all = true;
        std::vector<std::pair<std::string, Adversary>> modes;
        if (adversary != "boundary") modes.emplace_back("random", Adversary::Random);
        if (adversary != "random") modes.emplace_back("boundary", Adversary::Boundary);
        for (auto& [name, adv] : modes) {
            SimReport r = simulate(a, episodes, seed, adv);
            std::cout << "adversary: " << name << "\n";
            std::cout << "episodes-passed: " << r.passed << "/" << r.episodes << "\n";
            std::cout << r.passed << "/" << r.episodes << " satisfied\n";
            std::cout << "max-length: " << r.max_length << "\n";
            if (r.unfinished) std::cout << "unfinished: " << r.unfinished << "\n";
            if (r.counterexample) std::cout << "counterexample: " << trace_to_json(*r.counterexample) << "\n";
            all = all && r.passed == r.episodes;
        }
        return all ? 0 : 1;
    }
    if (*tc) {
        SpecProblem sp = parse_spec(slurp(spec_file));
        Trace t = parse_trace_json(slurp(trace_file), sp);
        bool ok = eval(t, sp.effective);
        std::cout << "trace-length: " << t.size() << "\n";
        std::cout << (ok ? "satisfied" : "violated") << "\n";
        return ok ? 0 : 1;
    }
    if (*graph) {
        SpecProblem sp = parse_spec(slurp(spec_file));
        AndOrGraph g = build_graph(sp, GraphOptions{pre_agent});
        if (dot_file.empty())
            std::cout << export_dot(g);
        else
            spit(dot_file, export_dot(g));
        if (!out_file.empty()) spit(out_file, graph_to_json(g));
        if (!dot_file.empty()) std::cout << "and-nodes: " << g.and_nodes.size() << "\nor-nodes: " << g.or_nodes.size() << "\n";
        return 0;
    }
    if (*frag) {
        SpecProblem sp = parse_spec(slurp(spec_file));
        FragmentReport r = classify(sp, depth ? std::optional<std::size_t>(depth) : std::nullopt);
        std::cout << report_text(r, sp.theory);
        return 0;
    }
    if (*qec) {
        Scope sc;
        sc.theory = theory == "lia" ? Theory::LIA : Theory::LRA;
        sc.auto_declare = true;
        Fo f = parse_fo(read_sexpr(slurp(formula_file)), sc);
        Fo r = simplify(sc.theory, qe(sc.theory, f));
        std::cout << f_sexpr(r, sc.theory) << "\n";
        return 0;
    }
    if (*serve) {
        ServiceConfig cfg;
        cfg.max_iter = max_iter;
        cfg.session_ttl = std::chrono::seconds(ttl);
        cfg.cors_origin = cors;
        std::cout << "listening on " << host << ":" << port << std::endl;
        if (run_server(host, port, cfg) != 0) {
            std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
            return 1;
        }
        return 0;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const StrategyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        // resource budgets (e.g. graph size) leave the verdict open
        std::cout << "verdict: unknown\nnote: " << e.what() << "\n";
        return 2;
    }
}
