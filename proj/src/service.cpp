#include "ltlfsynth/service.hpp"

#include "ltlfsynth/fragments.hpp"

#include "httplib.h"
#include "json.hpp"

#include <map>
#include <mutex>
#include <random>
#include <sstream>

namespace lsynth {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct SpecRecord {
    std::string id;
    SpecProblem sp;
    AndOrGraph graph;
    WinTable win;
    std::optional<StrategyArtifact> artifact;
    json summary;
};

struct Session {
    std::mutex mu;
    std::string id;
    std::shared_ptr<const SpecRecord> spec;
    PlayState state;
    Clock::time_point created, last_used;
};

json decls(const std::vector<VarDecl>& ds) {
    json out = json::array();
    for (auto& d : ds) out.push_back({{"name", d.name}, {"sort", d.sort == Sort::Int ? "int" : "real"}});
    return out;
}

json valuation(const Valuation& v) {
    json o = json::object();
    for (auto& [id, q] : v) o[var_name(id)] = q_str(q);
    return o;
}

json trace_rows(const Trace& t) {
    json rows = json::array();
    for (auto& s : t.steps) rows.push_back(valuation(s));
    return rows;
}

json fragment_json(const FragmentReport& r, Theory th) {
    json c = json::array();
    for (auto& q : r.constants) c.push_back(q_str(q));
    json j = {{"lookbackFree", r.lookback_free},
              {"mc", r.mc},
              {"ipc", r.ipc},
              {"constants", c},
              {"modulus", r.modulus.get_str()},
              {"lookbackDepth", r.lookback_depth},
              {"lookbackExceeded", r.lookback_exceeded},
              {"note", r.lookback_note},
              {"text", report_text(r, th)}};
    if (r.lookback_k) j["lookbackK"] = *r.lookback_k;
    return j;
}

void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void fail(httplib::Response& res, int status, const std::string& msg) { reply(res, status, {{"error", msg}}); }

}  // namespace

struct ServiceState {
    ServiceConfig cfg;
    // The logic layer hash-conses into process-wide tables; every call into it
    // goes through this lock.
    std::mutex engine;
    mutable std::mutex maps;
    std::map<std::string, std::shared_ptr<const SpecRecord>> specs;
    std::map<std::string, std::shared_ptr<Session>> sessions;
    std::mt19937_64 ids{std::random_device{}()};

    std::string fresh_id(const char* prefix) {
        std::ostringstream os;
        os << prefix << std::hex << ids();
        return os.str();
    }

    std::shared_ptr<const SpecRecord> find_spec(const std::string& id) const {
        std::lock_guard lk(maps);
        auto it = specs.find(id);
        return it == specs.end() ? nullptr : it->second;
    }

    std::shared_ptr<Session> find_session(const std::string& id) const {
        std::lock_guard lk(maps);
        auto it = sessions.find(id);
        return it == sessions.end() ? nullptr : it->second;
    }

    // Caller holds the session lock and the engine lock.
    json snapshot(const Session& s) const {
        const SpecRecord& r = *s.spec;
        const StrategyArtifact& a = *r.artifact;
        const PlayState& st = s.state;
        json j = {{"sessionId", s.id},
                  {"specId", r.id},
                  {"K", a.K},
                  {"k", st.k},
                  {"node", st.node},
                  {"nodeLabel", prop_str(a.graph.and_nodes[st.node].label)},
                  {"final", a.graph.and_nodes[st.node].final},
                  {"done", st.done},
                  {"trace", trace_rows(st.history)}};
        if (st.done && st.history.size() > 0) j["satisfied"] = eval(st.history, a.property);
        return j;
    }

    void post_spec(const httplib::Request& req, httplib::Response& res) {
        auto rec = std::make_shared<SpecRecord>();
        try {
            std::lock_guard lk(engine);
            rec->sp = parse_spec(req.body);
            rec->graph = build_graph(rec->sp);
            rec->win = iterate_win(rec->graph, WinOptions{cfg.max_iter});
            if (rec->win.verdict == Verdict::Realizable) rec->artifact = make_artifact(rec->sp, rec->graph, rec->win);
            FragmentReport fr = classify(rec->sp);
            rec->summary = {{"verdict", verdict_name(rec->win.verdict)},
                            {"theory", theory_name(rec->sp.theory)},
                            {"env", decls(rec->sp.env)},
                            {"agent", decls(rec->sp.agent)},
                            {"rounds", rec->win.rounds},
                            {"diagnostics", rec->win.diagnostics},
                            {"graph",
                             {{"andNodes", rec->graph.and_nodes.size()},
                              {"orNodes", rec->graph.or_nodes.size()},
                              {"envEdges", rec->graph.env_edges.size()},
                              {"agentEdges", rec->graph.ag_edges.size()},
                              {"initial", rec->graph.initial},
                              {"initialLabel", prop_str(rec->graph.and_nodes[rec->graph.initial].label)}}},
                            {"fragment", fragment_json(fr, rec->sp.theory)}};
            if (rec->win.verdict == Verdict::Realizable) rec->summary["K"] = rec->win.K;
            if (rec->win.fixpoint_index) rec->summary["fixpointIndex"] = *rec->win.fixpoint_index;
        } catch (const SpecError& e) {
            reply(res, 400, {{"error", e.what()}, {"line", e.line}, {"col", e.col}});
            return;
        }
        {
            std::lock_guard lk(maps);
            rec->id = fresh_id("spec-");
            specs[rec->id] = rec;
        }
        rec->summary["specId"] = rec->id;
        reply(res, 200, rec->summary);
    }

    void get_graph(const httplib::Request& req, httplib::Response& res) {
        auto rec = find_spec(req.matches[1]);
        if (!rec) return fail(res, 404, "unknown spec");
        std::string body;
        {
            std::lock_guard lk(engine);
            body = graph_to_json(rec->graph);
        }
        res.status = 200;
        res.set_content(body, "application/json");
    }

    void post_session(const httplib::Request& req, httplib::Response& res) {
        auto rec = find_spec(req.matches[1]);
        if (!rec) return fail(res, 404, "unknown spec");
        if (!rec->artifact)
            return fail(res, 409, std::string("spec is not realizable (") + verdict_name(rec->win.verdict) + ")");
        auto s = std::make_shared<Session>();
        s->spec = rec;
        s->created = s->last_used = Clock::now();
        {
            std::lock_guard lk(maps);
            s->id = fresh_id("session-");
            sessions[s->id] = s;
        }
        std::lock_guard sl(s->mu);
        std::lock_guard el(engine);
        s->state = init_play(*rec->artifact);
        reply(res, 200, snapshot(*s));
    }

    void get_session(const httplib::Request& req, httplib::Response& res) {
        auto s = find_session(req.matches[1]);
        if (!s) return fail(res, 404, "unknown session");
        std::lock_guard sl(s->mu);
        s->last_used = Clock::now();
        std::lock_guard el(engine);
        reply(res, 200, snapshot(*s));
    }

    void post_move(const httplib::Request& req, httplib::Response& res) {
        auto s = find_session(req.matches[1]);
        if (!s) return fail(res, 404, "unknown session");
        std::lock_guard sl(s->mu);
        s->last_used = Clock::now();
        if (s->state.done) return fail(res, 410, "session is done");
        const StrategyArtifact& a = *s->spec->artifact;

        json body = json::parse(req.body, nullptr, false);
        if (!body.is_object()) return fail(res, 400, "body must be a JSON object of environment values");
        Valuation beta;
        for (auto& [name, v] : body.items()) {
            auto d = std::find_if(a.env.begin(), a.env.end(), [&](const VarDecl& x) { return x.name == name; });
            if (d == a.env.end()) return fail(res, 400, "not an environment variable: " + name);
            std::string text;
            if (v.is_string())
                text = v.get<std::string>();
            else if (v.is_number_integer())
                text = v.dump();
            else
                return fail(res, 400, "value of " + name + " must be an exact number string");
            Q q;
            try {
                q = parse_q(text);
            } catch (const std::invalid_argument& e) {
                return fail(res, 400, e.what());
            }
            if (d->sort == Sort::Int && !is_int(q)) return fail(res, 400, name + " must be an integer");
            beta[d->id] = q;
        }
        for (auto& d : a.env)
            if (!beta.count(d.id)) return fail(res, 400, "missing value for " + d.name);

        std::lock_guard el(engine);
        Response r;
        std::string win_text;
        std::size_t level = a.K - 1 - s->state.k;
        try {
            r = respond(a, s->state, beta);
            if (!a.graph.and_nodes[s->state.node].final)
                win_text = f_str(step_obligation(a, s->state, r.agent_edge));
        } catch (const StrategyError& e) {
            return fail(res, 500, e.what());
        }
        s->state = r.next;
        json j = snapshot(*s);
        j["agent"] = valuation(r.gamma);
        j["env"] = valuation(beta);
        if (!win_text.empty()) {
            j["winFormula"] = win_text;
            j["winLevel"] = level;
        }
        reply(res, 200, j);
    }
};

Service::Service(ServiceConfig cfg) : st_(std::make_unique<ServiceState>()) { st_->cfg = std::move(cfg); }

Service::~Service() = default;

std::size_t Service::expire_sessions() {
    auto now = Clock::now();
    std::lock_guard lk(st_->maps);
    std::size_t n = 0;
    for (auto it = st_->sessions.begin(); it != st_->sessions.end();) {
        std::unique_lock sl(it->second->mu, std::try_to_lock);
        // a session busy in a request is not idle
        if (sl.owns_lock() && now - it->second->last_used > st_->cfg.session_ttl) {
            sl.unlock();
            it = st_->sessions.erase(it);
            ++n;
        } else {
            ++it;
        }
    }
    return n;
}

std::size_t Service::session_count() const {
    std::lock_guard lk(st_->maps);
    return st_->sessions.size();
}

void Service::install(httplib::Server& srv) {
    ServiceState* st = st_.get();
    srv.set_default_headers({{"Access-Control-Allow-Origin", st->cfg.cors_origin},
                             {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                             {"Access-Control-Allow-Headers", "Content-Type"}});
    srv.set_pre_routing_handler([this](const httplib::Request&, httplib::Response&) {
        expire_sessions();
        return httplib::Server::HandlerResponse::Unhandled;
    });
    srv.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    srv.Post("/specs", [st](const httplib::Request& q, httplib::Response& r) { st->post_spec(q, r); });
    srv.Get(R"(/specs/([^/]+)/graph)", [st](const httplib::Request& q, httplib::Response& r) { st->get_graph(q, r); });
    srv.Post(R"(/specs/([^/]+)/sessions)",
             [st](const httplib::Request& q, httplib::Response& r) { st->post_session(q, r); });
    srv.Get(R"(/sessions/([^/]+))", [st](const httplib::Request& q, httplib::Response& r) { st->get_session(q, r); });
    srv.Post(R"(/sessions/([^/]+)/move)",
             [st](const httplib::Request& q, httplib::Response& r) { st->post_move(q, r); });
    srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string msg = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            msg = e.what();
        } catch (...) {
        }
        fail(res, 500, msg);
    });
}

int run_server(const std::string& host, int port, const ServiceConfig& cfg) {
    httplib::Server srv;
    Service svc(cfg);
    svc.install(srv);
    return srv.listen(host, port) ? 0 : 1;
}

}  // namespace lsynth
