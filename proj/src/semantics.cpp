#include "ltlfsynth/semantics.hpp"

#include "json.hpp"

#include <stdexcept>

namespace lsynth {

std::optional<Q> trace_value(const Trace& t, std::size_t i, Key k) {
    if (i >= t.size()) throw std::out_of_range("instant out of range");
    if (key_is_pre(k)) {
        if (i == 0) return std::nullopt;
        --i;
    }
    auto it = t.steps[i].find(key_var(k));
    if (it == t.steps[i].end()) throw std::invalid_argument("trace has no value for " + var_name(key_var(k)));
    return it->second;
}

std::optional<Q> eval_term(const LinExpr& e, const Trace& t, std::size_t i) {
    if (i >= t.size()) throw std::out_of_range("instant out of range");
    return e.eval([&](Key k) { return trace_value(t, i, k); });
}

bool eval(const Trace& t, Prop p, std::size_t i) {
    const std::size_t n = t.size();
    switch (p->kind) {
    case PK::True: return true;
    case PK::False: return false;
    case PK::Atom:
    case PK::NegAtom: {
        auto v = eval_atom(p->atom, [&](Key k) { return trace_value(t, i, k); });
        if (!v) return p->atom->weak == (p->kind == PK::Atom);
        return *v == (p->kind == PK::Atom);
    }
    case PK::Last: return i + 1 == n;
    case PK::NegLast: return i + 1 < n;
    case PK::And:
        for (Prop k : p->kids)
            if (!eval(t, k, i)) return false;
        return true;
    case PK::Or:
        for (Prop k : p->kids)
            if (eval(t, k, i)) return true;
        return false;
    case PK::Next: return i + 1 < n && eval(t, p->kids[0], i + 1);
    case PK::WeakNext: return i + 1 == n || eval(t, p->kids[0], i + 1);
    case PK::Until:
        for (std::size_t j = i; j < n; ++j) {
            if (eval(t, p->kids[1], j)) return true;
            if (!eval(t, p->kids[0], j)) return false;
        }
        return false;
    case PK::Release:
        for (std::size_t j = i; j < n; ++j) {
            if (!eval(t, p->kids[1], j)) return false;
            if (eval(t, p->kids[0], j)) return true;
        }
        return true;
    }
    return false;
}

namespace {
Prop last_value(bool want_last, int marker) {
    if (marker < 0) return want_last ? p_last() : p_neglast();
    return (marker == 1) == want_last ? p_true() : p_false();
}
}  // namespace

Prop progress(Prop p, const AtomSet& a) {
    switch (p->kind) {
    case PK::True:
    case PK::False: return p;
    case PK::Atom: return a.atoms.count(p->atom) ? p_true() : p_false();
    case PK::NegAtom: return a.atoms.count(p->atom) ? p_false() : p_true();
    case PK::Last: return last_value(true, a.last);
    case PK::NegLast: return last_value(false, a.last);
    case PK::And:
    case PK::Or: {
        std::vector<Prop> ks;
        for (Prop k : p->kids) ks.push_back(progress(k, a));
        return p->kind == PK::And ? p_and(ks) : p_or(ks);
    }
    case PK::Next: return p_and(p->kids[0], last_value(false, a.last));
    case PK::WeakNext: return p_or(p->kids[0], last_value(true, a.last));
    case PK::Until:
        return p_or(progress(p->kids[1], a), p_and(progress(p->kids[0], a), p_and(p, last_value(false, a.last))));
    case PK::Release:
        return p_and(progress(p->kids[1], a), p_or(progress(p->kids[0], a), p_or(p, last_value(true, a.last))));
    }
    return p;
}

Prop progress_seq(Prop p, const std::vector<AtomSet>& seq) {
    for (auto& a : seq) p = progress(p, a);
    return p;
}

std::vector<AtomSet> seq_of_trace(Prop p, const Trace& t) {
    std::vector<AtomP> atoms = foa(p);
    std::vector<AtomSet> out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        AtomSet a;
        for (AtomP at : atoms) {
            if (i == 0 && at->has_pre()) continue;
            auto v = eval_atom(at, [&](Key k) { return trace_value(t, i, k); });
            if (v && *v) a.atoms.insert(at);
        }
        a.last = i + 1 == t.size() ? 1 : 0;
        out.push_back(std::move(a));
    }
    return out;
}

bool eval_seq(const std::vector<AtomSet>& seq, Prop p, std::size_t i) {
    const std::size_t n = seq.size();
    switch (p->kind) {
    case PK::True: return true;
    case PK::False: return false;
    case PK::Atom: return seq[i].atoms.count(p->atom) > 0;
    case PK::NegAtom: return seq[i].atoms.count(p->atom) == 0;
    case PK::Last: return i + 1 == n;
    case PK::NegLast: return i + 1 < n;
    case PK::And:
        for (Prop k : p->kids)
            if (!eval_seq(seq, k, i)) return false;
        return true;
    case PK::Or:
        for (Prop k : p->kids)
            if (eval_seq(seq, k, i)) return true;
        return false;
    case PK::Next: return i + 1 < n && eval_seq(seq, p->kids[0], i + 1);
    case PK::WeakNext: return i + 1 == n || eval_seq(seq, p->kids[0], i + 1);
    case PK::Until:
        for (std::size_t j = i; j < n; ++j) {
            if (eval_seq(seq, p->kids[1], j)) return true;
            if (!eval_seq(seq, p->kids[0], j)) return false;
        }
        return false;
    case PK::Release:
        for (std::size_t j = i; j < n; ++j) {
            if (!eval_seq(seq, p->kids[1], j)) return false;
            if (eval_seq(seq, p->kids[0], j)) return true;
        }
        return true;
    }
    return false;
}

Trace parse_trace_json(const std::string& text, const SpecProblem& sp) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw SpecError(ErrKind::Syntax, std::string("trace: ") + e.what());
    }
    Trace t;
    t.theory = sp.theory;
    if (j.contains("theory")) {
        std::string th = j.at("theory").get<std::string>();
        if (th != theory_name(sp.theory)) throw SpecError(ErrKind::SortMismatch, "trace theory differs from spec theory");
    }
    if (!j.contains("steps") || !j["steps"].is_array() || j["steps"].empty())
        throw SpecError(ErrKind::Syntax, "trace: expected a nonempty 'steps' array");
    for (auto& step : j["steps"]) {
        if (!step.is_object()) throw SpecError(ErrKind::Syntax, "trace: each step must be an object");
        Valuation v;
        for (auto id : sp.all_ids()) {
            std::string name = var_name(id);
            if (!step.contains(name)) throw SpecError(ErrKind::Undeclared, "trace: missing value for '" + name + "'");
            auto& val = step[name];
            std::string s = val.is_string() ? val.get<std::string>() : val.dump();
            Q q;
            try {
                q = parse_q(s);
            } catch (const std::invalid_argument&) {
                throw SpecError(ErrKind::Syntax, "trace: malformed number '" + s + "'");
            }
            if (sp.theory == Theory::LIA && !is_int(q))
                throw SpecError(ErrKind::SortMismatch, "trace: non-integer value for '" + name + "'");
            v[id] = q;
        }
        for (auto it = step.begin(); it != step.end(); ++it) {
            VarId id = intern_var(it.key());
            if (!sp.is_env(id) && !sp.is_agent(id))
                throw SpecError(ErrKind::Undeclared, "trace: undeclared variable '" + it.key() + "'");
        }
        t.steps.push_back(std::move(v));
    }
    return t;
}

std::string trace_to_json(const Trace& t) {
    nlohmann::json j;
    j["theory"] = theory_name(t.theory);
    j["steps"] = nlohmann::json::array();
    for (auto& s : t.steps) {
        nlohmann::json o = nlohmann::json::object();
        for (auto& [v, q] : s) o[var_name(v)] = q_str(q);
        j["steps"].push_back(o);
    }
    return j.dump();
}

}  // namespace lsynth
