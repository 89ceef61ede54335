#include "ltlfsynth/spec.hpp"

#include <algorithm>
#include <cctype>

namespace lsynth {

SpecError::SpecError(ErrKind k, const std::string& msg, int l, int c)
    : std::runtime_error(l > 0 ? std::to_string(l) + ":" + std::to_string(c) + ": " + msg : msg),
      kind(k),
      line(l),
      col(c) {}

const char* theory_name(Theory t) { return t == Theory::LIA ? "lia" : "lra"; }

namespace {

[[noreturn]] void fail(ErrKind k, const SExpr& at, const std::string& msg) { throw SpecError(k, msg, at.line, at.col); }

struct Reader {
    const std::string& s;
    std::size_t i = 0;
    int line = 1, col = 1;

    void bump() {
        if (s[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    }
    void skip() {
        while (i < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[i]))) {
                bump();
            } else if (s[i] == ';') {
                while (i < s.size() && s[i] != '\n') bump();
            } else {
                break;
            }
        }
    }
    SExpr read() {
        skip();
        SExpr e;
        e.line = line;
        e.col = col;
        if (i >= s.size()) throw SpecError(ErrKind::Syntax, "unexpected end of input", line, col);
        if (s[i] == ')') throw SpecError(ErrKind::Syntax, "unexpected ')'", line, col);
        if (s[i] == '(') {
            e.list = true;
            bump();
            for (;;) {
                skip();
                if (i >= s.size()) throw SpecError(ErrKind::Syntax, "unclosed '('", e.line, e.col);
                if (s[i] == ')') {
                    bump();
                    break;
                }
                e.items.push_back(read());
            }
            return e;
        }
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' && s[i] != ')' &&
               s[i] != ';') {
            e.atom += s[i];
            bump();
        }
        return e;
    }
};

bool is_number(const std::string& a) {
    if (a.empty()) return false;
    std::size_t i = (a[0] == '-' || a[0] == '+') ? 1 : 0;
    return i < a.size() && std::isdigit(static_cast<unsigned char>(a[i]));
}

const std::string& head(const SExpr& s) {
    static const std::string none;
    if (!s.list || s.items.empty() || s.items[0].list) return none;
    return s.items[0].atom;
}

void arity(const SExpr& s, std::size_t n) {
    if (s.items.size() != n + 1)
        fail(ErrKind::Syntax, s, "'" + head(s) + "' expects " + std::to_string(n) + " argument(s)");
}

Sort theory_sort(Theory t) { return t == Theory::LIA ? Sort::Int : Sort::Real; }

Q number(const SExpr& s, const Scope& sc) {
    Q q;
    try {
        q = parse_q(s.atom);
    } catch (const std::invalid_argument&) {
        fail(ErrKind::Syntax, s, "malformed number '" + s.atom + "'");
    }
    if (sc.theory == Theory::LIA && !is_int(q)) fail(ErrKind::SortMismatch, s, "sort mismatch: rational constant in int term");
    return q;
}

VarId lookup(const SExpr& s, const Scope& sc) {
    if (s.list) fail(ErrKind::Syntax, s, "expected a variable name");
    auto it = sc.vars.find(s.atom);
    if (it == sc.vars.end()) {
        if (!sc.auto_declare) fail(ErrKind::Undeclared, s, "undeclared variable '" + s.atom + "'");
    } else if (it->second != theory_sort(sc.theory)) {
        fail(ErrKind::SortMismatch, s, "sort mismatch: variable '" + s.atom + "'");
    }
    return intern_var(s.atom);
}

}  // namespace

SExpr read_sexpr(const std::string& text) {
    Reader r{text};
    SExpr e = r.read();
    r.skip();
    if (r.i != text.size()) throw SpecError(ErrKind::Syntax, "trailing input after expression", r.line, r.col);
    return e;
}

LinExpr parse_term(const SExpr& s, const Scope& sc) {
    if (!s.list) {
        if (is_number(s.atom)) return LinExpr(number(s, sc));
        return LinExpr::var(cur_key(lookup(s, sc)));
    }
    const std::string& h = head(s);
    if (h == "pre") {
        arity(s, 1);
        if (head(s.items[1]) == "pre") fail(ErrKind::PreOfPre, s.items[1], "pre-of-pre is not allowed");
        return LinExpr::var(pre_key(lookup(s.items[1], sc)));
    }
    if (h == "+") {
        LinExpr r;
        for (std::size_t i = 1; i < s.items.size(); ++i) r += parse_term(s.items[i], sc);
        return r;
    }
    if (h == "-") {
        if (s.items.size() == 2) return -parse_term(s.items[1], sc);
        arity(s, 2);
        return parse_term(s.items[1], sc) - parse_term(s.items[2], sc);
    }
    if (h == "*") {
        arity(s, 2);
        LinExpr a = parse_term(s.items[1], sc), b = parse_term(s.items[2], sc);
        if (a.is_const()) return b * a.constant();
        if (b.is_const()) return a * b.constant();
        fail(ErrKind::NonLinear, s, "non-linear product");
    }
    fail(ErrKind::Syntax, s, "unknown term operator '" + h + "'");
}

namespace {

LitOrConst parse_atom(const SExpr& s, const Scope& sc) {
    const std::string& h = head(s);
    if (h == "equiv") {
        arity(s, 3);
        if (sc.theory != Theory::LIA) fail(ErrKind::SortMismatch, s, "sort mismatch: equiv requires int");
        const SExpr& k = s.items[1];
        if (k.list || !is_number(k.atom)) fail(ErrKind::Syntax, k, "equiv expects a positive integer modulus");
        Q m = number(k, sc);
        if (m <= 0) fail(ErrKind::Syntax, k, "equiv expects a positive integer modulus");
        return make_mod(m.get_num(), parse_term(s.items[2], sc) - parse_term(s.items[3], sc), true);
    }
    static const std::map<std::string, Cmp> ops = {{"=", Cmp::Eq},  {"distinct", Cmp::Neq}, {"<", Cmp::Lt},
                                                   {"<=", Cmp::Le}, {">", Cmp::Gt},         {">=", Cmp::Ge}};
    auto it = ops.find(h);
    if (it == ops.end()) fail(ErrKind::Syntax, s, "unknown operator '" + h + "'");
    arity(s, 2);
    return make_cmp(it->second, parse_term(s.items[1], sc) - parse_term(s.items[2], sc), true);
}

}  // namespace

Prop parse_prop(const SExpr& s, const Scope& sc) {
    if (!s.list) {
        if (s.atom == "true") return p_true();
        if (s.atom == "false") return p_false();
        if (s.atom == "last" && sc.allow_last) return p_last();
        fail(ErrKind::Syntax, s, "expected a property, got '" + s.atom + "'");
    }
    const std::string& h = head(s);
    auto sub = [&](std::size_t i) { return parse_prop(s.items[i], sc); };
    if (h == "not") {
        arity(s, 1);
        return p_not(sub(1));
    }
    if (h == "and" || h == "or") {
        std::vector<Prop> ps;
        for (std::size_t i = 1; i < s.items.size(); ++i) ps.push_back(sub(i));
        return h == "and" ? p_and(ps) : p_or(ps);
    }
    if (h == "implies") {
        arity(s, 2);
        return p_implies(sub(1), sub(2));
    }
    if (h == "X" || h == "WX" || h == "F" || h == "G") {
        arity(s, 1);
        Prop a = sub(1);
        if (h == "X") return p_next(a);
        if (h == "WX") return p_wnext(a);
        if (h == "F") return p_eventually(a);
        return p_globally(a);
    }
    if (h == "U" || h == "R") {
        arity(s, 2);
        return h == "U" ? p_until(sub(1), sub(2)) : p_release(sub(1), sub(2));
    }
    return p_lit(parse_atom(s, sc));
}

Fo parse_fo(const SExpr& s, const Scope& sc) {
    if (!s.list) {
        if (s.atom == "true") return f_true();
        if (s.atom == "false") return f_false();
        fail(ErrKind::Syntax, s, "expected a formula, got '" + s.atom + "'");
    }
    const std::string& h = head(s);
    auto sub = [&](std::size_t i) { return parse_fo(s.items[i], sc); };
    if (h == "not") {
        arity(s, 1);
        return f_not(sub(1));
    }
    if (h == "and" || h == "or") {
        std::vector<Fo> fs;
        for (std::size_t i = 1; i < s.items.size(); ++i) fs.push_back(sub(i));
        return h == "and" ? f_and(fs) : f_or(fs);
    }
    if (h == "implies") {
        arity(s, 2);
        return f_implies(sub(1), sub(2));
    }
    if (h == "forall" || h == "exists") {
        arity(s, 2);
        const SExpr& decls = s.items[1];
        if (!decls.list) fail(ErrKind::Syntax, decls, "expected a binder list");
        Scope inner = sc;
        std::vector<Key> keys;
        for (auto& d : decls.items) {
            if (!d.list || d.items.size() != 2 || d.items[0].list || d.items[1].list)
                fail(ErrKind::Syntax, d, "binder must be (name sort)");
            Sort so;
            if (d.items[1].atom == "real")
                so = Sort::Real;
            else if (d.items[1].atom == "int")
                so = Sort::Int;
            else
                fail(ErrKind::Syntax, d.items[1], "unknown sort '" + d.items[1].atom + "'");
            if (so != theory_sort(sc.theory)) fail(ErrKind::SortMismatch, d, "sort mismatch: bound variable '" + d.items[0].atom + "'");
            inner.vars[d.items[0].atom] = so;
            keys.push_back(cur_key(intern_var(d.items[0].atom)));
        }
        Fo body = parse_fo(s.items[2], inner);
        return h == "forall" ? f_forall(keys, body) : f_exists(keys, body);
    }
    return f_lit(parse_atom(s, sc));
}

Scope SpecProblem::scope() const {
    Scope sc;
    sc.theory = theory;
    for (auto& d : env) sc.vars[d.name] = d.sort;
    for (auto& d : agent) sc.vars[d.name] = d.sort;
    return sc;
}

std::vector<VarId> SpecProblem::env_ids() const {
    std::vector<VarId> r;
    for (auto& d : env) r.push_back(d.id);
    return r;
}

std::vector<VarId> SpecProblem::agent_ids() const {
    std::vector<VarId> r;
    for (auto& d : agent) r.push_back(d.id);
    return r;
}

std::vector<VarId> SpecProblem::all_ids() const {
    auto r = env_ids();
    for (auto& d : agent) r.push_back(d.id);
    return r;
}

bool SpecProblem::is_env(VarId v) const {
    return std::any_of(env.begin(), env.end(), [v](const VarDecl& d) { return d.id == v; });
}

bool SpecProblem::is_agent(VarId v) const {
    return std::any_of(agent.begin(), agent.end(), [v](const VarDecl& d) { return d.id == v; });
}

SpecProblem parse_spec(const std::string& text, bool strict) {
    SExpr top = read_sexpr(text);
    if (head(top) != "spec") fail(ErrKind::Syntax, top, "expected (spec ...)");
    SpecProblem sp;
    sp.text = text;
    bool have_theory = false, have_env = false, have_agent = false;
    const SExpr* assume = nullptr;
    const SExpr* property = nullptr;
    std::map<std::string, Sort> declared;
    for (std::size_t i = 1; i < top.items.size(); ++i) {
        const SExpr& it = top.items[i];
        const std::string& h = head(it);
        if (h == "theory") {
            arity(it, 1);
            if (have_theory) fail(ErrKind::Syntax, it, "duplicate theory clause");
            const std::string& t = it.items[1].atom;
            if (t == "lra")
                sp.theory = Theory::LRA;
            else if (t == "lia")
                sp.theory = Theory::LIA;
            else
                fail(ErrKind::Syntax, it.items[1], "unknown theory '" + t + "'");
            have_theory = true;
        } else if (h == "env" || h == "agent") {
            bool env = h == "env";
            if (env ? have_env : have_agent) fail(ErrKind::Syntax, it, "duplicate " + h + " clause");
            (env ? have_env : have_agent) = true;
            for (std::size_t j = 1; j < it.items.size(); ++j) {
                const SExpr& d = it.items[j];
                if (!d.list || d.items.size() != 2 || d.items[0].list || d.items[1].list)
                    fail(ErrKind::Syntax, d, "declaration must be (name sort)");
                const std::string& name = d.items[0].atom;
                if (is_number(name) || name == "pre" || name == "true" || name == "false")
                    fail(ErrKind::Syntax, d.items[0], "invalid variable name '" + name + "'");
                Sort so;
                if (d.items[1].atom == "real")
                    so = Sort::Real;
                else if (d.items[1].atom == "int")
                    so = Sort::Int;
                else
                    fail(ErrKind::Syntax, d.items[1], "unknown sort '" + d.items[1].atom + "'");
                if (declared.count(name)) fail(ErrKind::Duplicate, d, "variable declared twice: '" + name + "'");
                declared[name] = so;
                (env ? sp.env : sp.agent).push_back({name, so, intern_var(name)});
            }
        } else if (h == "assume") {
            arity(it, 1);
            if (assume) fail(ErrKind::Syntax, it, "duplicate assume clause");
            assume = &it.items[1];
        } else if (h == "property") {
            arity(it, 1);
            if (property) fail(ErrKind::Syntax, it, "duplicate property clause");
            property = &it.items[1];
        } else {
            fail(ErrKind::Syntax, it, "unknown clause '" + h + "'");
        }
    }
    if (!have_theory) fail(ErrKind::Syntax, top, "missing theory clause");
    if (!property) fail(ErrKind::Syntax, top, "missing property clause");
    if (sp.env.empty() && sp.agent.empty()) fail(ErrKind::Syntax, top, "no variables declared");
    Sort want = theory_sort(sp.theory);
    for (auto* group : {&sp.env, &sp.agent})
        for (auto& d : *group)
            if (d.sort != want)
                throw SpecError(ErrKind::SortMismatch, "sort mismatch: variable '" + d.name + "' in " +
                                                           theory_name(sp.theory) + " theory");
    Scope sc = sp.scope();
    sp.goal = parse_prop(*property, sc);
    if (assume) sp.assumption = parse_prop(*assume, sc);
    sp.effective = sp.assumption ? p_implies(*sp.assumption, sp.goal) : sp.goal;
    WellFormed wf = is_well_formed(sp.effective);
    if (wf.ok) {
        sp.initial = sp.effective;
    } else {
        if (strict)
            throw SpecError(ErrKind::IllFormed,
                            "ill-formed property: top-level lookback atom '" + atom_str(wf.offending) + "'");
        sp.initial = weak_lookback_initial(sp.effective);
        sp.weak_lookback_rewrite = true;
    }
    return sp;
}

}  // namespace lsynth
