#include "ltlfsynth/fo.hpp"

#include <algorithm>
#include <stdexcept>

namespace lsynth {

namespace {

Fo node(FK k, Lit l = {}, std::vector<Fo> kids = {}, std::vector<Key> bound = {}) {
    return std::make_shared<const FNode>(FNode{k, l, std::move(kids), std::move(bound)});
}

Fo nary(FK kind, std::vector<Fo> fs) {
    const FK unit = kind == FK::And ? FK::True : FK::False;
    const FK zero = kind == FK::And ? FK::False : FK::True;
    std::vector<Lit> lits;
    std::vector<Fo> rest;
    std::vector<Fo> stack(fs.rbegin(), fs.rend());
    while (!stack.empty()) {
        Fo f = stack.back();
        stack.pop_back();
        if (f->kind == zero) return zero == FK::True ? f_true() : f_false();
        if (f->kind == unit) continue;
        if (f->kind == kind) {
            for (auto it = f->kids.rbegin(); it != f->kids.rend(); ++it) stack.push_back(*it);
        } else if (f->kind == FK::Lit) {
            lits.push_back(f->lit);
        } else {
            rest.push_back(f);
        }
    }
    std::sort(lits.begin(), lits.end(), lit_less);
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 0; i + 1 < lits.size(); ++i)
        if (lits[i].atom == lits[i + 1].atom) return zero == FK::True ? f_true() : f_false();
    std::vector<Fo> out;
    for (auto& l : lits) out.push_back(node(FK::Lit, l));
    for (auto& r : rest) {
        bool dup = false;
        for (auto& o : out)
            if (f_struct_eq(o, r)) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(r);
    }
    if (out.empty()) return unit == FK::True ? f_true() : f_false();
    if (out.size() == 1) return out[0];
    return node(kind, {}, std::move(out));
}

}  // namespace

Fo f_true() {
    static Fo t = node(FK::True);
    return t;
}
Fo f_false() {
    static Fo f = node(FK::False);
    return f;
}
Fo f_bool(bool b) { return b ? f_true() : f_false(); }
Fo f_lit(const Lit& l) { return node(FK::Lit, l); }
Fo f_lit(const LitOrConst& l) { return l.is_const() ? f_bool(l.konst == 1) : f_lit(l.lit); }
Fo f_and(std::vector<Fo> fs) { return nary(FK::And, std::move(fs)); }
Fo f_or(std::vector<Fo> fs) { return nary(FK::Or, std::move(fs)); }
Fo f_and(Fo a, Fo b) { return f_and(std::vector<Fo>{std::move(a), std::move(b)}); }
Fo f_or(Fo a, Fo b) { return f_or(std::vector<Fo>{std::move(a), std::move(b)}); }

Fo f_not(const Fo& f) {
    switch (f->kind) {
    case FK::True: return f_false();
    case FK::False: return f_true();
    case FK::Lit: return f_lit(f->lit.negate());
    case FK::And:
    case FK::Or: {
        std::vector<Fo> ks;
        for (auto& k : f->kids) ks.push_back(f_not(k));
        return f->kind == FK::And ? f_or(ks) : f_and(ks);
    }
    case FK::Forall: return f_exists(f->bound, f_not(f->kids[0]));
    case FK::Exists: return f_forall(f->bound, f_not(f->kids[0]));
    }
    return f;
}

Fo f_implies(const Fo& a, const Fo& b) { return f_or(f_not(a), b); }

namespace {
Fo quant(FK kind, std::vector<Key> vars, Fo body) {
    if (body->kind == FK::True || body->kind == FK::False) return body;
    auto fv = f_free(body);
    std::vector<Key> keep;
    for (Key k : vars)
        if (std::binary_search(fv.begin(), fv.end(), k) && std::find(keep.begin(), keep.end(), k) == keep.end())
            keep.push_back(k);
    if (keep.empty()) return body;
    return node(kind, {}, {std::move(body)}, std::move(keep));
}
}  // namespace

Fo f_forall(std::vector<Key> vars, Fo body) { return quant(FK::Forall, std::move(vars), std::move(body)); }
Fo f_exists(std::vector<Key> vars, Fo body) { return quant(FK::Exists, std::move(vars), std::move(body)); }

bool f_quantifier_free(const Fo& f) {
    if (f->kind == FK::Forall || f->kind == FK::Exists) return false;
    for (auto& k : f->kids)
        if (!f_quantifier_free(k)) return false;
    return true;
}

namespace {
void free_rec(const Fo& f, std::vector<Key>& bound, std::vector<Key>& out) {
    switch (f->kind) {
    case FK::Lit:
        for (auto& [k, c] : f->lit.atom->e.terms())
            if (std::find(bound.begin(), bound.end(), k) == bound.end()) out.push_back(k);
        break;
    case FK::Forall:
    case FK::Exists: {
        std::size_t n = bound.size();
        bound.insert(bound.end(), f->bound.begin(), f->bound.end());
        free_rec(f->kids[0], bound, out);
        bound.resize(n);
        break;
    }
    default:
        for (auto& k : f->kids) free_rec(k, bound, out);
    }
}
}  // namespace

std::vector<Key> f_free(const Fo& f) {
    std::vector<Key> bound, out;
    free_rec(f, bound, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void f_literals(const Fo& f, std::vector<Lit>& out) {
    if (f->kind == FK::Lit) {
        out.push_back(f->lit);
        return;
    }
    for (auto& k : f->kids) f_literals(k, out);
}

Fo f_map_keys(const Fo& f, const std::function<Key(Key)>& g) {
    switch (f->kind) {
    case FK::True:
    case FK::False: return f;
    case FK::Lit: return f_lit(map_lit(f->lit, g));
    case FK::And:
    case FK::Or: {
        std::vector<Fo> ks;
        for (auto& k : f->kids) ks.push_back(f_map_keys(k, g));
        return f->kind == FK::And ? f_and(ks) : f_or(ks);
    }
    case FK::Forall:
    case FK::Exists: {
        std::vector<Key> b = f->bound;
        auto inner = [&](Key k) { return std::find(b.begin(), b.end(), k) != b.end() ? k : g(k); };
        Fo body = f_map_keys(f->kids[0], inner);
        return f->kind == FK::Forall ? f_forall(b, body) : f_exists(b, body);
    }
    }
    return f;
}

Fo f_rename_from_pre(const Fo& f) {
    return f_map_keys(f, [](Key k) {
        if (!key_is_pre(k)) throw std::logic_error("rename_from_pre: current variable " + key_name(k));
        return cur_key(key_var(k));
    });
}

Fo f_rename_to_pre(const Fo& f) {
    return f_map_keys(f, [](Key k) {
        if (key_is_pre(k)) throw std::logic_error("rename_to_pre: lookback variable " + key_name(k));
        return pre_key(key_var(k));
    });
}

Fo f_subst(const Fo& f, Key key, const LinExpr& e) {
    switch (f->kind) {
    case FK::True:
    case FK::False: return f;
    case FK::Lit: return f->lit.atom->e.has(key) ? f_lit(subst_lit(f->lit, key, e)) : f;
    case FK::And:
    case FK::Or: {
        std::vector<Fo> ks;
        for (auto& k : f->kids) ks.push_back(f_subst(k, key, e));
        return f->kind == FK::And ? f_and(ks) : f_or(ks);
    }
    case FK::Forall:
    case FK::Exists:
        if (std::find(f->bound.begin(), f->bound.end(), key) != f->bound.end()) return f;
        {
            Fo body = f_subst(f->kids[0], key, e);
            return f->kind == FK::Forall ? f_forall(f->bound, body) : f_exists(f->bound, body);
        }
    }
    return f;
}

bool f_eval(const Fo& f, const std::function<std::optional<Q>(Key)>& val) {
    switch (f->kind) {
    case FK::True: return true;
    case FK::False: return false;
    case FK::Lit: {
        auto v = eval_atom(f->lit.atom, val);
        if (!v) throw std::invalid_argument("f_eval: unassigned variable in " + lit_str(f->lit));
        return *v == f->lit.pos;
    }
    case FK::And:
        for (auto& k : f->kids)
            if (!f_eval(k, val)) return false;
        return true;
    case FK::Or:
        for (auto& k : f->kids)
            if (f_eval(k, val)) return true;
        return false;
    default: throw std::invalid_argument("f_eval: quantified formula");
    }
}

bool f_struct_eq(const Fo& a, const Fo& b) {
    if (a == b) return true;
    if (a->kind != b->kind || a->kids.size() != b->kids.size() || a->bound != b->bound) return false;
    if (a->kind == FK::Lit) return a->lit == b->lit;
    for (std::size_t i = 0; i < a->kids.size(); ++i)
        if (!f_struct_eq(a->kids[i], b->kids[i])) return false;
    return true;
}

namespace {
std::string print(const Fo& f, bool sexpr, Theory th) {
    switch (f->kind) {
    case FK::True: return "true";
    case FK::False: return "false";
    case FK::Lit: return sexpr ? lit_sexpr(f->lit) : lit_str(f->lit);
    case FK::And:
    case FK::Or: {
        std::vector<std::string> parts;
        for (auto& k : f->kids) parts.push_back(print(k, sexpr, th));
        std::string out;
        if (sexpr) {
            out = f->kind == FK::And ? "(and" : "(or";
            for (auto& s : parts) out += " " + s;
            return out + ")";
        }
        const char* sep = f->kind == FK::And ? " & " : " | ";
        for (std::size_t i = 0; i < parts.size(); ++i) {
            bool wrap = f->kids[i]->kind == FK::And || f->kids[i]->kind == FK::Or;
            out += (i ? sep : "") + (wrap ? "(" + parts[i] + ")" : parts[i]);
        }
        return out;
    }
    case FK::Forall:
    case FK::Exists: {
        bool all = f->kind == FK::Forall;
        std::string vs;
        for (Key k : f->bound) {
            std::string n = key_name(k);
            if (sexpr)
                vs += (vs.empty() ? "(" : " (") + n + (th == Theory::LIA ? " int)" : " real)");
            else
                vs += (vs.empty() ? "" : " ") + n;
        }
        if (sexpr) return std::string(all ? "(forall (" : "(exists (") + vs + ") " + print(f->kids[0], true, th) + ")";
        return std::string(all ? "forall " : "exists ") + vs + ". (" + print(f->kids[0], false, th) + ")";
    }
    }
    return "?";
}
}  // namespace

std::string f_str(const Fo& f) { return print(f, false, Theory::LRA); }
std::string f_sexpr(const Fo& f, Theory th) { return print(f, true, th); }

std::size_t f_size(const Fo& f) {
    std::size_t n = 1;
    for (auto& k : f->kids) n += f_size(k);
    return n;
}

}  // namespace lsynth
