#include "ltlfsynth/property.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace lsynth {

namespace {

struct PropStore {
    std::mutex mu;
    std::unordered_multimap<std::size_t, std::unique_ptr<PNode>> nodes;
    std::uint32_t next_id = 0;
};

PropStore& store() {
    static PropStore s;
    return s;
}

Prop make(PK kind, AtomP atom, std::vector<Prop> kids) {
    std::size_t h = static_cast<std::size_t>(kind) * 0x9e3779b97f4a7c15ULL;
    if (atom) h ^= atom->hash * 1099511628211ULL;
    for (Prop k : kids) h = h * 1315423911u + k->id + 1;
    auto& s = store();
    std::lock_guard<std::mutex> lk(s.mu);
    auto range = s.nodes.equal_range(h);
    for (auto it = range.first; it != range.second; ++it) {
        const PNode& n = *it->second;
        if (n.kind == kind && n.atom == atom && n.kids == kids) return &n;
    }
    bool lb = atom && atom->has_pre();
    bool tmp = kind == PK::Next || kind == PK::WeakNext || kind == PK::Until || kind == PK::Release;
    for (Prop k : kids) {
        lb = lb || k->lookback;
        tmp = tmp || k->temporal;
    }
    auto n = std::make_unique<PNode>(PNode{kind, atom, std::move(kids), h, s.next_id++, lb, tmp});
    Prop p = n.get();
    s.nodes.emplace(h, std::move(n));
    return p;
}

bool complementary(Prop a, Prop b) {
    if (a->kind == PK::Atom && b->kind == PK::NegAtom) return a->atom == b->atom;
    if (a->kind == PK::NegAtom && b->kind == PK::Atom) return a->atom == b->atom;
    if (a->kind == PK::Last) return b->kind == PK::NegLast;
    if (a->kind == PK::NegLast) return b->kind == PK::Last;
    return false;
}

Prop make_nary(PK kind, std::vector<Prop> ps) {
    const PK unit = kind == PK::And ? PK::True : PK::False;
    const PK zero = kind == PK::And ? PK::False : PK::True;
    std::vector<Prop> flat;
    for (Prop p : ps) {
        if (p->kind == zero) return zero == PK::True ? p_true() : p_false();
        if (p->kind == unit) continue;
        if (p->kind == kind)
            flat.insert(flat.end(), p->kids.begin(), p->kids.end());
        else
            flat.push_back(p);
    }
    std::sort(flat.begin(), flat.end(), [](Prop a, Prop b) { return a->id < b->id; });
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    std::vector<Prop> lits;
    for (Prop p : flat)
        if (is_literal(p)) lits.push_back(p);
    for (std::size_t i = 0; i < lits.size(); ++i)
        for (std::size_t j = i + 1; j < lits.size(); ++j)
            if (complementary(lits[i], lits[j])) return zero == PK::True ? p_true() : p_false();
    if (flat.empty()) return unit == PK::True ? p_true() : p_false();
    if (flat.size() == 1) return flat[0];
    return make(kind, nullptr, std::move(flat));
}

}  // namespace

Prop p_true() {
    static Prop t = make(PK::True, nullptr, {});
    return t;
}
Prop p_false() {
    static Prop f = make(PK::False, nullptr, {});
    return f;
}
Prop p_last() {
    static Prop l = make(PK::Last, nullptr, {});
    return l;
}
Prop p_neglast() {
    static Prop l = make(PK::NegLast, nullptr, {});
    return l;
}

Prop p_lit(const Lit& l) { return make(l.pos ? PK::Atom : PK::NegAtom, l.atom, {}); }

Prop p_lit(const LitOrConst& l) {
    if (l.is_const()) return l.konst ? p_true() : p_false();
    return p_lit(l.lit);
}

Prop p_and(std::vector<Prop> ps) { return make_nary(PK::And, std::move(ps)); }
Prop p_or(std::vector<Prop> ps) { return make_nary(PK::Or, std::move(ps)); }
Prop p_and(Prop a, Prop b) { return p_and(std::vector<Prop>{a, b}); }
Prop p_or(Prop a, Prop b) { return p_or(std::vector<Prop>{a, b}); }

Prop p_next(Prop p) {
    if (p->kind == PK::False) return p;
    return make(PK::Next, nullptr, {p});
}

Prop p_wnext(Prop p) {
    if (p->kind == PK::True) return p;
    return make(PK::WeakNext, nullptr, {p});
}

Prop p_until(Prop a, Prop b) {
    if (is_const(b) || a->kind == PK::False || a == b) return b;
    return make(PK::Until, nullptr, {a, b});
}

Prop p_release(Prop a, Prop b) {
    if (is_const(b) || a->kind == PK::True || a == b) return b;
    return make(PK::Release, nullptr, {a, b});
}

Prop p_eventually(Prop p) { return p_until(p_true(), p); }
Prop p_globally(Prop p) { return p_release(p_false(), p); }

Prop p_not(Prop p) {
    switch (p->kind) {
    case PK::True: return p_false();
    case PK::False: return p_true();
    case PK::Atom: return make(PK::NegAtom, p->atom, {});
    case PK::NegAtom: return make(PK::Atom, p->atom, {});
    case PK::Last: return p_neglast();
    case PK::NegLast: return p_last();
    case PK::And:
    case PK::Or: {
        std::vector<Prop> ks;
        for (Prop k : p->kids) ks.push_back(p_not(k));
        return p->kind == PK::And ? p_or(ks) : p_and(ks);
    }
    case PK::Next: return p_wnext(p_not(p->kids[0]));
    case PK::WeakNext: return p_next(p_not(p->kids[0]));
    case PK::Until: return p_release(p_not(p->kids[0]), p_not(p->kids[1]));
    case PK::Release: return p_until(p_not(p->kids[0]), p_not(p->kids[1]));
    }
    return p;
}

Prop p_implies(Prop a, Prop b) { return p_or(p_not(a), b); }

Prop xnf(Prop p) {
    switch (p->kind) {
    case PK::And:
    case PK::Or: {
        std::vector<Prop> ks;
        for (Prop k : p->kids) ks.push_back(xnf(k));
        return p->kind == PK::And ? p_and(ks) : p_or(ks);
    }
    case PK::Until:
        return p_or(xnf(p->kids[1]), p_and(xnf(p->kids[0]), p_next(p)));
    case PK::Release:
        return p_and(xnf(p->kids[1]), p_or(xnf(p->kids[0]), p_wnext(p)));
    default:
        return p;
    }
}

Prop rmX(Prop p) {
    switch (p->kind) {
    case PK::True:
    case PK::False: return p;
    case PK::Last: return p_false();
    case PK::NegLast: return p_true();
    case PK::Next: return p_and(p->kids[0], p_neglast());
    case PK::WeakNext: return p_or(p->kids[0], p_last());
    case PK::And:
    case PK::Or: {
        std::vector<Prop> ks;
        for (Prop k : p->kids) ks.push_back(rmX(k));
        return p->kind == PK::And ? p_and(ks) : p_or(ks);
    }
    default:
        throw std::logic_error("rmX: unexpected top-level subformula " + prop_str(p));
    }
}

std::vector<Prop> tnps(Prop p) {
    std::vector<Prop> out;
    std::function<void(Prop)> go = [&](Prop q) {
        if (q->kind == PK::And || q->kind == PK::Or) {
            for (Prop k : q->kids) go(k);
        } else if (q->kind == PK::Atom || q->kind == PK::NegAtom) {
            Prop a = p_lit(Lit{q->atom, true});
            if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
        } else if (!is_const(q)) {
            if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
        }
    };
    go(p);
    return out;
}

std::vector<AtomP> foa(Prop p) {
    std::vector<AtomP> out;
    std::vector<Prop> seen;
    std::function<void(Prop)> go = [&](Prop q) {
        if (q->atom) {
            out.push_back(q->atom);
            return;
        }
        for (Prop k : q->kids) go(k);
    };
    go(p);
    std::sort(out.begin(), out.end(), atom_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool in_xnf(Prop p) {
    for (Prop q : tnps(p))
        if (q->kind == PK::Until || q->kind == PK::Release) return false;
    return true;
}

WellFormed is_well_formed(Prop p) {
    for (Prop q : tnps(xnf(p)))
        if (q->kind == PK::Atom && q->atom->has_pre()) return {false, q->atom};
    return {};
}

Prop weak_lookback_initial(Prop p) {
    std::function<Prop(Prop)> go = [&](Prop q) -> Prop {
        switch (q->kind) {
        case PK::Atom:
        case PK::NegAtom:
            if (!q->atom->has_pre()) return q;
            return (q->atom->weak == (q->kind == PK::Atom)) ? p_true() : p_false();
        case PK::And:
        case PK::Or: {
            std::vector<Prop> ks;
            for (Prop k : q->kids) ks.push_back(go(k));
            return q->kind == PK::And ? p_and(ks) : p_or(ks);
        }
        default: return q;
        }
    };
    return go(xnf(p));
}

Prop fix_last(Prop p, bool last) {
    switch (p->kind) {
    case PK::Last: return last ? p_true() : p_false();
    case PK::NegLast: return last ? p_false() : p_true();
    case PK::And:
    case PK::Or: {
        std::vector<Prop> ks;
        for (Prop k : p->kids) ks.push_back(fix_last(k, last));
        return p->kind == PK::And ? p_and(ks) : p_or(ks);
    }
    default: return p;
    }
}

namespace {

std::string print(Prop p, bool sexpr) {
    switch (p->kind) {
    case PK::True: return "true";
    case PK::False: return "false";
    case PK::Atom:
    case PK::NegAtom: return sexpr ? lit_sexpr(lit_of(p)) : lit_str(lit_of(p));
    case PK::Last: return "last";
    case PK::NegLast: return sexpr ? "(not last)" : "!last";
    case PK::And:
    case PK::Or: {
        std::vector<std::string> parts;
        for (Prop k : p->kids) parts.push_back(print(k, sexpr));
        std::sort(parts.begin(), parts.end());
        std::string out;
        if (sexpr) {
            out = p->kind == PK::And ? "(and" : "(or";
            for (auto& s : parts) out += " " + s;
            return out + ")";
        }
        const char* sep = p->kind == PK::And ? " & " : " | ";
        for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
        return "(" + out + ")";
    }
    case PK::Next: return sexpr ? "(X " + print(p->kids[0], true) + ")" : "X(" + print(p->kids[0], false) + ")";
    case PK::WeakNext:
        return sexpr ? "(WX " + print(p->kids[0], true) + ")" : "WX(" + print(p->kids[0], false) + ")";
    case PK::Until:
        if (p->kids[0]->kind == PK::True)
            return sexpr ? "(F " + print(p->kids[1], true) + ")" : "F(" + print(p->kids[1], false) + ")";
        return sexpr ? "(U " + print(p->kids[0], true) + " " + print(p->kids[1], true) + ")"
                     : "(" + print(p->kids[0], false) + " U " + print(p->kids[1], false) + ")";
    case PK::Release:
        if (p->kids[0]->kind == PK::False)
            return sexpr ? "(G " + print(p->kids[1], true) + ")" : "G(" + print(p->kids[1], false) + ")";
        return sexpr ? "(R " + print(p->kids[0], true) + " " + print(p->kids[1], true) + ")"
                     : "(" + print(p->kids[0], false) + " R " + print(p->kids[1], false) + ")";
    }
    return "?";
}

}  // namespace

std::string prop_str(Prop p) { return print(p, false); }
std::string prop_sexpr(Prop p) { return print(p, true); }

std::size_t prop_size(Prop p) {
    std::size_t n = 1;
    for (Prop k : p->kids) n += prop_size(k);
    return n;
}

bool has_lookback(Prop p) { return p->lookback; }

}  // namespace lsynth
