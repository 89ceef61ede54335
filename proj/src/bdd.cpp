#include "ltlfsynth/bdd.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

namespace lsynth {

namespace {
constexpr std::uint32_t kTermVar = std::numeric_limits<std::uint32_t>::max();
}

std::size_t Bdd::Key3Hash::operator()(const std::tuple<Ref, Ref, Ref>& k) const {
    std::size_t h = std::get<0>(k);
    h = h * 0x9e3779b97f4a7c15ULL + std::get<1>(k);
    h = h * 0x9e3779b97f4a7c15ULL + std::get<2>(k);
    return h ^ (h >> 29);
}

Bdd::Bdd() {
    nodes_.push_back({kTermVar, kFalse, kFalse});
    nodes_.push_back({kTermVar, kTrue, kTrue});
}

Bdd::Ref Bdd::mk(std::uint32_t v, Ref lo, Ref hi) {
    if (lo == hi) return lo;
    auto key = std::make_tuple(v, lo, hi);
    auto it = unique_.find(key);
    if (it != unique_.end()) return it->second;
    Ref r = static_cast<Ref>(nodes_.size());
    nodes_.push_back({v, lo, hi});
    unique_.emplace(key, r);
    return r;
}

Bdd::Ref Bdd::var(std::uint32_t v) { return mk(v, kFalse, kTrue); }
Bdd::Ref Bdd::nvar(std::uint32_t v) { return mk(v, kTrue, kFalse); }

std::pair<Bdd::Ref, Bdd::Ref> Bdd::cofactors(Ref f, std::uint32_t v) const {
    if (nodes_[f].var == v) return {nodes_[f].lo, nodes_[f].hi};
    return {f, f};
}

Bdd::Ref Bdd::ite(Ref f, Ref g, Ref h) {
    if (f == kTrue) return g;
    if (f == kFalse) return h;
    if (g == h) return g;
    if (g == kTrue && h == kFalse) return f;
    auto key = std::make_tuple(f, g, h);
    auto it = ite_cache_.find(key);
    if (it != ite_cache_.end()) return it->second;
    std::uint32_t v = std::min({nodes_[f].var, nodes_[g].var, nodes_[h].var});
    auto [f0, f1] = cofactors(f, v);
    auto [g0, g1] = cofactors(g, v);
    auto [h0, h1] = cofactors(h, v);
    Ref lo = ite(f0, g0, h0);
    Ref hi = ite(f1, g1, h1);
    Ref r = mk(v, lo, hi);
    ite_cache_.emplace(key, r);
    return r;
}

Bdd::Ref Bdd::restrict(Ref f, std::uint32_t v, bool val) {
    if (is_const(f) || nodes_[f].var > v) return f;
    if (nodes_[f].var == v) return val ? nodes_[f].hi : nodes_[f].lo;
    auto key = std::make_tuple(f, v, val ? 1u : 0u);
    auto it = restrict_cache_.find(key);
    if (it != restrict_cache_.end()) return it->second;
    Ref r = mk(nodes_[f].var, restrict(nodes_[f].lo, v, val), restrict(nodes_[f].hi, v, val));
    restrict_cache_.emplace(key, r);
    return r;
}

Bdd::Ref Bdd::exists(Ref f, std::uint32_t v) { return apply_or(restrict(f, v, false), restrict(f, v, true)); }

Bdd::Ref Bdd::cube(const Cube& c) {
    Ref r = kTrue;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = apply_and(it->second ? var(it->first) : nvar(it->first), r);
    return r;
}

std::vector<std::uint32_t> Bdd::support(Ref f) const {
    std::vector<std::uint32_t> vars;
    std::vector<Ref> stack{f};
    std::vector<bool> seen(nodes_.size(), false);
    while (!stack.empty()) {
        Ref r = stack.back();
        stack.pop_back();
        if (is_const(r) || seen[r]) continue;
        seen[r] = true;
        vars.push_back(nodes_[r].var);
        stack.push_back(nodes_[r].lo);
        stack.push_back(nodes_[r].hi);
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

bool Bdd::depends_on(Ref f, std::uint32_t v) const {
    auto s = support(f);
    return std::binary_search(s.begin(), s.end(), v);
}

bool Bdd::eval(Ref f, const std::function<bool(std::uint32_t)>& val) const {
    while (!is_const(f)) f = val(nodes_[f].var) ? nodes_[f].hi : nodes_[f].lo;
    return f == kTrue;
}

std::vector<Bdd::Cube> Bdd::isop(Ref lower, Ref upper) {
    return isop_rec(lower, upper, std::numeric_limits<std::size_t>::max()).cubes;
}

std::optional<std::vector<Bdd::Cube>> Bdd::isop_bounded(Ref lower, Ref upper, std::size_t limit) {
    Cover c = isop_rec(lower, upper, limit);
    if (c.overflow) return std::nullopt;
    return std::move(c.cubes);
}

Bdd::Cover Bdd::isop_rec(Ref L, Ref U, std::size_t limit) {
    if (L == kFalse) return {{}, kFalse, false};
    if (U == kTrue) return {{Cube{}}, kTrue, false};
    auto key = std::make_tuple(L, U, static_cast<Ref>(std::min<std::size_t>(limit, 0xffffffffu)));
    auto it = isop_cache_.find(key);
    if (it != isop_cache_.end()) return it->second;
    std::uint32_t v = std::min(nodes_[L].var, nodes_[U].var);
    auto [L0, L1] = cofactors(L, v);
    auto [U0, U1] = cofactors(U, v);
    Cover r0 = isop_rec(apply_and(L0, apply_not(U1)), U0, limit);
    if (r0.overflow) return r0;
    Cover r1 = isop_rec(apply_and(L1, apply_not(U0)), U1, limit);
    if (r1.overflow) return r1;
    Ref Lnew = apply_or(apply_and(L0, apply_not(r0.f)), apply_and(L1, apply_not(r1.f)));
    Cover rs = isop_rec(Lnew, apply_and(U0, U1), limit);
    if (rs.overflow) return rs;
    Cover out{{}, kFalse, false};
    if (r0.cubes.size() + r1.cubes.size() + rs.cubes.size() > limit) {
        out.overflow = true;
        return out;
    }
    for (auto& c : r0.cubes) {
        Cube k = c;
        k.insert(k.begin(), {v, false});
        out.cubes.push_back(std::move(k));
    }
    for (auto& c : r1.cubes) {
        Cube k = c;
        k.insert(k.begin(), {v, true});
        out.cubes.push_back(std::move(k));
    }
    for (auto& c : rs.cubes) out.cubes.push_back(c);
    out.f = apply_or(apply_or(apply_and(nvar(v), r0.f), apply_and(var(v), r1.f)), rs.f);
    isop_cache_.emplace(key, out);
    return out;
}

}  // namespace lsynth
