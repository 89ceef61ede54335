#include "ltlfsynth/linexpr.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace lsynth {

namespace {
struct VarTable {
    std::mutex mu;
    std::unordered_map<std::string, VarId> ids;
    std::deque<std::string> names;
};
VarTable& table() {
    static VarTable t;
    return t;
}
}  // namespace

VarId intern_var(const std::string& name) {
    auto& t = table();
    std::lock_guard<std::mutex> lk(t.mu);
    auto it = t.ids.find(name);
    if (it != t.ids.end()) return it->second;
    VarId id = static_cast<VarId>(t.names.size());
    t.names.push_back(name);
    t.ids.emplace(name, id);
    return id;
}

std::string var_name(VarId v) {
    auto& t = table();
    std::lock_guard<std::mutex> lk(t.mu);
    return t.names.at(v);
}

std::string key_name(Key k) {
    return key_is_pre(k) ? "pre " + var_name(key_var(k)) : var_name(key_var(k));
}

bool key_name_less(Key a, Key b) {
    if (key_var(a) == key_var(b)) return key_is_pre(a) < key_is_pre(b);
    return var_name(key_var(a)) < var_name(key_var(b));
}

LinExpr LinExpr::var(Key k, Q c) {
    LinExpr e;
    if (c != 0) e.terms_.emplace_back(k, std::move(c));
    return e;
}

Q LinExpr::coef(Key k) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const auto& p, Key key) { return p.first < key; });
    if (it != terms_.end() && it->first == k) return it->second;
    return Q(0);
}

bool LinExpr::has(Key k) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                               [](const auto& p, Key key) { return p.first < key; });
    return it != terms_.end() && it->first == k;
}

bool LinExpr::has_pre() const {
    for (auto& [k, c] : terms_)
        if (key_is_pre(k)) return true;
    return false;
}

LinExpr LinExpr::operator+(const LinExpr& o) const {
    LinExpr r;
    r.c0_ = c0_ + o.c0_;
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
            r.terms_.push_back(terms_[i++]);
        } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            Q s = terms_[i].second + o.terms_[j].second;
            if (s != 0) r.terms_.emplace_back(terms_[i].first, s);
            ++i;
            ++j;
        }
    }
    return r;
}

LinExpr LinExpr::operator-() const { return *this * Q(-1); }

LinExpr LinExpr::operator-(const LinExpr& o) const { return *this + (-o); }

LinExpr LinExpr::operator*(const Q& s) const {
    LinExpr r;
    if (s == 0) return r;
    r.c0_ = c0_ * s;
    r.terms_.reserve(terms_.size());
    for (auto& [k, c] : terms_) r.terms_.emplace_back(k, c * s);
    return r;
}

LinExpr LinExpr::without(Key k) const {
    LinExpr r = *this;
    r.terms_.erase(std::remove_if(r.terms_.begin(), r.terms_.end(),
                                  [k](const auto& p) { return p.first == k; }),
                   r.terms_.end());
    return r;
}

LinExpr LinExpr::subst(Key k, const LinExpr& e) const {
    Q c = coef(k);
    if (c == 0) return *this;
    return without(k) + e * c;
}

LinExpr LinExpr::map_keys(const std::function<Key(Key)>& f) const {
    LinExpr r(c0_);
    for (auto& [k, c] : terms_) r += LinExpr::var(f(k), c);
    return r;
}

std::optional<Q> LinExpr::eval(const std::function<std::optional<Q>(Key)>& val) const {
    Q r = c0_;
    for (auto& [k, c] : terms_) {
        auto v = val(k);
        if (!v) return std::nullopt;
        r += c * *v;
    }
    return r;
}

std::size_t LinExpr::hash() const {
    std::size_t h = hash_q(c0_);
    for (auto& [k, c] : terms_) h = h * 1315423911u ^ (k * 2654435761u + hash_q(c));
    return h;
}

Q LinExpr::integerize(bool include_const) {
    Z l = 1;
    for (auto& [k, c] : terms_) l = lcm_z(l, c.get_den());
    if (include_const) l = lcm_z(l, c0_.get_den());
    Z g = 0;
    for (auto& [k, c] : terms_) g = gcd_z(g, Q(c * l).get_num());
    if (include_const) g = gcd_z(g, Q(c0_ * l).get_num());
    if (g == 0) g = 1;
    Q f(l, g);
    f.canonicalize();
    *this = *this * f;
    return f;
}

namespace {
std::vector<std::pair<Key, Q>> by_name(const std::vector<std::pair<Key, Q>>& t) {
    auto s = t;
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return key_name_less(a.first, b.first); });
    return s;
}
}  // namespace

std::string LinExpr::str() const {
    std::string out;
    for (auto& [k, c] : by_name(terms_)) {
        Q a = abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        if (a != 1) out += q_str(a) + "*";
        out += key_name(k);
    }
    if (out.empty()) return q_str(c0_);
    if (c0_ != 0) out += (c0_ < 0 ? " - " : " + ") + q_str(abs(c0_));
    return out;
}

std::string LinExpr::sexpr() const {
    std::vector<std::string> parts;
    for (auto& [k, c] : by_name(terms_)) {
        std::string v = key_is_pre(k) ? "(pre " + var_name(key_var(k)) + ")" : var_name(key_var(k));
        if (c == 1)
            parts.push_back(v);
        else
            parts.push_back("(* " + q_str(c) + " " + v + ")");
    }
    if (c0_ != 0 || parts.empty()) parts.push_back(q_str(c0_));
    if (parts.size() == 1) return parts[0];
    std::string out = "(+";
    for (auto& p : parts) out += " " + p;
    return out + ")";
}

}  // namespace lsynth
