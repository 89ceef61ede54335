#pragma once

#include "ltlfsynth/num.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lsynth {

using VarId = std::uint32_t;

// Process-wide name interning; thread-safe.
VarId intern_var(const std::string& name);
std::string var_name(VarId v);

// A variable occurrence: current value (pre = false) or lookback value.
using Key = std::uint32_t;
inline Key cur_key(VarId v) { return v * 2; }
inline Key pre_key(VarId v) { return v * 2 + 1; }
inline VarId key_var(Key k) { return k / 2; }
inline bool key_is_pre(Key k) { return (k & 1u) != 0; }
std::string key_name(Key k);  // "x" or "pre x"
// Orders keys by variable name, current before lookback.
bool key_name_less(Key a, Key b);

// Linear expression sum(c_i * k_i) + c0 with nonzero coefficients, sorted by key.
class LinExpr {
public:
    LinExpr() = default;
    explicit LinExpr(Q c) : c0_(std::move(c)) {}
    static LinExpr var(Key k, Q c = Q(1));

    const std::vector<std::pair<Key, Q>>& terms() const { return terms_; }
    const Q& constant() const { return c0_; }
    bool is_const() const { return terms_.empty(); }
    Q coef(Key k) const;
    bool has(Key k) const;
    bool has_pre() const;

    LinExpr operator+(const LinExpr& o) const;
    LinExpr operator-(const LinExpr& o) const;
    LinExpr operator-() const;
    LinExpr operator*(const Q& s) const;
    LinExpr& operator+=(const LinExpr& o) { return *this = *this + o; }
    void add_constant(const Q& c) { c0_ += c; }

    // Replace k by e.
    LinExpr subst(Key k, const LinExpr& e) const;
    LinExpr without(Key k) const;
    LinExpr map_keys(const std::function<Key(Key)>& f) const;
    std::optional<Q> eval(const std::function<std::optional<Q>(Key)>& val) const;

    bool operator==(const LinExpr& o) const { return c0_ == o.c0_ && terms_ == o.terms_; }
    bool operator!=(const LinExpr& o) const { return !(*this == o); }
    std::size_t hash() const;

    // Multiply by the positive lcm of denominators; divide by gcd of all numerators
    // (constant too when `include_const`). Returns the positive factor applied.
    Q integerize(bool include_const = true);

    std::string str() const;       // infix, variables ordered by name
    std::string sexpr() const;     // re-parsable term syntax

private:
    std::vector<std::pair<Key, Q>> terms_;
    Q c0_{0};
};

}  // namespace lsynth
