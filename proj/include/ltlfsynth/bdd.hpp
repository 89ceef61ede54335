#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

namespace lsynth {

// Reduced ordered decision diagram over variables 0..n (smaller index on top).
// Not thread-safe; use one manager per task.
class Bdd {
public:
    using Ref = std::uint32_t;
    static constexpr Ref kFalse = 0;
    static constexpr Ref kTrue = 1;
    // A cube: (variable, polarity) pairs, sorted by variable.
    using Cube = std::vector<std::pair<std::uint32_t, bool>>;

    Bdd();

    Ref var(std::uint32_t v);
    Ref nvar(std::uint32_t v);
    Ref ite(Ref f, Ref g, Ref h);
    Ref apply_and(Ref a, Ref b) { return ite(a, b, kFalse); }
    Ref apply_or(Ref a, Ref b) { return ite(a, kTrue, b); }
    Ref apply_not(Ref a) { return ite(a, kFalse, kTrue); }
    Ref apply_xor(Ref a, Ref b) { return ite(a, apply_not(b), b); }
    Ref restrict(Ref f, std::uint32_t v, bool val);
    Ref exists(Ref f, std::uint32_t v);
    Ref cube(const Cube& c);

    bool is_const(Ref f) const { return f <= kTrue; }
    std::uint32_t top(Ref f) const { return nodes_[f].var; }
    Ref lo(Ref f) const { return nodes_[f].lo; }
    Ref hi(Ref f) const { return nodes_[f].hi; }

    std::vector<std::uint32_t> support(Ref f) const;
    bool depends_on(Ref f, std::uint32_t v) const;
    bool eval(Ref f, const std::function<bool(std::uint32_t)>& val) const;
    // Irredundant sum-of-products cover of some g with lower <= g <= upper.
    std::vector<Cube> isop(Ref lower, Ref upper);
    // Same, but gives up (nullopt) once the cover exceeds `limit` cubes.
    std::optional<std::vector<Cube>> isop_bounded(Ref lower, Ref upper, std::size_t limit);
    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        std::uint32_t var;
        Ref lo, hi;
    };
    Ref mk(std::uint32_t v, Ref lo, Ref hi);
    std::pair<Ref, Ref> cofactors(Ref f, std::uint32_t v) const;
    struct Cover {
        std::vector<Cube> cubes;
        Ref f;
        bool overflow;
    };
    Cover isop_rec(Ref lower, Ref upper, std::size_t limit);

    struct Key3Hash {
        std::size_t operator()(const std::tuple<Ref, Ref, Ref>& k) const;
    };
    std::vector<Node> nodes_;
    std::unordered_map<std::tuple<Ref, Ref, Ref>, Ref, Key3Hash> unique_, ite_cache_;
    std::unordered_map<std::tuple<Ref, Ref, Ref>, Ref, Key3Hash> restrict_cache_;
    std::unordered_map<std::tuple<Ref, Ref, Ref>, Cover, Key3Hash> isop_cache_;
};

}  // namespace lsynth
