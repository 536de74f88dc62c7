#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <string>

namespace copomdp {

/// Resource level carried along histories. Values are either a concrete
/// amount in [0, capacity], the exhaustion mark (smaller than every
/// integer), or unbounded (used for solver outputs and thresholds).
class ResourceLevel {
public:
    static constexpr int kExhaustedRaw = -1;
    static constexpr int kInfiniteRaw = std::numeric_limits<int>::max() / 4;

    constexpr ResourceLevel() : raw_(kExhaustedRaw) {}
    constexpr explicit ResourceLevel(int amount) : raw_(amount) { assert(amount >= 0); }

    static constexpr ResourceLevel exhausted() { return ResourceLevel(kExhaustedRaw, Tag{}); }
    static constexpr ResourceLevel infinite() { return ResourceLevel(kInfiniteRaw, Tag{}); }

    constexpr bool is_exhausted() const { return raw_ == kExhaustedRaw; }
    constexpr bool is_infinite() const { return raw_ == kInfiniteRaw; }
    constexpr bool is_amount() const { return !is_exhausted() && !is_infinite(); }

    /// Concrete amount; only valid when is_amount().
    constexpr int amount() const {
        assert(is_amount());
        return raw_;
    }

    constexpr bool operator==(const ResourceLevel& o) const { return raw_ == o.raw_; }
    constexpr bool operator!=(const ResourceLevel& o) const { return raw_ != o.raw_; }
    // Exhausted < any amount < infinite, by construction of the raw encoding.
    constexpr bool operator<(const ResourceLevel& o) const { return raw_ < o.raw_; }
    constexpr bool operator<=(const ResourceLevel& o) const { return raw_ <= o.raw_; }
    constexpr bool operator>(const ResourceLevel& o) const { return raw_ > o.raw_; }
    constexpr bool operator>=(const ResourceLevel& o) const { return raw_ >= o.raw_; }

    std::string to_string() const {
        if (is_exhausted()) return "bot";
        if (is_infinite()) return "inf";
        return std::to_string(raw_);
    }

private:
    struct Tag {};
    constexpr ResourceLevel(int raw, Tag) : raw_(raw) {}
    int raw_;
};

/// Level after taking one step from `state` with the given per-step
/// consumption. Reload states refill to capacity before the consumption is
/// subtracted; a negative result exhausts the resource.
inline ResourceLevel next_level(ResourceLevel level, int consumption, bool state_is_reload,
                                int capacity) {
    if (level.is_exhausted()) return ResourceLevel::exhausted();
    assert(level.is_amount());
    const int base = state_is_reload ? capacity : level.amount();
    const int after = base - consumption;
    if (after < 0) return ResourceLevel::exhausted();
    return ResourceLevel(after);
}

/// Minimal level required at `state` so that one step leaves at least
/// `target` units. Infinite when no level in [0, capacity] suffices.
inline ResourceLevel required_level(ResourceLevel target, int consumption, bool state_is_reload,
                                    int capacity) {
    if (target.is_exhausted()) return ResourceLevel::exhausted();
    if (target.is_infinite()) return ResourceLevel::infinite();
    if (target.amount() > capacity - consumption) return ResourceLevel::infinite();
    if (state_is_reload) return ResourceLevel(0);
    return ResourceLevel(target.amount() + consumption);
}

}  // namespace copomdp
