#pragma once

#include <cstdint>
#include <cstddef>
#include <functional>
#include <vector>

namespace copomdp {

/// Fixed-universe bitset over dense state indices. The universe size is set
/// at construction; all binary operations require equal universe sizes.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe)
        : universe_(universe), words_((universe + 63) / 64, 0) {}

    std::size_t universe_size() const { return universe_; }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    void clear() { for (auto& w : words_) w = 0; }

    bool empty() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    /// Number of set members strictly below index i.
    std::size_t rank(std::size_t i) const {
        std::size_t n = 0;
        const std::size_t full = i >> 6;
        for (std::size_t w = 0; w < full; ++w)
            n += static_cast<std::size_t>(__builtin_popcountll(words_[w]));
        const std::size_t rem = i & 63;
        if (rem) n += static_cast<std::size_t>(
            __builtin_popcountll(words_[full] & ((std::uint64_t{1} << rem) - 1)));
        return n;
    }

    StateSet& operator|=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }
    StateSet& operator&=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }
    StateSet& operator-=(const StateSet& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }

    bool intersects(const StateSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & o.words_[i]) return true;
        return false;
    }

    bool is_subset_of(const StateSet& o) const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & ~o.words_[i]) return false;
        return true;
    }

    bool operator==(const StateSet& o) const { return words_ == o.words_; }
    bool operator!=(const StateSet& o) const { return !(*this == o); }
    bool operator<(const StateSet& o) const { return words_ < o.words_; }

    /// Lowest set index; universe_size() when empty.
    std::size_t first() const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i]) return (i << 6) + static_cast<std::size_t>(__builtin_ctzll(words_[i]));
        return universe_;
    }

    /// Calls fn(index) for every member in increasing order.
    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t i = 0; i < words_.size(); ++i) {
            std::uint64_t w = words_[i];
            while (w) {
                std::size_t b = static_cast<std::size_t>(__builtin_ctzll(w));
                fn((i << 6) + b);
                w &= w - 1;
            }
        }
    }

    std::vector<std::size_t> to_indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for_each([&](std::size_t i) { out.push_back(i); });
        return out;
    }

    std::size_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (auto w : words_) {
            h ^= w;
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h ^ universe_);
    }

private:
    std::size_t universe_ = 0;
    std::vector<std::uint64_t> words_;
};

struct StateSetHash {
    std::size_t operator()(const StateSet& s) const { return s.hash(); }
};

}  // namespace copomdp
