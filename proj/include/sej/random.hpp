#pragma once

#include <cstdint>
#include <string_view>

namespace sej {

/// Counter-based uniform stream.
///
/// Every draw is a pure function of (key, index), so a stream can be
/// partitioned across workers at arbitrary boundaries and still produce the
/// exact same sequence. Sub-streams are derived by label (e.g. one per basket
/// category), which keeps sampling independent of category *order*.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : key_(mix64(seed)) {}

    /// Child stream whose draws are independent of this one.
    RandomStream fork(std::string_view label) const {
        return RandomStream(key_ ^ fnv1a64(label), 0);
    }

    /// Uniform draw in the open interval (0,1) for a given counter value.
    double uniform_at(std::uint64_t index) const {
        const std::uint64_t h = mix64(key_ + index * 0x9E3779B97F4A7C15ULL);
        // 53 mantissa bits, offset by half a step: never exactly 0 or 1.
        return (static_cast<double>(h >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Sequential convenience draw.
    double next_uniform() { return uniform_at(counter_++); }

    std::uint64_t key() const { return key_; }

private:
    RandomStream(std::uint64_t key, std::uint64_t counter)
        : key_(key), counter_(counter) {}

    // splitmix64 finalizer
    static std::uint64_t mix64(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

    static std::uint64_t fnv1a64(std::string_view s) {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace sej
