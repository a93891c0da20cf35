#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace corrseek {

/// Splittable counter-style generator built on SplitMix64.
///
/// Streams are keyed by folding integer tags into the seed, so the
/// randomness of (seed, iteration, phase) is independent of which worker
/// draws it and in which order. Output is identical across platforms.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    static Rng keyed(uint64_t seed, std::initializer_list<uint64_t> tags) {
        uint64_t h = seed;
        for (uint64_t tag : tags) {
            h = mix(h ^ mix(tag + 0x9e3779b97f4a7c15ULL));
        }
        return Rng(h);
    }

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform value in [0, bound), bound > 0. Rejection sampling keeps it unbiased.
    uint64_t next_below(uint64_t bound) {
        uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    int next_sign() { return (next_u64() >> 63) ? -1 : 1; }

    bool next_bool() { return (next_u64() >> 63) != 0; }

    /// Uniform double in [0, 1).
    double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    uint64_t state_;
};

}  // namespace corrseek
