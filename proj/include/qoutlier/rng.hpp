#pragma once

#include <cstdint>
#include <random>

namespace qoutlier {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seeded random stream with cheap, collision-resistant substream derivation.
// Monte Carlo loops derive one substream per sample index, so results do not
// depend on how the loop is partitioned across workers.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : key_(splitmix64(seed)) {}

    RngStream derived(std::uint64_t index) const {
        return RngStream(FromKey{}, splitmix64(key_ ^ splitmix64(index + 1)));
    }

    RngStream derived(std::uint64_t a, std::uint64_t b) const {
        return derived(a).derived(b);
    }

    std::uint64_t key() const { return key_; }

    std::mt19937_64 engine() const { return std::mt19937_64(key_); }

private:
    struct FromKey {};
    RngStream(FromKey, std::uint64_t key) : key_(key) {}

    std::uint64_t key_;
};

} // namespace qoutlier
