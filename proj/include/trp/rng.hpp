#pragma once

#include <cstdint>
#include <vector>

#include "trp/errors.hpp"

namespace trp {

/// xoshiro256** seeded through splitmix64.  Self-contained so that seeded
/// runs produce identical artifacts on every platform (std:: distributions
/// are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        if (lo > hi) throw ModelError("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
        return lo + static_cast<int>(next() % span); // modulo bias negligible here
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    /// Index into a discrete distribution given positive weights.
    std::size_t pick_weighted(const std::vector<double>& weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        double r = uniform() * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            r -= weights[i];
            if (r <= 0.0) return i;
        }
        return weights.size() - 1;
    }

    /// Derived stream for a worker/substream id.
    Rng split(std::uint64_t stream) { return Rng(next() ^ (stream * 0x9e3779b97f4a7c15ULL)); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

} // namespace trp
