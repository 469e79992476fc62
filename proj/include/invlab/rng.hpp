#pragma once

#include <cstdint>
#include <vector>

namespace invlab {

// Counter-based generator: sample i of stream `seed` is a pure function of
// (seed, i), so parallel shards and resumed scans produce identical values
// regardless of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return splitmix64(seed_ ^ splitmix64(counter ^ 0x5851f42d4c957f2dULL));
    }

    // Uniform in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * uniform(counter);
    }

    // Derives an independent stream, e.g. one per lattice shard.
    CounterRng substream(std::uint64_t tag) const {
        return CounterRng(splitmix64(seed_ ^ splitmix64(tag + 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
};

// Sequential draw helper over a CounterRng: each call advances the counter.
class RngStream {
public:
    explicit RngStream(const CounterRng& rng, std::uint64_t start = 0) : rng_(rng), ctr_(start) {}

    double uniform() { return rng_.uniform(ctr_++); }
    double uniform(double lo, double hi) { return rng_.uniform(ctr_++, lo, hi); }
    std::uint64_t counter() const { return ctr_; }

private:
    CounterRng rng_;
    std::uint64_t ctr_;
};

// Van der Corput radical inverse in the given base.
inline double radical_inverse(std::uint64_t i, unsigned base) {
    double inv = 1.0 / base, f = inv, x = 0.0;
    while (i > 0) {
        x += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return x;
}

// Halton point in [0,1)^dim, dim <= 10.
std::vector<double> halton_point(std::uint64_t index, int dim);

}  // namespace invlab
