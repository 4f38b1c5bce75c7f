#pragma once

#include <cmath>
#include <cstdint>

namespace pathcalc {

// Counter-based generator: draw i is splitmix64(seed + (i+1)*golden), so a
// stream is a pure function of (seed, counter) and any draw can be addressed
// directly. Same seed => bit-identical stream, independent of call order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t u64_at(std::uint64_t i) const {
        return mix(seed_ + (i + 1) * 0x9E3779B97F4A7C15ULL);
    }

    // uniform on the open interval (0,1); never returns an endpoint
    double uniform_at(std::uint64_t i) const {
        return (double(u64_at(i) >> 11) + 0.5) * 0x1.0p-53;
    }

    // standard normal via Box-Muller; draw i consumes counters 2i and 2i+1
    double normal_at(std::uint64_t i) const {
        const double u1 = uniform_at(2 * i);
        const double u2 = uniform_at(2 * i + 1);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // sequential interface on top of the counter addressing
    std::uint64_t next_u64() { return u64_at(ctr_++); }
    double uniform() { return uniform_at(ctr_++); }
    double normal() { const double z = normal_at(norm_ctr_); ++norm_ctr_; return z; }

    // independent substream (e.g. one per ensemble member)
    Rng substream(std::uint64_t k) const { return Rng(mix(seed_ ^ mix(k + 0x632BE59BD9B4E019ULL))); }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t ctr_ = 0;
    std::uint64_t norm_ctr_ = 0;
};

} // namespace pathcalc
