#ifndef SBMC_RNG_HPP
#define SBMC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <string>

namespace sbmc {

// xoshiro256++ 1.0 (Blackman/Vigna), seeded through splitmix64.  Per-chain
// streams are derived from (seed, chain index) so concurrent chains never
// share state; the algorithm name below is recorded in every output file.
inline constexpr const char* kRngAlgorithm = "xoshiro256++";
inline constexpr const char* kRngVersion = "1.0";

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
};

class Rng {
  public:
    using result_type = std::uint64_t;

    Rng() : Rng(0, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream) {
        SplitMix64 sm(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        for (auto& w : s_) w = sm.next();
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ULL; }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform() {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    }

    bool coin() { return ((*this)() >> 63) != 0; }

    double normal() {
        // Box-Muller; one value per call keeps the stream layout simple
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

}  // namespace sbmc

#endif
