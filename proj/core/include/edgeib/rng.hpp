#pragma once

#include <cmath>
#include <cstdint>

namespace edgeib {

// Counter-based deterministic random streams. Unlike std::normal_distribution,
// the output is identical across standard library implementations, which the
// bit-exact reproducibility guarantees rely on.

constexpr std::uint64_t kSeedMixConstant = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += kSeedMixConstant;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives an independent stream seed from a base seed and an index.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ splitmix64(index * kSeedMixConstant + 1));
}

/// Stateless uniform in (0, 1) for a (seed, counter) pair.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(counter + 1));
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Unit-mean exponential variate (Rayleigh fading power gain).
inline double exponential1(std::uint64_t seed, std::uint64_t counter) {
    return -std::log(uniform01(seed, counter));
}

/// Small sequential N(0,1) generator via Box-Muller on the stateless stream.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : seed_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01(seed_, counter_++);
        const double u2 = uniform01(seed_, counter_++);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace edgeib
