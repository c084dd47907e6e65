#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace dcrab {

/// SplitMix64 finalizer. Used to derive statistically independent per-run
/// seeds from a master seed without constraining how runs are scheduled.
inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x1234567887654321ULL));
}

/// Deterministic random stream. All distributions are implemented on top of
/// the raw mt19937_64 output so that a given seed produces the same sequence
/// on every platform (std::uniform_real_distribution and
/// std::normal_distribution make no such guarantee).
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]. Needed where 0 must be excluded (e.g. frequencies).
    double uniform01_oc() { return 1.0 - uniform01(); }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller (platform independent).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform01_oc();  // > 0 so log is finite
        double v = uniform01();
        double r = std::sqrt(-2.0 * std::log(u));
        double a = 2.0 * std::numbers::pi * v;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace dcrab
