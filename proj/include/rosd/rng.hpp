#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace rosd {

/// Seeded random source with a portable value sequence. mt19937_64's output
/// is pinned by the standard; the uniform/normal mappings below are fixed
/// here because the std::*_distribution adapters are implementation-defined
/// and would break byte-for-byte reproducibility of generated datasets.
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (one draw per call, second value
    /// discarded to keep the stream position a pure function of call count).
    double normal() {
        const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  private:
    std::mt19937_64 gen_;
};

}  // namespace rosd
