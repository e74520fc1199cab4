#pragma once

#include <cstdint>
#include <cmath>

namespace abelrad {

// Counter-based generator built on the SplitMix64 mixing function.
// Substream k of seed s produces the deterministic sequence
//   mix(s + GOLDEN*(k+1) + GOLDEN2*n),  n = 0,1,...
// so any entry of any substream is addressable in O(1). This is what makes
// matrix perturbation and noise draws reproducible independent of
// evaluation order.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(seed + kGolden * (stream + 1)), n_(0) {}

    std::uint64_t next_u64() { return mix(base_ + kGolden2 * (n_++)); }

    /// Uniform in [0,1).
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [a,b).
    double next_uniform(double a, double b) { return a + (b - a) * next_unit(); }

    /// Standard normal via Box-Muller (consumes two draws).
    double next_normal() {
        double u1 = next_unit();
        double u2 = next_unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// One-off draw: first uniform of substream `stream` under `seed`.
    static double uniform_at(std::uint64_t seed, std::uint64_t stream, double a, double b) {
        CounterRng r(seed, stream);
        return r.next_uniform(a, b);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

  private:
    static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
    static constexpr std::uint64_t kGolden2 = 0xd1b54a32d192ed03ull;
    std::uint64_t base_;
    std::uint64_t n_;
};

}  // namespace abelrad
