#ifndef ACX_RANDOM_HPP
#define ACX_RANDOM_HPP

#include <cstdint>
#include <random>

namespace acx {

/// Seed for one (seed, stream) pair, mixed with splitmix64 so nearby seeds
/// give unrelated streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Deterministic generator. Uniform variates are formed from the raw 64-bit
/// engine output instead of std::uniform_real_distribution, whose algorithm
/// is left to the standard library, so data are identical across toolchains.
class Rng {
public:
   explicit Rng(std::uint64_t seed) : engine_(seed) {}

   /// Uniform on [0, 1).
   double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
   double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
   bool bernoulli(double p) { return uniform() < p; }
   /// Uniform integer in [0, n).
   std::uint64_t index(std::uint64_t n) { return engine_() % n; }
   /// Standard normal via Box-Muller.
   double normal();

private:
   std::mt19937_64 engine_;
};

}  // namespace acx

#endif  // ACX_RANDOM_HPP
