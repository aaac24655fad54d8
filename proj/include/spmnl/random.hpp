#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace spmnl {

//! SplitMix64 finaliser, used to derive independent stream seeds.
constexpr std::uint64_t
splitmix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//! Seed of stream `stream` under base seed `seed`:
//! splitmix64(splitmix64(seed) ^ (stream + 1)).
constexpr std::uint64_t
derive_seed(std::uint64_t seed, std::uint64_t stream)
{
  return splitmix64(splitmix64(seed) ^ (stream + 1));
}

//! Portable random stream: std::mt19937_64 (bit-identical on every
//! conforming platform) with distribution transforms written out here,
//! since std:: distributions are implementation-defined.
class RandomStream
{
public:
  explicit RandomStream(std::uint64_t seed)
    : engine_(seed)
  {}

  RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(derive_seed(seed, stream))
  {}

  std::uint64_t next() { return engine_(); }

  //! Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  //! Standard normal by Box-Muller; one draw per two uniforms.
  double normal()
  {
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double normal(double mu, double sd) { return mu + sd * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

  //! Index drawn with the given probabilities (assumed to sum to one).
  template <typename Probabilities>
  int categorical(const Probabilities& prob)
  {
    const double u = uniform();
    double acc = 0.0;
    const int k = static_cast<int>(prob.size());
    for (int c = 0; c < k - 1; ++c) {
      acc += prob[c];
      if (u < acc)
        return c;
    }
    return k - 1;
  }

  //! Uniform integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n)
  {
    const std::uint64_t limit = ~std::uint64_t{ 0 } - (~std::uint64_t{ 0 } % n);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

private:
  std::mt19937_64 engine_;
};

} // namespace spmnl
