#ifndef COOWNET_RNG_HPP
#define COOWNET_RNG_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace coownet {

// xoshiro256** seeded through splitmix64. Implemented here (rather than
// <random>) so that streams are identical across standard libraries and
// golden fixtures stay valid.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  // Unbiased integer in [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller.
  double normal();
  double lognormal(double mu, double sigma);

  // Index into `weights` with probability proportional to the weight.
  int weighted_index(std::span<const double> weights);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  std::array<std::uint64_t, 4> state_;
};

// Deterministic sub-seed for a pipeline stage: FNV-1a over the stage name,
// mixed with the root seed and index through a splitmix64 finalizer. All
// stage-level randomness is derived this way from the single user seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stage,
                          std::uint64_t index);

}  // namespace coownet

#endif
