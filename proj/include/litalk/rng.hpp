#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace litalk {

/// Gaussian source whose output depends only on the seed. std::normal_distribution
/// is implementation-defined, so frames would differ between standard libraries.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // (0, 1]
  double normal();   // Box-Muller, mean 0, stddev 1

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Mixes a base seed with a list of indices into a new seed (splitmix64 steps).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

}  // namespace litalk
