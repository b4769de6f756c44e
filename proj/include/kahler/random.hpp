#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace kahler {

// Child seed for task `index` of a run seeded with `seed` (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Seeded standard-normal source. Streams are reproducible for a given seed
// on a given standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  Eigen::VectorXd normal_vector(Eigen::Index size);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace kahler
