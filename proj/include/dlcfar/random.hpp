#pragma once

#include <cstdint>
#include <random>

#include "dlcfar/types.hpp"

namespace dlcfar {

std::uint64_t splitmix64(std::uint64_t x);

// Seed of substream (phase, index) under a master seed. Counter based, so a
// trial's randomness depends only on its index and never on scheduling.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t phase, std::uint64_t index);

// Substream phases used by the harness.
inline constexpr std::uint64_t kPhaseThreshold = 1;
inline constexpr std::uint64_t kPhaseDetection = 2;
inline constexpr std::uint64_t kPhaseAuxiliary = 3;

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}
  RngStream(std::uint64_t master, std::uint64_t phase, std::uint64_t index)
      : RngStream(substream_seed(master, phase, index)) {}

  std::uint64_t seed() const { return seed_; }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  // Circular complex Gaussian with E|z|^2 = 1.
  Complex complex_normal();
  CVector complex_normal(Eigen::Index n);
  CMatrix complex_normal(Eigen::Index rows, Eigen::Index cols);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
  std::uniform_real_distribution<double> uniform_;
};

}  // namespace dlcfar
