#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace lqg {

/// SplitMix64 finaliser; used to derive independent per-task seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seed for the stream identified by (seed, ids...). Streams derived from
/// different id tuples are statistically independent, and the mapping is
/// fixed so results never depend on scheduling.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> ids) : engine_(derive_seed(seed, ids)) {}

  double normal() { return normal_(engine_); }
  /// Uniform on (0, 1]; safe to take logarithms of.
  double uniform_pos() { return 1.0 - uniform_(engine_); }
  double uniform() { return uniform_(engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
  boost::random::uniform_01<double> uniform_;
};

}  // namespace lqg
