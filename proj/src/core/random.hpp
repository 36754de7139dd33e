#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace cvq {

/// SplitMix64 finalizer; used only to derive seeds, never as a stream.
std::uint64_t mix64(std::uint64_t x);

/// Derives an independent child seed from a parent seed, a stream name and an
/// index. Seeds of distinct (name, index) pairs are unrelated, so adding a new
/// named stream never perturbs existing ones.
std::uint64_t derive_seed(std::uint64_t parent, std::string_view name, std::uint64_t index = 0);

/// A reproducible random stream. The engine (mt19937_64) is fully specified by
/// the standard; conversions to doubles are done here so results do not depend
/// on the standard library's distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Always consumes exactly one draw.
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n); n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  /// Index drawn from non-negative weights (need not be normalized). Consumes one draw.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

}  // namespace cvq
