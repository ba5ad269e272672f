#pragma once

// Seeded reproduction of the Gaussian simulation study: the first n_false
// observations come from N(alt_mean, 1), the rest from N(0, 1). Each
// observation yields a likelihood-ratio e-value and a left-tail p-value.
//
// The observation stream is pinned to splitmix64 uniforms pushed through the
// AS241 (PPND16) inverse normal CDF, so any implementation of the same two
// algorithms reproduces the sequence for a given seed.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "edisc/merge_core.hpp"

namespace edisc {

inline constexpr std::uint64_t kDefaultSeed = 1;

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // (top 53 bits + 0.5) / 2^53, strictly inside (0, 1).
  double next_uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Standard normal quantile, Wichura's AS241 PPND16 (relative error ~1e-16).
// p must lie in [0, 1]; the endpoints map to -inf and +inf.
double normal_quantile(double p);

// Standard normal CDF, 0.5 * erfc(-x / sqrt 2).
double normal_cdf(double x);

double sample_normal(SplitMix64& stream);

// exp(alt_mean * x - alt_mean^2 / 2); saturates to +inf.
double e_from_obs(double x, double alt_mean);

// Left-tail p-value Phi(x).
double p_from_obs(double x);

struct SimConfig {
  std::size_t K = 200;
  std::size_t n_false = 100;
  double alt_mean = -3.0;
  std::uint64_t seed = kDefaultSeed;

  // Throws ValidationError.
  void validate() const;
};

struct SimOutput {
  std::vector<double> x;
  std::vector<double> e;
  std::vector<double> p;
  std::vector<bool> is_null;

  std::size_t size() const noexcept { return x.size(); }
  EValueVec evalues() const { return EValueVec(e); }

  friend bool operator==(const SimOutput&, const SimOutput&) = default;
};

SimOutput gen_study(const SimConfig& cfg);

// Study CSV: header `index,x,e,p,is_null`, 1-based index, shortest
// round-trip decimals.
std::string study_to_csv(const SimOutput& study);
SimOutput parse_study_csv(std::string_view text);

}  // namespace edisc
