#pragma once

// Brute-force closed testing with Simes local tests, producing a discovery
// p-matrix comparable to the calibrated e-value matrices.
//
// Entry (r, j) is the p-value for "at least j false nulls among R_r", the r
// hypotheses with the smallest p-values (ties broken by input index):
//
//   P(r, j) = max { simes_p(J) : J nonempty, |J n R_r| >= r - j + 1 }.
//
// Enumerates all 2^K subsets, hence the hard K <= 20 guard.

#include <cstddef>
#include <span>
#include <vector>

#include "edisc/discovery_matrix.hpp"

namespace edisc {

inline constexpr std::size_t kMaxBruteForceK = 20;

// A nonempty vector of p-values in [0, 1].
class PValueVec {
 public:
  explicit PValueVec(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

// min_i |sub| p_(i) / i, capped at 1.
double simes_p(std::span<const double> sub);

// Throws SizeError when K > kMaxBruteForceK.
PMatrix ct_discovery_pmatrix(const PValueVec& p);

}  // namespace edisc
