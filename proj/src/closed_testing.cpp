#include "edisc/closed_testing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "edisc/errors.hpp"

namespace edisc {

PValueVec::PValueVec(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("p-value vector is empty");
  for (double p : values_) {
    if (std::isnan(p) || p < 0.0 || p > 1.0) {
      throw ValidationError("p-value outside [0, 1]: " + std::to_string(p));
    }
  }
}

double simes_p(std::span<const double> sub) {
  if (sub.empty()) throw ValidationError("Simes test of an empty set");
  std::vector<double> sorted(sub.begin(), sub.end());
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double best = 1.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    best = std::min(best, m * sorted[i] / static_cast<double>(i + 1));
  }
  return best;
}

PMatrix ct_discovery_pmatrix(const PValueVec& p) {
  const std::size_t size = p.size();
  if (size > kMaxBruteForceK) {
    throw SizeError("closed-testing baseline enumerates all subsets and is limited to K <= " +
                    std::to_string(kMaxBruteForceK) + ", got K = " + std::to_string(size));
  }

  // Ascending order with ties broken by index; rank_mask[r] is R_r.
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<std::uint32_t> rank_mask(size + 1, 0);
  for (std::size_t r = 1; r <= size; ++r) rank_mask[r] = rank_mask[r - 1] | (1u << order[r - 1]);

  // worst[r][c]: largest Simes p over subsets J with |J n R_r| == c.
  std::vector<std::vector<double>> worst(size + 1, std::vector<double>(size + 1, 0.0));
  const std::uint32_t full = (1u << size) - 1u;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    // Members visited in ascending p order, so the i-th hit is p_(i).
    const double m = static_cast<double>(std::popcount(mask));
    double simes = 1.0;
    std::size_t seen = 0;
    for (std::size_t idx : order) {
      if (mask & (1u << idx)) {
        ++seen;
        simes = std::min(simes, m * p[idx] / static_cast<double>(seen));
      }
    }
    for (std::size_t r = 1; r <= size; ++r) {
      const auto c = static_cast<std::size_t>(std::popcount(mask & rank_mask[r]));
      worst[r][c] = std::max(worst[r][c], simes);
    }
  }

  PMatrix out(size, MatrixKind::pvalue);
  for (std::size_t r = 1; r <= size; ++r) {
    // Suffix maximum over c >= r - j + 1, filled as j grows.
    double running = 0.0;
    for (std::size_t j = 1; j <= r; ++j) {
      running = std::max(running, worst[r][r - j + 1]);
      out(r, j) = running;
    }
  }
  return out;
}

}  // namespace edisc
