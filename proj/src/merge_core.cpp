#include "edisc/merge_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "edisc/errors.hpp"

namespace edisc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_at_least_two(const EValueVec& e, const char* what) {
  if (e.size() < 2) {
    throw DomainError(std::string(what) + " needs at least two e-values, got " +
                      std::to_string(e.size()));
  }
}

}  // namespace

void check_evalue(double v) {
  if (std::isnan(v)) throw ValidationError("e-value is NaN");
  if (v < 0.0) throw ValidationError("e-value is negative: " + std::to_string(v));
}

EValueVec::EValueVec(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ValidationError("e-value vector is empty");
  for (double v : values_) check_evalue(v);
}

EValueVec::EValueVec(std::initializer_list<double> values)
    : EValueVec(std::vector<double>(values)) {}

UStatOrder::UStatOrder(int n) : n_(n) {
  if (n < 1) throw ValidationError("U-statistic order must be >= 1, got " + std::to_string(n));
}

double binomial(std::size_t m, std::size_t k) noexcept {
  if (k > m) return 0.0;
  k = std::min(k, m - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    c *= static_cast<double>(m - k + i);
    c /= static_cast<double>(i);
  }
  return c;
}

double u_stat_direct(const EValueVec& e, UStatOrder n) {
  const std::size_t size = e.size();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(n.value()), size);

  // Lexicographic walk over k-subsets {idx[0] < ... < idx[k-1]}.
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;

  double sum = 0.0;
  for (;;) {
    double prod = 1.0;
    for (std::size_t i = 0; i < k; ++i) prod = sat_mul(prod, e[idx[i]]);
    sum += prod;

    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == size - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
  }
  return sum / binomial(size, k);
}

double u2_identity(const EValueVec& e) {
  require_at_least_two(e, "U_2 identity");
  const double size = static_cast<double>(e.size());

  const auto infinite = std::count_if(e.begin(), e.end(), [](double v) { return std::isinf(v); });
  if (infinite > 0) {
    const auto nonzero = std::count_if(e.begin(), e.end(), [](double v) { return v != 0.0; });
    return nonzero >= 2 ? kInf : 0.0;
  }

  // Scale by the maximum so the squares cannot overflow before the difference.
  const double top = *std::max_element(e.begin(), e.end());
  if (top == 0.0) return 0.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double v : e) {
    const double y = v / top;
    sum += y;
    sum_sq += y * y;
  }
  const double diff = std::max(0.0, sum * sum - sum_sq);
  return sat_mul(top, sat_mul(top, diff)) / (size * (size - 1.0));
}

double rvar(const EValueVec& e) {
  require_at_least_two(e, "relative variance");
  const std::size_t size = e.size();

  std::vector<double> y(size);
  const bool has_inf = std::any_of(e.begin(), e.end(), [](double v) { return std::isinf(v); });
  if (has_inf) {
    for (std::size_t i = 0; i < size; ++i) y[i] = std::isinf(e[i]) ? 1.0 : 0.0;
  } else {
    const double top = *std::max_element(e.begin(), e.end());
    if (top == 0.0) return 0.0;
    for (std::size_t i = 0; i < size; ++i) y[i] = e[i] / top;
  }

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(size);
  double var = 0.0;
  for (double v : y) var += (v - mean) * (v - mean);
  var /= static_cast<double>(size);

  const double r = var / (static_cast<double>(size - 1) * mean * mean);
  return std::clamp(r, 0.0, 1.0);
}

double e_to_p(double e) {
  check_evalue(e);
  if (e == 0.0) return 1.0;
  return std::min(1.0, 1.0 / e);
}

UStatAccumulator::UStatAccumulator(UStatOrder order)
    : order_(order), esp_(static_cast<std::size_t>(order.value()) + 1, 0.0) {
  esp_[0] = 1.0;
}

void UStatAccumulator::insert(double v) {
  check_evalue(v);
  // Descending i so esp_[i - 1] still refers to the multiset before v.
  const std::size_t top = std::min(esp_.size() - 1, count_ + 1);
  for (std::size_t i = top; i >= 1; --i) esp_[i] += sat_mul(v, esp_[i - 1]);
  ++count_;
}

double UStatAccumulator::u_value() const {
  if (count_ == 0) throw DomainError("U-statistic of an empty multiset");
  const std::size_t k = std::min(esp_.size() - 1, count_);
  return esp_[k] / binomial(count_, k);
}

}  // namespace edisc
