#pragma once

// U-statistic ie-merging functions over independent e-values.
//
// U_n(e_1..e_K) is the average, over all n-element subsets, of the product of
// the chosen e-values. For n > K the convention U_n := U_K is used, so every
// order is defined at every arity K >= 1.
//
// Arithmetic follows two conventions throughout: 0 * inf == 0 (a zero e-value
// annihilates a product), and overflow saturates to +inf instead of failing.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace edisc {

// A nonempty vector of e-values in [0, +inf]. NaN and negatives are rejected
// at construction.
class EValueVec {
 public:
  explicit EValueVec(std::vector<double> values);
  EValueVec(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

 private:
  std::vector<double> values_;
};

// Order n >= 1 of a U-statistic.
class UStatOrder {
 public:
  explicit UStatOrder(int n);
  int value() const noexcept { return n_; }
  friend bool operator==(UStatOrder, UStatOrder) = default;

 private:
  int n_;
};

// Throws ValidationError unless v is a valid e-value.
void check_evalue(double v);

// 0 * inf == 0.
inline double sat_mul(double a, double b) noexcept {
  return (a == 0.0 || b == 0.0) ? 0.0 : a * b;
}

// C(m, k) via the multiplicative formula, in floating point.
double binomial(std::size_t m, std::size_t k) noexcept;

// Reference evaluator: enumerates every n-subset of e. Cost is C(K, n)
// products, so keep it to small inputs.
double u_stat_direct(const EValueVec& e, UStatOrder n);

// U_2 via ((sum e)^2 - sum e^2) / (K (K - 1)). Requires K >= 2.
double u2_identity(const EValueVec& e);

// Relative sample variance var(e) / ((K - 1) M_1^2), in [0, 1]; 0 for the
// zero vector. Infinite entries are treated as the limit where they dominate
// every finite entry. Requires K >= 2.
double rvar(const EValueVec& e);

// min(1, 1/e), with e = 0 -> 1 and e = +inf -> 0.
double e_to_p(double e);

// Running elementary symmetric polynomials E_0..E_n of an inserted multiset.
// Insertion is O(n); the U_n readout is O(n).
class UStatAccumulator {
 public:
  explicit UStatAccumulator(UStatOrder order);

  void insert(double v);

  // U_n of the inserted multiset; uses E_min(n, m) / C(m, min(n, m)).
  // Throws DomainError when nothing has been inserted.
  double u_value() const;

  UStatOrder order() const noexcept { return order_; }
  std::size_t count() const noexcept { return count_; }
  std::span<const double> esp() const noexcept { return esp_; }

 private:
  UStatOrder order_;
  std::size_t count_ = 0;
  std::vector<double> esp_;
};

// Value-returning insert, for call sites that keep accumulators immutable.
inline UStatAccumulator inserted(UStatAccumulator acc, double v) {
  acc.insert(v);
  return acc;
}

}  // namespace edisc
