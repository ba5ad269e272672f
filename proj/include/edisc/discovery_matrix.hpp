#pragma once

// Discovery matrices: DM(r, j) is an e-value supporting the claim that, among
// the r hypotheses with the largest e-values, at least j are false nulls.
//
// Both builders take the e-values sorted ascending (e_1 <= ... <= e_K) and
// evaluate, for every 1 <= j <= r <= K,
//
//   DM(r, j) = min_{i = 0..K-r} U_n(e_k : k in S(r, j) u {1..i}),
//   S(r, j)  = {K-r+1, ..., K-j+1},
//
// with U_n applied at whatever arity the multiset has.

#include <cstddef>
#include <span>
#include <vector>

#include "edisc/merge_core.hpp"

namespace edisc {

enum class MatrixKind { evalue, pvalue };

// Packed lower-triangular K x K matrix, indexed 1-based with 1 <= j <= r <= K.
class TriangularMatrix {
 public:
  TriangularMatrix(std::size_t dim, MatrixKind kind, double fill = 0.0);

  std::size_t dim() const noexcept { return dim_; }
  MatrixKind kind() const noexcept { return kind_; }

  // Unchecked access.
  double operator()(std::size_t r, std::size_t j) const noexcept { return cells_[offset(r, j)]; }
  double& operator()(std::size_t r, std::size_t j) noexcept { return cells_[offset(r, j)]; }

  // Throws IndexError outside the lower triangle.
  double at(std::size_t r, std::size_t j) const;
  double& at(std::size_t r, std::size_t j);

  // Row-major over the triangle: (1,1), (2,1), (2,2), (3,1), ...
  std::span<const double> cells() const noexcept { return cells_; }

  friend bool operator==(const TriangularMatrix&, const TriangularMatrix&) = default;

 private:
  static std::size_t offset(std::size_t r, std::size_t j) noexcept { return (r - 1) * r / 2 + (j - 1); }
  void check_index(std::size_t r, std::size_t j) const;

  std::size_t dim_;
  MatrixKind kind_;
  std::vector<double> cells_;
};

class DiscoveryMatrix : public TriangularMatrix {
 public:
  DiscoveryMatrix(std::size_t dim, UStatOrder order)
      : TriangularMatrix(dim, MatrixKind::evalue), order_(order) {}

  UStatOrder order() const noexcept { return order_; }

 private:
  UStatOrder order_;
};

// Calibrated discovery p-matrix; entries in [0, 1].
using PMatrix = TriangularMatrix;

struct SortedEValues {
  std::vector<double> values;   // ascending
  std::vector<std::size_t> perm;  // perm[i] = original index of values[i]
};

// Stable ascending sort; ties keep input order.
SortedEValues sort_evalues(const EValueVec& e);

struct BuildOptions {
  unsigned threads = 1;  // 0 means hardware concurrency
};

// Literal transcription: every candidate evaluated from scratch with
// u_stat_direct. O(K^(3+n)); meant as a test oracle for K up to a few dozen.
DiscoveryMatrix build_dm_reference(const SortedEValues& s, UStatOrder n);

// Same matrix via one UStatAccumulator per cell: seed with S(r, j), then
// insert e_1..e_{K-r} keeping the running minimum. O(n K^3) overall. Cells are
// independent, so the result is bitwise identical for every thread count.
DiscoveryMatrix build_dm_fast(const SortedEValues& s, UStatOrder n, BuildOptions options = {});

// Entrywise min(1, 1/DM(r, j)).
PMatrix dm_to_pmatrix(const TriangularMatrix& dm);

// DM(r, j) with bounds checking.
double dm_query(const TriangularMatrix& dm, std::size_t r, std::size_t j);

}  // namespace edisc
