#include "edisc/discovery_matrix.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <string>
#include <thread>

#include "edisc/errors.hpp"

namespace edisc {

TriangularMatrix::TriangularMatrix(std::size_t dim, MatrixKind kind, double fill)
    : dim_(dim), kind_(kind), cells_(dim * (dim + 1) / 2, fill) {
  if (dim == 0) throw ValidationError("triangular matrix needs dimension >= 1");
}

void TriangularMatrix::check_index(std::size_t r, std::size_t j) const {
  if (r < 1 || r > dim_ || j < 1 || j > r) {
    throw IndexError("index (r=" + std::to_string(r) + ", j=" + std::to_string(j) +
                     ") outside the lower triangle of a " + std::to_string(dim_) + "x" +
                     std::to_string(dim_) + " matrix");
  }
}

double TriangularMatrix::at(std::size_t r, std::size_t j) const {
  check_index(r, j);
  return (*this)(r, j);
}

double& TriangularMatrix::at(std::size_t r, std::size_t j) {
  check_index(r, j);
  return (*this)(r, j);
}

SortedEValues sort_evalues(const EValueVec& e) {
  SortedEValues out;
  out.perm.resize(e.size());
  std::iota(out.perm.begin(), out.perm.end(), std::size_t{0});
  std::stable_sort(out.perm.begin(), out.perm.end(),
                   [&](std::size_t a, std::size_t b) { return e[a] < e[b]; });
  out.values.reserve(e.size());
  for (std::size_t i : out.perm) out.values.push_back(e[i]);
  return out;
}

namespace {

void validate_sorted(const SortedEValues& s) {
  if (s.values.empty()) throw ValidationError("no e-values");
  for (double v : s.values) check_evalue(v);
  if (!std::is_sorted(s.values.begin(), s.values.end())) {
    throw ValidationError("e-values are not sorted ascending");
  }
}

// Cell (r, j) of the fast builder. Self-contained sequential arithmetic.
double fast_cell(std::span<const double> e, UStatOrder n, std::size_t r, std::size_t j) {
  const std::size_t size = e.size();
  UStatAccumulator acc(n);
  // S(r, j) = {K-r+1, ..., K-j+1} in 1-based positions.
  for (std::size_t k = size - r; k <= size - j; ++k) acc.insert(e[k]);
  double best = acc.u_value();
  for (std::size_t i = 0; i < size - r; ++i) {
    acc.insert(e[i]);
    best = std::min(best, acc.u_value());
  }
  return best;
}

}  // namespace

DiscoveryMatrix build_dm_reference(const SortedEValues& s, UStatOrder n) {
  validate_sorted(s);
  const std::size_t size = s.values.size();
  DiscoveryMatrix dm(size, n);
  std::vector<double> subset;
  subset.reserve(size);
  for (std::size_t r = 1; r <= size; ++r) {
    for (std::size_t j = 1; j <= r; ++j) {
      subset.assign(s.values.begin() + static_cast<std::ptrdiff_t>(size - r),
                    s.values.begin() + static_cast<std::ptrdiff_t>(size - j + 1));
      double best = u_stat_direct(EValueVec(subset), n);
      for (std::size_t i = 1; i <= size - r; ++i) {
        subset.push_back(s.values[i - 1]);
        best = std::min(best, u_stat_direct(EValueVec(subset), n));
      }
      dm(r, j) = best;
    }
  }
  return dm;
}

DiscoveryMatrix build_dm_fast(const SortedEValues& s, UStatOrder n, BuildOptions options) {
  validate_sorted(s);
  const std::size_t size = s.values.size();
  DiscoveryMatrix dm(size, n);
  const std::span<const double> e(s.values);

  auto fill_row = [&](std::size_t r) {
    for (std::size_t j = 1; j <= r; ++j) dm(r, j) = fast_cell(e, n, r, j);
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, size));
  if (threads <= 1) {
    for (std::size_t r = 1; r <= size; ++r) fill_row(r);
    return dm;
  }

  // Rows are handed out dynamically; each row writes a disjoint slice.
  std::atomic<std::size_t> next{1};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t r = next.fetch_add(1); r <= size; r = next.fetch_add(1)) fill_row(r);
    });
  }
  workers.clear();
  return dm;
}

PMatrix dm_to_pmatrix(const TriangularMatrix& dm) {
  if (dm.kind() != MatrixKind::evalue) throw ValidationError("calibration expects an e-value matrix");
  PMatrix p(dm.dim(), MatrixKind::pvalue);
  for (std::size_t r = 1; r <= dm.dim(); ++r) {
    for (std::size_t j = 1; j <= r; ++j) p(r, j) = e_to_p(dm(r, j));
  }
  return p;
}

double dm_query(const TriangularMatrix& dm, std::size_t r, std::size_t j) { return dm.at(r, j); }

}  // namespace edisc
