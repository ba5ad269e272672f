#pragma once

// Serialization and heatmap rendering for discovery matrices.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "edisc/discovery_matrix.hpp"

namespace edisc {

enum class ScaleKind { jeffreys_e, fisher_p };

struct ColorBand {
  std::string name;
  std::string rgb;  // "#RRGGBB"
};

// Bands are listed in increasing order of the classified value, so
// bands.size() == thresholds.size() + 1.
struct ColorScale {
  ScaleKind kind;
  std::vector<double> thresholds;
  std::vector<ColorBand> bands;

  // Jeffreys evidence buckets for e-values: 1, 10^0.5, 10, 10^1.5, 100.
  // Buckets are closed on the left: exactly 10 is "strong".
  static ColorScale jeffreys();
  // Fisher significance buckets for p-values: 0.001, 0.005, 0.01, 0.05.
  // Buckets are closed on the right: exactly 0.05 is "significant".
  static ColorScale fisher();

  MatrixKind matrix_kind() const noexcept {
    return kind == ScaleKind::jeffreys_e ? MatrixKind::evalue : MatrixKind::pvalue;
  }
  std::string_view name() const noexcept {
    return kind == ScaleKind::jeffreys_e ? "jeffreys-e" : "fisher-p";
  }

  // 0 is the weakest band on both scales.
  std::size_t strength(std::size_t band) const noexcept {
    return kind == ScaleKind::jeffreys_e ? band : bands.size() - 1 - band;
  }
};

// Band index of value. Throws ValidationError outside the scale's domain.
std::size_t classify(double value, const ColorScale& scale);

// `r,j,value` header, rows r-major then j ascending.
std::string matrix_to_csv(const TriangularMatrix& m);
// Kind is not stored in the file; the caller states it and the values are
// checked against its domain.
TriangularMatrix parse_matrix_csv(std::string_view text, MatrixKind kind);

// {"kind": "evalue"|"pvalue", "dim": K, "rows": [[DM(1,1)], [DM(2,1), DM(2,2)], ...]}
// with infinities as the string "inf".
std::string matrix_to_json(const TriangularMatrix& m);

struct RenderSpec {
  int cell_size = 4;
  int margin = 10;
  bool axis_labels = false;
  bool legend = true;

  void validate() const;
};

// Cell (r, j) is drawn at column j, row r; r grows downward. Output is a
// pure function of its arguments.
std::string matrix_to_svg(const TriangularMatrix& m, const ColorScale& scale,
                          const RenderSpec& spec = {});

std::vector<std::size_t> band_census(const TriangularMatrix& m, const ColorScale& scale);

struct ComparisonReport {
  std::string scale;
  std::size_t dim = 0;
  std::size_t cells = 0;
  std::vector<std::string> band_names;
  std::vector<std::size_t> a_counts;
  std::vector<std::size_t> b_counts;
  std::size_t b_stronger = 0;
  std::size_t b_weaker = 0;

  std::size_t a_count(std::string_view band) const;
  std::size_t b_count(std::string_view band) const;

  // Line-oriented key=value text.
  std::string to_text() const;
};

ComparisonReport compare_report(const TriangularMatrix& a, const TriangularMatrix& b,
                                const ColorScale& scale);

}  // namespace edisc
