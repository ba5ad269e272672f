#include "edisc/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "edisc/errors.hpp"
#include "edisc/text_io.hpp"

#include "json.hpp"

namespace edisc {

ColorScale ColorScale::jeffreys() {
  const double root10 = std::sqrt(10.0);
  return {ScaleKind::jeffreys_e,
          {1.0, root10, 10.0, 10.0 * root10, 100.0},
          {{"no-evidence", "#006400"},
           {"poor", "#2E8B57"},
           {"substantial", "#FFD700"},
           {"strong", "#FF4500"},
           {"very-strong", "#8B0000"},
           {"decisive", "#000000"}}};
}

ColorScale ColorScale::fisher() {
  return {ScaleKind::fisher_p,
          {0.001, 0.005, 0.01, 0.05},
          {{"decisive", "#000000"},
           {"very-highly-significant", "#8B0000"},
           {"highly-significant", "#FF4500"},
           {"significant", "#FFD700"},
           {"not-significant", "#2E8B57"}}};
}

std::size_t classify(double value, const ColorScale& scale) {
  if (std::isnan(value)) throw ValidationError("cannot classify NaN");
  const auto& t = scale.thresholds;
  if (scale.kind == ScaleKind::jeffreys_e) {
    if (value < 0.0) throw ValidationError("e-value below 0: " + format_double(value));
    return static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), value) - t.begin());
  }
  if (value < 0.0 || value > 1.0) throw ValidationError("p-value outside [0, 1]: " + format_double(value));
  return static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), value) - t.begin());
}

namespace {

void check_domain(double v, MatrixKind kind, const std::string& where) {
  if (std::isnan(v)) throw ValidationError(where + ": NaN entry");
  if (v < 0.0) throw ValidationError(where + ": negative entry");
  if (kind == MatrixKind::pvalue && v > 1.0) {
    throw ValidationError(where + ": entry " + format_double(v) + " is not a p-value");
  }
}

void check_scale(const TriangularMatrix& m, const ColorScale& scale) {
  if (m.kind() != scale.matrix_kind()) {
    throw ValidationError(std::string("scale ") + std::string(scale.name()) +
                          " does not match the matrix kind");
  }
}

}  // namespace

std::string matrix_to_csv(const TriangularMatrix& m) {
  std::string out = "r,j,value\n";
  for (std::size_t r = 1; r <= m.dim(); ++r) {
    for (std::size_t j = 1; j <= r; ++j) {
      out += std::to_string(r);
      out += ',';
      out += std::to_string(j);
      out += ',';
      out += format_double(m(r, j));
      out += '\n';
    }
  }
  return out;
}

TriangularMatrix parse_matrix_csv(std::string_view text, MatrixKind kind) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front() != "r,j,value") {
    throw ValidationError("matrix CSV must start with header 'r,j,value'");
  }
  const std::size_t rows = lines.size() - 1;
  // rows == K (K + 1) / 2
  const auto dim = static_cast<std::size_t>(std::llround((std::sqrt(8.0 * rows + 1.0) - 1.0) / 2.0));
  if (rows == 0 || dim * (dim + 1) / 2 != rows) {
    throw ValidationError("matrix CSV has " + std::to_string(rows) +
                          " data rows, which is not a triangular number");
  }

  TriangularMatrix m(dim, kind);
  std::size_t line = 1;
  for (std::size_t r = 1; r <= dim; ++r) {
    for (std::size_t j = 1; j <= r; ++j, ++line) {
      const std::string where = "matrix CSV line " + std::to_string(line + 1);
      const auto fields = split_fields(lines[line]);
      if (fields.size() != 3) throw ValidationError(where + ": expected 3 fields");
      if (parse_double(fields[0]) != static_cast<double>(r) ||
          parse_double(fields[1]) != static_cast<double>(j)) {
        throw ValidationError(where + ": expected cell (" + std::to_string(r) + "," +
                              std::to_string(j) + ")");
      }
      const double v = parse_double(fields[2]);
      check_domain(v, kind, where);
      m(r, j) = v;
    }
  }
  return m;
}

std::string matrix_to_json(const TriangularMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 1; r <= m.dim(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 1; j <= r; ++j) {
      const double v = m(r, j);
      if (std::isinf(v)) {
        row.push_back("inf");
      } else {
        row.push_back(v);
      }
    }
    rows.push_back(std::move(row));
  }
  nlohmann::json doc = {{"kind", m.kind() == MatrixKind::evalue ? "evalue" : "pvalue"},
                        {"dim", m.dim()},
                        {"rows", std::move(rows)}};
  return doc.dump();
}

void RenderSpec::validate() const {
  if (cell_size <= 0 || margin < 0) throw ValidationError("render dimensions must be positive");
}

std::vector<std::size_t> band_census(const TriangularMatrix& m, const ColorScale& scale) {
  check_scale(m, scale);
  std::vector<std::size_t> counts(scale.bands.size(), 0);
  for (double v : m.cells()) ++counts[classify(v, scale)];
  return counts;
}

std::string matrix_to_svg(const TriangularMatrix& m, const ColorScale& scale, const RenderSpec& spec) {
  check_scale(m, scale);
  spec.validate();

  const long dim = static_cast<long>(m.dim());
  const long cell = spec.cell_size;
  const long margin = spec.margin;
  const long swatch = 12;
  const long legend_x = margin + dim * cell + margin;
  const long legend_w = spec.legend ? swatch + (spec.axis_labels ? 160 : 0) + margin : 0;
  const long legend_h = spec.legend ? static_cast<long>(scale.bands.size()) * (swatch + 4) : 0;
  const long width = legend_x + legend_w;
  const long height = 2 * margin + std::max(dim * cell, legend_h);

  // Classify everything before emitting anything.
  std::vector<std::size_t> band(m.cells().size());
  std::transform(m.cells().begin(), m.cells().end(), band.begin(),
                 [&](double v) { return classify(v, scale); });

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  std::size_t idx = 0;
  for (long r = 1; r <= dim; ++r) {
    for (long j = 1; j <= r; ++j, ++idx) {
      os << "<rect class=\"cell\" x=\"" << margin + (j - 1) * cell << "\" y=\""
         << margin + (r - 1) * cell << "\" width=\"" << cell << "\" height=\"" << cell
         << "\" fill=\"" << scale.bands[band[idx]].rgb << "\"/>\n";
    }
  }
  if (spec.legend) {
    for (std::size_t b = 0; b < scale.bands.size(); ++b) {
      const long y = margin + static_cast<long>(b) * (swatch + 4);
      os << "<rect class=\"legend " << scale.bands[b].name << "\" x=\"" << legend_x << "\" y=\"" << y
         << "\" width=\"" << swatch << "\" height=\"" << swatch << "\" fill=\""
         << scale.bands[b].rgb << "\"/>\n";
      if (spec.axis_labels) {
        os << "<text x=\"" << legend_x + swatch + 4 << "\" y=\"" << y + swatch
           << "\" font-size=\"10\">" << scale.bands[b].name << "</text>\n";
      }
    }
  }
  if (spec.axis_labels) {
    os << "<text x=\"" << margin << "\" y=\"" << margin - 2 << "\" font-size=\"10\">j &#8594;</text>\n"
       << "<text x=\"0\" y=\"" << margin + 10 << "\" font-size=\"10\">r</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::size_t ComparisonReport::a_count(std::string_view band) const {
  const auto it = std::find(band_names.begin(), band_names.end(), band);
  if (it == band_names.end()) throw ValidationError("unknown band " + std::string(band));
  return a_counts[static_cast<std::size_t>(it - band_names.begin())];
}

std::size_t ComparisonReport::b_count(std::string_view band) const {
  const auto it = std::find(band_names.begin(), band_names.end(), band);
  if (it == band_names.end()) throw ValidationError("unknown band " + std::string(band));
  return b_counts[static_cast<std::size_t>(it - band_names.begin())];
}

std::string ComparisonReport::to_text() const {
  std::ostringstream os;
  os << "scale=" << scale << '\n' << "dim=" << dim << '\n' << "cells=" << cells << '\n';
  for (std::size_t b = 0; b < band_names.size(); ++b) os << "a." << band_names[b] << '=' << a_counts[b] << '\n';
  for (std::size_t b = 0; b < band_names.size(); ++b) os << "b." << band_names[b] << '=' << b_counts[b] << '\n';
  os << "b_stronger=" << b_stronger << '\n' << "b_weaker=" << b_weaker << '\n';
  return os.str();
}

ComparisonReport compare_report(const TriangularMatrix& a, const TriangularMatrix& b,
                                const ColorScale& scale) {
  if (a.dim() != b.dim()) {
    throw ValidationError("cannot compare a " + std::to_string(a.dim()) + "x" + std::to_string(a.dim()) +
                          " matrix with a " + std::to_string(b.dim()) + "x" + std::to_string(b.dim()) + " one");
  }
  if (a.kind() != b.kind()) throw ValidationError("cannot compare matrices of different kinds");
  check_scale(a, scale);

  ComparisonReport rep;
  rep.scale = std::string(scale.name());
  rep.dim = a.dim();
  rep.cells = a.cells().size();
  for (const auto& band : scale.bands) rep.band_names.push_back(band.name);
  rep.a_counts.assign(scale.bands.size(), 0);
  rep.b_counts.assign(scale.bands.size(), 0);
  for (std::size_t i = 0; i < rep.cells; ++i) {
    const std::size_t ba = classify(a.cells()[i], scale);
    const std::size_t bb = classify(b.cells()[i], scale);
    ++rep.a_counts[ba];
    ++rep.b_counts[bb];
    if (scale.strength(bb) > scale.strength(ba)) ++rep.b_stronger;
    if (scale.strength(bb) < scale.strength(ba)) ++rep.b_weaker;
  }
  return rep;
}

}  // namespace edisc
