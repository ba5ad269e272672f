#include "edisc/sim_study.hpp"

#include <cmath>
#include <limits>

#include "edisc/errors.hpp"
#include "edisc/text_io.hpp"

namespace edisc {

namespace {

template <std::size_t N>
double horner(const double (&c)[N], double x) {
  double acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + c[i];
  return acc;
}

// AS241 PPND16 coefficients, lowest degree first.
constexpr double kCentralNum[] = {
    3.3871328727963666080e0, 1.3314166789178437745e+2, 1.9715909503065514427e+3,
    1.3731693765509461125e+4, 4.5921953931549871457e+4, 6.7265770927008700853e+4,
    3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr double kCentralDen[] = {
    1.0, 4.2313330701600911252e+1, 6.8718700749205790830e+2, 5.3941960214247511077e+3,
    2.1213794301586595867e+4, 3.9307895800092710610e+4, 2.8729085735721942674e+4,
    5.2264952788528545610e+3};
constexpr double kNearNum[] = {
    1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
    3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kNearDen[] = {
    1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
    1.05075007164441684324e-9};
constexpr double kFarNum[] = {
    6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
    2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kFarDen[] = {
    1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
    2.04426310338993978564e-15};

}  // namespace

double normal_quantile(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0) throw ValidationError("quantile level outside [0, 1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * horner(kCentralNum, r) / horner(kCentralDen, r);
  }
  double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
  double z;
  if (r <= 5.0) {
    r -= 1.6;
    z = horner(kNearNum, r) / horner(kNearDen, r);
  } else {
    r -= 5.0;
    z = horner(kFarNum, r) / horner(kFarDen, r);
  }
  return q < 0.0 ? -z : z;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double sample_normal(SplitMix64& stream) { return normal_quantile(stream.next_uniform()); }

double e_from_obs(double x, double alt_mean) {
  return std::exp(alt_mean * x - 0.5 * alt_mean * alt_mean);
}

double p_from_obs(double x) { return normal_cdf(x); }

void SimConfig::validate() const {
  if (K < 1) throw ValidationError("K must be >= 1");
  if (n_false > K) {
    throw ValidationError("number of false nulls (" + std::to_string(n_false) +
                          ") exceeds K (" + std::to_string(K) + ")");
  }
  if (!std::isfinite(alt_mean)) throw ValidationError("alternative mean must be finite");
}

SimOutput gen_study(const SimConfig& cfg) {
  cfg.validate();
  SimOutput out;
  out.x.reserve(cfg.K);
  out.e.reserve(cfg.K);
  out.p.reserve(cfg.K);
  out.is_null.reserve(cfg.K);

  SplitMix64 stream(cfg.seed);
  for (std::size_t k = 0; k < cfg.K; ++k) {
    const bool null = k >= cfg.n_false;
    const double x = (null ? 0.0 : cfg.alt_mean) + sample_normal(stream);
    out.x.push_back(x);
    out.e.push_back(e_from_obs(x, cfg.alt_mean));
    out.p.push_back(p_from_obs(x));
    out.is_null.push_back(null);
  }
  return out;
}

std::string study_to_csv(const SimOutput& study) {
  std::string out = "index,x,e,p,is_null\n";
  for (std::size_t k = 0; k < study.size(); ++k) {
    out += std::to_string(k + 1);
    out += ',';
    out += format_double(study.x[k]);
    out += ',';
    out += format_double(study.e[k]);
    out += ',';
    out += format_double(study.p[k]);
    out += study.is_null[k] ? ",1\n" : ",0\n";
  }
  return out;
}

SimOutput parse_study_csv(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || lines.front() != "index,x,e,p,is_null") {
    throw ValidationError("study CSV must start with header 'index,x,e,p,is_null'");
  }
  SimOutput out;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = split_fields(lines[row]);
    const std::string where = "study CSV line " + std::to_string(row + 1);
    if (fields.size() != 5) throw ValidationError(where + ": expected 5 fields");
    if (parse_double(fields[0]) != static_cast<double>(row)) {
      throw ValidationError(where + ": index must be " + std::to_string(row));
    }
    const double x = parse_double(fields[1]);
    const double e = parse_double(fields[2]);
    const double p = parse_double(fields[3]);
    if (e < 0.0) throw ValidationError(where + ": negative e-value");
    if (p < 0.0 || p > 1.0) throw ValidationError(where + ": p-value outside [0, 1]");
    if (fields[4] != "0" && fields[4] != "1") throw ValidationError(where + ": is_null must be 0 or 1");
    out.x.push_back(x);
    out.e.push_back(e);
    out.p.push_back(p);
    out.is_null.push_back(fields[4] == "1");
  }
  if (out.size() == 0) throw ValidationError("study CSV has no rows");
  return out;
}

}  // namespace edisc
