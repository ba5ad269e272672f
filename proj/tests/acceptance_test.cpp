// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "edisc/cli.hpp"
#include "edisc/closed_testing.hpp"
#include "edisc/discovery_matrix.hpp"
#include "edisc/merge_core.hpp"
#include "edisc/render.hpp"
#include "edisc/sim_study.hpp"
#include "oracles.hpp"

namespace {

using namespace edisc;
using Clock = std::chrono::steady_clock;
namespace fs = std::filesystem;

// Decisive-band census of the default-seed study, frozen at the first
// verified run.
constexpr std::size_t kGoldenU1Decisive = 3028;
constexpr std::size_t kGoldenU2Decisive = 7203;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const Outcome& o) {
  std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

DiscoveryMatrix fast(const std::vector<double>& e, int n, unsigned threads = 1) {
  return build_dm_fast(sort_evalues(EValueVec(e)), UStatOrder(n), {threads});
}

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1) / n)};
}

// Every instance checked by criteria 2-4: random inputs plus the study.
struct Instance {
  std::vector<double> e;
  std::string label;
};

std::vector<Instance> tested_instances() {
  std::vector<Instance> out;
  std::mt19937_64 rng(20200101);
  for (std::size_t size : {5u, 10u, 25u}) {
    for (int i = 0; i < 100; ++i) {
      out.push_back({testing::random_evalues(rng, size), "K=" + std::to_string(size) + " #" + std::to_string(i)});
    }
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome lemma_identity() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t size = 2 + rng() % 49;
    std::lognormal_distribution<double> ln(0.0, 1.0 + static_cast<double>(rng() % 3));
    std::vector<double> v(size);
    for (auto& x : v) x = ln(rng);
    const EValueVec e(v);
    const double direct = u_stat_direct(e, UStatOrder(2));
    worst = std::max(worst, std::fabs(u2_identity(e) - direct) / direct);
  }
  const double secs = seconds_since(start);
  std::ostringstream os;
  os << "1000 vectors, K in [2,50], max relative error " << worst << ", " << secs << " s";
  return {worst <= 1e-9 && secs < 10.0, os.str()};
}

Outcome oracle_equivalence(const std::vector<Instance>& instances) {
  const auto start = Clock::now();
  double worst = 0.0;
  std::size_t mismatches = 0;
  for (const auto& inst : instances) {
    for (int n = 1; n <= 3; ++n) {
      const auto sorted = sort_evalues(EValueVec(inst.e));
      const auto a = build_dm_fast(sorted, UStatOrder(n));
      const auto b = build_dm_reference(sorted, UStatOrder(n));
      for (std::size_t i = 0; i < a.cells().size(); ++i) {
        const double x = a.cells()[i];
        const double y = b.cells()[i];
        if (x == y) continue;
        const double rel = std::fabs(x - y) / std::max(std::fabs(x), std::fabs(y));
        worst = std::max(worst, rel);
        if (rel > 1e-9) ++mismatches;
      }
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream os;
  os << instances.size() << " instances x n in {1,2,3}, max relative difference " << worst << ", "
     << mismatches << " cells beyond 1e-9, " << secs << " s";
  return {mismatches == 0 && secs < 120.0, os.str()};
}

Outcome squaring_bound(const std::vector<Instance>& instances) {
  std::size_t cells = 0;
  std::size_t violations = 0;
  std::size_t off_corner = 0;
  std::string first;
  for (const auto& inst : instances) {
    const auto u1 = fast(inst.e, 1);
    const auto u2 = fast(inst.e, 2);
    const std::size_t size = u1.dim();
    for (std::size_t r = 1; r <= size; ++r) {
      for (std::size_t j = 1; j <= r; ++j) {
        ++cells;
        if (u2(r, j) <= u1(r, j) * u1(r, j) * (1 + 1e-9)) continue;
        ++violations;
        if (r != size || j != size) ++off_corner;
        if (first.empty()) {
          std::ostringstream os;
          os << inst.label << " cell (" << r << "," << j << "): U2 " << u2(r, j) << " > U1^2 "
             << u1(r, j) * u1(r, j);
          first = os.str();
        }
      }
    }
  }
  std::ostringstream os;
  os << cells << " cells, " << violations << " violations (" << off_corner
     << " outside cell (K,K), where both matrices equal min e)";
  if (!first.empty()) os << "; first: " << first;
  return {violations == 0, os.str()};
}

Outcome column_monotonicity(const std::vector<Instance>& instances) {
  std::size_t pairs = 0;
  std::size_t violations[4] = {0, 0, 0, 0};
  std::size_t beyond_last_n = 0;
  std::string first;
  for (const auto& inst : instances) {
    for (int n = 1; n <= 3; ++n) {
      const auto dm = fast(inst.e, n);
      for (std::size_t r = 1; r <= dm.dim(); ++r) {
        for (std::size_t j = 2; j <= r; ++j) {
          ++pairs;
          if (dm(r, j) <= dm(r, j - 1) * (1 + 1e-12)) continue;
          ++violations[n];
          if (j - 1 + static_cast<std::size_t>(n) <= r) ++beyond_last_n;
          if (first.empty()) {
            std::ostringstream os;
            os << inst.label << " n=" << n << " row " << r << ": DM(" << r << "," << j << ")=" << dm(r, j)
               << " > DM(" << r << "," << j - 1 << ")=" << dm(r, j - 1);
            first = os.str();
          }
        }
      }
    }
  }
  const std::size_t total = violations[1] + violations[2] + violations[3];
  std::ostringstream os;
  os << pairs << " adjacent pairs, violations n=1: " << violations[1] << ", n=2: " << violations[2]
     << ", n=3: " << violations[3] << " (" << beyond_last_n << " with j <= r - n)";
  if (!first.empty()) os << "; first: " << first;
  return {total == 0, os.str()};
}

Outcome global_null_validity() {
  const auto start = Clock::now();
  constexpr std::size_t kSize = 20;
  constexpr int kReps = 10000;
  bool ok = true;
  std::ostringstream os;
  for (int n = 1; n <= 2; ++n) {
    std::vector<std::vector<double>> dm_r1(kSize + 1);
    for (int rep = 0; rep < kReps; ++rep) {
      const auto study = gen_study({kSize, 0, -3.0, 1000000ULL * static_cast<std::uint64_t>(n) + rep});
      const auto dm = fast(study.e, n);
      for (std::size_t r = 1; r <= kSize; ++r) dm_r1[r].push_back(dm(r, 1));
    }
    double worst_mean_margin = -1e300;
    double worst_freq_margin = -1e300;
    for (std::size_t r = 1; r <= kSize; ++r) {
      const auto [mean, se] = mean_se(dm_r1[r]);
      const double freq =
          static_cast<double>(std::count_if(dm_r1[r].begin(), dm_r1[r].end(), [](double v) { return v >= 20.0; })) /
          kReps;
      const double freq_se = std::sqrt(freq * (1 - freq) / kReps);
      worst_mean_margin = std::max(worst_mean_margin, mean - (1.0 + 3.0 * se));
      worst_freq_margin = std::max(worst_freq_margin, freq - (0.05 + 3.0 * freq_se));
    }
    ok = ok && worst_mean_margin <= 0.0 && worst_freq_margin <= 0.0;
    os << "n=" << n << ": max(mean - (1+3SE)) = " << worst_mean_margin
       << ", max(freq - (0.05+3SE)) = " << worst_freq_margin << "; ";
  }
  const double secs = seconds_since(start);
  os << secs << " s";
  return {ok && secs < 300.0, os.str()};
}

Outcome study_reproduction() {
  const fs::path dir = fs::temp_directory_path() / "edisc_acceptance_study";
  fs::remove_all(dir);
  const auto start = Clock::now();
  const std::string out = dir.string();
  const char* argv[] = {"edisc", "pipeline", "--K", "200", "--false", "100", "--alt-mean", "-3", "--outdir", out.c_str()};
  std::ostringstream sink;
  const int code = cli::run(10, argv, sink, sink);
  const double secs = seconds_since(start);
  if (code != cli::kOk) return {false, "pipeline exited with " + std::to_string(code)};
  const auto u1 = parse_matrix_csv(slurp(dir / "dm_u1.csv"), MatrixKind::evalue);
  const auto u2 = parse_matrix_csv(slurp(dir / "dm_u2.csv"), MatrixKind::evalue);
  fs::remove_all(dir);
  const auto rep = compare_report(u1, u2, ColorScale::jeffreys());
  const std::size_t d1 = rep.a_count("decisive");
  const std::size_t d2 = rep.b_count("decisive");
  std::ostringstream os;
  os << "K=200 default seed, decisive cells U1=" << d1 << " U2=" << d2 << " (golden " << kGoldenU1Decisive
     << "/" << kGoldenU2Decisive << "), U2 stronger in " << rep.b_stronger << " cells, weaker in "
     << rep.b_weaker << ", pipeline " << secs << " s";
  return {d2 > d1 && d1 == kGoldenU1Decisive && d2 == kGoldenU2Decisive && secs < 60.0, os.str()};
}

std::vector<std::vector<double>> superset_enumerator(const std::vector<double>& p) {
  const std::size_t size = p.size();
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  const std::uint32_t full = (1u << size) - 1u;
  std::vector<double> local(full + 1, 0.0);
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::vector<double> sub;
    for (std::size_t i = 0; i < size; ++i) {
      if (mask >> i & 1u) sub.push_back(p[i]);
    }
    std::sort(sub.begin(), sub.end());
    double s = 1.0;
    for (std::size_t i = 0; i < sub.size(); ++i) {
      s = std::min(s, static_cast<double>(sub.size()) * sub[i] / static_cast<double>(i + 1));
    }
    local[mask] = s;
  }
  std::vector<std::vector<double>> out(size);
  for (std::size_t r = 1; r <= size; ++r) {
    std::uint32_t rejected = 0;
    for (std::size_t i = 0; i < r; ++i) rejected |= 1u << order[i];
    for (std::size_t j = 1; j <= r; ++j) {
      const auto need = static_cast<int>(r - j + 1);
      double worst = 0.0;
      for (std::uint32_t inner = rejected;; inner = (inner - 1) & rejected) {
        if (__builtin_popcount(inner) == need) {
          const std::uint32_t rest = full & ~inner;
          for (std::uint32_t extra = rest;; extra = (extra - 1) & rest) {
            worst = std::max(worst, local[inner | extra]);
            if (extra == 0) break;
          }
        }
        if (inner == 0) break;
      }
      out[r - 1].push_back(worst);
    }
  }
  return out;
}

Outcome baseline_correctness() {
  std::size_t mismatches = 0;
  std::size_t cells = 0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto study = gen_study({12, 6, -3.0, seed});
    const auto fast_m = ct_discovery_pmatrix(PValueVec(study.p));
    const auto slow = superset_enumerator(study.p);
    for (std::size_t r = 1; r <= 12; ++r) {
      for (std::size_t j = 1; j <= r; ++j, ++cells) mismatches += fast_m(r, j) != slow[r - 1][j - 1];
    }
  }
  const bool simes_ok = simes_p(std::vector<double>{0.01, 0.04}) == 0.02 &&
                        simes_p(std::vector<double>{0.3}) == 0.3 &&
                        simes_p(std::vector<double>{0.5, 0.5, 0.5}) == 0.5;
  const auto two = ct_discovery_pmatrix(PValueVec({0.01, 0.5}));
  const bool two_ok = two(2, 1) == 0.02 && two(2, 2) == 0.5;
  std::ostringstream os;
  os << "3 studies at K=12, " << cells << " cells, " << mismatches << " mismatches vs superset enumerator; Simes cases "
     << (simes_ok ? "ok" : "wrong") << "; K=2 example " << (two_ok ? "ok" : "wrong");
  return {mismatches == 0 && simes_ok && two_ok, os.str()};
}

Outcome null_sanity() {
  const auto study = gen_study({100000, 0, -3.0, kDefaultSeed});
  const auto [mean, se] = mean_se(study.e);
  auto p = study.p;
  std::sort(p.begin(), p.end());
  const double n = static_cast<double>(p.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ks = std::max({ks, (static_cast<double>(i) + 1) / n - p[i], p[i] - static_cast<double>(i) / n});
  }
  const double critical = 1.628 / std::sqrt(n);
  std::ostringstream os;
  os << "mean e " << mean << " (SE " << se << ", |mean-1|/SE " << std::fabs(mean - 1) / se << "); KS " << ks
     << " vs 1% critical " << critical;
  return {std::fabs(mean - 1.0) <= 3.0 * se && ks <= critical, os.str()};
}

int run_pipeline(const fs::path& dir, const std::string& threads) {
  const std::string out = dir.string();
  const char* argv[] = {"edisc", "pipeline", "--seed", "1", "--threads", threads.c_str(), "--outdir", out.c_str()};
  std::ostringstream sink;
  return cli::run(8, argv, sink, sink);
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "edisc_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> runs = {{"a1", "1"}, {"b1", "1"}, {"a4", "4"}};
  for (const auto& [name, threads] : runs) {
    if (run_pipeline(root / name, threads) != cli::kOk) return {false, "pipeline run failed"};
  }
  std::size_t compared = 0;
  std::size_t differing = 0;
  for (const char* file : {"study.csv", "dm_u1.csv", "dm_u2.csv", "pm_u2.csv", "dm_u1.svg", "dm_u2.svg", "pm_u2.svg"}) {
    const auto ref = slurp(root / "a1" / file);
    for (const char* other : {"b1", "a4"}) {
      ++compared;
      if (ref.empty() || slurp(root / other / file) != ref) ++differing;
    }
  }
  fs::remove_all(root);
  std::ostringstream os;
  os << compared << " artifact comparisons (repeat run, threads 1 vs 4), " << differing << " differ";
  return {differing == 0, os.str()};
}

}  // namespace

int main() {
  const auto instances = [] {
    auto v = tested_instances();
    v.push_back({gen_study(SimConfig{}).e, "study K=200"});
    return v;
  }();
  const std::vector<Instance> random_only(instances.begin(), instances.end() - 1);

  report(1, "U2 variance identity", lemma_identity());
  report(2, "fast vs reference builder", oracle_equivalence(random_only));
  report(3, "squaring bound DM_U2 <= DM_U1^2", squaring_bound(instances));
  report(4, "column monotonicity", column_monotonicity(instances));
  report(5, "global-null validity", global_null_validity());
  report(6, "simulation study U2 vs U1", study_reproduction());
  report(7, "closed-testing baseline", baseline_correctness());
  report(8, "null e-value and p-value sanity", null_sanity());
  report(9, "deterministic artifacts", determinism());
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
