#include "edisc/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "edisc/closed_testing.hpp"
#include "edisc/discovery_matrix.hpp"
#include "edisc/errors.hpp"
#include "edisc/render.hpp"
#include "edisc/sim_study.hpp"

namespace edisc::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kMaxReferenceK = 60;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Output files are staged and only written once every artifact of the
// command has been computed.
class OutputSet {
 public:
  void add(std::string path, std::string content) { files_.emplace_back(std::move(path), std::move(content)); }

  void commit() const {
    for (const auto& [path, content] : files_) {
      const fs::path target(path);
      if (target.has_parent_path()) fs::create_directories(target.parent_path());
      const fs::path tmp = fs::path(path + ".tmp");
      {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw ValidationError("cannot write " + path);
        os << content;
        if (!os) throw ValidationError("failed writing " + path);
      }
      fs::rename(tmp, target);
    }
  }

 private:
  std::vector<std::pair<std::string, std::string>> files_;
};

UStatOrder parse_stat(const std::string& stat) {
  std::string_view digits;
  if (stat.rfind("uN:", 0) == 0) {
    digits = std::string_view(stat).substr(3);
  } else if (stat.size() > 1 && stat[0] == 'u') {
    digits = std::string_view(stat).substr(1);
  } else {
    throw ValidationError("--stat must be u1, u2, u<n> or uN:<n>, got '" + stat + "'");
  }
  int n = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw ValidationError("--stat order is not an integer: '" + stat + "'");
  }
  return UStatOrder(n);
}

ColorScale parse_scale(const std::string& name) {
  if (name == "jeffreys") return ColorScale::jeffreys();
  if (name == "fisher") return ColorScale::fisher();
  throw ValidationError("--scale must be jeffreys or fisher, got '" + name + "'");
}

DiscoveryMatrix build(const SimOutput& study, UStatOrder n, const std::string& engine, unsigned threads) {
  const SortedEValues sorted = sort_evalues(study.evalues());
  if (engine == "reference") {
    if (study.size() > kMaxReferenceK) {
      throw SizeError("reference engine is limited to K <= " + std::to_string(kMaxReferenceK) +
                      ", got K = " + std::to_string(study.size()));
    }
    return build_dm_reference(sorted, n);
  }
  return build_dm_fast(sorted, n, BuildOptions{threads});
}

struct SimulateArgs {
  std::size_t K = 200;
  std::size_t n_false = 100;
  double alt_mean = -3.0;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

struct DmArgs {
  std::string input;
  std::string stat = "u2";
  std::string engine = "fast";
  unsigned threads = 1;
  std::string out;
};

struct PathArgs {
  std::string input;
  std::string out;
};

struct RenderArgs {
  std::string input;
  std::string scale;
  std::string out;
  RenderSpec spec;
};

struct CompareArgs {
  std::string a;
  std::string b;
  std::string scale;
  std::string report;
};

struct PipelineArgs {
  SimulateArgs sim;
  unsigned threads = 1;
  std::string outdir;
};

SimConfig to_config(const SimulateArgs& a) { return SimConfig{a.K, a.n_false, a.alt_mean, a.seed}; }

void run_simulate(const SimulateArgs& a) {
  OutputSet files;
  files.add(a.out, study_to_csv(gen_study(to_config(a))));
  files.commit();
}

void run_dm(const DmArgs& a) {
  const UStatOrder n = parse_stat(a.stat);
  const SimOutput study = parse_study_csv(read_file(a.input));
  OutputSet files;
  files.add(a.out, matrix_to_csv(build(study, n, a.engine, a.threads)));
  files.commit();
}

void run_calibrate(const PathArgs& a) {
  const TriangularMatrix dm = parse_matrix_csv(read_file(a.input), MatrixKind::evalue);
  OutputSet files;
  files.add(a.out, matrix_to_csv(dm_to_pmatrix(dm)));
  files.commit();
}

void run_baseline(const PathArgs& a) {
  const SimOutput study = parse_study_csv(read_file(a.input));
  OutputSet files;
  files.add(a.out, matrix_to_csv(ct_discovery_pmatrix(PValueVec(study.p))));
  files.commit();
}

void run_render(const RenderArgs& a) {
  const ColorScale scale = parse_scale(a.scale);
  const TriangularMatrix m = parse_matrix_csv(read_file(a.input), scale.matrix_kind());
  OutputSet files;
  files.add(a.out, matrix_to_svg(m, scale, a.spec));
  files.commit();
}

std::string run_compare(const CompareArgs& a) {
  const ColorScale scale = parse_scale(a.scale);
  const TriangularMatrix ma = parse_matrix_csv(read_file(a.a), scale.matrix_kind());
  const TriangularMatrix mb = parse_matrix_csv(read_file(a.b), scale.matrix_kind());
  const std::string text = compare_report(ma, mb, scale).to_text();
  if (!a.report.empty()) {
    OutputSet files;
    files.add(a.report, text);
    files.commit();
  }
  return text;
}

std::string run_pipeline(const PipelineArgs& a) {
  const SimOutput study = gen_study(to_config(a.sim));
  const SortedEValues sorted = sort_evalues(study.evalues());
  const BuildOptions opts{a.threads};
  const DiscoveryMatrix u1 = build_dm_fast(sorted, UStatOrder(1), opts);
  const DiscoveryMatrix u2 = build_dm_fast(sorted, UStatOrder(2), opts);
  const PMatrix p2 = dm_to_pmatrix(u2);
  const ColorScale jeffreys = ColorScale::jeffreys();
  const ColorScale fisher = ColorScale::fisher();
  const ComparisonReport u1_vs_u2 = compare_report(u1, u2, jeffreys);

  const fs::path dir(a.outdir);
  auto at = [&](const char* name) { return (dir / name).string(); };
  OutputSet files;
  files.add(at("study.csv"), study_to_csv(study));
  files.add(at("dm_u1.csv"), matrix_to_csv(u1));
  files.add(at("dm_u2.csv"), matrix_to_csv(u2));
  files.add(at("pm_u2.csv"), matrix_to_csv(p2));
  files.add(at("dm_u1.svg"), matrix_to_svg(u1, jeffreys));
  files.add(at("dm_u2.svg"), matrix_to_svg(u2, jeffreys));
  files.add(at("pm_u2.svg"), matrix_to_svg(p2, fisher));
  files.add(at("compare_u1_u2.txt"), u1_vs_u2.to_text());
  std::string summary = u1_vs_u2.to_text();
  if (study.size() <= kMaxBruteForceK) {
    const PMatrix base = ct_discovery_pmatrix(PValueVec(study.p));
    files.add(at("baseline.csv"), matrix_to_csv(base));
    files.add(at("baseline.svg"), matrix_to_svg(base, fisher));
    files.add(at("compare_baseline_u2.txt"), compare_report(base, p2, fisher).to_text());
  }
  files.commit();
  return summary;
}

void add_sim_flags(CLI::App* cmd, SimulateArgs& a) {
  cmd->add_option("--K", a.K, "Number of hypotheses")->check(CLI::PositiveNumber);
  cmd->add_option("--false", a.n_false, "Number of false nulls (drawn first)");
  cmd->add_option("--alt-mean", a.alt_mean, "Mean of the alternative");
  cmd->add_option("--seed", a.seed, "splitmix64 seed");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discovery matrices from independent e-values", "edisc"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a seeded Gaussian study CSV");
  add_sim_flags(simulate, sim);
  simulate->add_option("--out", sim.out, "Study CSV path")->required();

  DmArgs dm;
  auto* dm_cmd = app.add_subcommand("dm", "Build a discovery matrix from the study's e column");
  dm_cmd->add_option("--input", dm.input, "Study CSV")->required();
  dm_cmd->add_option("--stat", dm.stat, "u1, u2, u<n> or uN:<n>");
  dm_cmd->add_option("--engine", dm.engine, "fast or reference")
      ->check(CLI::IsMember({"fast", "reference"}));
  dm_cmd->add_option("--threads", dm.threads, "Worker threads (0 = all cores)");
  dm_cmd->add_option("--out", dm.out, "Matrix CSV path")->required();

  PathArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Map an e-matrix to p-values via min(1, 1/e)");
  calibrate->add_option("--input", cal.input, "Matrix CSV")->required();
  calibrate->add_option("--out", cal.out, "P-matrix CSV path")->required();

  PathArgs base;
  auto* baseline = app.add_subcommand("baseline", "Closed-testing Simes p-matrix (K <= 20)");
  baseline->add_option("--input", base.input, "Study CSV")->required();
  baseline->add_option("--out", base.out, "P-matrix CSV path")->required();

  RenderArgs ren;
  auto* render = app.add_subcommand("render", "Render a matrix CSV as an SVG heatmap");
  render->add_option("--input", ren.input, "Matrix CSV")->required();
  render->add_option("--scale", ren.scale, "jeffreys or fisher")->required();
  render->add_option("--out", ren.out, "SVG path")->required();
  render->add_option("--cell-size", ren.spec.cell_size, "Cell size in pixels");
  render->add_option("--margin", ren.spec.margin, "Margin in pixels");
  render->add_flag("--axis-labels", ren.spec.axis_labels, "Emit text labels");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Band census comparison of two matrices");
  compare->add_option("--a", cmp.a, "First matrix CSV")->required();
  compare->add_option("--b", cmp.b, "Second matrix CSV")->required();
  compare->add_option("--scale", cmp.scale, "jeffreys or fisher")->required();
  compare->add_option("--report", cmp.report, "Report path (stdout only when omitted)");

  PipelineArgs pipe;
  auto* pipeline = app.add_subcommand("pipeline", "Simulate, build U_1/U_2 matrices, calibrate, render, compare");
  add_sim_flags(pipeline, pipe.sim);
  pipeline->add_option("--threads", pipe.threads, "Worker threads (0 = all cores)");
  pipeline->add_option("--outdir", pipe.outdir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simulate->parsed()) run_simulate(sim);
    if (dm_cmd->parsed()) run_dm(dm);
    if (calibrate->parsed()) run_calibrate(cal);
    if (baseline->parsed()) run_baseline(base);
    if (render->parsed()) run_render(ren);
    if (compare->parsed()) out << run_compare(cmp);
    if (pipeline->parsed()) out << run_pipeline(pipe);
  } catch (const SizeError& e) {
    err << "error: " << e.what() << '\n';
    return kSizeGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}

}  // namespace edisc::cli
