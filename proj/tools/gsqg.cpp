// Batch front end: run scenarios, query curve metrics, align curves, run the inequality suite.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gsqg/alignment.hpp"
#include "gsqg/config.hpp"
#include "gsqg/dynamics.hpp"
#include "gsqg/errors.hpp"
#include "gsqg/io.hpp"
#include "gsqg/lemma_lab.hpp"
#include "gsqg/metrics.hpp"

namespace {

constexpr int kBadInput = 64;
constexpr int kFailure = 1;

using json = nlohmann::json;
using namespace gsqg;

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

json alignment_json(const AlignmentResult& r) {
  const auto& p = r.properties;
  return json{{"phi", r.phi},
              {"residual", r.residual},
              {"phi_prime_range", {r.phi_prime_range.first, r.phi_prime_range.second}},
              {"r", r.r},
              {"frechet", r.frechet},
              {"R1", r.R1},
              {"R2", r.R2},
              {"delta_theoretical", r.delta_theoretical},
              {"delta_practical", r.delta_practical},
              {"regime", to_string(r.regime)},
              {"steps", r.steps},
              {"flow_time", r.flow_time},
              {"monotone_distance", r.monotone_distance},
              {"decay_bound", r.decay_bound},
              {"properties",
               {{"sup_dev", p.sup_dev},
                {"l2_dev", p.l2_dev},
                {"tangential", p.tangential},
                {"tangential_bound", number(p.tangential_bound)},
                {"locality_excess", p.locality_excess},
                {"a", p.a},
                {"c", p.c},
                {"e", p.e},
                {"f", p.f}}}};
}

int cmd_run(const std::string& config, const std::string& out_dir, bool snapshots) {
  const SimConfig cfg = load_config(config);
  const RunResult r = run(cfg, RunOutput{out_dir, snapshots});
  std::cout << fmt::format("status {}  steps {}  t {}  L0 {}  L {}  area drift {:.3e}  fitted C {:.3e}\n",
                           to_string(r.status), r.steps, format_double(r.final_state.t), format_double(r.initial_L),
                           format_double(r.trajectory.back().L), r.max_area_drift, r.fitted_C);
  if (r.separated) std::cout << "touching initial boundaries were separated\n";
  if (r.experimental) std::cout << "unmollified run: experimental\n";
  if (!r.message.empty()) std::cout << r.message << '\n';
  return exit_code(r.status);
}

int cmd_distance(const std::string& a, const std::string& b, const std::string& metric, std::size_t refine) {
  const ClosedCurve c1 = read_curve(a), c2 = read_curve(b);
  double v = 0.0;
  if (metric == "frechet")
    v = frechet_distance(c1, c2, refine);
  else if (metric == "hausdorff")
    v = hausdorff_distance(c1, c2);
  else if (metric == "delta")
    v = pair_distance(c1, c2);
  else
    v = l2_deviation(c1, c2);
  std::cout << format_double(v) << '\n';
  return 0;
}

int cmd_align(const std::string& a, const std::string& b) {
  const ClosedCurve c1 = read_curve(a), c2 = read_curve(b);
  try {
    std::cout << alignment_json(align(c1, c2)).dump(2) << '\n';
  } catch (const FlowStalled& e) {
    std::cerr << e.what() << '\n';
    return kFailure;
  } catch (const MonotonicityLost& e) {
    std::cerr << e.what() << '\n';
    return kFailure;
  }
  return 0;
}

int cmd_check(std::uint64_t seed, std::size_t trials, std::size_t n, const std::string& json_path) {
  const CheckReport rep = check_suite(seed, trials, n);
  if (json_path == "-") {
    std::cout << rep.to_json().dump(2) << '\n';
  } else {
    std::cout << rep.table();
    if (!json_path.empty()) {
      std::ofstream f(json_path);
      if (!f) throw InvalidArgument("cannot write " + json_path);
      f << rep.to_json().dump(2) << '\n';
    }
  }
  return rep.passed() ? 0 : kFailure;
}

int cmd_refine(const std::string& config, std::size_t levels) {
  const auto rows = refine_epsilon(load_config(config), levels);
  std::cout << fmt::format("{:>12} {:>16} {:>7} {:>16}\n", "epsilon", "status", "steps", "d_F to next");
  for (const auto& r : rows)
    std::cout << fmt::format("{:>12} {:>16} {:>7} {:>16}\n", format_double(r.epsilon), to_string(r.status), r.steps,
                             std::isnan(r.frechet_to_next) ? std::string("-") : fmt::format("{:.6e}", r.frechet_to_next));
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.status == RunStatus::Ok;
  return ok ? 0 : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"g-SQG patch contour dynamics and property checks"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (default: OpenMP setting)")->check(CLI::NonNegativeNumber);

  std::string config, out_dir = "run_out";
  bool no_snapshots = false;
  auto* run_cmd = app.add_subcommand("run", "integrate a scenario file");
  run_cmd->add_option("config", config, "scenario YAML")->required();
  run_cmd->add_option("-o,--out", out_dir, "output directory");
  run_cmd->add_flag("--no-snapshots", no_snapshots, "only write diagnostics.csv and summary.json");

  std::string a, b, metric = "frechet";
  std::size_t refine = 1;
  auto* dist_cmd = app.add_subcommand("distance", "distance between two curve files");
  dist_cmd->add_option("curveA", a)->required();
  dist_cmd->add_option("curveB", b)->required();
  dist_cmd->add_option("--metric", metric)->check(CLI::IsMember({"frechet", "hausdorff", "delta", "D"}));
  dist_cmd->add_option("--refine", refine, "spectral upsampling factor for frechet")->check(CLI::PositiveNumber);

  auto* align_cmd = app.add_subcommand("align", "alignment map between two curve files");
  align_cmd->add_option("curveA", a)->required();
  align_cmd->add_option("curveB", b)->required();

  std::uint64_t seed = 0;
  std::size_t trials = 100, n = 256;
  std::string json_path;
  auto* check_cmd = app.add_subcommand("check", "randomized inequality suite");
  check_cmd->add_option("--seed", seed);
  check_cmd->add_option("--trials", trials)->check(CLI::PositiveNumber);
  check_cmd->add_option("--N", n, "nodes per random curve")->check(CLI::Range(64, 4096));
  check_cmd->add_option("--json", json_path, "write the JSON report here ('-' prints it instead of the table)");

  std::size_t levels = 3;
  auto* refine_cmd = app.add_subcommand("refine-epsilon", "rerun a scenario at eps, eps/2, ...");
  refine_cmd->add_option("config", config, "scenario YAML")->required();
  refine_cmd->add_option("--levels", levels)->check(CLI::Range(2, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif

  try {
    if (*run_cmd) return cmd_run(config, out_dir, !no_snapshots);
    if (*dist_cmd) return cmd_distance(a, b, metric, refine);
    if (*align_cmd) return cmd_align(a, b);
    if (*check_cmd) return cmd_check(seed, trials, n, json_path);
    if (*refine_cmd) return cmd_refine(config, levels);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kBadInput;
  } catch (const InvalidArgument& e) {
    std::cerr << e.what() << '\n';
    return kBadInput;
  } catch (const DegenerateCurve& e) {
    std::cerr << e.what() << '\n';
    return kBadInput;
  } catch (const WrongParametrization& e) {
    // e.g. a hand-written curve file given to a metric that needs constant speed
    std::cerr << e.what() << '\n';
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kFailure;
  }
  return kBadInput;
}
