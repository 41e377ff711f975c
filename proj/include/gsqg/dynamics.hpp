#pragma once

// Time stepping of the mollified patch equation and the monitored functionals.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gsqg/family.hpp"
#include "gsqg/kernel.hpp"
#include "gsqg/metrics.hpp"
#include "gsqg/scenarios.hpp"
#include "gsqg/velocity.hpp"

namespace gsqg {

struct DiagnosticsRecord {
  double t = 0.0;
  double Q = 0.0, W = 0.0, L = 0.0;
  std::vector<double> areas, h2;
  double u_inf = 0.0;
  double min_pair_delta = 0.0;  // +inf when every pair is in a Sigma set
  double min_self_delta = 0.0;  // +inf when 1/Q exceeds every half length
  double growth_ratio = 0.0;    // forward difference of L over L^{3+2 alpha}; 0 on the first record
};

struct SimState {
  double t = 0.0;
  PatchFamily family;
  KernelSpec spec;
  DiagnosticsRecord diagnostics;
  // sigma[l] = Sigma^l; fixed along a run unless the topology changes
  std::vector<std::vector<std::size_t>> sigma;
};

// Fills sigma from curve_metrics.
void refresh_sigma(SimState& state);
SimState make_state(PatchFamily family, const KernelSpec& spec, double t = 0.0);

using FieldSamples = std::vector<std::vector<Vec2>>;

FieldSamples rhs(const SimState& state, const VelocityOptions& opt = {});
double sup_norm(const FieldSamples& u);

struct StepOptions {
  double cfl = 0.5;
  bool check_topology = true;
  VelocityOptions velocity;
};

// Classical RK4 on the node positions, then constant-speed resampling of every boundary
// (node counts kept). k1 may be passed in when the caller already evaluated rhs(state).
// Throws StepRejected on a CFL violation and TopologyBreach when a boundary self-crosses
// or two boundaries cross.
SimState step(const SimState& state, double dt, const StepOptions& opt = {}, const FieldSamples* k1 = nullptr);

// Largest dt allowed by the CFL condition for the given velocity samples.
double cfl_step(const SimState& state, const FieldSamples& u, double cfl);

DiagnosticsRecord functionals(const SimState& state);

// d/dt |z^l|_{H2}^2 = 2 oint kappa (d_s^2 u . N) ds - 3 oint kappa^2 (d_s u . T) ds.
double ddt_h2(const SimState& state, std::size_t lambda, const VelocityOptions& opt = {});

// (L1 - L0) / (dt L0^{3+2 alpha}); differences at round-off level count as zero.
double growth_ratio(double l0, double l1, double dt, double alpha);

struct PatchSpec {
  ShapeKind kind = ShapeKind::Circle;
  ShapeParams params;
  double strength = 1.0;
};

struct SimConfig {
  double alpha = 1.0 / 6.0;
  double c_alpha = 1.0;
  std::optional<double> epsilon;  // default 0.1 * min diameter
  double chi_floor = 0.5;
  bool allow_unmollified = false;
  double cfl = 0.5;
  std::size_t N = 256;
  double t_end = 1.0;
  std::size_t output_every = 10;
  std::optional<double> ceiling_L;  // default 1e3 * L(z0)
  // fixed step instead of the CFL step (still checked against CFL)
  std::optional<double> dt;
  bool separate_touching = true;
  std::vector<PatchSpec> patches;
  // doubly odd preset: patches (or the candidate when none are given) are the upper half
  bool doubly_odd = false;
  bool candidate = false;
  CandidateParams candidate_params;
};

// Throws ConfigError.
void validate(const SimConfig& cfg);
// Initial family as run() builds it, before separation.
PatchFamily build_family(const SimConfig& cfg);
KernelSpec kernel_spec(const SimConfig& cfg, const PatchFamily& family);

enum class RunStatus { Ok, TopologyBreach, CeilingHit };
std::string to_string(RunStatus s);
int exit_code(RunStatus s);

struct RunOutput {
  std::string directory;  // empty: no files
  bool snapshots = true;
};

struct RunResult {
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::vector<DiagnosticsRecord> trajectory;  // every accepted step, including t = 0
  SimState final_state;
  std::size_t steps = 0;
  bool separated = false;  // initial data was perturbed apart
  bool experimental = false;
  double initial_L = 0.0, ceiling = 0.0;
  double max_area_drift = 0.0;  // relative, over patches and time
  double fitted_C = 0.0;        // max positive growth ratio
  bool growth_bound_held = true;
};

// Observer called after every accepted step.
using StepObserver = std::function<void(const SimState&)>;

RunResult run(const SimConfig& cfg, const RunOutput& out = {}, const StepObserver& observer = {});

struct EpsilonLevel {
  double epsilon = 0.0;
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::size_t steps = 0;
  // max over patches of d_F to the next level's final curves; NaN on the last level or when
  // either run stopped early
  double frechet_to_next = 0.0;
};

// Runs cfg at eps, eps/2, ..., eps/2^(levels-1), eps being the configured or default radius.
std::vector<EpsilonLevel> refine_epsilon(const SimConfig& cfg, std::size_t levels = 3);

}  // namespace gsqg
