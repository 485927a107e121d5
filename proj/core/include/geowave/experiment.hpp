#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geowave/coherent_state.hpp"
#include "geowave/config.hpp"
#include "geowave/graph_laplacian.hpp"
#include "geowave/point_cloud.hpp"
#include "geowave/recovery.hpp"
#include "geowave/sampling.hpp"
#include "geowave/spectral.hpp"

namespace geowave {

// One resolved experiment: every knob the pipeline needs, with the documented
// defaults filled in. Constructed from a ConfigMap; the map records which
// keys were consulted so outputs can echo the full resolved configuration.
struct ExperimentSpec {
  // manifold
  Model model = Model::Sphere2;
  Index n_points = 500;
  SphereDensity density = SphereDensity::Uniform;
  std::uint64_t seed = 1;
  std::string external_path;
  int intrinsic_dim = 2;

  // kernel
  double lambda = 1.0;
  double alpha = 2.0;
  double h = 0.2;
  double epsilon_explicit = 0.0;  // 0 = derive h^{2+alpha}
  double truncation_radius = 6.0;
  std::string shift_policy = "none";  // none | coupled | <number>
  double shift_value = 0.0;

  // state
  Index base_index = 0;
  bool neighbor_construction = false;
  std::vector<double> direction;  // empty = model-specific default
  Index neighbor_index = -1;      // explicit neighbor; -1 = pick by direction
  double state_h = 0.0;           // 0 = same as kernel h

  // recovery
  std::vector<double> t_grid{0.2, 0.4, 0.6};
  double cutoff_inner = 1.0;
  double cutoff_outer = 2.0;
  bool use_cutoff = true;

  int workers = 1;
  bool verbose = false;

  static ExperimentSpec resolve(const ConfigMap& config);

  double resolved_epsilon() const;
  double resolved_shift() const;
  double resolved_state_h() const { return state_h > 0.0 ? state_h : h; }
};

struct StageTimes {
  double assembly_s = 0.0;
  double eig_s = 0.0;
  double propagation_s = 0.0;
};

// cloud -> operators -> decomposition -> state, with wall time per stage.
struct Pipeline {
  PointCloud cloud;
  GraphOperators ops;
  SpectralDecomposition decomp;
  CoherentState state;
  RecoveryConfig recovery;
  StageTimes times;
};

PointCloud make_cloud(const ExperimentSpec& spec);
PointCloud make_cloud(const ExperimentSpec& spec, Index n_points, std::uint64_t seed);

// Builds everything up to (and including) the coherent state. `warnings`
// receives human-readable regime notes (h-coupling outside [1,2], neighbor
// offset above the accuracy scale).
Pipeline build_pipeline(const ExperimentSpec& spec, Index n_points, std::uint64_t seed,
                        std::vector<std::string>* warnings);

// Fixed quasi-uniform evaluation set on a model manifold (Fibonacci lattice),
// independent of any sampling seed.
Eigen::MatrixXd held_out_points(Model model, int count);

// --- CLI command bodies -----------------------------------------------------
//
// Each returns a process exit code (0 success) and writes CSV outputs whose
// '#' headers embed the resolved configuration. Progress and stage timings go
// to `log`.

int cmd_sample(const ConfigMap& config, const std::filesystem::path& out, std::ostream& log);
int cmd_trace(const ConfigMap& config, const std::filesystem::path& out, std::ostream& log);
int cmd_sweep(const ConfigMap& config, const std::filesystem::path& out, std::ostream& log);
int cmd_consistency(const ConfigMap& config, const std::filesystem::path& out,
                    std::ostream& log);
int cmd_bounds(const ConfigMap& config, const std::filesystem::path& out, std::ostream& log);

// --- sweep internals (exposed for tests and the acceptance suite) -----------

struct SweepRow {
  Index n_points = 0;
  double h = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  double t = 0.0;
  double err_max = 0.0;
  double err_mean = 0.0;
  double c_tN = 0.0;
};

struct SweepAggregate {
  Index n_points = 0;
  double h = 0.0;  // NaN for the per-N slope rows
  double median_err_max = 0.0;
  double median_err_mean = 0.0;
  std::optional<double> slope_err_max;   // per-N rows only
  std::optional<double> slope_err_mean;  // empty when not fittable
};

// Wall times per grid point; excluded from the determinism contract and
// written to a separate sidecar file.
struct SweepTiming {
  Index n_points = 0;
  double h = 0.0;
  std::uint64_t seed = 0;
  StageTimes times;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepAggregate> aggregates;
  std::vector<SweepTiming> timings;
};

SweepResult run_sweep(const ExperimentSpec& spec, const std::vector<Index>& n_list,
                      const std::vector<double>& h_list, int seed_count, std::ostream& log);

// Aggregates recomputed from raw rows (the on-load cross-check).
std::vector<SweepAggregate> aggregate_sweep(const std::vector<SweepRow>& rows);

double median(std::vector<double> values);

// Least-squares slope of log(y) against log(x); empty when fewer than two
// distinct x values.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// --- consistency internals ---------------------------------------------------

struct ConsistencyRow {
  Index n_points = 0;
  std::uint64_t seed = 0;
  double discrepancy = 0.0;  // sup over held-out points
};

struct ConsistencyResult {
  std::vector<ConsistencyRow> rows;
  std::vector<std::pair<Index, double>> median_by_n;  // ordered as the N list
};

ConsistencyResult run_consistency(const ExperimentSpec& spec, const std::vector<Index>& n_list,
                                  Index proxy_size, double t, int coordinate, int seed_count,
                                  int held_out_count, std::ostream& log);

}  // namespace geowave
