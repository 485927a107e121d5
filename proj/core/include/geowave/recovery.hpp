#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "geowave/coherent_state.hpp"
#include "geowave/graph_laplacian.hpp"
#include "geowave/point_cloud.hpp"
#include "geowave/spectral.hpp"

namespace geowave {

struct RecoveryConfig {
  double h = 0.2;
  double alpha = 2.0;            // in [1,2]; epsilon couples as h^{2+alpha}
  double epsilon = 0.0;          // 0 = derive from h and alpha
  double epsilon_shift = 0.0;    // 0 = unperturbed propagator
  std::vector<double> t_grid;    // strictly increasing
  double cutoff_inner = 1.0;     // inner radius, in units of sqrt(h)
  double cutoff_outer = 2.0;     // outer radius, in units of sqrt(h)
  bool use_cutoff = true;        // false reproduces the global extrinsic mean
  double c20 = 2.0;

  double resolved_epsilon() const;
  // t capped at 0.9*pi on the closed models to keep a margin below the
  // injectivity radius.
  void validate(Model model) const;
};

struct DensityResult {
  Eigen::VectorXcd propagated;  // U^t applied to the raw state
  Eigen::VectorXd density;      // |propagated|^2 / c_tN^2, mean one
  double c_tN = 0.0;
};

// Steps 1 and 3 of the recovery loop: propagate the raw state, normalize the
// resulting density so <density, 1>_N = 1.
DensityResult propagate_density(const SpectralDecomposition& decomp, const CoherentState& state,
                                double t, const RecoveryConfig& config);

// Index of the largest density entry; ties resolve to the lowest index.
Index sample_max(const Eigen::VectorXd& density);

// Smooth bump in ambient distance from `center`: 1 inside r_inner, 0 outside
// r_outer, exp(1 - 1/(1-s^2)) bridge in between.
Eigen::VectorXd bump_cutoff(const Eigen::VectorXd& center, double r_inner, double r_outer,
                            const PointCloud& cloud);

struct ExtrinsicMeanResult {
  Eigen::VectorXd mean_point;  // cutoff-weighted ambient mean
  Index snapped_index = 0;     // nearest sample, ties to the lowest index
};

ExtrinsicMeanResult extrinsic_mean(const Eigen::VectorXd& density, const Eigen::VectorXd& chi,
                                   const PointCloud& cloud);

// Wrap-aware density mean in torus angle coordinates (circular mean per
// angle), with the snap taken in the flat metric on angles.
struct TorusLocalMeanResult {
  double theta = 0.0;
  double phi = 0.0;
  Index snapped_index = 0;
};

TorusLocalMeanResult torus_local_mean(const Eigen::VectorXd& density, const Eigen::VectorXd& chi,
                                      const PointCloud& cloud);

struct TraceRecord {
  double t = 0.0;
  Index max_index = 0;
  Eigen::VectorXd mean_point;
  Index snapped_index = 0;
  double c_tN = 0.0;
  std::optional<double> err_max;   // d_g(X_max, x_t), model clouds only
  std::optional<double> err_mean;  // d_g(X_snap, x_t)
};

struct GeodesicTrace {
  std::vector<TraceRecord> records;
  // oracle data used for scoring (tangent projection of the state momentum)
  Eigen::VectorXd x0;
  Eigen::VectorXd xi_oracle;
  Model model = Model::External;
};

// The full per-time recovery loop: propagate, locate the maximizer, center
// the cutoff there, take the extrinsic mean, snap, and (for model clouds)
// attach oracle errors.
GeodesicTrace trace_geodesic(const PointCloud& cloud, const GraphOperators& ops,
                             const SpectralDecomposition& decomp, const CoherentState& state,
                             const RecoveryConfig& config);

struct RecoveryErrorRecord {
  double t = 0.0;
  double err_max = 0.0;
  double err_mean = 0.0;
};

// Oracle errors for every record of a trace; UnsupportedModel for external
// clouds.
std::vector<RecoveryErrorRecord> recovery_error(const GeodesicTrace& trace,
                                                const PointCloud& cloud);

// Trace CSV: columns t, max_index, snap_index, mean_x_1..D, c_tN, err_max,
// err_mean under a '#' metadata header.
void save_trace(const GeodesicTrace& trace, const PointCloud& cloud,
                const std::vector<std::pair<std::string, std::string>>& config_meta,
                const std::filesystem::path& path);

}  // namespace geowave
