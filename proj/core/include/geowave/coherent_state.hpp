#pragma once

#include <Eigen/Dense>
#include <filesystem>

#include "geowave/point_cloud.hpp"

namespace geowave {

// Discrete coherent state on the sample set:
//
//   psi(X_j) = exp( (i/h) <xi, X_{j0} - X_j>  -  |X_j - X_{j0}|^2 / (2h) )
//
// The modulus is the pure Gaussian envelope; all momentum dependence sits in
// the phase.
struct CoherentState {
  enum class Construction { Neighbor, AnalyticTangent };

  Eigen::VectorXcd amplitudes;
  Index base_index = 0;
  Eigen::VectorXd momentum;  // ambient unit vector xi
  double h = 0.0;
  Construction construction = Construction::Neighbor;

  // Neighbor construction only: the offset |X_* - X_0| and whether it
  // violates the accuracy regime |X_* - X_0| <= h^{n/4 + 2}. The flag is
  // heuristic (unit coefficient) and never an error.
  double neighbor_offset = 0.0;
  bool regime_warning = false;

  // CSV (index, re, im) with a '#' metadata header carrying j0, xi, h.
  void save(const std::filesystem::path& path) const;
};

// Momentum from a neighbor sample: xi = (X_* - X_0)/|X_* - X_0|.
CoherentState make_state_neighbor(const PointCloud& cloud, Index base, Index neighbor, double h);

// Momentum prescribed exactly as an ambient tangent vector at X_0; the
// normal component is checked against the model's analytic tangent space
// (tolerance 1e-8) and rejected with its magnitude reported.
CoherentState make_state_tangent(const PointCloud& cloud, Index base,
                                 const Eigen::VectorXd& xi_ambient, double h);

// Nearest sample to `base` whose offset direction lies within angle pi/4 of
// `direction`; ties broken by smaller distance, then smaller index.
Index pick_neighbor(const PointCloud& cloud, Index base, const Eigen::VectorXd& direction);

// ||u||_N = sqrt( (1/N) sum |u_j|^2 )
double discrete_norm(const Eigen::VectorXcd& u);

struct TimeNormalizedState {
  Eigen::VectorXcd amplitudes;  // psi / c_tN
  double c_tN = 0.0;            // ||propagated||_N
};

// Time-dependent normalization: scales the *initial* state by the discrete
// norm of its propagation, so the propagated density integrates to one.
TimeNormalizedState time_normalized_state(const CoherentState& state,
                                          const Eigen::VectorXcd& propagated);

}  // namespace geowave
