#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

namespace geowave {

using Index = Eigen::Index;

enum class Model { Sphere2, FlatTorus2, Circle1, External };

std::string to_string(Model model);
Model model_from_string(const std::string& name);

// Finite sample of an embedded manifold: N ambient row vectors plus the
// metadata needed to interpret them.
struct PointCloud {
  Eigen::MatrixXd points;  // N x D, one sample per row
  int intrinsic_dim = 0;
  Model model = Model::External;
  std::optional<std::uint64_t> seed;

  Index size() const { return points.rows(); }
  int ambient_dim() const { return static_cast<int>(points.cols()); }

  // Throws InvalidArgument when a structural invariant is violated:
  // N >= 2, D >= n+1, and model-specific embedding constraints
  // (unit rows for Sphere2/Circle1, unit coordinate pairs for FlatTorus2)
  // within 1e-12.
  void validate() const;
};

}  // namespace geowave
