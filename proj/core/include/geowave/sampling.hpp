#pragma once

#include <cstdint>
#include <filesystem>

#include "geowave/point_cloud.hpp"

namespace geowave {

enum class SphereDensity { Uniform, CosineTilted };

std::string to_string(SphereDensity density);
SphereDensity sphere_density_from_string(const std::string& name);

// I.i.d. points on the unit sphere S^2 in R^3. CosineTilted draws from the
// density proportional to 1 + z/2 by rejection against the uniform measure
// (acceptance bound 3/2).
PointCloud sample_sphere(Index n_points, SphereDensity density, std::uint64_t seed);

// I.i.d. points on the flat torus embedded in R^4 as
// (cos a, sin a, cos b, sin b) with (a, b) uniform on [0,2pi)^2; the induced
// metric is da^2 + db^2.
PointCloud sample_flat_torus(Index n_points, std::uint64_t seed);

// I.i.d. points on the unit circle in R^2.
PointCloud sample_circle(Index n_points, std::uint64_t seed);

// A point on a model manifold together with a unit tangent direction and a
// travel time.
struct GeodesicQuery {
  Eigen::VectorXd x0;   // ambient base point, on the model manifold
  Eigen::VectorXd xi0;  // ambient unit tangent at x0
  double t = 0.0;
};

// Exact unit-speed geodesic point at time t. Supported models:
//   Sphere2:    cos(t) x0 + sin(t) xi0
//   FlatTorus2: advance the two angles linearly, re-embed
//   Circle1:    rotate by t in the oriented tangent direction
// External -> UnsupportedModel.
Eigen::VectorXd geodesic_oracle(Model model, const GeodesicQuery& query);

// Exact geodesic distance between two points on a model manifold.
double geodesic_distance(Model model, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

// CSV ingestion: one point per row, comma separated, '#'-prefixed lines
// skipped. Parse failures raise IoError citing the 1-based (row, column).
PointCloud load_point_cloud(const std::filesystem::path& path, int intrinsic_dim);

// CSV serialization with a '#' metadata header (model, n, seed, N, D).
void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path);

}  // namespace geowave
