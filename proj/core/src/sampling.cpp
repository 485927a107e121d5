#include "geowave/sampling.hpp"

#include <cmath>
#include <sstream>

#include "geowave/csv.hpp"
#include "geowave/errors.hpp"
#include "geowave/rng.hpp"

namespace geowave {

namespace {

constexpr double kQueryTol = 1e-10;

double wrap_angle(double a) {
  // wrap to (-pi, pi]
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

void check_count(Index n_points) {
  if (n_points < 2) {
    throw InvalidArgument("N must be >= 2, got " + std::to_string(n_points));
  }
}

Eigen::Vector3d uniform_sphere_point(Rng& rng) {
  while (true) {
    Eigen::Vector3d v(rng.gaussian(), rng.gaussian(), rng.gaussian());
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

}  // namespace

std::string to_string(SphereDensity density) {
  return density == SphereDensity::Uniform ? "uniform" : "cosine-tilted";
}

SphereDensity sphere_density_from_string(const std::string& name) {
  if (name == "uniform") return SphereDensity::Uniform;
  if (name == "cosine-tilted") return SphereDensity::CosineTilted;
  throw InvalidArgument("unknown density '" + name + "' (expected uniform|cosine-tilted)");
}

PointCloud sample_sphere(Index n_points, SphereDensity density, std::uint64_t seed) {
  check_count(n_points);
  Rng rng(seed);
  PointCloud cloud;
  cloud.points.resize(n_points, 3);
  cloud.intrinsic_dim = 2;
  cloud.model = Model::Sphere2;
  cloud.seed = seed;
  for (Index i = 0; i < n_points; ++i) {
    Eigen::Vector3d p = uniform_sphere_point(rng);
    if (density == SphereDensity::CosineTilted) {
      // density proportional to 1 + z/2, bounded by 3/2
      while (rng.uniform() * 1.5 >= 1.0 + 0.5 * p.z()) {
        p = uniform_sphere_point(rng);
      }
    }
    cloud.points.row(i) = p;
  }
  return cloud;
}

PointCloud sample_flat_torus(Index n_points, std::uint64_t seed) {
  check_count(n_points);
  Rng rng(seed);
  PointCloud cloud;
  cloud.points.resize(n_points, 4);
  cloud.intrinsic_dim = 2;
  cloud.model = Model::FlatTorus2;
  cloud.seed = seed;
  for (Index i = 0; i < n_points; ++i) {
    const double a = rng.uniform(0.0, 2.0 * M_PI);
    const double b = rng.uniform(0.0, 2.0 * M_PI);
    cloud.points.row(i) << std::cos(a), std::sin(a), std::cos(b), std::sin(b);
  }
  return cloud;
}

PointCloud sample_circle(Index n_points, std::uint64_t seed) {
  check_count(n_points);
  Rng rng(seed);
  PointCloud cloud;
  cloud.points.resize(n_points, 2);
  cloud.intrinsic_dim = 1;
  cloud.model = Model::Circle1;
  cloud.seed = seed;
  for (Index i = 0; i < n_points; ++i) {
    const double a = rng.uniform(0.0, 2.0 * M_PI);
    cloud.points.row(i) << std::cos(a), std::sin(a);
  }
  return cloud;
}

namespace {

void validate_query(Model model, const GeodesicQuery& query) {
  const auto& x0 = query.x0;
  const auto& xi0 = query.xi0;
  if (x0.size() != xi0.size()) {
    throw InvalidArgument("geodesic query: x0 and xi0 dimensions differ");
  }
  if (std::abs(xi0.norm() - 1.0) > kQueryTol) {
    throw InvalidArgument("geodesic query: |xi0| != 1");
  }
  switch (model) {
    case Model::Sphere2:
    case Model::Circle1:
      if (std::abs(x0.dot(xi0)) > kQueryTol) {
        throw InvalidArgument("geodesic query: xi0 not tangent (x0.xi0 != 0)");
      }
      break;
    case Model::FlatTorus2: {
      // normal space is spanned by (x1,x2,0,0) and (0,0,x3,x4)
      const double n1 = x0(0) * xi0(0) + x0(1) * xi0(1);
      const double n2 = x0(2) * xi0(2) + x0(3) * xi0(3);
      if (std::abs(n1) > kQueryTol || std::abs(n2) > kQueryTol) {
        throw InvalidArgument("geodesic query: xi0 not tangent to the torus");
      }
      break;
    }
    case Model::External:
      throw UnsupportedModel("geodesic oracle not available for external clouds");
  }
}

}  // namespace

Eigen::VectorXd geodesic_oracle(Model model, const GeodesicQuery& query) {
  validate_query(model, query);
  const auto& x0 = query.x0;
  const auto& xi0 = query.xi0;
  const double t = query.t;
  switch (model) {
    case Model::Sphere2:
      return std::cos(t) * x0 + std::sin(t) * xi0;
    case Model::FlatTorus2: {
      const double a = std::atan2(x0(1), x0(0));
      const double b = std::atan2(x0(3), x0(2));
      // angle velocities from the ambient tangent vector
      const double da = -std::sin(a) * xi0(0) + std::cos(a) * xi0(1);
      const double db = -std::sin(b) * xi0(2) + std::cos(b) * xi0(3);
      const double at = a + t * da;
      const double bt = b + t * db;
      Eigen::VectorXd out(4);
      out << std::cos(at), std::sin(at), std::cos(bt), std::sin(bt);
      return out;
    }
    case Model::Circle1: {
      // oriented angle speed: +1 if xi0 points counterclockwise
      const double s = -std::sin(std::atan2(x0(1), x0(0))) * xi0(0) +
                       std::cos(std::atan2(x0(1), x0(0))) * xi0(1);
      const double a = std::atan2(x0(1), x0(0)) + t * s;
      Eigen::VectorXd out(2);
      out << std::cos(a), std::sin(a);
      return out;
    }
    case Model::External:
      break;
  }
  throw UnsupportedModel("geodesic oracle not available for external clouds");
}

double geodesic_distance(Model model, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  switch (model) {
    case Model::Sphere2:
    case Model::Circle1: {
      const double c = x.dot(y) / (x.norm() * y.norm());
      return std::acos(std::clamp(c, -1.0, 1.0));
    }
    case Model::FlatTorus2: {
      const double da = wrap_angle(std::atan2(y(1), y(0)) - std::atan2(x(1), x(0)));
      const double db = wrap_angle(std::atan2(y(3), y(2)) - std::atan2(x(3), x(2)));
      return std::sqrt(da * da + db * db);
    }
    case Model::External:
      break;
  }
  throw UnsupportedModel("geodesic distance not available for external clouds");
}

PointCloud load_point_cloud(const std::filesystem::path& path, int intrinsic_dim) {
  CsvTable table = read_numeric_csv(path);
  if (table.values.cols() < 2) {
    throw IoError(path.string() + ": need at least 2 numeric columns");
  }
  PointCloud cloud;
  cloud.points = std::move(table.values);
  cloud.intrinsic_dim = intrinsic_dim;
  cloud.model = Model::External;
  cloud.validate();
  return cloud;
}

void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("model", to_string(cloud.model));
  meta.emplace_back("n", std::to_string(cloud.intrinsic_dim));
  meta.emplace_back("seed", cloud.seed ? std::to_string(*cloud.seed) : "none");
  meta.emplace_back("N", std::to_string(cloud.size()));
  meta.emplace_back("D", std::to_string(cloud.ambient_dim()));
  out << metadata_line(meta) << '\n';
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index j = 0; j < cloud.points.cols(); ++j) {
      if (j) out << ',';
      out << format_double(cloud.points(i, j));
    }
    out << '\n';
  }
}

}  // namespace geowave
