#include "geowave/point_cloud.hpp"

#include <cmath>
#include <sstream>

#include "geowave/errors.hpp"

namespace geowave {

std::string to_string(Model model) {
  switch (model) {
    case Model::Sphere2:
      return "sphere2";
    case Model::FlatTorus2:
      return "flattorus2";
    case Model::Circle1:
      return "circle1";
    case Model::External:
      return "external";
  }
  return "external";
}

Model model_from_string(const std::string& name) {
  if (name == "sphere2") return Model::Sphere2;
  if (name == "flattorus2") return Model::FlatTorus2;
  if (name == "circle1") return Model::Circle1;
  if (name == "external") return Model::External;
  throw InvalidArgument("unknown model '" + name +
                        "' (expected sphere2|flattorus2|circle1|external)");
}

namespace {
constexpr double kEmbedTol = 1e-12;
}

void PointCloud::validate() const {
  const Index n_points = size();
  if (n_points < 2) {
    throw InvalidArgument("point cloud needs N >= 2, got N=" + std::to_string(n_points));
  }
  if (intrinsic_dim < 1) {
    throw InvalidArgument("intrinsic_dim must be >= 1");
  }
  if (ambient_dim() < intrinsic_dim + 1) {
    std::ostringstream msg;
    msg << "ambient dimension D=" << ambient_dim() << " must be >= n+1=" << intrinsic_dim + 1;
    throw InvalidArgument(msg.str());
  }

  auto require_unit = [&](double value, Index row, const char* what) {
    if (std::abs(value - 1.0) > kEmbedTol) {
      std::ostringstream msg;
      msg << "row " << row << ": " << what << " deviates from 1 by " << std::abs(value - 1.0);
      throw InvalidArgument(msg.str());
    }
  };

  switch (model) {
    case Model::Sphere2:
      if (ambient_dim() != 3 || intrinsic_dim != 2) {
        throw InvalidArgument("sphere2 cloud must have D=3, n=2");
      }
      for (Index i = 0; i < n_points; ++i) {
        require_unit(points.row(i).norm(), i, "point norm");
      }
      break;
    case Model::FlatTorus2:
      if (ambient_dim() != 4 || intrinsic_dim != 2) {
        throw InvalidArgument("flattorus2 cloud must have D=4, n=2");
      }
      for (Index i = 0; i < n_points; ++i) {
        require_unit(points.row(i).head<2>().norm(), i, "(x1,x2) pair norm");
        require_unit(points.row(i).tail<2>().norm(), i, "(x3,x4) pair norm");
      }
      break;
    case Model::Circle1:
      if (ambient_dim() != 2 || intrinsic_dim != 1) {
        throw InvalidArgument("circle1 cloud must have D=2, n=1");
      }
      for (Index i = 0; i < n_points; ++i) {
        require_unit(points.row(i).norm(), i, "point norm");
      }
      break;
    case Model::External:
      break;
  }
}

}  // namespace geowave
