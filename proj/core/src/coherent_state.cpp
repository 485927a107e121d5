#include "geowave/coherent_state.hpp"

#include <cmath>
#include <sstream>

#include "geowave/csv.hpp"
#include "geowave/errors.hpp"

namespace geowave {

namespace {

constexpr double kTangentTol = 1e-8;

void check_base(const PointCloud& cloud, Index base) {
  if (base < 0 || base >= cloud.size()) {
    throw InvalidArgument("base index out of range");
  }
}

CoherentState build_state(const PointCloud& cloud, Index base, const Eigen::VectorXd& xi,
                          double h, CoherentState::Construction construction) {
  const Index n = cloud.size();
  CoherentState state;
  state.amplitudes.resize(n);
  state.base_index = base;
  state.momentum = xi;
  state.h = h;
  state.construction = construction;
  const Eigen::VectorXd base_point = cloud.points.row(base);
  for (Index j = 0; j < n; ++j) {
    const Eigen::VectorXd offset = base_point - cloud.points.row(j).transpose();
    const double phase = xi.dot(offset) / h;
    const double envelope = std::exp(-offset.squaredNorm() / (2.0 * h));
    state.amplitudes(j) =
        std::complex<double>(envelope * std::cos(phase), envelope * std::sin(phase));
  }
  return state;
}

// Analytic unit normal directions at a model point; tangency means zero dot
// product with each of them.
std::vector<Eigen::VectorXd> normal_directions(const PointCloud& cloud,
                                               const Eigen::VectorXd& at) {
  std::vector<Eigen::VectorXd> normals;
  switch (cloud.model) {
    case Model::Sphere2:
    case Model::Circle1:
      normals.push_back(at.normalized());
      break;
    case Model::FlatTorus2: {
      Eigen::VectorXd n1 = Eigen::VectorXd::Zero(4);
      n1.head<2>() = at.head<2>().normalized();
      Eigen::VectorXd n2 = Eigen::VectorXd::Zero(4);
      n2.tail<2>() = at.tail<2>().normalized();
      normals.push_back(std::move(n1));
      normals.push_back(std::move(n2));
      break;
    }
    case Model::External:
      throw UnsupportedModel("analytic tangent space unavailable for external clouds");
  }
  return normals;
}

}  // namespace

CoherentState make_state_neighbor(const PointCloud& cloud, Index base, Index neighbor,
                                  double h) {
  check_base(cloud, base);
  check_base(cloud, neighbor);
  if (h <= 0.0) {
    throw InvalidArgument("h must be > 0");
  }
  if (neighbor == base) {
    throw InvalidArgument("neighbor index must differ from the base index");
  }
  const Eigen::VectorXd offset =
      cloud.points.row(neighbor).transpose() - cloud.points.row(base).transpose();
  const double distance = offset.norm();
  if (!(distance > 0.0)) {
    throw InvalidArgument("neighbor coincides with the base point");
  }
  CoherentState state = build_state(cloud, base, offset / distance, h,
                                    CoherentState::Construction::Neighbor);
  state.neighbor_offset = distance;
  state.regime_warning =
      distance > std::pow(h, 0.25 * cloud.intrinsic_dim + 2.0);
  return state;
}

CoherentState make_state_tangent(const PointCloud& cloud, Index base,
                                 const Eigen::VectorXd& xi_ambient, double h) {
  check_base(cloud, base);
  if (h <= 0.0) {
    throw InvalidArgument("h must be > 0");
  }
  if (xi_ambient.size() != cloud.points.cols()) {
    throw InvalidArgument("momentum vector has the wrong ambient dimension");
  }
  if (std::abs(xi_ambient.norm() - 1.0) > kTangentTol) {
    throw InvalidArgument("momentum vector must have unit norm");
  }
  const Eigen::VectorXd at = cloud.points.row(base);
  for (const Eigen::VectorXd& normal : normal_directions(cloud, at)) {
    const double component = normal.dot(xi_ambient);
    if (std::abs(component) > kTangentTol) {
      std::ostringstream msg;
      msg << "momentum not tangent at the base point: normal component " << component;
      throw InvalidArgument(msg.str());
    }
  }
  return build_state(cloud, base, xi_ambient.normalized(), h,
                     CoherentState::Construction::AnalyticTangent);
}

Index pick_neighbor(const PointCloud& cloud, Index base, const Eigen::VectorXd& direction) {
  check_base(cloud, base);
  if (direction.size() != cloud.points.cols() || !(direction.norm() > 0.0)) {
    throw InvalidArgument("neighbor direction must be a nonzero ambient vector");
  }
  const Eigen::VectorXd dir = direction.normalized();
  const Eigen::VectorXd base_point = cloud.points.row(base);
  const double cos_cone = std::cos(M_PI / 4.0);
  Index best = -1;
  double best_distance = 0.0;
  for (Index j = 0; j < cloud.size(); ++j) {
    if (j == base) continue;
    const Eigen::VectorXd offset = cloud.points.row(j).transpose() - base_point;
    const double distance = offset.norm();
    if (!(distance > 0.0)) continue;
    if (offset.dot(dir) / distance < cos_cone) continue;
    if (best < 0 || distance < best_distance) {
      best = j;
      best_distance = distance;
    }
  }
  if (best < 0) {
    throw InvalidArgument("no sample within a pi/4 cone of the requested direction");
  }
  return best;
}

double discrete_norm(const Eigen::VectorXcd& u) {
  if (u.size() == 0) {
    throw InvalidArgument("discrete_norm of an empty vector");
  }
  return std::sqrt(u.squaredNorm() / static_cast<double>(u.size()));
}

TimeNormalizedState time_normalized_state(const CoherentState& state,
                                          const Eigen::VectorXcd& propagated) {
  const double c = discrete_norm(propagated);
  if (!(c > 0.0)) {
    throw DegenerateState("propagated state has zero discrete norm");
  }
  return {state.amplitudes / c, c};
}

void CoherentState::save(const std::filesystem::path& path) const {
  std::ofstream out = open_output(path);
  std::ostringstream xi;
  for (Index i = 0; i < momentum.size(); ++i) {
    if (i) xi << ';';
    xi << format_double(momentum(i));
  }
  out << metadata_line({{"j0", std::to_string(base_index)},
                        {"xi", xi.str()},
                        {"h", format_double(h)},
                        {"construction",
                         construction == Construction::Neighbor ? "neighbor" : "analytic-tangent"}})
      << '\n';
  for (Index j = 0; j < amplitudes.size(); ++j) {
    out << j << ',' << format_double(amplitudes(j).real()) << ','
        << format_double(amplitudes(j).imag()) << '\n';
  }
}

}  // namespace geowave
