#include "geowave/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "geowave/errors.hpp"

namespace geowave {

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Halfwave:
      return "halfwave";
    case BoundKind::Mean:
      return "mean";
    case BoundKind::Max:
      return "max";
  }
  return "halfwave";
}

BoundKind bound_kind_from_string(const std::string& name) {
  if (name == "halfwave") return BoundKind::Halfwave;
  if (name == "mean") return BoundKind::Mean;
  if (name == "max") return BoundKind::Max;
  throw InvalidArgument("unknown bound kind '" + name + "' (halfwave|mean|max)");
}

double bernstein_bound(BoundKind kind, const BoundParams& p) {
  if (p.n_samples <= 0.0 || p.dim <= 0.0 || p.epsilon <= 0.0 || p.constant <= 0.0) {
    throw InvalidArgument("bernstein_bound: N, n, epsilon, C must be positive");
  }
  const double eps_power = std::pow(p.epsilon, 2.5 * p.dim + 4.0);
  double exponent = 0.0;
  switch (kind) {
    case BoundKind::Halfwave: {
      if (p.delta <= 0.0 || p.t == 0.0 || p.k_u <= 0.0) {
        throw InvalidArgument("halfwave bound needs delta > 0, t != 0, K_u > 0");
      }
      exponent = p.n_samples * std::pow(p.delta, 4.0) * eps_power /
                 (p.constant * p.k_u * p.k_u * std::pow(std::abs(p.t), 8.0));
      break;
    }
    case BoundKind::Mean: {
      if (p.h <= 0.0) throw InvalidArgument("mean bound needs h > 0");
      exponent = p.n_samples * std::pow(p.h, 2.0 * (p.dim + 2.0)) * eps_power / p.constant;
      break;
    }
    case BoundKind::Max: {
      if (p.h <= 0.0) throw InvalidArgument("max bound needs h > 0");
      exponent = p.n_samples * std::pow(p.h, 2.0 * p.dim) * eps_power / p.constant;
      break;
    }
  }
  return std::min(1.0, std::exp(-exponent));
}

}  // namespace geowave
