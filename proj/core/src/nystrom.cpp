#include "geowave/nystrom.hpp"

#include <cmath>

#include "geowave/errors.hpp"

namespace geowave {

std::complex<double> nystrom_extend_prepared(const PointCloud& cloud, const GraphOperators& ops,
                                             const Eigen::VectorXcd& derived_applied,
                                             std::complex<double> f0,
                                             std::complex<double> u_at_x,
                                             const Eigen::VectorXd& x) {
  const Index n = cloud.size();
  if (derived_applied.size() != n) {
    throw InvalidArgument("nystrom: vector length does not match the cloud");
  }
  if (x.size() != cloud.points.cols()) {
    throw InvalidArgument("nystrom: evaluation point has the wrong ambient dimension");
  }

  const double eps = ops.epsilon;
  const double prefactor = std::pow(eps, -0.5 * ops.intrinsic_dim);
  const double cut2 = ops.truncation_radius * ops.truncation_radius * eps;

  // kernel row at x, then its own degree, then the lambda renormalization
  Eigen::VectorXd row(n);
  for (Index j = 0; j < n; ++j) {
    const double d2 = (cloud.points.row(j).transpose() - x).squaredNorm();
    row(j) = d2 > cut2 ? 0.0 : prefactor * std::exp(-d2 / eps);
  }
  const double p_eps_x = row.mean();
  if (!(p_eps_x > 0.0)) {
    throw DegenerateExtension("extension point has zero kernel mass against the samples");
  }
  if (ops.lambda != 0.0) {
    const double px_pow = std::pow(p_eps_x, ops.lambda);
    row.array() /= px_pow * ops.p_eps.array().pow(ops.lambda);
  }
  const double p_lambda_x = row.mean();
  row /= p_lambda_x * static_cast<double>(n);

  std::complex<double> acc(0.0, 0.0);
  for (Index j = 0; j < n; ++j) {
    acc += row(j) * derived_applied(j);
  }
  return f0 * u_at_x + acc;
}

std::complex<double> nystrom_extend(const PointCloud& cloud, const GraphOperators& ops,
                                    const SpectralDecomposition& decomp, const ScalarFunction& f,
                                    const Eigen::VectorXcd& u_on_samples,
                                    std::complex<double> u_at_x, const Eigen::VectorXd& x) {
  const Eigen::VectorXcd derived_applied = apply_function(decomp, f.derived(), u_on_samples);
  return nystrom_extend_prepared(cloud, ops, derived_applied, f.f0, u_at_x, x);
}

}  // namespace geowave
