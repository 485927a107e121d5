#include <doctest.h>

#include <cmath>
#include <complex>

#include "geowave/chebyshev.hpp"
#include "geowave/errors.hpp"
#include "geowave/graph_laplacian.hpp"
#include "geowave/nystrom.hpp"
#include "geowave/rng.hpp"
#include "geowave/sampling.hpp"
#include "geowave/spectral.hpp"

using namespace geowave;
using cx = std::complex<double>;

namespace {

struct Setup {
  PointCloud cloud;
  GraphOperators ops;
  SpectralDecomposition decomp;
  Eigen::VectorXcd u;
};

Setup sphere_setup(Index n, double epsilon, double lambda, std::uint64_t seed) {
  Setup s;
  s.cloud = sample_sphere(n, SphereDensity::Uniform, seed);
  KernelConfig config;
  config.epsilon = epsilon;
  config.lambda = lambda;
  config.intrinsic_dim = 2;
  s.ops = GraphOperators::build(s.cloud, config);
  s.decomp = decompose(s.ops);
  Rng rng(seed + 1);
  s.u.resize(n);
  for (Index i = 0; i < n; ++i) s.u(i) = cx(rng.gaussian(), rng.gaussian());
  return s;
}

}  // namespace

TEST_CASE("chebyshev reproduces low-degree polynomials exactly") {
  const Setup s = sphere_setup(40, 0.3, 1.0, 111);
  const Eigen::VectorXd weight = s.decomp.weight;

  SUBCASE("T_1(z) = z at degree 1") {
    const ScalarFunction f = ScalarFunction::identity();
    const auto [values, decay] = chebyshev_apply(s.ops.averaging, weight, f, s.u, 1);
    const Eigen::VectorXcd direct = s.ops.averaging * s.u;
    CHECK((values - direct).cwiseAbs().maxCoeff() < 1e-13);
  }

  SUBCASE("T_2(z) = 2z^2 - 1 at degree 2") {
    const ScalarFunction f = ScalarFunction::custom(
        [](double mu) { return cx(2.0 * mu * mu - 1.0, 0.0); }, cx(-1.0, 0.0), cx(0.0, 0.0));
    const auto [values, decay] = chebyshev_apply(s.ops.averaging, weight, f, s.u, 2);
    const Eigen::VectorXcd direct = 2.0 * (s.ops.averaging * (s.ops.averaging * s.u)) - s.u;
    CHECK((values - direct).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("chebyshev fast path matches the eigendecomposition path") {
  const Setup s = sphere_setup(120, 0.2, 1.0, 113);
  const double shift = 2e-3;
  const ScalarFunction f = ScalarFunction::propagator(0.5, s.ops.epsilon, shift, s.ops.c20());
  const int degree = chebyshev_degree_for(f, 1e-10);
  const auto [values, decay] = chebyshev_apply(s.ops.averaging, s.decomp.weight, f, s.u, degree);
  CHECK(decay < 1e-10);
  const Eigen::VectorXcd exact = apply_function(s.decomp, f, s.u);
  CHECK((values - exact).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("chebyshev rejects branch points on the spectrum") {
  const Setup s = sphere_setup(20, 0.3, 0.0, 115);
  const ScalarFunction f = ScalarFunction::propagator(0.5, s.ops.epsilon, 0.0, s.ops.c20());
  CHECK_THROWS_AS(chebyshev_apply(s.ops.averaging, s.decomp.weight, f, s.u, 64),
                  InvalidArgument);
  CHECK_THROWS_AS(chebyshev_degree_for(ScalarFunction::shifted_sqrt(0.0)), InvalidArgument);
  // the entire wave kinds pass at shift 0
  CHECK_NOTHROW(chebyshev_coefficients(
      ScalarFunction::wave_cos(0.5, s.ops.epsilon, 0.0, s.ops.c20()), 16));
}

TEST_CASE("chebyshev coefficients decay geometrically for the shifted propagator") {
  const ScalarFunction f = ScalarFunction::propagator(0.5, 0.01, 5e-3, 2.0);
  const int degree = chebyshev_degree_for(f, 1e-10);
  const Eigen::VectorXcd coeffs = chebyshev_coefficients(f, degree);
  const double top = coeffs.cwiseAbs().maxCoeff();

  // log-linear fit of the above-floor coefficient magnitudes
  std::vector<double> ks, logs;
  for (int k = 0; k <= degree; ++k) {
    const double magnitude = std::abs(coeffs(k));
    if (magnitude > 1e-12 * top) {
      ks.push_back(k);
      logs.push_back(std::log(magnitude));
    }
  }
  REQUIRE(ks.size() > 20);
  const double n = static_cast<double>(ks.size());
  double mean_k = 0.0, mean_log = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    mean_k += ks[i];
    mean_log += logs[i];
  }
  mean_k /= n;
  mean_log /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    sxx += (ks[i] - mean_k) * (ks[i] - mean_k);
    sxy += (ks[i] - mean_k) * (logs[i] - mean_log);
    syy += (logs[i] - mean_log) * (logs[i] - mean_log);
  }
  const double slope = sxy / sxx;
  const double r2 = (sxy * sxy) / (sxx * syy);
  CHECK(slope < 0.0);
  CHECK(r2 > 0.99);
}

TEST_CASE("nystrom extension is exact at sample points") {
  const Setup s = sphere_setup(50, 0.3, 1.0, 117);
  const std::vector<ScalarFunction> kinds = {
      ScalarFunction::propagator(0.4, s.ops.epsilon, 0.0, s.ops.c20()),
      ScalarFunction::wave_cos(0.4, s.ops.epsilon, 0.0, s.ops.c20()),
      ScalarFunction::wave_sin_kernel(0.4, s.ops.epsilon, 0.0, s.ops.c20()),
      ScalarFunction::shifted_sqrt(1e-3),
  };
  for (const ScalarFunction& f : kinds) {
    const Eigen::VectorXcd in_sample = apply_function(s.decomp, f, s.u);
    for (Index j : {Index(0), Index(17), Index(49)}) {
      const cx extended =
          nystrom_extend(s.cloud, s.ops, s.decomp, f, s.u, s.u(j), s.cloud.points.row(j));
      CHECK(std::abs(extended - in_sample(j)) < 1e-10);
    }
  }
}

TEST_CASE("nystrom identity function gives the plain averaged extension") {
  const Setup s = sphere_setup(50, 0.3, 1.0, 119);
  // held-out point on the sphere
  Eigen::Vector3d x(0.3, -0.4, 0.5);
  x.normalize();

  const cx extended = nystrom_extend(s.cloud, s.ops, s.decomp, ScalarFunction::identity(), s.u,
                                     cx(0.0, 0.0), x);

  // direct extension row (same kernel/degree construction)
  const Index n = s.cloud.size();
  Eigen::VectorXd row(n);
  for (Index j = 0; j < n; ++j) {
    const double d2 = (s.cloud.points.row(j).transpose() - x).squaredNorm();
    row(j) = std::exp(-d2 / s.ops.epsilon) / s.ops.epsilon;
  }
  const double p_x = row.mean();
  Eigen::VectorXd row_lambda =
      row.cwiseQuotient(s.ops.p_eps.array().pow(s.ops.lambda).matrix()) / std::pow(p_x, s.ops.lambda);
  row_lambda /= row_lambda.mean() * static_cast<double>(n);
  const cx direct = (row_lambda.cast<cx>().transpose() * s.u)(0);
  CHECK(std::abs(extended - direct) < 1e-12);

  SUBCASE("z^2 matches the two-step averaging oracle") {
    const ScalarFunction square =
        ScalarFunction::custom([](double mu) { return cx(mu * mu, 0.0); }, cx(0.0, 0.0),
                               cx(0.0, 0.0));
    const cx two_step = nystrom_extend(s.cloud, s.ops, s.decomp, square, s.u, cx(0.0, 0.0), x);
    const Eigen::VectorXcd once = s.ops.averaging * s.u;
    const cx oracle = (row_lambda.cast<cx>().transpose() * once)(0);
    CHECK(std::abs(two_step - oracle) < 1e-10);
  }
}

TEST_CASE("nystrom far from the samples is degenerate") {
  const Setup s = sphere_setup(20, 0.01, 0.0, 121);
  Eigen::Vector3d x(50.0, 0.0, 0.0);  // outside every truncation ball
  CHECK_THROWS_AS(nystrom_extend(s.cloud, s.ops, s.decomp, ScalarFunction::identity(), s.u,
                                 cx(0.0, 0.0), x),
                  DegenerateExtension);
}
