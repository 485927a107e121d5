#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "geowave/errors.hpp"
#include "geowave/graph_laplacian.hpp"
#include "geowave/rng.hpp"
#include "geowave/sampling.hpp"
#include "geowave/spectral.hpp"

using namespace geowave;

namespace {

PointCloud line_cloud_1d(const std::vector<double>& xs) {
  // points on the x-axis of R^2 so that D >= n+1 holds with n = 1
  PointCloud cloud;
  cloud.points.resize(static_cast<Index>(xs.size()), 2);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    cloud.points.row(static_cast<Index>(i)) << xs[i], 0.0;
  }
  cloud.intrinsic_dim = 1;
  cloud.model = Model::External;
  return cloud;
}

// straight-line evaluation of the kernel/degree definitions, kept independent
// of the library path
Eigen::MatrixXd reference_kernel(const PointCloud& cloud, double eps, int dim) {
  const Index n = cloud.size();
  Eigen::MatrixXd kernel(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const double d2 = (cloud.points.row(i) - cloud.points.row(j)).squaredNorm();
      kernel(i, j) = std::pow(eps, -0.5 * dim) * std::exp(-d2 / eps);
    }
  }
  return kernel;
}

// composite Simpson on [-8, 8]; the Gaussian tails beyond are ~1e-28
double simpson_gauss_moment(int power) {
  const int intervals = 4000;
  const double lo = -8.0, hi = 8.0;
  const double step = (hi - lo) / intervals;
  auto f = [power](double z) { return std::pow(z, power) * std::exp(-z * z); };
  double acc = f(lo) + f(hi);
  for (int k = 1; k < intervals; ++k) {
    acc += f(lo + k * step) * (k % 2 ? 4.0 : 2.0);
  }
  return acc * step / 3.0;
}

}  // namespace

TEST_CASE("gaussian kernel moments") {
  const auto [c0_2, c2_2] = kernel_moments(KernelKind::Gaussian, 2);
  CHECK(c0_2 == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(c2_2 == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
  CHECK(std::sqrt(2.0 * c0_2 / c2_2) == doctest::Approx(2.0).epsilon(1e-15));

  const auto [c0_1, c2_1] = kernel_moments(KernelKind::Gaussian, 1);
  CHECK(c0_1 == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-15));
  CHECK(c2_1 == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-15));

  // quadrature oracle: c0(n) = I0^n, c2(n) = I2 * I0^{n-1}
  const double i0 = simpson_gauss_moment(0);
  const double i2 = simpson_gauss_moment(2);
  for (int dim = 1; dim <= 3; ++dim) {
    const auto [c0, c2] = kernel_moments(KernelKind::Gaussian, dim);
    CHECK(c0 == doctest::Approx(std::pow(i0, dim)).epsilon(1e-10));
    CHECK(c2 == doctest::Approx(i2 * std::pow(i0, dim - 1)).epsilon(1e-10));
    CHECK(2.0 * c0 / c2 == doctest::Approx(4.0).epsilon(1e-12));  // n-independent
  }
}

TEST_CASE("kernel matrix on coincident and near pairs") {
  PointCloud pair = line_cloud_1d({0.5, 0.5});
  KernelConfig config;
  config.epsilon = 0.25;
  config.intrinsic_dim = 1;
  const Eigen::MatrixXd kernel = build_kernel_matrix(pair, config);
  const double prefactor = std::pow(config.epsilon, -0.5);
  CHECK((kernel - prefactor * Eigen::MatrixXd::Ones(2, 2)).cwiseAbs().maxCoeff() == 0.0);

  // |x1 - x2|^2 = eps puts the off-diagonal at prefactor * e^{-1}
  PointCloud close = line_cloud_1d({0.0, 0.5});
  const Eigen::MatrixXd near_kernel = build_kernel_matrix(close, config);
  CHECK(near_kernel(0, 1) == doctest::Approx(prefactor * std::exp(-1.0)).epsilon(1e-15));

  config.epsilon = 0.0;
  CHECK_THROWS_AS(build_kernel_matrix(pair, config), InvalidArgument);
}

TEST_CASE("three collinear points match the reference evaluation") {
  const PointCloud cloud = line_cloud_1d({0.0, 1.0, 2.0});  // mutual distances 1, 1, 2
  KernelConfig config;
  config.epsilon = 1.0;
  config.intrinsic_dim = 1;
  config.truncation_radius = 10.0;  // keep every entry; reference has no cutoff

  const Eigen::MatrixXd kernel = build_kernel_matrix(cloud, config);
  const Eigen::MatrixXd expected = reference_kernel(cloud, 1.0, 1);
  CHECK((kernel - expected).cwiseAbs().maxCoeff() < 1e-14);

  const Eigen::VectorXd degrees = degree_vector(kernel);
  const Eigen::VectorXd expected_degrees = expected.rowwise().mean();
  CHECK((degrees - expected_degrees).cwiseAbs().maxCoeff() < 1e-14);

  SUBCASE("lambda renormalization against the same reference") {
    const auto [kernel_lambda, degrees_lambda] = lambda_renormalize(kernel, degrees, 1.0);
    Eigen::MatrixXd expected_lambda(3, 3);
    for (Index i = 0; i < 3; ++i) {
      for (Index j = 0; j < 3; ++j) {
        expected_lambda(i, j) = expected(i, j) / (expected_degrees(i) * expected_degrees(j));
      }
    }
    CHECK((kernel_lambda - expected_lambda).cwiseAbs().maxCoeff() < 1e-14);

    const Eigen::MatrixXd averaging = averaging_operator(kernel_lambda, degrees_lambda);
    CHECK((averaging.rowwise().sum() - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("lambda = 0 is the identity renormalization") {
    const auto [kernel0, degrees0] = lambda_renormalize(kernel, degrees, 0.0);
    CHECK(kernel0 == kernel);
    CHECK(degrees0 == degrees);
    CHECK_THROWS_AS(lambda_renormalize(kernel, degrees, -0.5), InvalidArgument);
  }
}

TEST_CASE("degree vector rejects an isolated row") {
  Eigen::MatrixXd kernel = Eigen::MatrixXd::Zero(3, 3);
  kernel(0, 0) = 1.0;
  kernel(1, 1) = 1.0;  // row 2 left fully zero
  CHECK_THROWS_AS(degree_vector(kernel), DegenerateGraph);
}

TEST_CASE("averaging operator special cases") {
  // coincident pair averages with equal weights at any lambda
  PointCloud pair = line_cloud_1d({1.0, 1.0});
  KernelConfig config;
  config.epsilon = 0.5;
  config.intrinsic_dim = 1;
  for (double lambda : {0.0, 0.5, 1.0}) {
    config.lambda = lambda;
    const GraphOperators ops = GraphOperators::build(pair, config);
    CHECK((ops.averaging - 0.5 * Eigen::MatrixXd::Ones(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  }

  // far-separated points with truncation self-average: A = I
  PointCloud apart = line_cloud_1d({0.0, 1000.0});
  config.lambda = 0.0;
  const GraphOperators ops = GraphOperators::build(apart, config);
  CHECK((ops.averaging - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("laplacian scale") {
  const auto [scale, c20] = graph_laplacian_scale(0.01, M_PI, M_PI / 2.0);
  CHECK(scale == doctest::Approx(400.0).epsilon(1e-13));
  CHECK(c20 == doctest::Approx(2.0).epsilon(1e-15));

  const auto unit = graph_laplacian_scale(1.0, M_PI, M_PI / 2.0);
  CHECK(unit.scale == doctest::Approx(4.0).epsilon(1e-15));

  // scale * eps / c20^2 == 1 for any eps
  for (double eps : {1e-4, 0.37, 2.0}) {
    const auto s = graph_laplacian_scale(eps, M_PI, M_PI / 2.0);
    CHECK(s.scale * eps / (s.c20 * s.c20) == doctest::Approx(1.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(graph_laplacian_scale(0.0, M_PI, M_PI / 2.0), InvalidArgument);
}

TEST_CASE("row stochasticity and spectral containment on random clouds") {
  Rng rng(31);
  for (int trial = 0; trial < 6; ++trial) {
    const Index n = 40 + static_cast<Index>(rng.uniform() * 80);
    const PointCloud cloud = trial % 2 ? sample_flat_torus(n, 100 + trial)
                                       : sample_sphere(n, SphereDensity::Uniform, 100 + trial);
    KernelConfig config;
    config.epsilon = 0.3;
    config.lambda = (trial % 3) * 0.5;
    config.intrinsic_dim = 2;
    const GraphOperators ops = GraphOperators::build(cloud, config);
    CHECK((ops.averaging.rowwise().sum() - Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(ops.averaging.minCoeff() >= 0.0);
    const SpectralDecomposition decomp = decompose(ops);
    CHECK(decomp.eigenvalues(0) <= 1.0 + 1e-8);
    CHECK(decomp.eigenvalues(n - 1) >= -1.0 - 1e-8);
  }
}

TEST_CASE("truncation changes the operator below 1e-9 at rtrunc=6") {
  const PointCloud cloud = sample_sphere(200, SphereDensity::Uniform, 41);
  KernelConfig truncated;
  truncated.epsilon = 0.05;
  truncated.lambda = 1.0;
  truncated.intrinsic_dim = 2;
  truncated.truncation_radius = 6.0;
  KernelConfig full = truncated;
  full.truncation_radius = 1e6;
  const GraphOperators a = GraphOperators::build(cloud, truncated);
  const GraphOperators b = GraphOperators::build(cloud, full);
  CHECK((a.averaging - b.averaging).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("duplication and permutation consistency") {
  const std::vector<double> base_xs = {0.0, 0.4, 1.1, 1.7};
  PointCloud base = line_cloud_1d(base_xs);
  KernelConfig config;
  config.epsilon = 0.2;
  config.lambda = 1.0;
  config.intrinsic_dim = 1;

  // duplicate the second point
  std::vector<double> dup_xs = base_xs;
  dup_xs.push_back(base_xs[1]);
  PointCloud duplicated = line_cloud_1d(dup_xs);

  const GraphOperators ops = GraphOperators::build(duplicated, config);
  Eigen::VectorXd f(5);
  f << 0.3, -1.2, 0.7, 2.0, -1.2;  // constant on the duplicate pair {1, 4}

  const Eigen::VectorXd image = ops.averaging * f;
  // copies have identical rows, so the image is constant on the pair
  CHECK(image(1) == doctest::Approx(image(4)).epsilon(1e-15));

  // permutation consistency: relabeling samples permutes the action exactly
  std::vector<Index> perm = {3, 0, 4, 1, 2};
  PointCloud permuted = duplicated;
  Eigen::VectorXd f_perm(5);
  for (Index i = 0; i < 5; ++i) {
    permuted.points.row(i) = duplicated.points.row(perm[i]);
    f_perm(i) = f(perm[i]);
  }
  const GraphOperators ops_perm = GraphOperators::build(permuted, config);
  const Eigen::VectorXd image_perm = ops_perm.averaging * f_perm;
  for (Index i = 0; i < 5; ++i) {
    CHECK(image_perm(i) == doctest::Approx(image(perm[i])).epsilon(1e-14));
  }

  // In the diagonal-dominant limit the duplicate collapses: lambda = 1
  // kernels see the doubled local mass through the degree and cancel it to
  // leading order. Tolerance scales with the off-diagonal mass.
  KernelConfig tight = config;
  tight.epsilon = 0.01;
  const GraphOperators small_ops = GraphOperators::build(base, tight);
  const GraphOperators small_dup = GraphOperators::build(duplicated, tight);
  Eigen::VectorXd g(4);
  g << 0.3, -1.2, 0.7, 2.0;
  const Eigen::VectorXd expect = small_ops.averaging * g;
  const Eigen::VectorXd got = small_dup.averaging * f;
  const double off_mass = 1.0 - small_ops.averaging.diagonal().minCoeff();
  for (Index i = 0; i < 4; ++i) {
    CHECK(std::abs(got(i) - expect(i)) <= 2.0 * off_mass + 1e-14);
  }
}

TEST_CASE("operator bundle round trip") {
  const PointCloud cloud = sample_sphere(40, SphereDensity::Uniform, 51);
  KernelConfig config;
  config.epsilon = 0.2;
  config.lambda = 0.5;
  config.intrinsic_dim = 2;
  const GraphOperators ops = GraphOperators::build(cloud, config);

  const auto path = std::filesystem::temp_directory_path() / "geowave_test_ops.bin";
  ops.save(path);
  const GraphOperators loaded = GraphOperators::load(path);
  CHECK(loaded.epsilon == ops.epsilon);
  CHECK(loaded.lambda == ops.lambda);
  CHECK((loaded.averaging - ops.averaging).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.kernel - ops.kernel).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.p_lambda - ops.p_lambda).cwiseAbs().maxCoeff() == 0.0);

  ops.save(path, /*include_kernel=*/false);
  const GraphOperators slim = GraphOperators::load(path);
  CHECK(slim.kernel.size() == 0);
  CHECK((slim.averaging - ops.averaging).cwiseAbs().maxCoeff() == 0.0);
  std::filesystem::remove(path);
}
