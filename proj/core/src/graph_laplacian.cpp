#include "geowave/graph_laplacian.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "geowave/errors.hpp"

namespace geowave {

void KernelConfig::validate() const {
  if (epsilon <= 0.0) {
    throw InvalidArgument("kernel epsilon must be > 0");
  }
  if (lambda < 0.0) {
    throw InvalidArgument("kernel lambda must be >= 0");
  }
  if (truncation_radius < 3.0) {
    throw InvalidArgument("truncation radius must be >= 3 (in units of sqrt(eps))");
  }
  if (intrinsic_dim < 1) {
    throw InvalidArgument("intrinsic_dim must be >= 1");
  }
}

KernelMoments kernel_moments(KernelKind kind, int intrinsic_dim) {
  if (intrinsic_dim < 1) {
    throw InvalidArgument("intrinsic_dim must be >= 1");
  }
  switch (kind) {
    case KernelKind::Gaussian: {
      const double c0 = std::pow(M_PI, 0.5 * intrinsic_dim);
      return {c0, 0.5 * c0};
    }
  }
  throw InvalidArgument("unknown kernel kind");
}

Eigen::MatrixXd build_kernel_matrix(const PointCloud& cloud, const KernelConfig& config) {
  config.validate();
  if (config.intrinsic_dim != cloud.intrinsic_dim) {
    throw InvalidArgument("kernel intrinsic_dim does not match the cloud");
  }
  const Index n = cloud.size();
  const double eps = config.epsilon;
  const double prefactor = std::pow(eps, -0.5 * config.intrinsic_dim);
  const double cut2 = config.truncation_radius * config.truncation_radius * eps;

  Eigen::MatrixXd kernel(n, n);
  for (Index i = 0; i < n; ++i) {
    kernel(i, i) = prefactor;
    for (Index j = i + 1; j < n; ++j) {
      const double d2 = (cloud.points.row(i) - cloud.points.row(j)).squaredNorm();
      const double value = d2 > cut2 ? 0.0 : prefactor * std::exp(-d2 / eps);
      kernel(i, j) = value;
      kernel(j, i) = value;
    }
  }
  return kernel;
}

Eigen::VectorXd degree_vector(const Eigen::MatrixXd& kernel) {
  const Index n = kernel.rows();
  Eigen::VectorXd degrees = kernel.rowwise().sum() / static_cast<double>(n);
  for (Index i = 0; i < n; ++i) {
    if (!(degrees(i) > 0.0)) {
      std::ostringstream msg;
      msg << "degenerate graph: row " << i << " has zero kernel mass (epsilon too small)";
      throw DegenerateGraph(msg.str());
    }
  }
  return degrees;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> lambda_renormalize(const Eigen::MatrixXd& kernel,
                                                               const Eigen::VectorXd& degrees,
                                                               double lambda) {
  if (lambda < 0.0) {
    throw InvalidArgument("lambda must be >= 0");
  }
  if ((degrees.array() <= 0.0).any()) {
    throw InvalidArgument("degrees must be strictly positive");
  }
  if (lambda == 0.0) {
    return {kernel, degrees};
  }
  const Eigen::VectorXd weights = degrees.array().pow(-lambda).matrix();
  Eigen::MatrixXd renormalized = weights.asDiagonal() * kernel * weights.asDiagonal();
  Eigen::VectorXd degrees_lambda =
      renormalized.rowwise().sum() / static_cast<double>(kernel.rows());
  return {std::move(renormalized), std::move(degrees_lambda)};
}

Eigen::MatrixXd averaging_operator(const Eigen::MatrixXd& kernel_lambda,
                                   const Eigen::VectorXd& degrees_lambda) {
  if ((degrees_lambda.array() <= 0.0).any()) {
    throw InvalidArgument("degrees must be strictly positive");
  }
  const double inv_n = 1.0 / static_cast<double>(kernel_lambda.rows());
  return degrees_lambda.cwiseInverse().asDiagonal() * kernel_lambda * inv_n;
}

LaplacianScale graph_laplacian_scale(double epsilon, double c0, double c2) {
  if (epsilon <= 0.0) {
    throw InvalidArgument("epsilon must be > 0");
  }
  const double ratio = 2.0 * c0 / c2;
  return {ratio / epsilon, std::sqrt(ratio)};
}

double GraphOperators::c20() const { return std::sqrt(2.0 * c0 / c2); }

GraphOperators GraphOperators::build(const PointCloud& cloud, const KernelConfig& config) {
  cloud.validate();
  GraphOperators ops;
  ops.kernel = build_kernel_matrix(cloud, config);
  ops.p_eps = degree_vector(ops.kernel);
  auto [kernel_lambda, p_lambda] = lambda_renormalize(ops.kernel, ops.p_eps, config.lambda);
  ops.p_lambda = std::move(p_lambda);
  ops.averaging = averaging_operator(kernel_lambda, ops.p_lambda);
  const KernelMoments moments = kernel_moments(config.kind, config.intrinsic_dim);
  ops.c0 = moments.c0;
  ops.c2 = moments.c2;
  ops.epsilon = config.epsilon;
  ops.lambda = config.lambda;
  ops.truncation_radius = config.truncation_radius;
  ops.intrinsic_dim = config.intrinsic_dim;
  return ops;
}

namespace {

constexpr char kOpsMagic[8] = {'G', 'W', 'G', 'O', 'P', 'S', '0', '1'};

void write_bytes(std::ofstream& out, const void* data, std::size_t bytes) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(bytes));
}

void read_bytes(std::ifstream& in, void* data, std::size_t bytes, const char* what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(bytes));
  if (!in) {
    throw IoError(std::string("operator bundle truncated while reading ") + what);
  }
}

void write_matrix(std::ofstream& out, const Eigen::MatrixXd& m) {
  const std::uint64_t rows = static_cast<std::uint64_t>(m.rows());
  const std::uint64_t cols = static_cast<std::uint64_t>(m.cols());
  write_bytes(out, &rows, sizeof rows);
  write_bytes(out, &cols, sizeof cols);
  write_bytes(out, m.data(), sizeof(double) * m.size());
}

Eigen::MatrixXd read_matrix(std::ifstream& in, const char* what) {
  std::uint64_t rows = 0, cols = 0;
  read_bytes(in, &rows, sizeof rows, what);
  read_bytes(in, &cols, sizeof cols, what);
  Eigen::MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
  read_bytes(in, m.data(), sizeof(double) * m.size(), what);
  return m;
}

}  // namespace

void GraphOperators::save(const std::filesystem::path& path, bool include_kernel) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write '" + path.string() + "'");
  }
  write_bytes(out, kOpsMagic, sizeof kOpsMagic);
  const std::uint32_t has_kernel = include_kernel ? 1 : 0;
  const std::uint32_t dim = static_cast<std::uint32_t>(intrinsic_dim);
  write_bytes(out, &has_kernel, sizeof has_kernel);
  write_bytes(out, &dim, sizeof dim);
  const double scalars[5] = {c0, c2, epsilon, lambda, truncation_radius};
  write_bytes(out, scalars, sizeof scalars);
  write_matrix(out, averaging);
  write_matrix(out, p_eps);
  write_matrix(out, p_lambda);
  if (include_kernel) {
    write_matrix(out, kernel);
  }
}

GraphOperators GraphOperators::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  char magic[sizeof kOpsMagic];
  read_bytes(in, magic, sizeof magic, "magic");
  if (std::memcmp(magic, kOpsMagic, sizeof magic) != 0) {
    throw IoError(path.string() + ": not a geowave operator bundle (bad magic/version)");
  }
  std::uint32_t has_kernel = 0, dim = 0;
  read_bytes(in, &has_kernel, sizeof has_kernel, "flags");
  read_bytes(in, &dim, sizeof dim, "intrinsic_dim");
  double scalars[5];
  read_bytes(in, scalars, sizeof scalars, "scalars");
  GraphOperators ops;
  ops.intrinsic_dim = static_cast<int>(dim);
  ops.c0 = scalars[0];
  ops.c2 = scalars[1];
  ops.epsilon = scalars[2];
  ops.lambda = scalars[3];
  ops.truncation_radius = scalars[4];
  ops.averaging = read_matrix(in, "averaging");
  ops.p_eps = read_matrix(in, "p_eps");
  ops.p_lambda = read_matrix(in, "p_lambda");
  if (has_kernel) {
    ops.kernel = read_matrix(in, "kernel");
  }
  return ops;
}

}  // namespace geowave
