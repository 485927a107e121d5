#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <utility>

#include "geowave/point_cloud.hpp"

namespace geowave {

enum class KernelKind { Gaussian };

struct KernelConfig {
  KernelKind kind = KernelKind::Gaussian;
  double epsilon = 0.01;  // bandwidth^2 scale
  double lambda = 0.0;    // degree-renormalization exponent
  int intrinsic_dim = 2;
  // Entries with |X_i - X_j|^2 / epsilon > truncation_radius^2 are dropped;
  // the diagonal is always kept.
  double truncation_radius = 6.0;

  void validate() const;
};

// Zeroth and second moments of k(|z|^2) over R^n. For the Gaussian kernel
// k(t) = exp(-t): c0 = pi^{n/2}, c2 = pi^{n/2}/2.
struct KernelMoments {
  double c0 = 0.0;
  double c2 = 0.0;
};

KernelMoments kernel_moments(KernelKind kind, int intrinsic_dim);

// K_ij = eps^{-n/2} k(|X_i - X_j|^2 / eps), truncated as configured.
Eigen::MatrixXd build_kernel_matrix(const PointCloud& cloud, const KernelConfig& config);

// p_j = (1/N) sum_m K_jm. A zero row (isolated point at this bandwidth) is a
// DegenerateGraph error.
Eigen::VectorXd degree_vector(const Eigen::MatrixXd& kernel);

// K_lambda_jm = K_jm / (p_j p_m)^lambda, plus its own degree vector.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> lambda_renormalize(const Eigen::MatrixXd& kernel,
                                                               const Eigen::VectorXd& degrees,
                                                               double lambda);

// Row-stochastic averaging matrix A_jm = (1/N) K_lambda_jm / p_lambda_j.
Eigen::MatrixXd averaging_operator(const Eigen::MatrixXd& kernel_lambda,
                                   const Eigen::VectorXd& degrees_lambda);

// The graph Laplacian (2c0/c2)(I - A)/eps is never materialized; it is carried
// as this scale against A. c20 = sqrt(2c0/c2) is the wave speed constant.
struct LaplacianScale {
  double scale = 0.0;
  double c20 = 0.0;
};

LaplacianScale graph_laplacian_scale(double epsilon, double c0, double c2);

// Everything the spectral stages need from one kernel assembly.
struct GraphOperators {
  Eigen::MatrixXd kernel;     // K (before lambda renormalization)
  Eigen::VectorXd p_eps;      // degrees of K
  Eigen::VectorXd p_lambda;   // degrees of K_lambda
  Eigen::MatrixXd averaging;  // A, row-stochastic
  double c0 = 0.0;
  double c2 = 0.0;
  double epsilon = 0.0;
  double lambda = 0.0;
  double truncation_radius = 6.0;
  int intrinsic_dim = 0;

  Index size() const { return averaging.rows(); }
  double c20() const;

  static GraphOperators build(const PointCloud& cloud, const KernelConfig& config);

  // Binary bundle (versioned); the kernel block is optional so large runs can
  // persist just A and the degree vectors.
  void save(const std::filesystem::path& path, bool include_kernel = true) const;
  static GraphOperators load(const std::filesystem::path& path);
};

}  // namespace geowave
