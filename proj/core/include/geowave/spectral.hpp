#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <utility>

#include "geowave/graph_laplacian.hpp"
#include "geowave/scalar_function.hpp"

namespace geowave {

// Full eigendecomposition of the symmetrized averaging matrix A_s, plus the
// conjugation weight d = sqrt(p_lambda) that carries functions of A_s back to
// functions of A.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // descending
  Eigen::MatrixXd eigenvectors;  // orthonormal columns of A_s
  Eigen::VectorXd weight;        // d = sqrt(p_lambda)
  double residual = 0.0;         // max_j |A_s v_j - mu_j v_j|_inf over checked columns

  Index size() const { return eigenvalues.size(); }

  void save(const std::filesystem::path& path) const;
  static SpectralDecomposition load(const std::filesystem::path& path);
};

// A_s = diag(d) A diag(1/d) with d = sqrt(p_lambda). Asymmetry beyond 1e-12
// signals broken kernel symmetry upstream (NumericalConsistency); the result
// is exactly symmetrized before use.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> symmetrize(const Eigen::MatrixXd& averaging,
                                                       const Eigen::VectorXd& p_lambda);

// Dense symmetric eigendecomposition (LAPACK dsyevd when available).
// The residual is verified exactly for small problems and on a fixed column
// sample for large ones; failures raise EigensolverError.
SpectralDecomposition eig_sym(Eigen::MatrixXd a_sym, Eigen::VectorXd weight);

// symmetrize + eig_sym + spectral-range sanity checks for a built operator.
SpectralDecomposition decompose(const GraphOperators& ops);

// diag(1/d) V f(diag(mu)) V^T diag(d) u. Non-finite f(mu_j) raises
// FunctionDomain naming the eigenvalue.
Eigen::VectorXcd apply_function(const SpectralDecomposition& decomp, const ScalarFunction& f,
                                const Eigen::VectorXcd& u);

// B^(shift) u = sqrt((1+shift) I - A) u.
Eigen::VectorXcd sqrt_shifted(const SpectralDecomposition& decomp, double shift,
                              const Eigen::VectorXcd& u);

// U^t u = exp(i t c20 sqrt(((1+shift) I - A)/eps)) u. t = 0 returns u
// unchanged (the identity holds exactly at spectral level).
Eigen::VectorXcd wave_propagate(const SpectralDecomposition& decomp, double t, double epsilon,
                                double shift, double c20, const Eigen::VectorXcd& u);

}  // namespace geowave
