#pragma once

#include <Eigen/Dense>

#include "geowave/point_cloud.hpp"
#include "geowave/scalar_function.hpp"

namespace geowave {

// Chebyshev fast path: f(A) u without an eigendecomposition, for f analytic
// on a neighbourhood of [-1, 1]. Propagator and shifted-sqrt kinds require
// shift > 0 (the branch point must sit off the spectrum); the wave_cos and
// wave_sin_kernel kinds are entire and accepted at any shift.

struct ChebyshevResult {
  Eigen::VectorXcd values;
  double coeff_decay = 0.0;  // |c_K| / max_k |c_k|
};

// Coefficients of the degree-K expansion on [-1,1], computed by discrete
// cosine evaluation at the K+1 Chebyshev nodes.
Eigen::VectorXcd chebyshev_coefficients(const ScalarFunction& f, int degree);

// Smallest degree (doubling search, scalar work only) whose trailing
// coefficient has decayed below `tol` relative to the largest one.
int chebyshev_degree_for(const ScalarFunction& f, double tol = 1e-10, int max_degree = 8192);

// Evaluate sum_k c_k T_k against the symmetrized operator via the three-term
// recurrence; conjugation by the weight vector carries the result back to
// functions of the row-stochastic A.
ChebyshevResult chebyshev_apply(const Eigen::MatrixXd& averaging, const Eigen::VectorXd& weight,
                                const ScalarFunction& f, const Eigen::VectorXcd& u, int degree);

}  // namespace geowave
