#pragma once

#include <Eigen/Dense>
#include <complex>

#include "geowave/graph_laplacian.hpp"
#include "geowave/point_cloud.hpp"
#include "geowave/scalar_function.hpp"
#include "geowave/spectral.hpp"

namespace geowave {

// Off-sample evaluation of f(A)[u] at an ambient point x assumed to lie on
// the same manifold:
//
//   f(A)[u](x) = f(0) u(x) + (A-extension row at x) . Df(A)[u]
//
// with Df(z) = (f(z) - f(0))/z. The extension row reproduces the kernel,
// degree, and lambda renormalization of the in-sample construction, so the
// formula is exact (up to roundoff) when x coincides with a sample point.
// u_at_x must be supplied by the caller (for coherent states it is the
// closed-form amplitude at x). Zero kernel mass at x raises
// DegenerateExtension.
std::complex<double> nystrom_extend(const PointCloud& cloud, const GraphOperators& ops,
                                    const SpectralDecomposition& decomp, const ScalarFunction& f,
                                    const Eigen::VectorXcd& u_on_samples,
                                    std::complex<double> u_at_x, const Eigen::VectorXd& x);

// The same extension against a precomputed w = Df(A)[u]; useful when the same
// spectral application feeds many evaluation points.
std::complex<double> nystrom_extend_prepared(const PointCloud& cloud, const GraphOperators& ops,
                                             const Eigen::VectorXcd& derived_applied,
                                             std::complex<double> f0,
                                             std::complex<double> u_at_x,
                                             const Eigen::VectorXd& x);

}  // namespace geowave
