#pragma once

#include <complex>
#include <functional>
#include <string>

namespace geowave {

// A scalar function applied to the averaging operator's spectrum.
//
// Spectral arguments live on [-1, 1+shift]; the built-in kinds all factor
// through x := 1 + shift - mu. Values of x in [-1e-10, 0) are clamped to 0
// (floating-point spillover past the top eigenvalue); anything below raises
// SpectrumViolation.
struct ScalarFunction {
  enum class Kind { WaveCos, WaveSinKernel, SqrtShifted, Propagator, Custom };

  Kind kind = Kind::Custom;
  double t = 0.0;
  double epsilon = 1.0;
  double shift = 0.0;  // spectral perturbation, >= 0
  double c20 = 2.0;    // sqrt(2 c0 / c2)

  std::function<std::complex<double>(double)> eval;
  std::complex<double> f0;   // value at mu = 0
  std::complex<double> df0;  // derivative at mu = 0, the Df(0) limit

  std::complex<double> operator()(double mu) const { return eval(mu); }

  // exp(i t c20 sqrt((1 + shift - mu)/eps)) -- the half-wave propagator.
  static ScalarFunction propagator(double t, double epsilon, double shift, double c20);

  // cos(c20 t sqrt((1 + shift - mu)/eps))
  static ScalarFunction wave_cos(double t, double epsilon, double shift, double c20);

  // sin(c20 t sqrt((1 + shift - mu)/eps)) / sqrt(1 + shift - mu)
  static ScalarFunction wave_sin_kernel(double t, double epsilon, double shift, double c20);

  // sqrt(1 + shift - mu)
  static ScalarFunction shifted_sqrt(double shift);

  // f(mu) = mu
  static ScalarFunction identity();

  static ScalarFunction custom(std::function<std::complex<double>(double)> eval,
                               std::complex<double> f0, std::complex<double> df0);

  // (f(mu) - f(0))/mu, with the analytic limit df0 used for |mu| < 1e-12.
  ScalarFunction derived() const;
};

std::string to_string(ScalarFunction::Kind kind);

}  // namespace geowave
