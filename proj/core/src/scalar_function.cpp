#include "geowave/scalar_function.hpp"

#include <cmath>
#include <sstream>

#include "geowave/errors.hpp"

namespace geowave {

namespace {

constexpr double kClampTol = 1e-10;
constexpr double kDerivedCutoff = 1e-12;

using cx = std::complex<double>;

// x = 1 + shift - mu, clamped at the top of the spectrum.
double shifted_argument(double mu, double shift) {
  const double x = 1.0 + shift - mu;
  if (x < -kClampTol) {
    std::ostringstream msg;
    msg << "eigenvalue " << mu << " exceeds 1 + shift (shift=" << shift << ") beyond tolerance";
    throw SpectrumViolation(msg.str());
  }
  return x < 0.0 ? 0.0 : x;
}

void require_positive(double epsilon) {
  if (epsilon <= 0.0) throw InvalidArgument("epsilon must be > 0");
}

void require_shift(double shift) {
  if (shift < 0.0) throw InvalidArgument("spectral shift must be >= 0");
}

}  // namespace

ScalarFunction ScalarFunction::propagator(double t, double epsilon, double shift, double c20) {
  require_positive(epsilon);
  require_shift(shift);
  ScalarFunction f;
  f.kind = Kind::Propagator;
  f.t = t;
  f.epsilon = epsilon;
  f.shift = shift;
  f.c20 = c20;
  const double a = t * c20 / std::sqrt(epsilon);
  f.eval = [a, shift](double mu) -> cx {
    const double root = std::sqrt(shifted_argument(mu, shift));
    return std::exp(cx(0.0, a * root));
  };
  const double root0 = std::sqrt(1.0 + shift);
  f.f0 = std::exp(cx(0.0, a * root0));
  f.df0 = f.f0 * cx(0.0, -a / (2.0 * root0));
  return f;
}

ScalarFunction ScalarFunction::wave_cos(double t, double epsilon, double shift, double c20) {
  require_positive(epsilon);
  require_shift(shift);
  ScalarFunction f;
  f.kind = Kind::WaveCos;
  f.t = t;
  f.epsilon = epsilon;
  f.shift = shift;
  f.c20 = c20;
  const double a = t * c20 / std::sqrt(epsilon);
  f.eval = [a, shift](double mu) -> cx {
    return std::cos(a * std::sqrt(shifted_argument(mu, shift)));
  };
  const double root0 = std::sqrt(1.0 + shift);
  f.f0 = std::cos(a * root0);
  f.df0 = a * std::sin(a * root0) / (2.0 * root0);
  return f;
}

ScalarFunction ScalarFunction::wave_sin_kernel(double t, double epsilon, double shift,
                                               double c20) {
  require_positive(epsilon);
  require_shift(shift);
  ScalarFunction f;
  f.kind = Kind::WaveSinKernel;
  f.t = t;
  f.epsilon = epsilon;
  f.shift = shift;
  f.c20 = c20;
  const double a = t * c20 / std::sqrt(epsilon);
  f.eval = [a, shift](double mu) -> cx {
    const double x = shifted_argument(mu, shift);
    if (x < 1e-30) return cx(a, 0.0);  // sin(a sqrt(x))/sqrt(x) -> a
    const double root = std::sqrt(x);
    return std::sin(a * root) / root;
  };
  const double x0 = 1.0 + shift;
  const double root0 = std::sqrt(x0);
  f.f0 = std::sin(a * root0) / root0;
  // -d/dx [sin(a sqrt(x))/sqrt(x)] at x = 1+shift
  f.df0 = -(a * root0 * std::cos(a * root0) - std::sin(a * root0)) / (2.0 * x0 * root0);
  return f;
}

ScalarFunction ScalarFunction::shifted_sqrt(double shift) {
  require_shift(shift);
  ScalarFunction f;
  f.kind = Kind::SqrtShifted;
  f.shift = shift;
  f.eval = [shift](double mu) -> cx { return std::sqrt(shifted_argument(mu, shift)); };
  const double root0 = std::sqrt(1.0 + shift);
  f.f0 = root0;
  f.df0 = -0.5 / root0;
  return f;
}

ScalarFunction ScalarFunction::identity() {
  ScalarFunction f;
  f.kind = Kind::Custom;
  f.eval = [](double mu) -> cx { return mu; };
  f.f0 = 0.0;
  f.df0 = 1.0;
  return f;
}

ScalarFunction ScalarFunction::custom(std::function<cx(double)> eval, cx f0, cx df0) {
  ScalarFunction f;
  f.kind = Kind::Custom;
  f.eval = std::move(eval);
  f.f0 = f0;
  f.df0 = df0;
  return f;
}

ScalarFunction ScalarFunction::derived() const {
  ScalarFunction g = *this;
  g.kind = Kind::Custom;
  const auto base = eval;
  const cx base_f0 = f0;
  const cx base_df0 = df0;
  g.eval = [base, base_f0, base_df0](double mu) -> cx {
    if (std::abs(mu) < kDerivedCutoff) return base_df0;
    return (base(mu) - base_f0) / mu;
  };
  g.f0 = base_df0;
  // second derivative is not tracked; the derived function is never derived again
  g.df0 = cx(0.0, 0.0);
  return g;
}

std::string to_string(ScalarFunction::Kind kind) {
  switch (kind) {
    case ScalarFunction::Kind::WaveCos:
      return "wave_cos";
    case ScalarFunction::Kind::WaveSinKernel:
      return "wave_sin_kernel";
    case ScalarFunction::Kind::SqrtShifted:
      return "sqrt_shifted";
    case ScalarFunction::Kind::Propagator:
      return "propagator";
    case ScalarFunction::Kind::Custom:
      return "custom";
  }
  return "custom";
}

}  // namespace geowave
