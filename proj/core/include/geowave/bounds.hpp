#pragma once

#include <string>

namespace geowave {

// Dominant closed-form Bernstein-type exponential bounds for the three
// consistency regimes. These are asymptotic statements: at desk scale the
// exponents are tiny and the bounds evaluate to essentially 1.
enum class BoundKind { Halfwave, Mean, Max };

std::string to_string(BoundKind kind);
BoundKind bound_kind_from_string(const std::string& name);

struct BoundParams {
  double n_samples = 0.0;  // N
  double dim = 0.0;        // intrinsic dimension n
  double epsilon = 0.0;
  double delta = 0.0;      // sup-norm error level (halfwave)
  double t = 0.0;          // propagation time (halfwave)
  double k_u = 1.0;        // sup bound on the propagated function (halfwave)
  double h = 0.0;          // semiclassical parameter (mean/max)
  double constant = 1.0;   // the unspecified constant C, user configurable
};

// Halfwave: exp(-N delta^4 eps^{(5/2)n+4} / (C K_u^2 |t|^8))
// Mean:     exp(-N h^{2(n+2)}  eps^{(5/2)n+4} / C)
// Max:      exp(-N h^{2n}      eps^{(5/2)n+4} / C)
// Clamped to <= 1.
double bernstein_bound(BoundKind kind, const BoundParams& params);

}  // namespace geowave
