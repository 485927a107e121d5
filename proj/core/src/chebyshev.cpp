#include "geowave/chebyshev.hpp"

#include <cmath>

#include "geowave/errors.hpp"

namespace geowave {

namespace {

void check_analytic(const ScalarFunction& f) {
  const bool branched = f.kind == ScalarFunction::Kind::Propagator ||
                        f.kind == ScalarFunction::Kind::SqrtShifted;
  if (branched && f.shift <= 0.0) {
    throw InvalidArgument(
        "chebyshev path rejected: kind '" + to_string(f.kind) +
        "' with shift 0 has its square-root branch point on the spectrum");
  }
}

}  // namespace

Eigen::VectorXcd chebyshev_coefficients(const ScalarFunction& f, int degree) {
  if (degree < 1) {
    throw InvalidArgument("chebyshev degree must be >= 1");
  }
  check_analytic(f);
  const int m = degree + 1;  // Chebyshev-Gauss nodes
  Eigen::VectorXcd samples(m);
  for (int j = 0; j < m; ++j) {
    const double theta = M_PI * (j + 0.5) / m;
    samples(j) = f(std::cos(theta));
  }
  Eigen::VectorXcd coeffs(m);
  for (int k = 0; k < m; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (int j = 0; j < m; ++j) {
      acc += samples(j) * std::cos(k * M_PI * (j + 0.5) / m);
    }
    coeffs(k) = acc * ((k == 0 ? 1.0 : 2.0) / m);
  }
  return coeffs;
}

int chebyshev_degree_for(const ScalarFunction& f, double tol, int max_degree) {
  check_analytic(f);
  for (int degree = 32; degree <= max_degree; degree *= 2) {
    const Eigen::VectorXcd coeffs = chebyshev_coefficients(f, degree);
    const double top = coeffs.cwiseAbs().maxCoeff();
    // guard against an accidentally small trailing coefficient
    const double tail = coeffs.tail(3).cwiseAbs().maxCoeff();
    if (top > 0.0 && tail / top < tol) {
      return degree;
    }
  }
  return max_degree;
}

ChebyshevResult chebyshev_apply(const Eigen::MatrixXd& averaging, const Eigen::VectorXd& weight,
                                const ScalarFunction& f, const Eigen::VectorXcd& u, int degree) {
  const Index n = averaging.rows();
  if (averaging.cols() != n || weight.size() != n || u.size() != n) {
    throw InvalidArgument("chebyshev_apply: dimension mismatch");
  }
  const Eigen::VectorXcd coeffs = chebyshev_coefficients(f, degree);

  const Eigen::MatrixXd a_sym =
      weight.asDiagonal() * averaging * weight.cwiseInverse().asDiagonal();

  // T_k recurrence runs on the real and imaginary parts separately.
  Eigen::VectorXd prev_re = weight.cwiseProduct(u.real());
  Eigen::VectorXd prev_im = weight.cwiseProduct(u.imag());
  Eigen::VectorXd curr_re = a_sym * prev_re;
  Eigen::VectorXd curr_im = a_sym * prev_im;

  Eigen::VectorXd acc_re(n), acc_im(n);
  auto accumulate = [&](const std::complex<double>& c, const Eigen::VectorXd& t_re,
                        const Eigen::VectorXd& t_im) {
    acc_re += c.real() * t_re - c.imag() * t_im;
    acc_im += c.real() * t_im + c.imag() * t_re;
  };
  acc_re.setZero();
  acc_im.setZero();
  accumulate(coeffs(0), prev_re, prev_im);
  if (degree >= 1) accumulate(coeffs(1), curr_re, curr_im);

  for (int k = 2; k <= degree; ++k) {
    Eigen::VectorXd next_re = 2.0 * (a_sym * curr_re) - prev_re;
    Eigen::VectorXd next_im = 2.0 * (a_sym * curr_im) - prev_im;
    prev_re.swap(curr_re);
    prev_im.swap(curr_im);
    curr_re.swap(next_re);
    curr_im.swap(next_im);
    accumulate(coeffs(k), curr_re, curr_im);
  }

  ChebyshevResult result;
  result.values.resize(n);
  result.values.real() = acc_re.cwiseQuotient(weight);
  result.values.imag() = acc_im.cwiseQuotient(weight);
  const double top = coeffs.cwiseAbs().maxCoeff();
  result.coeff_decay = top > 0.0 ? std::abs(coeffs(degree)) / top : 0.0;
  return result;
}

}  // namespace geowave
