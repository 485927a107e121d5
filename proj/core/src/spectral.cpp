#include "geowave/spectral.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "geowave/errors.hpp"

#include <Eigen/Eigenvalues>

#if defined(GEOWAVE_HAVE_LAPACKE)
#include <lapacke.h>

#include <atomic>
#include <iostream>
#endif

namespace geowave {

namespace {

constexpr double kSymTol = 1e-12;
constexpr double kResidualTol = 1e-8;
constexpr double kSpectrumTol = 1e-8;

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::VectorXd> symmetrize(const Eigen::MatrixXd& averaging,
                                                       const Eigen::VectorXd& p_lambda) {
  if ((p_lambda.array() <= 0.0).any()) {
    throw InvalidArgument("p_lambda must be strictly positive");
  }
  Eigen::VectorXd weight = p_lambda.array().sqrt().matrix();
  Eigen::MatrixXd a_sym =
      weight.asDiagonal() * averaging * weight.cwiseInverse().asDiagonal();
  const double asym = (a_sym - a_sym.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymTol) {
    std::ostringstream msg;
    msg << "conjugated averaging matrix asymmetric by " << asym
        << " (kernel symmetry broken upstream)";
    throw NumericalConsistency(msg.str());
  }
  a_sym = 0.5 * (a_sym + a_sym.transpose()).eval();
  return {std::move(a_sym), std::move(weight)};
}

namespace {

// ||A_s v - mu v||_inf via Eigen kernels (independent of the LAPACK path it
// checks): exact for small problems, a fixed column sample (extremes plus
// strided interior) for large ones.
double eig_residual(const Eigen::MatrixXd& original, const Eigen::MatrixXd& vectors,
                    const Eigen::VectorXd& eigenvalues) {
  const Index n = original.rows();
  if (n <= 1024) {
    return (original * vectors - vectors * eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
  }
  double residual = 0.0;
  const Index stride = std::max<Index>(1, n / 14);
  std::vector<Index> columns;
  for (Index j = 0; j < n; j += stride) columns.push_back(j);
  columns.push_back(n - 1);
  for (Index j : columns) {
    const Eigen::VectorXd r = original * vectors.col(j) - eigenvalues(j) * vectors.col(j);
    residual = std::max(residual, r.cwiseAbs().maxCoeff());
  }
  return residual;
}

// ascending eigenpairs
void solve_eigen(const Eigen::MatrixXd& a_sym, Eigen::VectorXd& eigenvalues,
                 Eigen::MatrixXd& vectors) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a_sym);
  if (solver.info() != Eigen::Success) {
    throw EigensolverError("SelfAdjointEigenSolver failed to converge");
  }
  eigenvalues = solver.eigenvalues();
  vectors = solver.eigenvectors();
}

#if defined(GEOWAVE_HAVE_LAPACKE)
// Some BLAS builds mis-detect the CPU (virtualized hosts especially) and
// return garbage eigenvectors with info=0. The residual check below catches
// that; once seen, the process sticks to the Eigen solver.
std::atomic<bool> lapacke_trusted{true};

bool solve_lapacke(Eigen::MatrixXd a_sym, Eigen::VectorXd& eigenvalues,
                   Eigen::MatrixXd& vectors) {
  const Index n = a_sym.rows();
  eigenvalues.resize(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n), a_sym.data(),
                     static_cast<lapack_int>(n), eigenvalues.data());
  if (info != 0) return false;
  vectors = std::move(a_sym);
  return true;
}
#endif

}  // namespace

SpectralDecomposition eig_sym(Eigen::MatrixXd a_sym, Eigen::VectorXd weight) {
  const Index n = a_sym.rows();
  if (n == 0 || a_sym.cols() != n) {
    throw InvalidArgument("eig_sym needs a square nonempty matrix");
  }
  if (weight.size() != n) {
    throw InvalidArgument("weight length does not match the matrix");
  }

  SpectralDecomposition decomp;
  decomp.weight = std::move(weight);

  const Eigen::MatrixXd& original = a_sym;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;
  double residual = 0.0;
  const double tolerance = kResidualTol;

  bool solved = false;
#if defined(GEOWAVE_HAVE_LAPACKE)
  if (lapacke_trusted.load(std::memory_order_relaxed)) {
    if (solve_lapacke(a_sym, eigenvalues, vectors)) {
      residual = eig_residual(original, vectors, eigenvalues);
      const double scale = std::max(eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
      if (residual <= tolerance * scale) {
        solved = true;
      } else {
        lapacke_trusted.store(false, std::memory_order_relaxed);
        std::cerr << "geowave: LAPACK dsyevd produced residual " << residual
                  << "; falling back to the built-in eigensolver for this process "
                     "(set OPENBLAS_CORETYPE if your BLAS mis-detects the CPU)\n";
      }
    } else {
      lapacke_trusted.store(false, std::memory_order_relaxed);
    }
  }
#endif
  if (!solved) {
    solve_eigen(a_sym, eigenvalues, vectors);
    residual = eig_residual(original, vectors, eigenvalues);
    const double scale = std::max(eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
    if (residual > tolerance * scale) {
      std::ostringstream msg;
      msg << "eigendecomposition residual " << residual << " exceeds " << kResidualTol
          << " * ||A_s|| = " << kResidualTol * scale;
      throw EigensolverError(msg.str());
    }
  }

  // ascending -> descending
  decomp.eigenvalues = eigenvalues.reverse();
  decomp.eigenvectors = vectors.rowwise().reverse();
  decomp.residual = residual;
  return decomp;
}

SpectralDecomposition decompose(const GraphOperators& ops) {
  auto [a_sym, weight] = symmetrize(ops.averaging, ops.p_lambda);
  SpectralDecomposition decomp = eig_sym(std::move(a_sym), std::move(weight));
  const double top = decomp.eigenvalues(0);
  const double bottom = decomp.eigenvalues(decomp.size() - 1);
  if (top > 1.0 + kSpectrumTol || bottom < -1.0 - kSpectrumTol) {
    std::ostringstream msg;
    msg << "averaging spectrum [" << bottom << ", " << top << "] escapes [-1, 1]";
    throw SpectrumViolation(msg.str());
  }
  return decomp;
}

Eigen::VectorXcd apply_function(const SpectralDecomposition& decomp, const ScalarFunction& f,
                                const Eigen::VectorXcd& u) {
  const Index n = decomp.size();
  if (u.size() != n) {
    throw InvalidArgument("vector length does not match the decomposition");
  }
  const Eigen::VectorXd& d = decomp.weight;
  const Eigen::MatrixXd& v = decomp.eigenvectors;

  // Real and imaginary parts ride through the real eigenbasis separately.
  Eigen::VectorXd w_re = d.cwiseProduct(u.real());
  Eigen::VectorXd w_im = d.cwiseProduct(u.imag());
  Eigen::VectorXd y_re = v.transpose() * w_re;
  Eigen::VectorXd y_im = v.transpose() * w_im;

  Eigen::VectorXd z_re(n), z_im(n);
  for (Index j = 0; j < n; ++j) {
    const double mu = decomp.eigenvalues(j);
    const std::complex<double> fj = f(mu);
    if (!std::isfinite(fj.real()) || !std::isfinite(fj.imag())) {
      std::ostringstream msg;
      msg << "scalar function non-finite at eigenvalue mu=" << mu;
      throw FunctionDomain(msg.str());
    }
    const std::complex<double> yj(y_re(j), y_im(j));
    const std::complex<double> zj = fj * yj;
    z_re(j) = zj.real();
    z_im(j) = zj.imag();
  }

  Eigen::VectorXd out_re = v * z_re;
  Eigen::VectorXd out_im = v * z_im;
  Eigen::VectorXcd out(n);
  out.real() = out_re.cwiseQuotient(d);
  out.imag() = out_im.cwiseQuotient(d);
  return out;
}

Eigen::VectorXcd sqrt_shifted(const SpectralDecomposition& decomp, double shift,
                              const Eigen::VectorXcd& u) {
  return apply_function(decomp, ScalarFunction::shifted_sqrt(shift), u);
}

Eigen::VectorXcd wave_propagate(const SpectralDecomposition& decomp, double t, double epsilon,
                                double shift, double c20, const Eigen::VectorXcd& u) {
  if (t == 0.0) {
    if (u.size() != decomp.size()) {
      throw InvalidArgument("vector length does not match the decomposition");
    }
    return u;
  }
  return apply_function(decomp, ScalarFunction::propagator(t, epsilon, shift, c20), u);
}

namespace {

constexpr char kDecompMagic[8] = {'G', 'W', 'S', 'P', 'E', 'C', '0', '1'};

}

void SpectralDecomposition::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write '" + path.string() + "'");
  }
  out.write(kDecompMagic, sizeof kDecompMagic);
  const std::uint64_t n = static_cast<std::uint64_t>(size());
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&residual), sizeof residual);
  out.write(reinterpret_cast<const char*>(eigenvalues.data()),
            static_cast<std::streamsize>(sizeof(double) * n));
  out.write(reinterpret_cast<const char*>(weight.data()),
            static_cast<std::streamsize>(sizeof(double) * n));
  out.write(reinterpret_cast<const char*>(eigenvectors.data()),
            static_cast<std::streamsize>(sizeof(double) * n * n));
}

SpectralDecomposition SpectralDecomposition::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  char magic[sizeof kDecompMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kDecompMagic, sizeof magic) != 0) {
    throw IoError(path.string() + ": not a geowave spectral file (bad magic/version)");
  }
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  SpectralDecomposition decomp;
  in.read(reinterpret_cast<char*>(&decomp.residual), sizeof decomp.residual);
  decomp.eigenvalues.resize(static_cast<Index>(n));
  decomp.weight.resize(static_cast<Index>(n));
  decomp.eigenvectors.resize(static_cast<Index>(n), static_cast<Index>(n));
  in.read(reinterpret_cast<char*>(decomp.eigenvalues.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  in.read(reinterpret_cast<char*>(decomp.weight.data()),
          static_cast<std::streamsize>(sizeof(double) * n));
  in.read(reinterpret_cast<char*>(decomp.eigenvectors.data()),
          static_cast<std::streamsize>(sizeof(double) * n * n));
  if (!in) {
    throw IoError(path.string() + ": spectral file truncated");
  }
  return decomp;
}

}  // namespace geowave
