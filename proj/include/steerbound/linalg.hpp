#pragma once

// Dense complex linear algebra kernel. All operators in the toolkit are
// Eigen::MatrixXcd; this header adds the checked spectral routines the
// bound computations rely on.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "config.hpp"
#include "error.hpp"

namespace steerbound {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace linalg {

inline double hermiticity_defect(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_square(const ComplexMatrix& m) { return m.rows() == m.cols() && m.rows() > 0; }

inline bool is_hermitian(const ComplexMatrix& m, double tol = kTol.hermiticity) {
  return is_square(m) && hermiticity_defect(m) <= tol;
}

inline void require_square(const ComplexMatrix& m, const char* op) {
  if (!is_square(m)) {
    fail(ErrorKind::precondition, std::string(op) + ": matrix is not square (" +
                                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
  }
}

inline void require_hermitian(const ComplexMatrix& m, const char* op) {
  require_square(m, op);
  const double defect = hermiticity_defect(m);
  if (defect > kTol.hermiticity) {
    fail(ErrorKind::precondition, std::string(op) + ": matrix is not Hermitian (||M - M^dagger||_max = " +
                                      std::to_string(defect) + ")");
  }
}

struct HermitianEigensystem {
  std::vector<double> values;  // descending
  ComplexMatrix vectors;       // column k pairs with values[k]
};

namespace detail {

// Eigen's self-adjoint solver runs a fixed sequence of Householder
// reductions and implicit QR sweeps, so identical input bits give identical
// output bits. Only the Hermitian part is read.
inline Eigen::SelfAdjointEigenSolver<ComplexMatrix> solve(const ComplexMatrix& m, bool vectors) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorKind::assertion, "hermitian eigensolver did not converge");
  return es;
}

}  // namespace detail

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eigenvalues");
  const auto es = detail::solve(m, false);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::reverse(out.begin(), out.end());
  return out;
}

inline HermitianEigensystem hermitian_eigensystem(const ComplexMatrix& m) {
  require_hermitian(m, "hermitian_eigensystem");
  const auto es = detail::solve(m, true);
  const Eigen::Index n = m.rows();
  HermitianEigensystem sys;
  sys.values.resize(static_cast<std::size_t>(n));
  sys.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    sys.values[static_cast<std::size_t>(k)] = es.eigenvalues()(n - 1 - k);
    sys.vectors.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return sys;
}

// Unchecked extremal eigenvalues of a matrix already known to be Hermitian.
inline std::pair<double, double> extremal_eigenvalues_unchecked(const ComplexMatrix& m) {
  const auto es = detail::solve(m, false);
  const auto& ev = es.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

inline double max_eigenvalue_unchecked(const ComplexMatrix& m) { return extremal_eigenvalues_unchecked(m).second; }

inline ComplexVector top_eigenvector_unchecked(const ComplexMatrix& m) {
  const auto es = detail::solve(m, true);
  return es.eigenvectors().col(m.rows() - 1);
}

// Largest singular value. Hermitian input takes the eigenvalue route.
inline double operator_norm(const ComplexMatrix& m) {
  require_square(m, "operator_norm");
  if (hermiticity_defect(m) <= kTol.hermiticity) {
    const auto [lo, hi] = extremal_eigenvalues_unchecked(m);
    return std::max(std::abs(lo), std::abs(hi));
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& m, Complex phase = 1.0) {
  return (phase * m + std::conj(phase) * m.adjoint()) * 0.5;
}

// Numerical radius max_{|v|=1} |<v|M|v>| = max_theta lambda_max(Re(e^{i theta} M)).
// Uniform grid over [0, 2 pi) followed by golden-section refinement around the
// best grid point. The returned value is always attained by some theta, so it
// is a lower bound on the true radius.
inline double numerical_radius(const ComplexMatrix& m, int angular_resolution = kDefaultAngularResolution) {
  require_square(m, "numerical_radius");
  require(angular_resolution >= 8, "numerical_radius: angular_resolution must be >= 8");
  const auto profile = [&m](double theta) {
    return max_eigenvalue_unchecked(hermitian_part(m, std::polar(1.0, theta)));
  };
  const double step = 2.0 * std::numbers::pi / angular_resolution;
  double best = -std::numeric_limits<double>::infinity();
  double best_theta = 0.0;
  for (int k = 0; k < angular_resolution; ++k) {
    const double theta = k * step;
    const double v = profile(theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }
  constexpr double kInvPhi = 0.6180339887498949;
  double lo = best_theta - step;
  double hi = best_theta + step;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = profile(c);
  double fd = profile(d);
  for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = profile(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = profile(d);
    }
  }
  best = std::max({best, fc, fd});
  return std::max(best, 0.0);
}

// Kronecker product.
inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

namespace pauli {

inline ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }

inline ComplexMatrix x() {
  ComplexMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

inline ComplexMatrix y() {
  ComplexMatrix s(2, 2);
  s << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return s;
}

inline ComplexMatrix z() {
  ComplexMatrix s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

}  // namespace pauli

}  // namespace linalg
}  // namespace steerbound
