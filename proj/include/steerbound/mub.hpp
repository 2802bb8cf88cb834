#pragma once

// Mutually unbiased bases in prime dimension.
//
// For odd prime d the family is the quadratic-phase construction
//   basis 0:  computational basis
//   basis x:  |phi_x^a>_k = omega^{a k + x k^2} / sqrt(d),  omega = exp(2 pi i / d)
// and for d = 2 the eigenbases of sigma_z, sigma_x, sigma_y (in that order).
// Vectors are stored with their first nonzero component real and positive.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "linalg.hpp"

namespace steerbound {

struct MubFamily {
  int dimension = 0;
  // bases[x] is a d x d matrix whose columns are |phi_x^a>, a = 0..d-1.
  std::vector<ComplexMatrix> bases;

  int count() const { return static_cast<int>(bases.size()); }
  ComplexVector vector(int x, int a) const { return bases[static_cast<std::size_t>(x)].col(a); }
  ComplexMatrix projector(int x, int a) const {
    const ComplexVector v = vector(x, a);
    return v * v.adjoint();
  }
};

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

namespace detail {

inline void canonicalize_phase(ComplexMatrix& basis) {
  for (Eigen::Index c = 0; c < basis.cols(); ++c) {
    for (Eigen::Index r = 0; r < basis.rows(); ++r) {
      const Complex z = basis(r, c);
      if (std::abs(z) > 1e-14) {
        basis.col(c) *= std::conj(z) / std::abs(z);
        basis(r, c) = std::abs(basis(r, c));
        break;
      }
    }
  }
}

}  // namespace detail

inline MubFamily build_mub_family(int d, int n) {
  if (!is_prime(d)) {
    fail(ErrorKind::precondition, "build_mub_family: dimension " + std::to_string(d) +
                                      " is not prime (composite dimensions need Galois-field arithmetic)");
  }
  if (n < 2 || n > d + 1) {
    fail(ErrorKind::precondition, "build_mub_family: basis count " + std::to_string(n) + " outside [2, " +
                                      std::to_string(d + 1) + "]");
  }
  MubFamily family;
  family.dimension = d;
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));

  if (d == 2) {
    ComplexMatrix z = ComplexMatrix::Identity(2, 2);
    ComplexMatrix x(2, 2);
    x << inv_sqrt_d, inv_sqrt_d, inv_sqrt_d, -inv_sqrt_d;
    ComplexMatrix y(2, 2);
    y << inv_sqrt_d, inv_sqrt_d, Complex(0.0, inv_sqrt_d), Complex(0.0, -inv_sqrt_d);
    const ComplexMatrix all[3] = {z, x, y};
    for (int i = 0; i < n; ++i) family.bases.push_back(all[i]);
    return family;
  }

  family.bases.push_back(ComplexMatrix::Identity(d, d));
  for (int x = 1; x < n; ++x) {
    ComplexMatrix basis(d, d);
    for (int a = 0; a < d; ++a) {
      for (int k = 0; k < d; ++k) {
        // Exponent reduced mod d before forming the phase keeps the angle exact.
        const long long e = (static_cast<long long>(a) * k + static_cast<long long>(x) * k * k) % d;
        basis(k, a) = std::polar(inv_sqrt_d, 2.0 * std::numbers::pi * static_cast<double>(e) / d);
      }
    }
    detail::canonicalize_phase(basis);
    family.bases.push_back(std::move(basis));
  }
  return family;
}

struct UnbiasednessReport {
  double orthonormality_deviation = 0.0;  // max |<phi_x^a|phi_x^b> - delta_ab|
  double unbiasedness_deviation = 0.0;    // max | |<phi_x^a|phi_y^b>| - 1/sqrt(d) |, x != y
  bool passed = false;
};

inline UnbiasednessReport verify_unbiasedness(const MubFamily& family, double tol = kTol.mub) {
  UnbiasednessReport report;
  const int d = family.dimension;
  const double target = 1.0 / std::sqrt(static_cast<double>(d));
  for (int x = 0; x < family.count(); ++x) {
    const auto& bx = family.bases[static_cast<std::size_t>(x)];
    const ComplexMatrix self = bx.adjoint() * bx;
    report.orthonormality_deviation =
        std::max(report.orthonormality_deviation, linalg::max_abs(self - ComplexMatrix::Identity(d, d)));
    for (int y = x + 1; y < family.count(); ++y) {
      const ComplexMatrix cross = bx.adjoint() * family.bases[static_cast<std::size_t>(y)];
      report.unbiasedness_deviation =
          std::max(report.unbiasedness_deviation, (cross.cwiseAbs().array() - target).abs().maxCoeff());
    }
  }
  report.passed = report.orthonormality_deviation <= tol && report.unbiasedness_deviation <= tol;
  return report;
}

}  // namespace steerbound
