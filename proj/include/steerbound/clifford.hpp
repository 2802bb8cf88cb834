#pragma once

// Pairwise anticommuting Hermitian unitaries from the Jordan-Wigner chain on
// m qubits:
//   A_{2k-1} = Z^{k-1} X I^{m-k},  A_{2k} = Z^{k-1} Y I^{m-k},  A_{2m+1} = Z^m.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "linalg.hpp"

namespace steerbound {

struct CliffordFamily {
  int qubits = 0;
  std::vector<ComplexMatrix> observables;

  int count() const { return static_cast<int>(observables.size()); }
  int dimension() const { return 1 << qubits; }
};

// Smallest m >= 1 with 2m + 1 >= n.
inline int compact_qubit_count(int n) { return std::max(1, n / 2); }

namespace detail {

inline ComplexMatrix pauli_chain(int qubits, int z_prefix, const ComplexMatrix& site) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int q = 0; q < qubits; ++q) {
    if (q < z_prefix) {
      out = linalg::tensor(out, linalg::pauli::z());
    } else if (q == z_prefix) {
      out = linalg::tensor(out, site);
    } else {
      out = linalg::tensor(out, linalg::pauli::identity());
    }
  }
  return out;
}

}  // namespace detail

inline CliffordFamily build_clifford_family(int n, bool match_paper_dimension = false) {
  require(n >= 1, "build_clifford_family: observable count must be >= 1");
  const int qubits = match_paper_dimension ? n : compact_qubit_count(n);
  if (qubits > 12) {
    // Report 2^qubits without overflowing for absurd n.
    const std::string dim = qubits < 63 ? std::to_string(1ULL << qubits) : "2^" + std::to_string(qubits);
    fail(ErrorKind::precondition, "build_clifford_family: dimension " + dim + " exceeds the cap of " +
                                      std::to_string(kMaxDimension));
  }
  CliffordFamily family;
  family.qubits = qubits;
  for (int x = 0; x < n; ++x) {
    const int k = x / 2;
    if (k < qubits) {
      family.observables.push_back(
          detail::pauli_chain(qubits, k, x % 2 == 0 ? linalg::pauli::x() : linalg::pauli::y()));
    } else {
      family.observables.push_back(detail::pauli_chain(qubits, qubits, ComplexMatrix()));
    }
  }
  return family;
}

struct AnticommutationReport {
  double max_deviation = 0.0;       // over all ordered pairs incl. x == y
  double diagonal_deviation = 0.0;  // max ||2 A_x^2 - 2 I||_max
  double hermiticity_deviation = 0.0;
  int worst_x = -1;
  int worst_y = -1;
  bool passed = false;
};

inline AnticommutationReport verify_anticommutation(const CliffordFamily& family, double tol = kTol.clifford) {
  AnticommutationReport report;
  const int n = family.count();
  for (int x = 0; x < n; ++x) {
    const auto& ax = family.observables[static_cast<std::size_t>(x)];
    report.hermiticity_deviation = std::max(report.hermiticity_deviation, linalg::hermiticity_defect(ax));
    for (int y = x; y < n; ++y) {
      const auto& ay = family.observables[static_cast<std::size_t>(y)];
      ComplexMatrix anti = ax * ay + ay * ax;
      if (x == y) anti -= 2.0 * ComplexMatrix::Identity(ax.rows(), ax.cols());
      const double dev = linalg::max_abs(anti);
      if (x == y) report.diagonal_deviation = std::max(report.diagonal_deviation, dev);
      if (report.worst_x < 0 || dev > report.max_deviation) {
        report.worst_x = x;
        report.worst_y = y;
        report.max_deviation = dev;
      }
    }
  }
  report.passed = report.max_deviation <= tol && report.hermiticity_deviation <= tol;
  return report;
}

}  // namespace steerbound
