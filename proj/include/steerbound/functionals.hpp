#pragma once

// Steering functionals F = {F_x^a}, assemblages sigma = {sigma_x^a} and the
// pairing <F, sigma> = Tr(sum_{x,a} F_x^a sigma_x^a).
//
// Tables are stored flat, setting-major: entry (x, a) lives at x * m + a,
// with 0-based x and a.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "clifford.hpp"
#include "config.hpp"
#include "error.hpp"
#include "linalg.hpp"
#include "mub.hpp"

namespace steerbound {

enum class FunctionalKind { mub, clifford, clifford_dichotomic, random, custom };

inline std::string_view to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::mub: return "mub";
    case FunctionalKind::clifford: return "clifford";
    case FunctionalKind::clifford_dichotomic: return "clifford-dichotomic";
    case FunctionalKind::random: return "random";
    case FunctionalKind::custom: return "custom";
  }
  return "custom";
}

inline std::optional<FunctionalKind> parse_kind(std::string_view s) {
  if (s == "mub") return FunctionalKind::mub;
  if (s == "clifford") return FunctionalKind::clifford;
  if (s == "clifford-dichotomic" || s == "dichotomic") return FunctionalKind::clifford_dichotomic;
  if (s == "random") return FunctionalKind::random;
  if (s == "custom") return FunctionalKind::custom;
  return std::nullopt;
}

// Table of n x m operators of size d x d, shared by functionals and assemblages.
struct OperatorTable {
  int settings = 0;
  int outcomes = 0;
  int dimension = 0;
  std::vector<ComplexMatrix> entries;

  const ComplexMatrix& at(int x, int a) const { return entries[index(x, a)]; }
  ComplexMatrix& at(int x, int a) { return entries[index(x, a)]; }

 private:
  std::size_t index(int x, int a) const { return static_cast<std::size_t>(x) * outcomes + a; }
};

inline void validate_shape(const OperatorTable& t, const char* what) {
  require(t.settings >= 1 && t.outcomes >= 1 && t.dimension >= 1,
          std::string(what) + ": settings, outcomes and dimension must be positive");
  require(t.entries.size() == static_cast<std::size_t>(t.settings) * t.outcomes,
          std::string(what) + ": table holds " + std::to_string(t.entries.size()) + " operators, expected " +
              std::to_string(t.settings * t.outcomes));
  for (const auto& e : t.entries) {
    require(e.rows() == t.dimension && e.cols() == t.dimension,
            std::string(what) + ": operator of size " + std::to_string(e.rows()) + "x" + std::to_string(e.cols()) +
                " does not match dimension " + std::to_string(t.dimension));
  }
}

struct SteeringFunctional : OperatorTable {
  FunctionalKind kind = FunctionalKind::custom;
  bool hermitian = false;
  bool psd = false;
  std::optional<std::uint64_t> seed;
};

inline SteeringFunctional make_functional(FunctionalKind kind, int n, int m, int d, std::vector<ComplexMatrix> coeffs,
                                          std::optional<std::uint64_t> seed = std::nullopt) {
  SteeringFunctional f;
  f.settings = n;
  f.outcomes = m;
  f.dimension = d;
  f.entries = std::move(coeffs);
  f.kind = kind;
  f.seed = seed;
  validate_shape(f, "steering functional");
  f.hermitian = true;
  f.psd = true;
  for (const auto& e : f.entries) {
    if (!linalg::is_hermitian(e)) {
      f.hermitian = false;
      f.psd = false;
      break;
    }
    if (f.psd && linalg::extremal_eigenvalues_unchecked(e).first < -kTol.hermiticity) f.psd = false;
  }
  return f;
}

// Dichotomic functional: one observable per setting paired with sigma_x^1 - sigma_x^2.
struct DichotomicFunctional {
  int dimension = 0;
  std::vector<ComplexMatrix> observables;

  int settings() const { return static_cast<int>(observables.size()); }
};

// <F^dicho, sigma> = sum_x Tr(F_x (sigma_x^1 - sigma_x^2)), i.e. the two-outcome
// functional with F_x^1 = F_x and F_x^2 = -F_x.
inline SteeringFunctional as_steering_functional(const DichotomicFunctional& f) {
  std::vector<ComplexMatrix> coeffs;
  for (const auto& obs : f.observables) {
    coeffs.push_back(obs);
    coeffs.push_back(-obs);
  }
  return make_functional(FunctionalKind::clifford_dichotomic, f.settings(), 2, f.dimension, std::move(coeffs));
}

struct Assemblage : OperatorTable {};

struct AssemblageReport {
  double min_eigenvalue = 0.0;
  double signaling_deviation = 0.0;      // max_x ||sum_a sigma_x^a - sum_a sigma_1^a||_inf
  double normalization_deviation = 0.0;  // |Tr(sum_a sigma_1^a) - 1|
  bool valid = false;
};

inline AssemblageReport check_assemblage(const Assemblage& s, double tol = kTol.assemblage) {
  validate_shape(s, "assemblage");
  AssemblageReport r;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  bool hermitian = true;
  for (const auto& e : s.entries) {
    if (!linalg::is_hermitian(e, tol)) {
      hermitian = false;
      r.min_eigenvalue = -std::numeric_limits<double>::infinity();
      break;
    }
    r.min_eigenvalue = std::min(r.min_eigenvalue, linalg::extremal_eigenvalues_unchecked(linalg::hermitian_part(e)).first);
  }
  const auto reduced = [&s](int x) {
    ComplexMatrix sum = ComplexMatrix::Zero(s.dimension, s.dimension);
    for (int a = 0; a < s.outcomes; ++a) sum += s.at(x, a);
    return sum;
  };
  const ComplexMatrix rho = reduced(0);
  for (int x = 1; x < s.settings; ++x) {
    r.signaling_deviation = std::max(r.signaling_deviation, linalg::operator_norm(reduced(x) - rho));
  }
  r.normalization_deviation = std::abs(rho.trace() - 1.0);
  r.valid = hermitian && r.min_eigenvalue >= -tol && r.signaling_deviation <= tol && r.normalization_deviation <= tol;
  return r;
}

inline Assemblage make_assemblage(int n, int m, int d, std::vector<ComplexMatrix> members) {
  Assemblage s;
  s.settings = n;
  s.outcomes = m;
  s.dimension = d;
  s.entries = std::move(members);
  const auto r = check_assemblage(s);
  if (!r.valid) {
    fail(ErrorKind::precondition, "assemblage invalid: min eigenvalue " + std::to_string(r.min_eigenvalue) +
                                      ", no-signaling deviation " + std::to_string(r.signaling_deviation) +
                                      ", normalization deviation " + std::to_string(r.normalization_deviation));
  }
  return s;
}

// --- constructors ----------------------------------------------------------

inline SteeringFunctional mub_functional(const MubFamily& family) {
  const int d = family.dimension;
  std::vector<ComplexMatrix> coeffs;
  for (int x = 0; x < family.count(); ++x) {
    for (int a = 0; a < d; ++a) coeffs.push_back(family.projector(x, a));
  }
  return make_functional(FunctionalKind::mub, family.count(), d, d, std::move(coeffs));
}

// P_x^1 = (I + A_x)/2, P_x^2 = (I - A_x)/2, flat setting-major.
inline std::vector<ComplexMatrix> clifford_projectors(const CliffordFamily& family) {
  std::vector<ComplexMatrix> out;
  const ComplexMatrix id = ComplexMatrix::Identity(family.dimension(), family.dimension());
  for (const auto& a : family.observables) {
    out.push_back((id + a) * 0.5);
    out.push_back((id - a) * 0.5);
  }
  return out;
}

// F_x^1 = A_x / 2, F_x^2 = -A_x / 2.
inline SteeringFunctional clifford_functional(const CliffordFamily& family) {
  std::vector<ComplexMatrix> coeffs;
  for (const auto& a : family.observables) {
    coeffs.push_back(a * 0.5);
    coeffs.push_back(a * -0.5);
  }
  return make_functional(FunctionalKind::clifford, family.count(), 2, family.dimension(), std::move(coeffs));
}

inline DichotomicFunctional dichotomic_functional(const CliffordFamily& family) {
  return DichotomicFunctional{family.dimension(), family.observables};
}

// F_x^a = (1/d) sum_k eps_{x,a}^k |1><k| with n = m = d.
//
// Signs come from std::mt19937_64 seeded with `seed`: for x, a, k in nested
// ascending order (k fastest), one 64-bit draw is taken and eps = -1 when its
// top bit is set, +1 otherwise. The engine is fully specified by the C++
// standard, so tables are reproducible across platforms.
inline SteeringFunctional random_functional(int d, std::uint64_t seed) {
  require(d >= 2, "random_functional: dimension must be >= 2");
  std::mt19937_64 engine(seed);
  std::vector<ComplexMatrix> coeffs;
  const double scale = 1.0 / d;
  for (int x = 0; x < d; ++x) {
    for (int a = 0; a < d; ++a) {
      ComplexMatrix f = ComplexMatrix::Zero(d, d);
      for (int k = 0; k < d; ++k) f(0, k) = (engine() >> 63) ? -scale : scale;
      coeffs.push_back(std::move(f));
    }
  }
  return make_functional(FunctionalKind::random, d, d, d, std::move(coeffs), seed);
}

// --- evaluation ------------------------------------------------------------

struct Evaluation {
  Complex raw;                  // Tr(sum F sigma)
  double value = 0.0;           // real part
  bool imaginary_warning = false;  // |Im| above tolerance
};

inline Evaluation evaluate(const SteeringFunctional& f, const Assemblage& s) {
  require(f.settings == s.settings && f.outcomes == s.outcomes && f.dimension == s.dimension,
          "evaluate: functional shape (" + std::to_string(f.settings) + "," + std::to_string(f.outcomes) + "," +
              std::to_string(f.dimension) + ") does not match assemblage shape (" + std::to_string(s.settings) + "," +
              std::to_string(s.outcomes) + "," + std::to_string(s.dimension) + ")");
  Complex total = 0.0;
  for (std::size_t i = 0; i < f.entries.size(); ++i) {
    // Tr(F S) = sum_{jk} F_jk S_kj
    total += (f.entries[i].array() * s.entries[i].transpose().array()).sum();
  }
  Evaluation e;
  e.raw = total;
  e.value = total.real();
  e.imaginary_warning = std::abs(total.imag()) > kTol.evaluation_imag;
  return e;
}

// mub: sigma_x^a = F_x^a / d.  clifford kinds: sigma_x^a = P_x^a / d with P
// recovered from the coefficients (P = F + I/2, resp. P = (I + F)/2).
inline Assemblage canonical_quantum_assemblage(const SteeringFunctional& f) {
  const int d = f.dimension;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  std::vector<ComplexMatrix> members;
  members.reserve(f.entries.size());
  switch (f.kind) {
    case FunctionalKind::mub:
      for (const auto& e : f.entries) members.push_back(e / static_cast<double>(d));
      break;
    case FunctionalKind::clifford:
      for (const auto& e : f.entries) members.push_back((e + 0.5 * id) / static_cast<double>(d));
      break;
    case FunctionalKind::clifford_dichotomic:
      for (const auto& e : f.entries) members.push_back((id + e) * (0.5 / d));
      break;
    default:
      fail(ErrorKind::precondition, "canonical_quantum_assemblage: no canonical optimizer for kind '" +
                                        std::string(to_string(f.kind)) + "'");
  }
  return make_assemblage(f.settings, f.outcomes, d, std::move(members));
}

}  // namespace steerbound
