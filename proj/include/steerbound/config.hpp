#pragma once

#include <cstdint>

namespace steerbound {

inline constexpr const char* kVersion = "0.1.0";

// Numerical tolerances shared by every module.
struct Tolerances {
  double hermiticity = 1e-10;      // ||M - M^dagger||_max for Hermitian-flagged input
  double spectrum = 1e-9;          // eigenvalue accuracy relative to ||M||
  double mub = 1e-10;              // orthonormality / unbiasedness
  double clifford = 1e-12;         // anticommutator deviation
  double assemblage = 1e-9;        // positivity, no-signaling, normalization
  double evaluation_imag = 1e-9;   // imaginary residue of <F, sigma> for Hermitian F
  double bound_slack = 1e-9;       // slack when comparing computed vs analytic bounds
  double gram_identity = 1e-8;     // frame-operator vs Gram-matrix norm
  double probability = 1e-12;      // row sums of p(a|x)
};

inline constexpr Tolerances kTol{};

inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;
inline constexpr int kDefaultAngularResolution = 720;
inline constexpr int kMaxDimension = 4096;

}  // namespace steerbound
