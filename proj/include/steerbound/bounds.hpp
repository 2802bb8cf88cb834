#pragma once

// LHS and quantum bounds of steering functionals.
//
// An LHS assemblage is sigma_x^a = sum_lambda q_lambda p_lambda(a|x) sigma_lambda.
// The pairing is linear in each of q, p_lambda and sigma_lambda, and each of
// these ranges over a convex set whose extreme points are, respectively, a
// single lambda, a deterministic response a(x), and a pure state. Hence
//   S_LHS(F) = max_{a(.)} max_{|v| = 1} |<v| sum_x F_x^{a(x)} |v>|,
// which is the operator norm of the strategy sum for Hermitian F and its
// numerical radius otherwise. Hidden-variable mixtures never need to be
// materialized; enumerating the m^n deterministic strategies is exact.

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "functionals.hpp"
#include "linalg.hpp"
#include "mub.hpp"
#include "parallel.hpp"
#include "seesaw.hpp"

namespace steerbound {

// a(x) per setting, 0-based.
struct DeterministicStrategy {
  std::vector<int> assignments;

  bool operator==(const DeterministicStrategy&) const = default;
};

// Number of strategies m^n, saturated at cap + 1.
inline std::uint64_t strategy_count(int n, int m, std::uint64_t cap) {
  std::uint64_t count = 1;
  for (int x = 0; x < n; ++x) {
    if (count > cap / static_cast<std::uint64_t>(m)) return cap + 1;
    count *= static_cast<std::uint64_t>(m);
  }
  return count;
}

// Lexicographic order in (a(1), ..., a(n)): a(1) is the most significant digit.
inline DeterministicStrategy decode_strategy(std::uint64_t index, int n, int m) {
  DeterministicStrategy s;
  s.assignments.assign(static_cast<std::size_t>(n), 0);
  for (int x = n - 1; x >= 0; --x) {
    s.assignments[static_cast<std::size_t>(x)] = static_cast<int>(index % static_cast<std::uint64_t>(m));
    index /= static_cast<std::uint64_t>(m);
  }
  return s;
}

inline ComplexMatrix strategy_operator(const OperatorTable& f, const DeterministicStrategy& s) {
  ComplexMatrix sum = ComplexMatrix::Zero(f.dimension, f.dimension);
  for (int x = 0; x < f.settings; ++x) sum += f.at(x, s.assignments[static_cast<std::size_t>(x)]);
  return sum;
}

struct EnumerationOptions {
  std::uint64_t cap = kDefaultEnumerationCap;
  int threads = 1;
  int angular_resolution = kDefaultAngularResolution;
};

struct LhsResult {
  double value = 0.0;
  DeterministicStrategy witness;
  std::uint64_t strategies = 0;
  std::string method;  // "operator-norm" or "numerical-radius"
};

namespace detail {

// Max of score(strategy) over all strategies. Each worker owns a contiguous
// index range; the reduction keeps the larger value and, on exact ties, the
// smaller index, so the result does not depend on the worker count.
template <class Score>
LhsResult maximize_over_strategies(const SteeringFunctional& f, const EnumerationOptions& opt, Score&& score) {
  const std::uint64_t total = strategy_count(f.settings, f.outcomes, opt.cap);
  if (total > opt.cap) {
    fail(ErrorKind::cap_exceeded, "strategy enumeration needs " + std::to_string(f.outcomes) + "^" +
                                      std::to_string(f.settings) + " strategies, above the cap of " +
                                      std::to_string(opt.cap));
  }
  const int workers = resolve_threads(opt.threads);
  struct Best {
    double value = -1.0;
    std::uint64_t index = 0;
  };
  std::vector<Best> partial(static_cast<std::size_t>(std::max(workers, 1)));
  parallel_chunks(total, workers, [&](std::uint64_t begin, std::uint64_t end, int w) {
    Best best;
    for (std::uint64_t i = begin; i < end; ++i) {
      const double v = score(strategy_operator(f, decode_strategy(i, f.settings, f.outcomes)));
      if (v > best.value) best = {v, i};
    }
    partial[static_cast<std::size_t>(w)] = best;
  });
  Best best;
  for (const auto& p : partial) {
    if (p.value > best.value || (p.value == best.value && p.index < best.index)) best = p;
  }
  LhsResult r;
  r.value = best.value;
  r.witness = decode_strategy(best.index, f.settings, f.outcomes);
  r.strategies = total;
  return r;
}

}  // namespace detail

inline LhsResult lhs_bound_exact_general(const SteeringFunctional& f, const EnumerationOptions& opt = {}) {
  require(opt.angular_resolution >= 8, "lhs_bound_exact_general: angular_resolution must be >= 8");
  auto r = detail::maximize_over_strategies(
      f, opt, [&](const ComplexMatrix& op) { return linalg::numerical_radius(op, opt.angular_resolution); });
  r.method = "numerical-radius";
  return r;
}

// Non-Hermitian functionals are redirected to the numerical-radius route.
inline LhsResult lhs_bound_exact(const SteeringFunctional& f, const EnumerationOptions& opt = {}) {
  if (!f.hermitian) return lhs_bound_exact_general(f, opt);
  auto r = detail::maximize_over_strategies(f, opt, [](const ComplexMatrix& op) {
    const auto [lo, hi] = linalg::extremal_eigenvalues_unchecked(op);
    return std::max(std::abs(lo), std::abs(hi));
  });
  r.method = "operator-norm";
  return r;
}

// --- closed-form bounds ----------------------------------------------------

enum class MubBoundVariant { gram, uncertainty };

inline double lhs_bound_mub_analytic(int d, int n, MubBoundVariant variant) {
  require(d >= 2 && n >= 1, "lhs_bound_mub_analytic: need d >= 2 and n >= 1");
  const double sd = std::sqrt(static_cast<double>(d));
  if (variant == MubBoundVariant::gram) return 1.0 + (n + 1) / sd;
  return (static_cast<double>(n) / d) * (1.0 + (d - 1) / std::sqrt(static_cast<double>(n)));
}

inline double lhs_bound_clifford_analytic(int n, bool dichotomic) {
  require(n >= 1, "lhs_bound_clifford_analytic: need n >= 1");
  return dichotomic ? std::sqrt(2.0 * n) : std::sqrt(n / 2.0);
}

struct AnalyticBound {
  std::string name;
  std::string formula;
  double value = 0.0;
};

inline std::vector<AnalyticBound> applicable_lhs_bounds(const SteeringFunctional& f) {
  const int n = f.settings;
  const int d = f.dimension;
  switch (f.kind) {
    case FunctionalKind::mub:
      return {{"mub-gram", "1+(n+1)/sqrt(d)", lhs_bound_mub_analytic(d, n, MubBoundVariant::gram)},
              {"mub-uncertainty", "(n/d)*(1+(d-1)/sqrt(n))", lhs_bound_mub_analytic(d, n, MubBoundVariant::uncertainty)}};
    case FunctionalKind::clifford:
      return {{"clifford", "sqrt(n/2)", lhs_bound_clifford_analytic(n, false)}};
    case FunctionalKind::clifford_dichotomic:
      return {{"clifford-dichotomic", "sqrt(2n)", lhs_bound_clifford_analytic(n, true)}};
    default:
      return {};
  }
}

inline std::vector<AnalyticBound> applicable_violation_bounds(const SteeringFunctional& f) {
  const double n = f.settings;
  const double d = f.dimension;
  switch (f.kind) {
    case FunctionalKind::mub:
      return {{"mub-gram", "n*sqrt(d)/(n+1+sqrt(d))", n * std::sqrt(d) / (n + 1 + std::sqrt(d))},
              {"mub-uncertainty", "d*sqrt(n)/(sqrt(n)+d-1)", d * std::sqrt(n) / (std::sqrt(n) + d - 1)}};
    case FunctionalKind::clifford:
      return {{"clifford", "sqrt(n/2)", std::sqrt(n / 2.0)}};
    case FunctionalKind::clifford_dichotomic:
      return {{"clifford-dichotomic", "sqrt(n/2)", std::sqrt(n / 2.0)}};
    default:
      return {};
  }
}

// --- quantum bound ---------------------------------------------------------

struct QuantumResult {
  double value = 0.0;
  std::string method;                    // "analytic" or "seesaw-lower"
  std::optional<double> canonical_value; // <F, canonical assemblage>
  double upper = 0.0;                    // sum_x max_a ||F_x^a||
  std::optional<SeesawResult> seesaw;
};

// sum_x max_a ||F_x^a||: |sum_a Tr(F^a sigma^a)| <= max_a ||F^a|| Tr(sum_a sigma^a).
inline double quantum_upper_bound(const SteeringFunctional& f) {
  double total = 0.0;
  for (int x = 0; x < f.settings; ++x) {
    double best = 0.0;
    for (int a = 0; a < f.outcomes; ++a) best = std::max(best, linalg::operator_norm(f.at(x, a)));
    total += best;
  }
  return total;
}

inline std::optional<double> analytic_quantum_value(const SteeringFunctional& f) {
  switch (f.kind) {
    case FunctionalKind::mub: return static_cast<double>(f.settings);
    case FunctionalKind::clifford: return f.settings / 2.0;
    case FunctionalKind::clifford_dichotomic: return static_cast<double>(f.settings);
    default: return std::nullopt;
  }
}

// Known kinds return the closed-form value after confirming that the
// canonical assemblage attains it and that it respects the Holder-type upper
// bound. Other kinds fall back to the see-saw lower bound.
inline QuantumResult quantum_bound(const SteeringFunctional& f, const SeesawOptions& seesaw = {}) {
  QuantumResult r;
  r.upper = quantum_upper_bound(f);
  if (const auto analytic = analytic_quantum_value(f)) {
    r.value = *analytic;
    r.method = "analytic";
    r.canonical_value = evaluate(f, canonical_quantum_assemblage(f)).value;
    if (std::abs(*r.canonical_value - *analytic) > kTol.bound_slack) {
      fail(ErrorKind::assertion, "quantum_bound: canonical assemblage gives " + std::to_string(*r.canonical_value) +
                                     ", expected " + std::to_string(*analytic));
    }
    if (*analytic > r.upper + kTol.bound_slack) {
      fail(ErrorKind::assertion, "quantum_bound: value " + std::to_string(*analytic) + " exceeds upper bound " +
                                     std::to_string(r.upper));
    }
    return r;
  }
  r.seesaw = quantum_bound_seesaw(f, seesaw);
  r.value = r.seesaw->value;
  r.method = "seesaw-lower";
  return r;
}

// --- full report -----------------------------------------------------------

struct BoundCheck {
  std::string name;
  std::string formula;
  double value = 0.0;
  bool holds = false;
};

struct BoundsReport {
  FunctionalKind kind = FunctionalKind::custom;
  int settings = 0;
  int outcomes = 0;
  int dimension = 0;
  std::optional<std::uint64_t> seed;
  LhsResult lhs;
  std::vector<BoundCheck> lhs_analytic;     // holds: s_lhs_exact <= bound + slack
  QuantumResult quantum;
  std::optional<double> violation;          // s_q / s_lhs_exact, absent when s_lhs_exact == 0
  std::vector<BoundCheck> violation_lower;  // holds: violation >= bound - slack
  bool quantum_within_upper = false;
  bool all_passed = false;

  struct Diagnostics {
    double elapsed_ms = 0.0;
    int threads = 1;
  } diagnostics;
};

struct BoundsOptions {
  EnumerationOptions enumeration;
  SeesawOptions seesaw;
};

inline BoundsReport violation(const SteeringFunctional& f, const BoundsOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  BoundsReport rep;
  rep.kind = f.kind;
  rep.settings = f.settings;
  rep.outcomes = f.outcomes;
  rep.dimension = f.dimension;
  rep.seed = f.seed;
  rep.lhs = lhs_bound_exact(f, opt.enumeration);
  SeesawOptions ss = opt.seesaw;
  ss.threads = opt.enumeration.threads;
  rep.quantum = quantum_bound(f, ss);
  rep.all_passed = true;
  for (const auto& b : applicable_lhs_bounds(f)) {
    const bool holds = rep.lhs.value <= b.value + kTol.bound_slack;
    rep.lhs_analytic.push_back({b.name, b.formula, b.value, holds});
    rep.all_passed = rep.all_passed && holds;
  }
  if (rep.lhs.value > 0.0) rep.violation = rep.quantum.value / rep.lhs.value;
  for (const auto& b : applicable_violation_bounds(f)) {
    const bool holds = rep.violation.has_value() && *rep.violation >= b.value - kTol.bound_slack;
    rep.violation_lower.push_back({b.name, b.formula, b.value, holds});
    rep.all_passed = rep.all_passed && holds;
  }
  rep.quantum_within_upper = rep.quantum.value <= rep.quantum.upper + kTol.bound_slack;
  rep.all_passed = rep.all_passed && rep.quantum_within_upper;
  rep.diagnostics.threads = resolve_threads(opt.enumeration.threads);
  rep.diagnostics.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

// --- Gram-matrix objects for MUB functionals -------------------------------

// p(a|x) with one row per setting and one column per outcome.
using ProbabilityTable = Eigen::MatrixXd;

inline void validate_probabilities(const MubFamily& family, const ProbabilityTable& p) {
  require(p.rows() == family.count() && p.cols() == family.dimension,
          "probability table must be " + std::to_string(family.count()) + "x" + std::to_string(family.dimension));
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    require((p.row(x).array() >= 0.0).all(), "probability table has a negative entry in row " + std::to_string(x));
    require(std::abs(p.row(x).sum() - 1.0) <= kTol.probability,
            "probability table row " + std::to_string(x) + " does not sum to 1");
  }
}

// Gram matrix of |psi_x^a> = sqrt(p(a|x)) |phi_x^a>, indexed (x, a) -> x * d + a.
struct GramMatrix {
  int settings = 0;
  int dimension = 0;
  ComplexMatrix matrix;       // G
  ProbabilityTable probabilities;

  ComplexMatrix scaled() const { return std::sqrt(static_cast<double>(dimension)) * matrix; }

  // Theta_{x,y}: the d x d block (x, y) of the scaled matrix.
  ComplexMatrix block(int x, int y) const {
    return std::sqrt(static_cast<double>(dimension)) * matrix.block(x * dimension, y * dimension, dimension, dimension);
  }

  // |xi_x> = sum_a sqrt(p(a|x)) |a>. Off-diagonal blocks satisfy
  // |Theta_{x,y}| = |xi_x><xi_y| entrywise; their phases are those of the overlaps.
  Eigen::VectorXd xi(int x) const { return probabilities.row(x).transpose().cwiseSqrt(); }
};

inline GramMatrix gram_matrix(const MubFamily& family, const ProbabilityTable& p) {
  validate_probabilities(family, p);
  const int n = family.count();
  const int d = family.dimension;
  ComplexMatrix psi(d, static_cast<Eigen::Index>(n) * d);
  for (int x = 0; x < n; ++x) {
    for (int a = 0; a < d; ++a) psi.col(static_cast<Eigen::Index>(x) * d + a) = std::sqrt(p(x, a)) * family.vector(x, a);
  }
  return GramMatrix{n, d, psi.adjoint() * psi, p};
}

// sum_{x,a} p(a|x) |phi_x^a><phi_x^a|
inline ComplexMatrix frame_operator(const MubFamily& family, const ProbabilityTable& p) {
  validate_probabilities(family, p);
  const int d = family.dimension;
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (int x = 0; x < family.count(); ++x) {
    for (int a = 0; a < d; ++a) s += p(x, a) * family.projector(x, a);
  }
  return s;
}

struct GramCheck {
  double frame_norm = 0.0;
  double gram_norm = 0.0;
  double deviation = 0.0;          // |frame_norm - gram_norm|
  double scaled_norm = 0.0;        // ||sqrt(d) G||
  double estimate = 0.0;           // sqrt(d) + n + 1
  double sharper_estimate = 0.0;   // sqrt(d) max p + n + 1
  bool identity_holds = false;
  bool estimate_holds = false;
};

inline GramCheck gram_norm_identity_check(const MubFamily& family, const ProbabilityTable& p) {
  const GramMatrix g = gram_matrix(family, p);
  GramCheck c;
  c.frame_norm = linalg::operator_norm(frame_operator(family, p));
  c.gram_norm = linalg::operator_norm(g.matrix);
  c.deviation = std::abs(c.frame_norm - c.gram_norm);
  c.scaled_norm = linalg::operator_norm(g.scaled());
  const double sd = std::sqrt(static_cast<double>(family.dimension));
  c.estimate = sd + family.count() + 1.0;
  c.sharper_estimate = sd * p.maxCoeff() + family.count() + 1.0;
  c.identity_holds = c.deviation <= kTol.gram_identity;
  c.estimate_holds = c.scaled_norm <= c.estimate + kTol.gram_identity;
  return c;
}

// --- fine-grained uncertainty ----------------------------------------------

struct FineGrainedResult {
  double xi = 0.0;     // lambda_max((1/n) sum_x |phi_x^{a(x)}><phi_x^{a(x)}|)
  double bound = 0.0;  // (1/d)(1 + (d-1)/sqrt(n))
  bool holds = false;
};

inline FineGrainedResult fine_grained_xi(const MubFamily& family, const DeterministicStrategy& strategy) {
  const int n = family.count();
  const int d = family.dimension;
  require(static_cast<int>(strategy.assignments.size()) == n,
          "fine_grained_xi: strategy length " + std::to_string(strategy.assignments.size()) + " != " +
              std::to_string(n));
  ComplexMatrix avg = ComplexMatrix::Zero(d, d);
  for (int x = 0; x < n; ++x) {
    const int a = strategy.assignments[static_cast<std::size_t>(x)];
    require(a >= 0 && a < d, "fine_grained_xi: outcome out of range");
    avg += family.projector(x, a);
  }
  avg /= static_cast<double>(n);
  FineGrainedResult r;
  r.xi = linalg::max_eigenvalue_unchecked(linalg::hermitian_part(avg));
  r.bound = (1.0 / d) * (1.0 + (d - 1) / std::sqrt(static_cast<double>(n)));
  r.holds = r.xi <= r.bound + kTol.bound_slack;
  return r;
}

}  // namespace steerbound
