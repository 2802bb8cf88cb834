#pragma once

// Property suite behind `steerbound verify`. Each group is a list of named
// checks with a pass flag and the measured quantity.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "clifford.hpp"
#include "functionals.hpp"
#include "mub.hpp"
#include "seesaw.hpp"

namespace steerbound::verify {

struct Check {
  std::string group;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
};

struct SuiteOptions {
  std::string filter;          // substring of the group name; empty runs all
  double mub_perturbation = 0.0;  // scale one vector of the d = 5 family by (1 + value)
  std::uint64_t seed = 1;
  int threads = 1;
  int restarts = 20;
  int max_iters = 500;
  double tol = 1e-10;
};

inline Check make_check(std::string group, std::string name, bool passed, double measured, double threshold) {
  return Check{std::move(group), std::move(name), passed, measured, threshold};
}

inline ProbabilityTable random_probability_table(int n, int d, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  ProbabilityTable p(n, d);
  for (int x = 0; x < n; ++x) {
    for (int a = 0; a < d; ++a) p(x, a) = expo(rng);
    p.row(x) /= p.row(x).sum();
  }
  return p;
}

inline void mub_group(const SuiteOptions& opt, std::vector<Check>& out) {
  for (int d : {2, 3, 5, 7, 11, 13}) {
    MubFamily f = build_mub_family(d, d + 1);
    if (d == 5 && opt.mub_perturbation != 0.0) f.bases[1].col(0) *= 1.0 + opt.mub_perturbation;
    const auto rep = verify_unbiasedness(f);
    out.push_back(make_check("mub", "orthonormality d=" + std::to_string(d), rep.orthonormality_deviation <= kTol.mub,
                             rep.orthonormality_deviation, kTol.mub));
    out.push_back(make_check("mub", "unbiasedness d=" + std::to_string(d), rep.unbiasedness_deviation <= kTol.mub,
                             rep.unbiasedness_deviation, kTol.mub));
    double resolvent = 0.0;
    for (int x = 0; x < f.count(); ++x) {
      ComplexMatrix sum = ComplexMatrix::Zero(d, d);
      for (int a = 0; a < d; ++a) sum += f.projector(x, a);
      resolvent = std::max(resolvent, linalg::max_abs(sum - ComplexMatrix::Identity(d, d)));
    }
    out.push_back(make_check("mub", "resolution of identity d=" + std::to_string(d), resolvent <= kTol.mub, resolvent,
                             kTol.mub));
  }
}

inline void clifford_group(const SuiteOptions& opt, std::vector<Check>& out) {
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss;
  for (int n = 1; n <= 12; ++n) {
    const auto fam = build_clifford_family(n);
    const auto rep = verify_anticommutation(fam);
    out.push_back(make_check("clifford", "anticommutation n=" + std::to_string(n), rep.passed, rep.max_deviation,
                             kTol.clifford));
    double square_dev = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      ComplexMatrix s = ComplexMatrix::Zero(fam.dimension(), fam.dimension());
      double norm2 = 0.0;
      for (const auto& a : fam.observables) {
        const double c = gauss(rng);
        s += c * a;
        norm2 += c * c;
      }
      square_dev = std::max(square_dev,
                            linalg::max_abs(s * s - norm2 * ComplexMatrix::Identity(fam.dimension(), fam.dimension())));
    }
    out.push_back(make_check("clifford", "square identity n=" + std::to_string(n), square_dev <= 1e-10, square_dev, 1e-10));
  }
}

inline void gram_group(const SuiteOptions& opt, std::vector<Check>& out) {
  std::mt19937_64 rng(opt.seed);
  for (auto [d, n] : {std::pair{2, 3}, std::pair{3, 4}}) {
    const auto fam = build_mub_family(d, n);
    double worst_dev = 0.0;
    double worst_margin = -std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
      const auto c = gram_norm_identity_check(fam, random_probability_table(n, d, rng));
      worst_dev = std::max(worst_dev, c.deviation);
      worst_margin = std::max(worst_margin, c.scaled_norm - c.estimate);
    }
    const std::string tag = "(d=" + std::to_string(d) + ",n=" + std::to_string(n) + ")";
    out.push_back(make_check("gram", "frame/gram norm identity " + tag, worst_dev <= kTol.gram_identity, worst_dev,
                             kTol.gram_identity));
    out.push_back(make_check("gram", "scaled gram estimate " + tag, worst_margin <= kTol.gram_identity, worst_margin,
                             kTol.gram_identity));
  }
}

inline void dominance_group(const SuiteOptions& opt, std::vector<Check>& out) {
  EnumerationOptions en;
  en.threads = opt.threads;
  const auto check_functional = [&](const SteeringFunctional& f, const std::string& tag) {
    const auto lhs = lhs_bound_exact(f, en);
    for (const auto& b : applicable_lhs_bounds(f)) {
      out.push_back(make_check("dominance", tag + " " + b.name, lhs.value <= b.value + kTol.bound_slack,
                               lhs.value - b.value, kTol.bound_slack));
    }
    const auto q = quantum_bound(f);
    out.push_back(make_check("dominance", tag + " steering witness", q.value > lhs.value, q.value - lhs.value, 0.0));
  };
  for (auto [d, n] : {std::pair{2, 3}, std::pair{3, 4}, std::pair{5, 6}, std::pair{7, 4}}) {
    check_functional(mub_functional(build_mub_family(d, n)),
                     "mub(d=" + std::to_string(d) + ",n=" + std::to_string(n) + ")");
  }
  for (int n = 2; n <= 8; ++n) {
    const auto fam = build_clifford_family(n);
    check_functional(clifford_functional(fam), "clifford(n=" + std::to_string(n) + ")");
    check_functional(as_steering_functional(dichotomic_functional(fam)), "dichotomic(n=" + std::to_string(n) + ")");
  }
}

inline void seesaw_group(const SuiteOptions& opt, std::vector<Check>& out) {
  SeesawOptions ss;
  ss.restarts = opt.restarts;
  ss.max_iters = opt.max_iters;
  ss.tol = opt.tol;
  ss.seed = opt.seed;
  ss.threads = opt.threads;
  const auto run = [&](const SteeringFunctional& f, const std::string& tag) {
    const double target = *analytic_quantum_value(f);
    const auto r = quantum_bound_seesaw(f, ss);
    out.push_back(make_check("seesaw", tag + " attainment", r.value >= 0.99 * target, r.value / target, 0.99));
    out.push_back(make_check("seesaw", tag + " below analytic", r.value <= target + 1e-7, r.value - target, 1e-7));
    out.push_back(make_check("seesaw", tag + " monotone", r.monotone, r.monotone ? 1.0 : 0.0, 1.0));
  };
  run(mub_functional(build_mub_family(2, 3)), "mub(d=2,n=3)");
  run(mub_functional(build_mub_family(3, 4)), "mub(d=3,n=4)");
  run(clifford_functional(build_clifford_family(2)), "clifford(n=2)");
  run(clifford_functional(build_clifford_family(4)), "clifford(n=4)");
}

inline void uncertainty_group(const SuiteOptions&, std::vector<Check>& out) {
  for (auto [d, n] : {std::pair{2, 3}, std::pair{3, 4}}) {
    const auto fam = build_mub_family(d, n);
    const std::uint64_t total = strategy_count(n, d, kDefaultEnumerationCap);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < total; ++i) {
      const auto r = fine_grained_xi(fam, decode_strategy(i, n, d));
      worst = std::max(worst, r.xi - r.bound);
    }
    out.push_back(make_check("uncertainty", "fine-grained bound (d=" + std::to_string(d) + ",n=" + std::to_string(n) + ")",
                             worst <= kTol.bound_slack, worst, kTol.bound_slack));
  }
}

struct Group {
  const char* name;
  std::function<void(const SuiteOptions&, std::vector<Check>&)> run;
};

inline std::vector<Group> groups() {
  return {{"mub", mub_group},
          {"clifford", clifford_group},
          {"gram", gram_group},
          {"dominance", dominance_group},
          {"seesaw", seesaw_group},
          {"uncertainty", uncertainty_group}};
}

inline std::vector<Check> run_suite(const SuiteOptions& opt) {
  std::vector<Check> out;
  for (const auto& g : groups()) {
    if (!opt.filter.empty() && std::string(g.name).find(opt.filter) == std::string::npos) continue;
    g.run(opt, out);
  }
  return out;
}

}  // namespace steerbound::verify
