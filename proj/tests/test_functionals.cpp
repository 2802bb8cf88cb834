#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "steerbound/functionals.hpp"

namespace sb = steerbound;
using sb::ComplexMatrix;

namespace {

sb::Assemblage maximally_mixed(int n, int m, int d) {
  std::vector<ComplexMatrix> members(static_cast<std::size_t>(n * m),
                                     ComplexMatrix::Identity(d, d) / static_cast<double>(m * d));
  return sb::make_assemblage(n, m, d, members);
}

}  // namespace

TEST(MubFunctional, ProjectorsAndFlags) {
  for (int d : {2, 3, 5}) {
    const auto f = sb::mub_functional(sb::build_mub_family(d, d + 1));
    EXPECT_EQ(f.settings, d + 1);
    EXPECT_EQ(f.outcomes, d);
    EXPECT_TRUE(f.hermitian);
    EXPECT_TRUE(f.psd);
    for (int x = 0; x < f.settings; ++x) {
      ComplexMatrix sum = ComplexMatrix::Zero(d, d);
      for (int a = 0; a < d; ++a) {
        const auto& p = f.at(x, a);
        EXPECT_NEAR(p.trace().real(), 1.0, 1e-12);
        EXPECT_LE(sb::linalg::max_abs(p * p - p), 1e-12);
        sum += p;
      }
      EXPECT_LE(sb::linalg::max_abs(sum - ComplexMatrix::Identity(d, d)), 1e-12);
    }
  }
}

TEST(CliffordFunctional, CoefficientsAreShiftedProjectors) {
  const auto fam = sb::build_clifford_family(5);
  const auto f = sb::clifford_functional(fam);
  const auto p = sb::clifford_projectors(fam);
  const ComplexMatrix half = ComplexMatrix::Identity(fam.dimension(), fam.dimension()) * 0.5;
  EXPECT_TRUE(f.hermitian);
  EXPECT_FALSE(f.psd);
  for (int x = 0; x < 5; ++x) {
    EXPECT_EQ(sb::linalg::max_abs(f.at(x, 0) + f.at(x, 1)), 0.0);
    EXPECT_LE(sb::linalg::max_abs(f.at(x, 0) - (p[2 * x] - half)), 1e-15);
    EXPECT_LE(sb::linalg::max_abs(p[2 * x] * p[2 * x] - p[2 * x]), 1e-12);
  }
}

TEST(DichotomicFunctional, TracelessDifferenceOfProjectors) {
  const auto fam = sb::build_clifford_family(4);
  const auto f = sb::as_steering_functional(sb::dichotomic_functional(fam));
  const auto p = sb::clifford_projectors(fam);
  EXPECT_EQ(f.kind, sb::FunctionalKind::clifford_dichotomic);
  EXPECT_EQ(f.outcomes, 2);
  for (int x = 0; x < 4; ++x) {
    EXPECT_NEAR(std::abs(f.at(x, 0).trace()), 0.0, 1e-14);
    EXPECT_LE(sb::linalg::max_abs(f.at(x, 0) - (p[2 * x] - p[2 * x + 1])), 1e-15);
    EXPECT_EQ(sb::linalg::max_abs(f.at(x, 1) + f.at(x, 0)), 0.0);
  }
}

TEST(RandomFunctional, ShapeAndEntries) {
  const int d = 4;
  const auto f = sb::random_functional(d, 99);
  EXPECT_EQ(f.settings, d);
  EXPECT_EQ(f.outcomes, d);
  EXPECT_FALSE(f.hermitian);
  ASSERT_TRUE(f.seed.has_value());
  for (const auto& e : f.entries) {
    for (int k = 0; k < d; ++k) EXPECT_DOUBLE_EQ(std::abs(e(0, k)), 0.25);
    EXPECT_EQ(e.bottomRows(d - 1).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(RandomFunctional, DeterministicPerSeed) {
  const auto a = sb::random_functional(5, 7);
  const auto b = sb::random_functional(5, 7);
  const auto c = sb::random_functional(5, 8);
  bool differs = false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    EXPECT_EQ(sb::linalg::max_abs(a.entries[i] - b.entries[i]), 0.0);
    differs = differs || sb::linalg::max_abs(a.entries[i] - c.entries[i]) > 0.0;
  }
  EXPECT_TRUE(differs);
}

TEST(RandomFunctional, SignsFollowTopBitOfEngineDraws) {
  std::mt19937_64 engine(7);
  const auto f = sb::random_functional(3, 7);
  for (const auto& e : f.entries) {
    for (int k = 0; k < 3; ++k) EXPECT_EQ(e(0, k).real() < 0.0, (engine() >> 63) == 1);
  }
}

TEST(Evaluate, CanonicalAssemblagesAttainQuantumValues) {
  for (int d : {2, 3, 5}) {
    const auto f = sb::mub_functional(sb::build_mub_family(d, d + 1));
    const auto e = sb::evaluate(f, sb::canonical_quantum_assemblage(f));
    EXPECT_NEAR(e.value, d + 1.0, 1e-12);
    EXPECT_FALSE(e.imaginary_warning);
  }
  for (int n : {2, 5, 8}) {
    const auto fam = sb::build_clifford_family(n);
    const auto f = sb::clifford_functional(fam);
    EXPECT_NEAR(sb::evaluate(f, sb::canonical_quantum_assemblage(f)).value, n / 2.0, 1e-12);
    const auto g = sb::as_steering_functional(sb::dichotomic_functional(fam));
    EXPECT_NEAR(sb::evaluate(g, sb::canonical_quantum_assemblage(g)).value, static_cast<double>(n), 1e-12);
  }
}

TEST(Evaluate, CanonicalAssemblagesAreValid) {
  const auto f = sb::clifford_functional(sb::build_clifford_family(6));
  const auto r = sb::check_assemblage(sb::canonical_quantum_assemblage(f));
  EXPECT_TRUE(r.valid);
  EXPECT_LE(r.signaling_deviation, 1e-12);
  EXPECT_GE(r.min_eigenvalue, -1e-12);
}

TEST(Evaluate, MaximallyMixedAgainstMub) {
  // sigma = I/(d^2): each projector contributes 1/d^2, d(d+1) of them.
  const auto f = sb::mub_functional(sb::build_mub_family(3, 4));
  EXPECT_NEAR(sb::evaluate(f, maximally_mixed(4, 3, 3)).value, 4.0 / 3.0, 1e-12);
}

TEST(Evaluate, BilinearInFunctionalAndAssemblage) {
  std::mt19937_64 rng(31);
  const int n = 3, m = 2, d = 3;
  std::vector<ComplexMatrix> f1, f2, s1, s2;
  for (int i = 0; i < n * m; ++i) {
    f1.push_back(oracle::random_matrix(d, rng));
    f2.push_back(oracle::random_matrix(d, rng));
    s1.push_back(oracle::random_matrix(d, rng));
    s2.push_back(oracle::random_matrix(d, rng));
  }
  const auto table = [&](std::vector<ComplexMatrix> v) {
    sb::Assemblage s;
    s.settings = n;
    s.outcomes = m;
    s.dimension = d;
    s.entries = std::move(v);
    return s;
  };
  const sb::Complex alpha(0.7, -1.3), beta(-2.0, 0.4);
  std::vector<ComplexMatrix> fc, sc;
  for (int i = 0; i < n * m; ++i) {
    fc.push_back(alpha * f1[i] + beta * f2[i]);
    sc.push_back(alpha * s1[i] + beta * s2[i]);
  }
  using K = sb::FunctionalKind;
  const auto F1 = sb::make_functional(K::custom, n, m, d, f1);
  const auto F2 = sb::make_functional(K::custom, n, m, d, f2);
  const auto FC = sb::make_functional(K::custom, n, m, d, fc);
  const auto lhs = sb::evaluate(FC, table(s1)).raw;
  const auto rhs = alpha * sb::evaluate(F1, table(s1)).raw + beta * sb::evaluate(F2, table(s1)).raw;
  EXPECT_LE(std::abs(lhs - rhs), 1e-10);
  const auto lhs2 = sb::evaluate(F1, table(sc)).raw;
  const auto rhs2 = alpha * sb::evaluate(F1, table(s1)).raw + beta * sb::evaluate(F1, table(s2)).raw;
  EXPECT_LE(std::abs(lhs2 - rhs2), 1e-10);
  // Direct trace formula.
  sb::Complex direct = 0.0;
  for (int i = 0; i < n * m; ++i) direct += (f1[i] * s1[i]).trace();
  EXPECT_LE(std::abs(sb::evaluate(F1, table(s1)).raw - direct), 1e-10);
}

TEST(Evaluate, ShapeMismatchIsPrecondition) {
  const auto f = sb::mub_functional(sb::build_mub_family(2, 3));
  try {
    sb::evaluate(f, maximally_mixed(2, 2, 2));
    FAIL();
  } catch (const sb::Error& e) {
    EXPECT_EQ(e.kind(), sb::ErrorKind::precondition);
    EXPECT_NE(std::string(e.what()).find("does not match"), std::string::npos);
  }
}

TEST(Assemblage, RejectsSignalingAndNegativity) {
  const int d = 2;
  const ComplexMatrix p0 = sb::linalg::pauli::identity() * 0.25;
  std::vector<ComplexMatrix> ok{p0, p0, p0, p0};
  EXPECT_NO_THROW(sb::make_assemblage(2, 2, d, ok));
  auto signaling = ok;
  signaling[2] = (sb::linalg::pauli::identity() + sb::linalg::pauli::z()) * 0.25;
  sb::Assemblage s;
  s.settings = 2;
  s.outcomes = 2;
  s.dimension = d;
  s.entries = signaling;
  const auto r = sb::check_assemblage(s);
  EXPECT_FALSE(r.valid);
  EXPECT_NEAR(r.signaling_deviation, 0.25, 1e-15);
  auto negative = ok;
  negative[0] = sb::linalg::pauli::z() * 0.5 + p0;
  negative[1] = p0 - sb::linalg::pauli::z() * 0.5;
  EXPECT_THROW(sb::make_assemblage(2, 2, d, negative), sb::Error);
}

TEST(Assemblage, CanonicalRejectsUnsupportedKinds) {
  EXPECT_THROW(sb::canonical_quantum_assemblage(sb::random_functional(3, 1)), sb::Error);
}

TEST(FunctionalKind, RoundTripNames) {
  using K = sb::FunctionalKind;
  for (K k : {K::mub, K::clifford, K::clifford_dichotomic, K::random, K::custom}) {
    EXPECT_EQ(sb::parse_kind(sb::to_string(k)), k);
  }
  EXPECT_EQ(sb::parse_kind("dichotomic"), K::clifford_dichotomic);
  EXPECT_FALSE(sb::parse_kind("bell").has_value());
}
