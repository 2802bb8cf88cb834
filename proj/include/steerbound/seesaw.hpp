#pragma once

// See-saw lower bound on the quantum value max |<F, sigma>|.
//
// Every assemblage is generated by a bipartite pure state |psi> on
// C^{dim_a} (x) C^d and measurements {E_x^a} on the first factor, with
//   <F, sigma> = <psi| sum_{x,a} E_x^a (x) F_x^a |psi>.
// The two blocks are optimized in turn:
//   * measurements, state fixed: setting x sees R_x^a = Psi F_x^a^T Psi^dagger
//     (Psi the dim_a x d coefficient matrix of psi). Two outcomes take the
//     exact optimum, the positive/negative spectral split of R^1 - R^2. More
//     outcomes use a rank-one projective measurement improved by greedy
//     outcome reassignment and pairwise 2x2 rotations, each of which solves
//     its restricted problem exactly.
//   * state, measurements fixed: the top eigenvector of the assembled operator.
// Neither step can lower the objective. Non-Hermitian functionals are handled
// through Re(e^{i theta} <F, sigma>) for theta in {0, pi/2, pi, 3 pi/2}; PSD
// functionals only need theta = 0.
//
// Results are lower bounds certified by an explicit assemblage.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "functionals.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace steerbound {

struct SeesawOptions {
  int dim_a = 0;  // 0: use the functional's dimension
  int restarts = 20;
  int max_iters = 500;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct SeesawResult {
  double value = 0.0;       // |<F, sigma>| of the certificate
  bool converged = false;   // best run stopped on tolerance, not on max_iters
  bool monotone = true;     // no run ever decreased by more than 1e-12
  int best_run = -1;
  int iterations = 0;       // of the best run
  int total_iterations = 0;
  std::vector<double> trace;  // objective after each iteration of the best run
  Assemblage certificate;
};

namespace detail {

struct ProjectiveMeasurement {
  ComplexMatrix basis;       // dim_a x dim_a unitary, columns are the measurement vectors
  std::vector<int> outcome;  // outcome assigned to each column
};

struct SeesawRun {
  double objective = -std::numeric_limits<double>::infinity();
  bool converged = false;
  bool monotone = true;
  int iterations = 0;
  std::vector<double> trace;
  ComplexMatrix psi;
  std::vector<ProjectiveMeasurement> measurements;
};

inline ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(gauss(rng), gauss(rng));
  }
  return m;
}

inline ComplexMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian(n, n, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

inline double expectation(const ComplexMatrix& op, const ComplexVector& v) { return v.dot(op * v).real(); }

inline void reassign(ProjectiveMeasurement& meas, const std::vector<ComplexMatrix>& r) {
  for (Eigen::Index j = 0; j < meas.basis.cols(); ++j) {
    const ComplexVector u = meas.basis.col(j);
    int best = 0;
    double best_v = expectation(r[0], u);
    for (std::size_t a = 1; a < r.size(); ++a) {
      const double v = expectation(r[a], u);
      if (v > best_v) {
        best_v = v;
        best = static_cast<int>(a);
      }
    }
    meas.outcome[static_cast<std::size_t>(j)] = best;
  }
}

inline double measurement_value(const ProjectiveMeasurement& meas, const std::vector<ComplexMatrix>& r) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < meas.basis.cols(); ++j) {
    total += expectation(r[static_cast<std::size_t>(meas.outcome[static_cast<std::size_t>(j)])], meas.basis.col(j));
  }
  return total;
}

inline void improve_measurement(ProjectiveMeasurement& meas, const std::vector<ComplexMatrix>& r) {
  const Eigen::Index dim = meas.basis.cols();
  if (r.size() == 2) {
    const auto sys = linalg::hermitian_eigensystem(linalg::hermitian_part(r[0] - r[1]));
    meas.basis = sys.vectors;
    for (Eigen::Index j = 0; j < dim; ++j) meas.outcome[static_cast<std::size_t>(j)] = sys.values[j] >= 0.0 ? 0 : 1;
    return;
  }
  reassign(meas, r);
  double scale = 0.0;
  for (const auto& op : r) scale = std::max(scale, linalg::max_abs(op));
  const double min_gain = 1e-15 * std::max(scale, 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool improved = false;
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = i + 1; j < dim; ++j) {
        const int a = meas.outcome[static_cast<std::size_t>(i)];
        const int b = meas.outcome[static_cast<std::size_t>(j)];
        if (a == b) continue;
        // Within span{u_i, u_j} the pair contributes Tr(R^b) + <v|R^a - R^b|v>
        // for the vector v kept on outcome a; the best v is the top
        // eigenvector of the 2x2 compression.
        ComplexMatrix pair(meas.basis.rows(), 2);
        pair.col(0) = meas.basis.col(i);
        pair.col(1) = meas.basis.col(j);
        const ComplexMatrix c = linalg::hermitian_part(pair.adjoint() * (r[static_cast<std::size_t>(a)] - r[static_cast<std::size_t>(b)]) * pair);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(c);
        const double gain = es.eigenvalues()(1) - c(0, 0).real();
        if (gain <= min_gain) continue;
        const Complex v1 = es.eigenvectors()(0, 1);
        const Complex v2 = es.eigenvectors()(1, 1);
        const ComplexVector ui = pair.col(0) * v1 + pair.col(1) * v2;
        const ComplexVector uj = -pair.col(0) * std::conj(v2) + pair.col(1) * std::conj(v1);
        meas.basis.col(i) = ui;
        meas.basis.col(j) = uj;
        improved = true;
      }
    }
    reassign(meas, r);
    if (!improved) break;
  }
}

inline std::vector<ComplexMatrix> conditioned_operators(const std::vector<ComplexMatrix>& coeffs, int x, int m,
                                                        const ComplexMatrix& psi) {
  std::vector<ComplexMatrix> r;
  r.reserve(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    const auto& f = coeffs[static_cast<std::size_t>(x) * m + a];
    r.push_back(linalg::hermitian_part(psi * f.transpose() * psi.adjoint()));
  }
  return r;
}

inline ComplexMatrix measurement_operator(const ProjectiveMeasurement& meas, int a) {
  ComplexMatrix e = ComplexMatrix::Zero(meas.basis.rows(), meas.basis.rows());
  for (Eigen::Index j = 0; j < meas.basis.cols(); ++j) {
    if (meas.outcome[static_cast<std::size_t>(j)] == a) e += meas.basis.col(j) * meas.basis.col(j).adjoint();
  }
  return e;
}

inline SeesawRun run_seesaw(const std::vector<ComplexMatrix>& coeffs, int n, int m, int d, int dim_a,
                            const SeesawOptions& opt, std::uint64_t run_seed) {
  std::mt19937_64 rng(run_seed);
  SeesawRun run;
  run.psi = random_gaussian(dim_a, d, rng);
  run.psi /= run.psi.norm();
  for (int x = 0; x < n; ++x) {
    ProjectiveMeasurement meas{random_unitary(dim_a, rng), std::vector<int>(static_cast<std::size_t>(dim_a), 0)};
    run.measurements.push_back(std::move(meas));
  }
  double previous = -std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opt.max_iters; ++it) {
    for (int x = 0; x < n; ++x) {
      improve_measurement(run.measurements[static_cast<std::size_t>(x)], conditioned_operators(coeffs, x, m, run.psi));
    }
    ComplexMatrix w = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim_a) * d, static_cast<Eigen::Index>(dim_a) * d);
    for (int x = 0; x < n; ++x) {
      for (int a = 0; a < m; ++a) {
        w += linalg::tensor(measurement_operator(run.measurements[static_cast<std::size_t>(x)], a),
                            coeffs[static_cast<std::size_t>(x) * m + a]);
      }
    }
    w = linalg::hermitian_part(w);
    const auto es = linalg::detail::solve(w, true);
    const double objective = es.eigenvalues()(w.rows() - 1);
    const ComplexVector top = es.eigenvectors().col(w.rows() - 1);
    for (int i = 0; i < dim_a; ++i) {
      for (int j = 0; j < d; ++j) run.psi(i, j) = top(static_cast<Eigen::Index>(i) * d + j);
    }
    run.trace.push_back(objective);
    run.iterations = it;
    if (objective < previous - 1e-12) run.monotone = false;
    run.objective = objective;
    if (it > 1 && objective - previous <= opt.tol * std::max(1.0, std::abs(objective))) {
      run.converged = true;
      break;
    }
    previous = objective;
  }
  return run;
}

// sigma_x^a = Tr_A((E_x^a (x) I)|psi><psi|) = Psi^T E^T conj(Psi).
inline Assemblage certificate_assemblage(const SeesawRun& run, int n, int m, int d) {
  Assemblage s;
  s.settings = n;
  s.outcomes = m;
  s.dimension = d;
  for (int x = 0; x < n; ++x) {
    for (int a = 0; a < m; ++a) {
      const ComplexMatrix e = measurement_operator(run.measurements[static_cast<std::size_t>(x)], a);
      s.entries.push_back(run.psi.transpose() * e.transpose() * run.psi.conjugate());
    }
  }
  return s;
}

}  // namespace detail

inline SeesawResult quantum_bound_seesaw(const SteeringFunctional& f, const SeesawOptions& opt = {}) {
  require(opt.restarts >= 1, "quantum_bound_seesaw: restarts must be >= 1");
  require(opt.max_iters >= 1, "quantum_bound_seesaw: max_iters must be >= 1");
  require(opt.tol > 0.0, "quantum_bound_seesaw: tol must be positive");
  require(opt.dim_a >= 0, "quantum_bound_seesaw: dim_a must be positive");
  const int dim_a = opt.dim_a > 0 ? opt.dim_a : f.dimension;
  const int n = f.settings;
  const int m = f.outcomes;
  const int d = f.dimension;

  std::vector<Complex> phases{1.0};
  if (!f.psd) phases.push_back(-1.0);
  if (!f.hermitian) phases = {1.0, Complex(0.0, 1.0), -1.0, Complex(0.0, -1.0)};

  std::vector<std::vector<ComplexMatrix>> hermitized;
  for (const Complex ph : phases) {
    std::vector<ComplexMatrix> c;
    for (const auto& e : f.entries) c.push_back(linalg::hermitian_part(e, ph));
    hermitized.push_back(std::move(c));
  }

  const std::uint64_t total_runs = static_cast<std::uint64_t>(opt.restarts) * phases.size();
  std::vector<detail::SeesawRun> runs(total_runs);
  std::vector<double> values(total_runs, 0.0);
  parallel_chunks(total_runs, resolve_threads(opt.threads), [&](std::uint64_t begin, std::uint64_t end, int) {
    for (std::uint64_t r = begin; r < end; ++r) {
      const auto& coeffs = hermitized[r % phases.size()];
      runs[r] = detail::run_seesaw(coeffs, n, m, d, dim_a, opt, splitmix64(opt.seed ^ splitmix64(r)));
      values[r] = std::abs(evaluate(f, detail::certificate_assemblage(runs[r], n, m, d)).raw);
    }
  });

  SeesawResult result;
  result.value = -1.0;
  for (std::uint64_t r = 0; r < total_runs; ++r) {
    result.total_iterations += runs[r].iterations;
    result.monotone = result.monotone && runs[r].monotone;
    if (values[r] > result.value) {
      result.value = values[r];
      result.best_run = static_cast<int>(r);
    }
  }
  const auto& best = runs[static_cast<std::size_t>(result.best_run)];
  result.converged = best.converged;
  result.iterations = best.iterations;
  result.trace = best.trace;
  result.certificate = detail::certificate_assemblage(best, n, m, d);
  return result;
}

}  // namespace steerbound
