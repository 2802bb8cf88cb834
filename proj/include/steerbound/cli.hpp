#pragma once

// Command implementations behind the `steerbound` executable. Each command
// takes a validated RunConfig and output streams and returns a process exit
// code; argument parsing lives in tools/steerbound.cpp.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "clifford.hpp"
#include "config.hpp"
#include "error.hpp"
#include "functionals.hpp"
#include "io.hpp"
#include "mub.hpp"
#include "verify.hpp"

namespace steerbound::cli {

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kParseFailure = 3,
  kPreconditionFailure = 4,
  kAssertionFailure = 5,
  kCapExceeded = 6,
};

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse: return kParseFailure;
    case ErrorKind::precondition: return kPreconditionFailure;
    case ErrorKind::assertion: return kAssertionFailure;
    case ErrorKind::cap_exceeded: return kCapExceeded;
  }
  return kInternal;
}

enum class Command { generate, bounds, sweep, verify };

struct RunConfig {
  Command command = Command::generate;
  std::string kind;
  std::vector<int> d;  // one value for generate, the range for sweep
  std::vector<int> n;
  std::uint64_t seed = 1;
  bool paper_dim = false;
  std::uint64_t cap = kDefaultEnumerationCap;
  int restarts = 20;
  int max_iters = 500;
  double tol = 1e-10;
  int angular_res = kDefaultAngularResolution;
  int threads = 0;  // 0: STEERBOUND_THREADS or 1
  std::string in;
  std::string out;
  std::string format;  // json | csv; empty picks the command default
  std::string filter;
  double perturb_mub = 0.0;
};

inline void validate(const RunConfig& cfg) {
  for (int v : cfg.d) require(v >= 1 && v <= kMaxDimension, "--d values must lie in [1, " + std::to_string(kMaxDimension) + "]");
  for (int v : cfg.n) require(v >= 1 && v <= 4096, "--n values must lie in [1, 4096]");
  require(cfg.cap >= 1, "--cap must be >= 1");
  require(cfg.restarts >= 1, "--restarts must be >= 1");
  require(cfg.max_iters >= 1, "--max-iters must be >= 1");
  require(cfg.tol > 0.0 && std::isfinite(cfg.tol), "--tol must be positive");
  require(cfg.angular_res >= 8, "--angular-res must be >= 8");
  require(cfg.threads >= 0 && cfg.threads <= 1024, "--threads must lie in [0, 1024]");
  require(cfg.format.empty() || cfg.format == "json" || cfg.format == "csv", "--format must be json or csv");
  if (!cfg.kind.empty()) {
    const auto k = parse_kind(cfg.kind);
    require(k && *k != FunctionalKind::custom, "--kind must be one of mub, clifford, dichotomic, random");
  }
  switch (cfg.command) {
    case Command::generate:
      require(!cfg.kind.empty(), "generate: --kind is required");
      require(cfg.format.empty() || cfg.format == "json", "generate: only --format json is supported");
      require(cfg.d.size() <= 1 && cfg.n.size() <= 1, "generate: --d and --n take a single value");
      break;
    case Command::bounds:
      require(!cfg.in.empty(), "bounds: --in is required");
      require(cfg.format.empty() || cfg.format == "json", "bounds: only --format json is supported");
      break;
    case Command::sweep:
      require(!cfg.kind.empty(), "sweep: --kind is required");
      break;
    case Command::verify:
      require(cfg.format.empty() || cfg.format == "json", "verify: only --format json is supported");
      break;
  }
}

inline BoundsOptions bounds_options(const RunConfig& cfg) {
  BoundsOptions o;
  o.enumeration.cap = cfg.cap;
  o.enumeration.threads = cfg.threads;
  o.enumeration.angular_resolution = cfg.angular_res;
  o.seesaw.restarts = cfg.restarts;
  o.seesaw.max_iters = cfg.max_iters;
  o.seesaw.tol = cfg.tol;
  o.seesaw.seed = cfg.seed;
  o.seesaw.threads = cfg.threads;
  return o;
}

// d is used by mub and random kinds, n by mub (default d + 1) and the
// clifford kinds.
inline SteeringFunctional build_functional(FunctionalKind kind, int d, std::optional<int> n, std::uint64_t seed,
                                           bool paper_dim) {
  switch (kind) {
    case FunctionalKind::mub: return mub_functional(build_mub_family(d, n.value_or(d + 1)));
    case FunctionalKind::clifford:
      require(n.has_value(), "clifford functional needs --n");
      return clifford_functional(build_clifford_family(*n, paper_dim));
    case FunctionalKind::clifford_dichotomic:
      require(n.has_value(), "dichotomic functional needs --n");
      return as_steering_functional(dichotomic_functional(build_clifford_family(*n, paper_dim)));
    case FunctionalKind::random: return random_functional(d, seed);
    default: fail(ErrorKind::precondition, "unsupported kind");
  }
}

inline void emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out.empty()) {
    out << content;
  } else {
    io::write_file(cfg.out, content);
  }
}

inline int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  const auto kind = *parse_kind(cfg.kind);
  const bool needs_d = kind == FunctionalKind::mub || kind == FunctionalKind::random;
  require(!needs_d || !cfg.d.empty(), "generate: --d is required for kind " + cfg.kind);
  std::optional<int> n;
  if (!cfg.n.empty()) n = cfg.n.front();
  const int d = cfg.d.empty() ? 0 : cfg.d.front();
  io::FunctionalDocument doc{build_functional(kind, d, n, cfg.seed, cfg.paper_dim), kVersion};
  emit(cfg, io::serialize_functional(doc), out);
  return kOk;
}

inline std::string fmt(double v, int precision = 10) {
  if (!std::isfinite(v)) return "-";
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

inline void print_report(const BoundsReport& r, std::ostream& out) {
  const auto pass = [](bool b) { return b ? "PASS" : "FAIL"; };
  out << "kind           " << to_string(r.kind) << "\n";
  out << "(n, m, d)      (" << r.settings << ", " << r.outcomes << ", " << r.dimension << ")\n";
  out << "S_LHS exact    " << fmt(r.lhs.value) << "  [" << r.lhs.method << ", " << r.lhs.strategies
      << " strategies, witness";
  for (int a : r.lhs.witness.assignments) out << ' ' << a + 1;
  out << "]\n";
  for (const auto& b : r.lhs_analytic) {
    out << "  <= " << b.name << "  " << b.formula << " = " << fmt(b.value) << "  " << pass(b.holds) << "\n";
  }
  out << "S_Q            " << fmt(r.quantum.value) << "  [" << r.quantum.method;
  if (r.quantum.canonical_value) out << ", canonical " << fmt(*r.quantum.canonical_value);
  out << ", upper " << fmt(r.quantum.upper) << "]\n";
  out << "V              " << (r.violation ? fmt(*r.violation) : std::string("undefined")) << "\n";
  for (const auto& b : r.violation_lower) {
    out << "  >= " << b.name << "  " << b.formula << " = " << fmt(b.value) << "  " << pass(b.holds) << "\n";
  }
  out << "all checks     " << pass(r.all_passed) << "\n";
}

inline std::string utc_timestamp() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const auto doc = io::load_functional(cfg.in);
  const auto opts = bounds_options(cfg);
  const auto report = violation(doc.functional, opts);
  auto j = io::report_to_json(report, opts.seesaw);
  j["diagnostics"]["timestamp"] = utc_timestamp();
  if (!cfg.out.empty()) io::write_file(cfg.out, io::dump_canonical(j));
  print_report(report, out);
  return report.all_passed ? kOk : kAssertionFailure;
}

inline io::SweepRow sweep_row(int parameter, const BoundsReport& r) {
  io::SweepRow row;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.parameter = parameter;
  row.s_lhs_exact = r.lhs.value;
  row.s_lhs_analytic = nan;
  for (const auto& b : r.lhs_analytic) row.s_lhs_analytic = std::isnan(row.s_lhs_analytic) ? b.value : std::min(row.s_lhs_analytic, b.value);
  row.s_q = r.quantum.value;
  row.violation = r.violation.value_or(nan);
  row.paper_lower_bound = nan;
  for (const auto& b : r.violation_lower) {
    row.paper_lower_bound = std::isnan(row.paper_lower_bound) ? b.value : std::max(row.paper_lower_bound, b.value);
  }
  row.runtime_ms = r.diagnostics.elapsed_ms;
  return row;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto kind = *parse_kind(cfg.kind);
  const bool over_d = kind == FunctionalKind::mub || kind == FunctionalKind::random;
  const std::vector<int>& range = over_d ? cfg.d : cfg.n;
  const bool csv = cfg.format != "json";
  const auto opts = bounds_options(cfg);

  std::string text = csv ? std::string(io::kSweepHeader) + "\n" : std::string();
  io::json rows = io::json::array();
  std::vector<double> violations;
  int status = kOk;
  for (int p : range) {
    const auto f = over_d ? build_functional(kind, p, std::nullopt, cfg.seed, cfg.paper_dim)
                          : build_functional(kind, 0, p, cfg.seed, cfg.paper_dim);
    const auto report = violation(f, opts);
    const auto row = sweep_row(p, report);
    if (csv) {
      text += io::sweep_row_csv(row) + "\n";
    } else {
      rows.push_back(io::sweep_row_json(row));
    }
    if (!report.all_passed) {
      err << "sweep: bound assertion failed at row\n" << io::kSweepHeader << "\n" << io::sweep_row_csv(row) << "\n";
      status = kAssertionFailure;
      break;
    }
    violations.push_back(row.violation);
  }
  bool increasing = true;
  for (std::size_t i = 1; i < violations.size(); ++i) increasing = increasing && violations[i] > violations[i - 1];
  if (csv) {
    if (!violations.empty()) text += std::string("# violation strictly increasing: ") + (increasing ? "yes" : "no") + "\n";
  } else {
    text = io::dump_canonical({{"rows", rows}, {"violation_strictly_increasing", increasing}});
  }
  emit(cfg, text, out);
  return status;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  verify::SuiteOptions opt;
  opt.filter = cfg.filter;
  opt.mub_perturbation = cfg.perturb_mub;
  opt.seed = cfg.seed;
  opt.threads = cfg.threads;
  opt.restarts = cfg.restarts;
  opt.max_iters = cfg.max_iters;
  opt.tol = cfg.tol;
  if (!cfg.filter.empty()) {
    bool any = false;
    for (const auto& g : verify::groups()) any = any || std::string(g.name).find(cfg.filter) != std::string::npos;
    require(any, "verify: --filter '" + cfg.filter + "' matches no group");
  }
  const auto checks = verify::run_suite(opt);
  int failed = 0;
  io::json list = io::json::array();
  for (const auto& c : checks) {
    failed += c.passed ? 0 : 1;
    out << (c.passed ? "PASS  " : "FAIL  ") << std::left << std::setw(12) << c.group << std::setw(46) << c.name
        << " measured " << fmt(c.measured, 6) << "  threshold " << fmt(c.threshold, 6) << "\n";
    list.push_back({{"group", c.group}, {"name", c.name}, {"passed", c.passed}, {"measured", c.measured},
                    {"threshold", c.threshold}});
  }
  out << checks.size() - failed << "/" << checks.size() << " checks passed\n";
  if (failed > 0) {
    out << "failed:";
    for (const auto& c : checks) {
      if (!c.passed) out << "\n  " << c.group << ": " << c.name;
    }
    out << "\n";
  }
  if (!cfg.out.empty()) {
    io::write_file(cfg.out, io::dump_canonical({{"checks", list},
                                                {"passed", static_cast<int>(checks.size()) - failed},
                                                {"failed", failed},
                                                {"all_passed", failed == 0}}));
  }
  return failed == 0 ? kOk : kAssertionFailure;
}

// Runs one command, mapping library errors to exit codes.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    switch (cfg.command) {
      case Command::generate: return cmd_generate(cfg, out);
      case Command::bounds: return cmd_bounds(cfg, out);
      case Command::sweep: return cmd_sweep(cfg, out, err);
      case Command::verify: return cmd_verify(cfg, out);
    }
  } catch (const Error& e) {
    err << "steerbound: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "steerbound: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

}  // namespace steerbound::cli
