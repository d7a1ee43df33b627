#pragma once

// Conditioning instrumentation and benchmark statistics.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nal/problem.hpp"
#include "nal/solver.hpp"

namespace nal {

// Interior-point normal-equation weight diag(x / s) on an orthant-only cone,
// clipped to [1e-300, 1e300]. Throws ConeNotSupported for other cones.
Vector ipm_weight_lp(const ConeDesc& cone, const Element& x, const Element& s);
// A diag(d) A'.
Matrix ipm_scm(const LinearMap& A, const Vector& d);

struct CondScanRow {
  int k = 0;
  double mu = 0.0;
  double cond_nal = 0.0;
  std::optional<double> cond_ipm;
  // cond(A A*) / lambda_min(weight): an upper bound for cond_nal.
  double cond_bound = 0.0;
  double weight_min = 0.0;
  double weight_max = 0.0;
};

struct CondScanOptions {
  double mu_max = 1e-1;
  double mu_min = 1e-5;
  // Rows with mu above this are left out of the slope fit.
  double fit_mu_max = 1e-2;
  bool compare_ipm = false;
};

struct CondScanResult {
  std::string problem;
  std::vector<CondScanRow> rows;
  std::optional<double> slope_nal;
  std::optional<double> slope_ipm;
  double geomean_nal = 0.0;
  std::optional<double> geomean_ipm;
  bool bound_holds = true;
};

// Runs the solver and records the Schur complement condition number at the
// first inner step of every outer iteration with mu in [mu_min, mu_max].
CondScanResult cond_scan(const Problem& problem, const SolverConfig& cfg,
                         const CondScanOptions& opts = {});

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

enum class ProblemClass { kLp, kSocp, kSdp };

std::string_view to_string(ProblemClass cls);
ProblemClass parse_problem_class(std::string_view text);
ProblemClass classify(const ConeDesc& cone);
// Time shifts 1 / 10 / 100 and time limits 3600 / 7200 / 43200 seconds.
double default_shift(ProblemClass cls);
double default_maxtime(ProblemClass cls);

// Shifted geometric mean (prod (t_i + sh))^(1/n) - sh, evaluated in log space.
// Failed runs must already carry the time limit.
double sgm(const std::vector<double>& times, double sh);
double sgm(const std::vector<double>& times, ProblemClass cls);

struct PerfProfile {
  std::vector<double> taus;
  // rho[s][t] is the fraction of problems solver s solves within taus[t]
  // times the best time.
  std::vector<std::vector<double>> rho;
};

// times[s][p] is solver s's time on problem p; failures are +infinity.
PerfProfile perf_profile(const std::vector<std::vector<double>>& times,
                         const std::vector<double>& taus);
// Evaluates on every distinct finite ratio (and 1), which are the steps.
PerfProfile perf_profile(const std::vector<std::vector<double>>& times);

struct BenchEntry {
  std::string solver;
  std::string problem;
  double seconds = 0.0;
  bool solved = false;
};

struct SgmRow {
  std::string cls;
  std::string solver;
  double sgm = 0.0;
  double solved_fraction = 0.0;
};

// Groups entries per solver; unsolved runs count as maxtime.
std::vector<SgmRow> sgm_table(const std::vector<BenchEntry>& entries,
                              ProblemClass cls);
// Profile over the problems every solver reports on (missing or unsolved
// runs count as failures). Solver order follows first appearance.
PerfProfile bench_profile(const std::vector<BenchEntry>& entries,
                          std::vector<std::string>& solvers);

// Reads "solver,problem,seconds,solved" rows (header optional).
std::vector<BenchEntry> read_times_csv(std::istream& in);

void write_condscan_csv(std::ostream& out,
                        const std::vector<CondScanResult>& scans);
void write_sgm_csv(std::ostream& out, const std::vector<SgmRow>& rows);
void write_profile_csv(std::ostream& out, const PerfProfile& profile,
                       const std::vector<std::string>& solvers);

}  // namespace nal
