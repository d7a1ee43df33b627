#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nal/cones.hpp"
#include "nal/errors.hpp"
#include "nal/linalg.hpp"
#include "nal/problem.hpp"

namespace nal {

struct SolverConfig {
  double mu0 = 0.1;
  double rho0 = 1.0;
  double sigma = 0.5;
  double rho_min = 1e-2;
  double kappa = 0.25;
  double tol = 1e-6;
  int max_outer = 100;
  int max_inner = 200;  // per outer iteration
  Element x0;           // empty means zero
  Vector lambda0;       // empty means zero
  // Cross-checks the two merit formulas and the central-path identities at
  // every inner step. Defaults to on in debug builds or with NAL_DEBUG=1.
  bool debug_checks = default_debug_checks();
  // Adds a dense eigensolve of the Schur complement to every log record.
  bool record_cond = false;

  static bool default_debug_checks();
  // Throws InvalidArgument naming the offending field.
  void validate() const;
};

// s, z and their common spectral frame. The shared frame lets weight_apply
// work in closed form.
struct CentralPair {
  Element s;
  Element z;
  Spectral s_spec;
  Spectral z_spec;
};

// Closed-form minimizer s of the augmented Lagrangian in s and the matching
// z = s + rho x - c + A* lambda, with s o z = rho mu e.
CentralPair compute_sz(const Problem& problem, const Element& x,
                       const Vector& lambda, double mu, double rho);

struct SolverState {
  Element x;
  Vector lambda;
  CentralPair sz;
  double mu = 0.0;
  double rho = 0.0;
  int k = 0;
  int j = 0;
  long total_newton = 0;
};

// Builds a state and fills s, z from the closed form.
SolverState make_state(const Problem& problem, Element x, Vector lambda,
                       double mu, double rho);
// Recomputes s, z after x, lambda, mu or rho changed.
void refresh(const Problem& problem, SolverState& state);

Vector grad_eta(const Problem& problem, const SolverState& state);
double eval_eta(const Problem& problem, const SolverState& state);

struct NewtonStep {
  Vector dlambda;
  double delta = 0.0;
  // sqrt(d' M d / (rho mu)), filled only when requested.
  std::optional<double> delta_quadratic;
  double cholesky_shift = 0.0;
  ScmMatrix scm;
};

// Solves M d = -grad with M the Schur complement at the state.
NewtonStep newton_step(const Problem& problem, const SolverState& state,
                       bool with_quadratic_form = false);

inline constexpr double kFullStepThreshold = 0.26794919243112270;  // 2 - sqrt 3

double step_length(double delta);

struct Residuals {
  double pinfeas = 0.0;
  double dinfeas = 0.0;
  double pinfeas_unscaled = 0.0;
  double comp = 0.0;
};

Residuals residuals(const Problem& problem, const SolverState& state);

struct IterRecord {
  int k = 0;
  int j = 0;
  double mu = 0.0;
  double rho = 0.0;
  double delta = 0.0;
  double alpha = 0.0;  // 0 on the row where the inner stop test holds
  double pinfeas = 0.0;
  double dinfeas = 0.0;
  double pinfeas_unscaled = 0.0;
  double comp = 0.0;
  std::optional<double> cond;
  double cholesky_shift = 0.0;
  double wallclock = 0.0;  // seconds since the solve started
};

// Called after every Newton system is solved, before the step is taken.
struct StepView {
  const Problem& problem;
  const SolverState& state;
  const NewtonStep& step;
};
using StepObserver = std::function<void(const StepView&)>;

class MaxInnerExceeded : public Error {
 public:
  MaxInnerExceeded(const std::string& message, std::vector<IterRecord> log)
      : Error(ErrorKind::kMaxInnerExceeded, message), log_(std::move(log)) {}

  const std::vector<IterRecord>& log() const noexcept { return log_; }

 private:
  std::vector<IterRecord> log_;
};

// Runs damped Newton steps on lambda until the merit falls below kappa (and
// below 1/(sqrt(rho mu) |lambda|) after the first outer iteration). Returns
// the accepted lambda, which is also left in the state.
Vector inner_solve(const Problem& problem, SolverState& state,
                   const SolverConfig& cfg, std::vector<IterRecord>& log,
                   const StepObserver& observer = {}, double start_time = 0.0);

enum class SolveStatus { kOptimal, kMaxOuterExceeded, kNumericalFailure };

std::string_view to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  Element x;
  Vector lambda;
  Element s;
  // <c, x> and <b, lambda>, both including the problem's objective constant.
  double objective_primal = 0.0;
  double objective_dual = 0.0;
  Residuals residuals;
  int outer_iters = 0;
  long newton_iters = 0;
  std::vector<IterRecord> log;
  // Context of a numerical failure; empty otherwise.
  std::string message;

  double gap() const;
};

// Validates the problem (including the rank check, which throws) and runs the
// outer loop. Numerical breakdowns during the iterations are reported through
// the status rather than thrown.
SolveResult solve(const Problem& problem, const SolverConfig& cfg = {},
                  const StepObserver& observer = {});

// Smallest k with mu0 * sigma^k <= eps, following the solver's update.
int outer_iterations_to_reach(double mu0, double sigma, double eps);

}  // namespace nal
