#include "nal/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace nal {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void check_central_path(const Problem& problem, const SolverState& state) {
  const ConeDesc& cone = problem.cone;
  const double rm = state.rho * state.mu;
  const CentralPair& sz = state.sz;
  const double smax = sz.s_spec.eigenvalues.maxCoeff();
  const double zmax = sz.z_spec.eigenvalues.maxCoeff();
  const Element prod = jordan_product(cone, sz.s, sz.z);
  const double err = (prod - rm * identity(cone)).lpNorm<Eigen::Infinity>();
  if (err > 1e-10 * rm + 256 * kEps * smax * zmax) {
    std::ostringstream os;
    os << "central path drift: |s o z - rho mu e| = " << err << " at rho mu = " << rm;
    fail(ErrorKind::kNumericalFailure, os.str());
  }
  const Element u = state.rho * state.x - problem.cost_riesz() +
                    apply_adjoint(problem.A, cone, state.lambda);
  const double gap = (sz.z - sz.s - u).lpNorm<Eigen::Infinity>();
  const double scale = u.lpNorm<Eigen::Infinity>() + smax + zmax;
  if (gap > 1e-10 * (1.0 + scale)) {
    std::ostringstream os;
    os << "z - s differs from rho x - c + A* lambda by " << gap;
    fail(ErrorKind::kNumericalFailure, os.str());
  }
}

}  // namespace

bool SolverConfig::default_debug_checks() {
  const char* env = std::getenv("NAL_DEBUG");
  if (env && std::string(env) == "1") return true;
#ifdef NDEBUG
  return false;
#else
  return true;
#endif
}

void SolverConfig::validate() const {
  auto bad = [](const std::string& what) {
    fail(ErrorKind::kInvalidArgument, "solver config: " + what);
  };
  if (!(mu0 > 0.0) || !std::isfinite(mu0)) bad("mu0 must be positive");
  if (!(rho0 > 0.0) || !std::isfinite(rho0)) bad("rho0 must be positive");
  if (!(sigma > 0.0 && sigma < 1.0)) bad("sigma must lie in (0, 1)");
  if (!(rho_min > 0.0 && rho_min <= rho0)) bad("rho_min must lie in (0, rho0]");
  if (!(kappa > 0.0 && kappa < 1.0)) bad("kappa must lie in (0, 1)");
  if (!(tol > 0.0)) bad("tol must be positive");
  if (max_outer < 1) bad("max_outer must be at least 1");
  if (max_inner < 1) bad("max_inner must be at least 1");
}

CentralPair compute_sz(const Problem& problem, const Element& x,
                       const Vector& lambda, double mu, double rho) {
  if (!(mu > 0.0) || !(rho > 0.0))
    fail(ErrorKind::kInvalidArgument, "compute_sz: mu and rho must be positive");
  const ConeDesc& cone = problem.cone;
  if (x.size() != cone.vec_len())
    fail(ErrorKind::kDimensionMismatch, "compute_sz: x length mismatch");
  const Element u =
      rho * x - problem.cost_riesz() + apply_adjoint(problem.A, cone, lambda);
  const Spectral u_spec = spectral(cone, u);
  const double rm = rho * mu;
  const double two_root = 2.0 * std::sqrt(rm);
  const Index r = u_spec.eigenvalues.size();
  Vector ls(r), lz(r);
  for (Index i = 0; i < r; ++i) {
    const double lu = u_spec.eigenvalues[i];
    const double root = std::hypot(lu, two_root);
    if (lu > 0.0) {
      ls[i] = 2.0 * rm / (lu + root);
      lz[i] = 0.5 * (root + lu);
    } else {
      ls[i] = 0.5 * (root - lu);
      lz[i] = 2.0 * rm / (root - lu);
    }
  }
  CentralPair out;
  out.s_spec = with_eigenvalues(u_spec, std::move(ls));
  out.z_spec = with_eigenvalues(u_spec, std::move(lz));
  out.s = recompose(out.s_spec);
  out.z = recompose(out.z_spec);
  return out;
}

SolverState make_state(const Problem& problem, Element x, Vector lambda,
                       double mu, double rho) {
  SolverState st;
  st.x = std::move(x);
  st.lambda = std::move(lambda);
  st.mu = mu;
  st.rho = rho;
  refresh(problem, st);
  return st;
}

void refresh(const Problem& problem, SolverState& state) {
  if (state.lambda.size() != problem.A.rows())
    fail(ErrorKind::kDimensionMismatch, "state: lambda length mismatch");
  state.sz = compute_sz(problem, state.x, state.lambda, state.mu, state.rho);
}

Vector grad_eta(const Problem& problem, const SolverState& state) {
  return apply_primal(problem.A, state.sz.z) - state.rho * problem.b;
}

double eval_eta(const Problem& problem, const SolverState& state) {
  const ConeDesc& cone = problem.cone;
  const Element v = apply_adjoint(problem.A, cone, state.lambda) + state.sz.s -
                    problem.cost_riesz();
  const double phi = barrier(state.sz.s_spec).value;
  return -state.rho * problem.b.dot(state.lambda) +
         state.rho * state.mu * phi + state.rho * inner(cone, state.x, v) +
         0.5 * inner(cone, v, v);
}

NewtonStep newton_step(const Problem& problem, const SolverState& state,
                       bool with_quadratic_form) {
  NewtonStep out;
  const Vector g = grad_eta(problem, state);
  out.scm = scm_assemble(problem.A, state.sz.s_spec, state.sz.z_spec);
  out.dlambda = scm_solve(out.scm, -g);
  out.cholesky_shift = out.scm.shift;
  const double rm = state.rho * state.mu;
  const double lin = -out.dlambda.dot(g);
  out.delta = std::sqrt(std::max(lin, 0.0) / rm);
  if (with_quadratic_form) {
    const Vector md = out.scm.m * out.dlambda;
    const double quad = out.dlambda.dot(md);
    out.delta_quadratic = std::sqrt(std::max(quad, 0.0) / rm);
    // Cholesky backward error bounds |d'(Md + g)| by a multiple of
    // eps |M| |d|^2, which dominates when M is badly conditioned.
    const double dn = out.dlambda.norm();
    const double m = static_cast<double>(g.size());
    const double slack = 1e-8 * dn * (md.norm() + g.norm()) +
                         64.0 * m * kEps * out.scm.m.norm() * dn * dn + 1e-300;
    if (std::abs(quad - lin) > slack) {
      std::ostringstream os;
      os << "merit mismatch: d'Md = " << quad << ", -d'g = " << lin;
      fail(ErrorKind::kNumericalFailure, os.str());
    }
  }
  return out;
}

double step_length(double delta) {
  if (!(delta >= 0.0))
    fail(ErrorKind::kInvalidArgument, "step_length: merit must be nonnegative");
  return delta < kFullStepThreshold ? 1.0 : 1.0 / (1.0 + delta);
}

Residuals residuals(const Problem& problem, const SolverState& state) {
  const ConeDesc& cone = problem.cone;
  const Element cj = problem.cost_riesz();
  const double bn = 1.0 + problem.b.norm();
  Residuals r;
  r.pinfeas =
      (apply_primal(problem.A, state.sz.z) - state.rho * problem.b).norm() / bn;
  r.pinfeas_unscaled =
      (apply_primal(problem.A, state.x) - problem.b).norm() / bn;
  const Element dres =
      apply_adjoint(problem.A, cone, state.lambda) + state.sz.s - cj;
  r.dinfeas = norm(cone, dres) / (1.0 + norm(cone, cj));
  r.comp = norm(cone, jordan_product(cone, state.x, state.sz.s));
  return r;
}

Vector inner_solve(const Problem& problem, SolverState& state,
                   const SolverConfig& cfg, std::vector<IterRecord>& log,
                   const StepObserver& observer, double start_time) {
  state.j = 0;
  for (;;) {
    if (cfg.debug_checks) check_central_path(problem, state);
    const NewtonStep step = newton_step(problem, state, cfg.debug_checks);
    if (!std::isfinite(step.delta) || !step.dlambda.allFinite()) {
      std::ostringstream os;
      os << "non-finite Newton step at outer " << state.k << ", inner " << state.j;
      fail(ErrorKind::kNumericalFailure, os.str());
    }
    double kappa = cfg.kappa;
    if (state.k > 0) {
      const double ln = state.lambda.norm();
      if (ln > 0.0)
        kappa = std::min(kappa, 1.0 / (std::sqrt(state.rho * state.mu) * ln));
    }
    const bool stop = step.delta <= kappa;

    IterRecord rec;
    rec.k = state.k;
    rec.j = state.j;
    rec.mu = state.mu;
    rec.rho = state.rho;
    rec.delta = step.delta;
    rec.alpha = stop ? 0.0 : step_length(step.delta);
    const Residuals res = residuals(problem, state);
    rec.pinfeas = res.pinfeas;
    rec.dinfeas = res.dinfeas;
    rec.pinfeas_unscaled = res.pinfeas_unscaled;
    rec.comp = res.comp;
    if (cfg.record_cond) rec.cond = cond_number(step.scm);
    rec.cholesky_shift = step.cholesky_shift;
    rec.wallclock = now_seconds() - start_time;
    log.push_back(rec);
    ++state.total_newton;
    if (observer) observer(StepView{problem, state, step});

    if (stop) return state.lambda;
    if (state.j >= cfg.max_inner) {
      std::ostringstream os;
      os << "inner loop did not reach the merit tolerance within "
         << cfg.max_inner << " steps at outer iteration " << state.k
         << " (last merit " << step.delta << ")";
      throw MaxInnerExceeded(os.str(), log);
    }
    state.lambda += rec.alpha * step.dlambda;
    ++state.j;
    refresh(problem, state);
  }
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "Optimal";
    case SolveStatus::kMaxOuterExceeded: return "MaxOuterExceeded";
    case SolveStatus::kNumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

double SolveResult::gap() const {
  return std::abs(objective_primal - objective_dual);
}

SolveResult solve(const Problem& problem, const SolverConfig& cfg,
                  const StepObserver& observer) {
  problem.validate();
  cfg.validate();
  const Index n = problem.cone.vec_len();
  const Index m = problem.A.rows();
  if (cfg.x0.size() != 0 && cfg.x0.size() != n)
    fail(ErrorKind::kDimensionMismatch, "solver config: x0 length mismatch");
  if (cfg.lambda0.size() != 0 && cfg.lambda0.size() != m)
    fail(ErrorKind::kDimensionMismatch, "solver config: lambda0 length mismatch");
  problem.check_rank();

  const double start = now_seconds();
  SolveResult res;
  SolverState st = make_state(
      problem, cfg.x0.size() ? cfg.x0 : Element(Element::Zero(n)),
      cfg.lambda0.size() ? cfg.lambda0 : Vector(Vector::Zero(m)), cfg.mu0,
      cfg.rho0);
  res.status = SolveStatus::kMaxOuterExceeded;
  res.outer_iters = cfg.max_outer;
  try {
    for (int k = 0; k < cfg.max_outer; ++k) {
      st.k = k;
      inner_solve(problem, st, cfg, res.log, observer, start);
      const IterRecord& last = res.log.back();
      res.residuals = residuals(problem, st);
      if (std::max({last.pinfeas, last.dinfeas, st.mu}) <= cfg.tol) {
        res.status = SolveStatus::kOptimal;
        res.outer_iters = k;
        st.x = st.sz.z / st.rho;
        break;
      }
      st.x = st.sz.z / st.rho;
      st.mu *= cfg.sigma;
      st.rho = std::max(0.5 * st.rho, cfg.rho_min);
      refresh(problem, st);
    }
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kMaxInnerExceeded:
      case ErrorKind::kNumericalFailure:
      case ErrorKind::kRankDeficient:
      case ErrorKind::kNotInterior:
      case ErrorKind::kNonPositiveEigenvalue:
      case ErrorKind::kDomainError:
        break;
      default:
        throw;
    }
    std::ostringstream os;
    os << "outer iteration " << st.k << ", inner step " << st.j << ": " << e.what();
    res.status = SolveStatus::kNumericalFailure;
    res.message = os.str();
    res.outer_iters = st.k;
  }
  res.x = st.x;
  res.lambda = st.lambda;
  res.s = st.sz.s;
  res.newton_iters = st.total_newton;
  res.objective_primal = problem.c.dot(res.x) + problem.meta.objective_constant;
  res.objective_dual = problem.b.dot(res.lambda) + problem.meta.objective_constant;
  return res;
}

int outer_iterations_to_reach(double mu0, double sigma, double eps) {
  if (!(mu0 > 0.0) || !(eps > 0.0) || !(sigma > 0.0 && sigma < 1.0))
    fail(ErrorKind::kInvalidArgument,
         "outer_iterations_to_reach: need mu0, eps > 0 and sigma in (0, 1)");
  int k = 0;
  for (double mu = mu0; mu > eps; mu *= sigma) ++k;
  return k;
}

}  // namespace nal
