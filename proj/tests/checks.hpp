#pragma once

// Measurement routines shared by the unit tests and the acceptance binary.
// Each returns the observed error so callers can apply their own threshold.

#include <algorithm>
#include <cmath>
#include <vector>

#include "nal/solver.hpp"
#include "support.hpp"

namespace nal::testing {

// A random instance for the derivative and contraction checks: random cone,
// 1 <= m <= min(max_rows, vec_len) dense rows, random x and lambda, and
// rho mu drawn log-uniformly from [rm_lo, rm_hi].
struct RandomState {
  Problem problem;
  SolverState state;
};

inline RandomState random_state(Gen& g, Index max_rows = 10, double rm_lo = 0.05,
                                double rm_hi = 1.0, const ConeDesc* fixed_cone = nullptr) {
  RandomState out;
  const ConeDesc cone = fixed_cone ? *fixed_cone : random_cone(g);
  const Index m = std::min<Index>(cone.vec_len(), g.integer(1, static_cast<int>(max_rows)));
  out.problem = random_problem(cone, m, g);
  const double rho = std::exp(g.uniform(std::log(0.1), std::log(2.0)));
  const double rm = std::exp(g.uniform(std::log(rm_lo), std::log(rm_hi)));
  out.state = make_state(out.problem, random_element(cone, g), g.normal_vector(m),
                         rm / rho, rho);
  return out;
}

inline SolverState with_lambda(const Problem& p, const SolverState& st, const Vector& lambda) {
  return make_state(p, st.x, lambda, st.mu, st.rho);
}

inline SolverState with_x(const Problem& p, const SolverState& st, const Element& x) {
  return make_state(p, x, st.lambda, st.mu, st.rho);
}

struct CentralPathError {
  double product = 0.0;  // |s o z - rho mu e|_inf / (rho mu)
  double trace = 0.0;    // |<s, z> - rho mu nu| / (rho mu nu)
};

inline CentralPathError central_path_error(const ConeDesc& cone, const Element& s,
                                           const Element& z, double rm) {
  CentralPathError e;
  e.product = (oracle_product(cone, s, z) - rm * oracle_identity(cone))
                  .lpNorm<Eigen::Infinity>() /
              rm;
  const double nu = static_cast<double>(cone.rank());
  e.trace = std::abs(oracle_inner(cone, s, z) - rm * nu) / (rm * nu);
  return e;
}

// Central differences of eval_eta against grad_eta, step h.
inline double gradient_fd_error(const Problem& p, const SolverState& st, double h = 1e-5) {
  const Vector g = grad_eta(p, st);
  Vector fd(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    Vector lp = st.lambda, lm = st.lambda;
    lp[i] += h;
    lm[i] -= h;
    fd[i] = (eval_eta(p, with_lambda(p, st, lp)) - eval_eta(p, with_lambda(p, st, lm))) /
            (2 * h);
  }
  return (fd - g).norm() / std::max(1.0, g.norm());
}

// Central differences of grad_eta against the assembled Schur complement.
inline double hessian_fd_error(const Problem& p, const SolverState& st, double h = 1e-5) {
  const Matrix M = scm_assemble(p.A, st.sz.s_spec, st.sz.z_spec).m;
  Matrix fd(M.rows(), M.cols());
  for (Index j = 0; j < M.cols(); ++j) {
    Vector lp = st.lambda, lm = st.lambda;
    lp[j] += h;
    lm[j] -= h;
    fd.col(j) = (grad_eta(p, with_lambda(p, st, lp)) - grad_eta(p, with_lambda(p, st, lm))) /
                (2 * h);
  }
  return (fd - M).norm() / std::max(1.0, M.norm());
}

// The Schur complement through the barrier Hessian route,
// A (rho mu) (rho mu I + P(s))^{-1} A*, with P(s) = 2 L(s)^2 - L(s^2) built
// densely. Relative difference to scm_assemble.
inline double scm_route_error(const Problem& p, const SolverState& st) {
  const ConeDesc& cone = p.cone;
  const Index n = cone.vec_len();
  const double rm = st.rho * st.mu;
  const Element& s = st.sz.s;
  const Matrix Ls = oracle_lyapunov_matrix(cone, s);
  const Matrix P = 2 * Ls * Ls - oracle_lyapunov_matrix(cone, oracle_product(cone, s, s));
  const Matrix H = rm * (rm * Matrix::Identity(n, n) + P).inverse();
  const Matrix Ad = p.A.dense();
  const Matrix Astar = oracle_weights(cone).cwiseInverse().asDiagonal() * Ad.transpose();
  const Matrix route = Ad * H * Astar;
  const Matrix M = scm_assemble(p.A, st.sz.s_spec, st.sz.z_spec).m;
  return (route - M).norm() / M.norm();
}

// Third directional derivative against the self-concordance bound along h.
// g(t) = h' grad(lambda + t h); D2 and D3 come from five-point stencils.
struct SelfConcordance {
  double d2 = 0.0;
  double d3 = 0.0;
  double bound = 0.0;  // 2 (rho mu)^{-1/2} d2^{3/2}
};

inline SelfConcordance self_concordance(const Problem& p, const SolverState& st,
                                        const Vector& h) {
  const double rm = st.rho * st.mu;
  const Matrix M = scm_assemble(p.A, st.sz.s_spec, st.sz.z_spec).m;
  const double local = std::sqrt(h.dot(M * h) / rm);
  // Step of 1e-2 in the local norm keeps the stencil inside the Dikin ball.
  const double t = 1e-2 / std::max(local, 1e-12);
  auto g = [&](double a) {
    return h.dot(grad_eta(p, with_lambda(p, st, st.lambda + a * h)));
  };
  const double g2 = g(2 * t), g1 = g(t), g0 = g(0), gm1 = g(-t), gm2 = g(-2 * t);
  SelfConcordance r;
  r.d2 = (-g2 + 8 * g1 - 8 * gm1 + gm2) / (12 * t);
  r.d3 = (-g2 + 16 * g1 - 30 * g0 + 16 * gm1 - gm2) / (12 * t * t);
  r.bound = 2.0 / std::sqrt(rm) * std::pow(std::max(r.d2, 0.0), 1.5);
  return r;
}

// Finite-difference D_x s applied to d against -rho (d - W d).
inline double sensitivity_error(const Problem& p, const SolverState& st, const Element& d,
                                double h = 1e-6) {
  const Element sp = compute_sz(p, st.x + h * d, st.lambda, st.mu, st.rho).s;
  const Element sm = compute_sz(p, st.x - h * d, st.lambda, st.mu, st.rho).s;
  const Element fd = (sp - sm) / (2 * h);
  const Element analytic = -st.rho * (d - weight_apply(st.sz.s_spec, st.sz.z_spec, d));
  return (fd - analytic).norm() / std::max(1e-3, analytic.norm());
}

// Records (delta, alpha) of every Newton system an inner solve forms and
// returns the worst violation of delta_next <= delta / 2 over full steps,
// expressed as delta_next - delta / 2.
struct ContractionReport {
  int full_steps = 0;
  double worst_excess = -1.0;
};

inline ContractionReport contraction_excess(const std::vector<IterRecord>& log) {
  ContractionReport r;
  for (std::size_t i = 0; i + 1 < log.size(); ++i) {
    const IterRecord& a = log[i];
    const IterRecord& b = log[i + 1];
    if (a.k != b.k || b.j != a.j + 1) continue;
    if (a.alpha != 1.0) continue;
    ++r.full_steps;
    r.worst_excess = std::max(r.worst_excess, b.delta - a.delta / 2);
  }
  return r;
}

}  // namespace nal::testing
