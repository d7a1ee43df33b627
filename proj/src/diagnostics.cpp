#include "nal/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "nal/errors.hpp"

namespace nal {

Vector ipm_weight_lp(const ConeDesc& cone, const Element& x, const Element& s) {
  if (!cone.all_orthant())
    fail(ErrorKind::kConeNotSupported,
         "ipm_weight_lp: only orthant cones have a diagonal interior-point weight");
  if (x.size() != cone.vec_len() || s.size() != cone.vec_len())
    fail(ErrorKind::kDimensionMismatch, "ipm_weight_lp: length mismatch");
  Vector d(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(s[i] > 0.0))
      fail(ErrorKind::kNotInterior,
           "ipm_weight_lp: coordinate " + std::to_string(i) + " is not interior");
    d[i] = std::clamp(x[i] / s[i], 1e-300, 1e300);
  }
  return d;
}

Matrix ipm_scm(const LinearMap& A, const Vector& d) {
  if (d.size() != A.cols())
    fail(ErrorKind::kDimensionMismatch, "ipm_scm: weight length mismatch");
  const LinearMap::Csr& a = A.csr();
  Matrix m = Matrix(a * d.asDiagonal() * a.transpose());
  return 0.5 * (m + m.transpose());
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    fail(ErrorKind::kInvalidArgument, "fit_slope: need at least two matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) fail(ErrorKind::kInvalidArgument, "fit_slope: x values are all equal");
  return sxy / sxx;
}

namespace {

struct ScanDone {};

std::optional<double> slope_of(const std::vector<CondScanRow>& rows, double fit_mu_max,
                               bool ipm) {
  std::vector<double> x, y;
  for (const CondScanRow& r : rows) {
    if (r.mu > fit_mu_max) continue;
    const std::optional<double> c = ipm ? r.cond_ipm : std::optional<double>(r.cond_nal);
    if (!c) continue;
    x.push_back(std::log10(r.mu));
    y.push_back(std::log10(*c));
  }
  if (x.size() < 2) return std::nullopt;
  return fit_slope(x, y);
}

}  // namespace

CondScanResult cond_scan(const Problem& problem, const SolverConfig& cfg,
                         const CondScanOptions& opts) {
  problem.validate();
  problem.check_rank();
  if (problem.A.rows() > kMaxDenseEigen)
    fail(ErrorKind::kInvalidArgument, "cond_scan: m exceeds the dense eigensolve limit");
  const bool ipm = opts.compare_ipm;
  if (ipm && !problem.cone.all_orthant())
    fail(ErrorKind::kConeNotSupported, "cond_scan: IPM comparison needs an LP");
  const double cond_gram = cond_number(problem.gram_matrix());

  CondScanResult res;
  res.problem = problem.name;
  auto observer = [&](const StepView& v) {
    if (v.state.j != 0) return;
    if (v.state.mu < opts.mu_min) throw ScanDone{};
    if (v.state.mu > opts.mu_max) return;
    CondScanRow row;
    row.k = v.state.k;
    row.mu = v.state.mu;
    row.cond_nal = cond_number(v.step.scm);
    const Vector w = weight_eigenvalues(v.state.sz.s_spec, v.state.sz.z_spec);
    row.weight_min = w.minCoeff();
    row.weight_max = w.maxCoeff();
    row.cond_bound = cond_gram / row.weight_min;
    if (row.cond_nal > row.cond_bound * (1.0 + 1e-8)) res.bound_holds = false;
    if (ipm && v.state.x.minCoeff() > 0.0) {
      const Vector d = ipm_weight_lp(problem.cone, v.state.x, v.state.sz.s);
      row.cond_ipm = cond_number(ipm_scm(problem.A, d));
    }
    res.rows.push_back(row);
  };

  SolverConfig run = cfg;
  run.tol = std::min(cfg.tol, 0.5 * opts.mu_min);
  try {
    solve(problem, run, observer);
  } catch (const ScanDone&) {
  }

  double sum_nal = 0.0, sum_ipm = 0.0;
  int n_ipm = 0;
  for (const CondScanRow& r : res.rows) {
    sum_nal += std::log(r.cond_nal);
    if (r.cond_ipm) {
      sum_ipm += std::log(*r.cond_ipm);
      ++n_ipm;
    }
  }
  if (!res.rows.empty())
    res.geomean_nal = std::exp(sum_nal / static_cast<double>(res.rows.size()));
  if (n_ipm > 0) res.geomean_ipm = std::exp(sum_ipm / n_ipm);
  res.slope_nal = slope_of(res.rows, opts.fit_mu_max, false);
  if (ipm) res.slope_ipm = slope_of(res.rows, opts.fit_mu_max, true);
  return res;
}

std::string_view to_string(ProblemClass cls) {
  switch (cls) {
    case ProblemClass::kLp: return "lp";
    case ProblemClass::kSocp: return "socp";
    case ProblemClass::kSdp: return "sdp";
  }
  return "lp";
}

ProblemClass parse_problem_class(std::string_view text) {
  if (text == "lp") return ProblemClass::kLp;
  if (text == "socp") return ProblemClass::kSocp;
  if (text == "sdp") return ProblemClass::kSdp;
  fail(ErrorKind::kInvalidArgument, "unknown problem class '" + std::string(text) + "'");
}

ProblemClass classify(const ConeDesc& cone) {
  ProblemClass cls = ProblemClass::kLp;
  for (const ConeBlock& b : cone.blocks()) {
    if (b.kind == ConeKind::kPsd) return ProblemClass::kSdp;
    if (b.kind == ConeKind::kSecondOrder) cls = ProblemClass::kSocp;
  }
  return cls;
}

double default_shift(ProblemClass cls) {
  switch (cls) {
    case ProblemClass::kLp: return 1.0;
    case ProblemClass::kSocp: return 10.0;
    case ProblemClass::kSdp: return 100.0;
  }
  return 1.0;
}

double default_maxtime(ProblemClass cls) {
  switch (cls) {
    case ProblemClass::kLp: return 3600.0;
    case ProblemClass::kSocp: return 7200.0;
    case ProblemClass::kSdp: return 43200.0;
  }
  return 3600.0;
}

double sgm(const std::vector<double>& times, double sh) {
  if (times.empty()) fail(ErrorKind::kInvalidArgument, "sgm: no times");
  if (!(sh > 0.0)) fail(ErrorKind::kInvalidArgument, "sgm: shift must be positive");
  double acc = 0.0;
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t))
      fail(ErrorKind::kInvalidArgument, "sgm: times must be finite and nonnegative");
    acc += std::log(t + sh);
  }
  return std::exp(acc / static_cast<double>(times.size())) - sh;
}

double sgm(const std::vector<double>& times, ProblemClass cls) {
  return sgm(times, default_shift(cls));
}

PerfProfile perf_profile(const std::vector<std::vector<double>>& times,
                         const std::vector<double>& taus) {
  if (times.empty() || times.front().empty())
    fail(ErrorKind::kInvalidArgument, "perf_profile: need at least one solver and problem");
  const std::size_t np = times.front().size();
  for (const auto& row : times)
    if (row.size() != np)
      fail(ErrorKind::kDimensionMismatch, "perf_profile: ragged time matrix");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> ratio(times.size(), std::vector<double>(np, kInf));
  for (std::size_t p = 0; p < np; ++p) {
    double best = kInf;
    for (const auto& row : times) best = std::min(best, row[p]);
    if (!std::isfinite(best)) continue;
    for (std::size_t s = 0; s < times.size(); ++s) {
      const double t = times[s][p];
      if (std::isfinite(t)) ratio[s][p] = best > 0.0 ? t / best : (t > 0.0 ? kInf : 1.0);
    }
  }
  PerfProfile out;
  out.taus = taus;
  out.rho.assign(times.size(), std::vector<double>(taus.size(), 0.0));
  for (std::size_t s = 0; s < times.size(); ++s)
    for (std::size_t t = 0; t < taus.size(); ++t) {
      std::size_t count = 0;
      for (std::size_t p = 0; p < np; ++p)
        if (ratio[s][p] <= taus[t]) ++count;
      out.rho[s][t] = static_cast<double>(count) / static_cast<double>(np);
    }
  return out;
}

PerfProfile perf_profile(const std::vector<std::vector<double>>& times) {
  if (times.empty() || times.front().empty())
    fail(ErrorKind::kInvalidArgument, "perf_profile: need at least one solver and problem");
  std::set<double> grid{1.0};
  const std::size_t np = times.front().size();
  for (std::size_t p = 0; p < np; ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& row : times)
      if (p < row.size()) best = std::min(best, row[p]);
    if (!std::isfinite(best) || !(best > 0.0)) continue;
    for (const auto& row : times)
      if (p < row.size() && std::isfinite(row[p])) grid.insert(row[p] / best);
  }
  return perf_profile(times, std::vector<double>(grid.begin(), grid.end()));
}

std::vector<SgmRow> sgm_table(const std::vector<BenchEntry>& entries,
                              ProblemClass cls) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const BenchEntry*>> per_solver;
  for (const BenchEntry& e : entries) {
    if (!per_solver.count(e.solver)) order.push_back(e.solver);
    per_solver[e.solver].push_back(&e);
  }
  const double maxtime = default_maxtime(cls);
  std::vector<SgmRow> out;
  for (const std::string& name : order) {
    std::vector<double> t;
    std::size_t solved = 0;
    for (const BenchEntry* e : per_solver[name]) {
      t.push_back(e->solved ? std::min(e->seconds, maxtime) : maxtime);
      if (e->solved) ++solved;
    }
    out.push_back({std::string(to_string(cls)), name, sgm(t, cls),
                   static_cast<double>(solved) / static_cast<double>(t.size())});
  }
  return out;
}

PerfProfile bench_profile(const std::vector<BenchEntry>& entries,
                          std::vector<std::string>& solvers) {
  solvers.clear();
  std::vector<std::string> problems;
  std::map<std::pair<std::string, std::string>, double> t;
  for (const BenchEntry& e : entries) {
    if (std::find(solvers.begin(), solvers.end(), e.solver) == solvers.end())
      solvers.push_back(e.solver);
    if (std::find(problems.begin(), problems.end(), e.problem) == problems.end())
      problems.push_back(e.problem);
    t[{e.solver, e.problem}] =
        e.solved ? e.seconds : std::numeric_limits<double>::infinity();
  }
  std::vector<std::vector<double>> times(
      solvers.size(),
      std::vector<double>(problems.size(), std::numeric_limits<double>::infinity()));
  for (std::size_t s = 0; s < solvers.size(); ++s)
    for (std::size_t p = 0; p < problems.size(); ++p)
      if (auto it = t.find({solvers[s], problems[p]}); it != t.end())
        times[s][p] = it->second;
  return perf_profile(times);
}

std::vector<BenchEntry> read_times_csv(std::istream& in) {
  std::vector<BenchEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (line_no == 1 && !f.empty() && f[0] == "solver") continue;
    if (f.size() != 4)
      throw ParseError(line_no, 1, "expected solver,problem,seconds,solved");
    BenchEntry e;
    e.solver = f[0];
    e.problem = f[1];
    try {
      e.seconds = std::stod(f[2]);
    } catch (const std::exception&) {
      throw ParseError(line_no, 1, "seconds is not a number: '" + f[2] + "'");
    }
    if (f[3] == "1" || f[3] == "true") e.solved = true;
    else if (f[3] == "0" || f[3] == "false") e.solved = false;
    else throw ParseError(line_no, 1, "solved must be 0/1 or true/false");
    out.push_back(e);
  }
  return out;
}

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_condscan_csv(std::ostream& out, const std::vector<CondScanResult>& scans) {
  out << "problem,k,mu,cond_nal,cond_ipm\n";
  for (const CondScanResult& s : scans)
    for (const CondScanRow& r : s.rows) {
      out << s.problem << ',' << r.k << ',' << g17(r.mu) << ',' << g17(r.cond_nal) << ',';
      if (r.cond_ipm) out << g17(*r.cond_ipm);
      out << '\n';
    }
}

void write_sgm_csv(std::ostream& out, const std::vector<SgmRow>& rows) {
  out << "class,solver,sgm,solved_fraction\n";
  for (const SgmRow& r : rows)
    out << r.cls << ',' << r.solver << ',' << g17(r.sgm) << ',' << g17(r.solved_fraction)
        << '\n';
}

void write_profile_csv(std::ostream& out, const PerfProfile& profile,
                       const std::vector<std::string>& solvers) {
  out << "solver,tau,rho\n";
  for (std::size_t s = 0; s < profile.rho.size(); ++s)
    for (std::size_t t = 0; t < profile.taus.size(); ++t)
      out << (s < solvers.size() ? solvers[s] : "solver" + std::to_string(s)) << ','
          << g17(profile.taus[t]) << ',' << g17(profile.rho[s][t]) << '\n';
}

}  // namespace nal
