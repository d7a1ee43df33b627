#include "nal/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "nal/diagnostics.hpp"
#include "nal/errors.hpp"
#include "nal/probio.hpp"
#include "nal/solver.hpp"

namespace nal::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return kExitOk;
    case SolveStatus::kMaxOuterExceeded: return kExitMaxOuter;
    case SolveStatus::kNumericalFailure: return kExitNumerical;
  }
  return kExitNumerical;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kMaxInnerExceeded:
    case ErrorKind::kNumericalFailure:
    case ErrorKind::kNotInterior:
    case ErrorKind::kNonPositiveEigenvalue:
      return kExitNumerical;
    default:
      return kExitInput;
  }
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorKind::kInvalidArgument, "cannot write " + path);
  return f;
}

void write_log_csv(const std::string& path, const std::vector<IterRecord>& log) {
  std::ofstream f = open_out(path);
  f << "k,j,mu,rho,delta,alpha,pinfeas,dinfeas,pinfeas_unscaled,comp,cond,"
       "cholesky_shift,wallclock\n";
  for (const IterRecord& r : log) {
    f << r.k << ',' << r.j << ',' << g17(r.mu) << ',' << g17(r.rho) << ','
      << g17(r.delta) << ',' << g17(r.alpha) << ',' << g17(r.pinfeas) << ','
      << g17(r.dinfeas) << ',' << g17(r.pinfeas_unscaled) << ',' << g17(r.comp) << ',';
    if (r.cond) f << g17(*r.cond);
    f << ',' << g17(r.cholesky_shift) << ',' << g17(r.wallclock) << '\n';
  }
}

json result_json(const SolveResult& r, double seconds) {
  json j;
  j["schema"] = 1;
  j["status"] = std::string(to_string(r.status));
  j["objective_primal"] = r.objective_primal;
  j["objective_dual"] = r.objective_dual;
  j["pinfeas"] = r.residuals.pinfeas;
  j["dinfeas"] = r.residuals.dinfeas;
  j["comp"] = r.residuals.comp;
  j["outer_iters"] = r.outer_iters;
  j["newton_iters"] = r.newton_iters;
  j["seconds"] = seconds;
  j["x"] = std::vector<double>(r.x.data(), r.x.data() + r.x.size());
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

struct SolveFlags {
  std::string problem;
  SolverConfig cfg;
  std::string log_path;
  std::string json_path;
};

void add_config_flags(CLI::App* cmd, SolverConfig& cfg) {
  cmd->add_option("--tol", cfg.tol, "Termination tolerance")->capture_default_str();
  cmd->add_option("--mu0", cfg.mu0, "Initial barrier parameter")->capture_default_str();
  cmd->add_option("--rho0", cfg.rho0, "Initial penalty parameter")->capture_default_str();
  cmd->add_option("--sigma", cfg.sigma, "Barrier reduction factor")->capture_default_str();
  cmd->add_option("--rho-min", cfg.rho_min, "Penalty floor")->capture_default_str();
  cmd->add_option("--kappa", cfg.kappa, "Inner merit tolerance")->capture_default_str();
  cmd->add_option("--max-outer", cfg.max_outer, "Outer iteration limit")->capture_default_str();
  cmd->add_option("--max-inner", cfg.max_inner, "Inner steps per outer iteration")
      ->capture_default_str();
}

int do_solve(const SolveFlags& flags, std::ostream& out, std::ostream& err) {
  Problem problem = load_problem(flags.problem);
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult r = solve(problem, flags.cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const json j = result_json(r, seconds);
  if (flags.json_path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    open_out(flags.json_path) << j.dump(2) << '\n';
  }
  if (!flags.log_path.empty()) write_log_csv(flags.log_path, r.log);
  err << "status: " << to_string(r.status) << " objective " << g17(r.objective_primal)
      << " outer " << r.outer_iters << " newton " << r.newton_iters;
  if (!r.message.empty()) err << " (" << r.message << ")";
  err << '\n';
  return exit_code(r.status);
}

struct GenFlags {
  std::string family;
  std::string params;
  std::uint64_t seed = 0;
  std::string out;
};

int do_gen(const GenFlags& flags, std::ostream& err) {
  GeneratorSpec spec{flags.family, parse_params(flags.params), flags.seed};
  const Problem p = generate(spec);
  open_out(flags.out) << "# " << p.name << " seed " << flags.seed << '\n' << write_nalp(p);
  err << "status: wrote " << flags.out << " (m " << p.A.rows() << ", n "
      << p.cone.vec_len() << ")\n";
  return kExitOk;
}

struct ScanFlags {
  std::string problem;
  std::string out;
  bool compare_ipm = false;
  CondScanOptions opts;
  SolverConfig cfg;
};

int do_condscan(const ScanFlags& flags, std::ostream& err) {
  const Problem p = load_problem(flags.problem);
  CondScanOptions opts = flags.opts;
  opts.compare_ipm = flags.compare_ipm;
  const CondScanResult r = cond_scan(p, flags.cfg, opts);
  std::ofstream f = open_out(flags.out);
  write_condscan_csv(f, {r});
  err << "status: " << r.rows.size() << " rows";
  if (r.slope_nal) err << ", nal slope " << g17(*r.slope_nal);
  if (r.slope_ipm) err << ", ipm slope " << g17(*r.slope_ipm);
  err << ", geometric mean " << g17(r.geomean_nal) << '\n';
  return kExitOk;
}

struct BenchFlags {
  std::string dir;
  std::string prefix;
  std::string cls;
  int jobs = 1;
  std::vector<std::string> times_from;
  SolverConfig cfg;
};

int do_bench(const BenchFlags& flags, std::ostream& err) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(flags.dir)) {
    const std::string ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".nalp" || ext == ".mps")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) fail(ErrorKind::kInvalidArgument, "no .nalp or .mps files in " + flags.dir);

  std::vector<BenchEntry> entries(files.size());
  std::vector<std::string> errors(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      BenchEntry& e = entries[i];
      e.solver = "nal";
      e.problem = files[i].stem().string();
      try {
        const Problem p = load_problem(files[i].string());
        const auto t0 = std::chrono::steady_clock::now();
        const SolveResult r = solve(p, flags.cfg);
        e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        e.solved = r.status == SolveStatus::kOptimal;
        if (!e.solved) errors[i] = std::string(to_string(r.status));
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    }
  };
  const int jobs = std::max(1, flags.jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (std::size_t i = 0; i < files.size(); ++i)
    if (!errors[i].empty()) err << files[i].filename().string() << ": " << errors[i] << '\n';

  for (const std::string& path : flags.times_from) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::kInvalidArgument, "cannot open " + path);
    const auto more = read_times_csv(in);
    entries.insert(entries.end(), more.begin(), more.end());
  }

  const ProblemClass cls = flags.cls.empty()
                               ? classify(load_problem(files.front().string()).cone)
                               : parse_problem_class(flags.cls);
  const auto sgm_rows = sgm_table(entries, cls);
  std::vector<std::string> solvers;
  const PerfProfile profile = bench_profile(entries, solvers);
  {
    std::ofstream f = open_out(flags.prefix + "sgm.csv");
    write_sgm_csv(f, sgm_rows);
  }
  {
    std::ofstream f = open_out(flags.prefix + "profile.csv");
    write_profile_csv(f, profile, solvers);
  }
  std::size_t solved = 0;
  for (const BenchEntry& e : entries)
    if (e.solver == "nal" && e.solved) ++solved;
  err << "status: solved " << solved << " of " << files.size() << " problems\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Newton augmented Lagrangian solver for symmetric cone programs", "nal"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve a .nalp or .mps problem");
  solve_cmd->add_option("--problem", solve_flags.problem, "Problem file")
      ->required()
      ->check(CLI::ExistingFile);
  add_config_flags(solve_cmd, solve_flags.cfg);
  solve_cmd->add_option("--log", solve_flags.log_path, "Per-step CSV log");
  solve_cmd->add_option("--json", solve_flags.json_path, "JSON result (stdout if omitted)");

  GenFlags gen_flags;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a problem instance");
  gen_cmd->add_option("--family", gen_flags.family, "meb, lasso, maxcut or lp")
      ->required()
      ->check(CLI::IsMember({"meb", "lasso", "sqrt_lasso", "maxcut", "maxcut_sdp", "lp",
                             "random_lp"}));
  gen_cmd->add_option("--params", gen_flags.params, "Comma-separated k=v pairs");
  gen_cmd->add_option("--seed", gen_flags.seed, "64-bit seed")->capture_default_str();
  gen_cmd->add_option("--out", gen_flags.out, "Output .nalp file")->required();

  ScanFlags scan_flags;
  CLI::App* scan_cmd = app.add_subcommand("condscan", "Record Schur complement conditioning");
  scan_cmd->add_option("--problem", scan_flags.problem, "Problem file")
      ->required()
      ->check(CLI::ExistingFile);
  scan_cmd->add_option("--out", scan_flags.out, "Output CSV")->required();
  scan_cmd->add_flag("--compare-ipm", scan_flags.compare_ipm,
                     "Also record the diag(x/s) interior-point matrix (LP only)");
  scan_cmd->add_option("--mu-max", scan_flags.opts.mu_max)->capture_default_str();
  scan_cmd->add_option("--mu-min", scan_flags.opts.mu_min)->capture_default_str();
  add_config_flags(scan_cmd, scan_flags.cfg);

  BenchFlags bench_flags;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Solve a directory and summarize timings");
  bench_cmd->add_option("--dir", bench_flags.dir, "Directory of problems")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--out-prefix", bench_flags.prefix, "Prefix for sgm.csv and profile.csv")
      ->required();
  bench_cmd->add_option("--class", bench_flags.cls, "lp, socp or sdp")
      ->check(CLI::IsMember({"lp", "socp", "sdp"}));
  bench_cmd->add_option("--jobs", bench_flags.jobs, "Concurrent solves")->capture_default_str();
  bench_cmd->add_option("--times-from", bench_flags.times_from,
                        "CSV of other solvers' timings (solver,problem,seconds,solved)");
  add_config_flags(bench_cmd, bench_flags.cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << "status: invalid invocation\n";
    return kExitInput;
  }

  try {
    if (*solve_cmd) return do_solve(solve_flags, out, err);
    if (*gen_cmd) return do_gen(gen_flags, err);
    if (*scan_cmd) return do_condscan(scan_flags, err);
    if (*bench_cmd) return do_bench(bench_flags, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    err << "status: failed\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    err << "status: failed\n";
    return kExitInput;
  }
  return kExitInput;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace nal::cli
