#pragma once

// Problem ingestion and instance generators.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nal/problem.hpp"

namespace nal {

// Native text format:
//   NALP 1
//   CONES k        followed by k lines "NN n" | "SOC n" | "PSD p"
//   DIMS m nvec
//   A nnz          followed by nnz lines "row col value" (0-based)
//   B m            followed by m values
//   C nvec         followed by nvec values
//   END
// '#' starts a comment running to the end of the line.
Problem parse_nalp(std::string_view text);
std::string write_nalp(const Problem& problem);

// LP subset of MPS (NAME, ROWS, COLUMNS, RHS, BOUNDS, ENDATA), fixed or free
// fields, converted to standard form with nonnegative variables.
Problem parse_mps_lp(std::string_view text);

// Reads a file and dispatches on the extension (.nalp or .mps).
Problem load_problem(const std::string& path);
std::string read_file(const std::string& path);

// Deterministic 64-bit stream (std::mt19937_64) with portable uniform and
// normal transforms, so a seed reproduces the same instance on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform();                    // [0, 1)
  double uniform(double lo, double hi);
  double normal();                     // Box-Muller, caching the second value

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Minimum enclosing ball of points drawn from [-1, 1]^d.
// Variables: r, c+, c- (orthant of size 2d+1) and y_i in SOC(d+1) per point;
// rows y_i0 - r = 0 and ybar_i - c+ + c- = -p_i.
Problem gen_meb(int n_points, int dim, std::uint64_t seed);
// Same encoding with explicit points, one per column.
Problem gen_meb_points(const Matrix& points);

// min t + lambda_reg * 1'(x+ + x-) s.t. (t; r) in SOC(rows+1),
// r - D x+ + D x- = -d, x+, x- >= 0. Cone: Orthant(2 cols) x SOC(rows+1).
Problem gen_sqrt_lasso(int rows, int cols, double lambda_reg, std::uint64_t seed);
Problem gen_sqrt_lasso_data(const Matrix& D, const Vector& d, double lambda_reg);

// Max-cut relaxation min <-L/4, X> s.t. diag(X) = e, X psd on G(p, 1/2).
Problem gen_maxcut_sdp(int p, std::uint64_t seed);
Problem gen_maxcut_edges(int p, const std::vector<std::pair<int, int>>& edges);
// Graph Laplacian recovered from a max-cut problem's cost.
Matrix maxcut_laplacian(const Problem& problem);

// Random LP with a strictly feasible primal point x0 and dual pair
// (lambda0, s0): b = A x0, c = A' lambda0 + s0.
struct RandomLp {
  Problem problem;
  Vector x0;
  Vector lambda0;
  Vector s0;
};
RandomLp gen_random_lp_with_certificate(int m, int n, std::uint64_t seed);
Problem gen_random_lp(int m, int n, std::uint64_t seed);

struct GeneratorSpec {
  std::string family;  // meb, sqrt_lasso (lasso), maxcut_sdp (maxcut), random_lp (lp)
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
};

// Dispatches on the family; unknown families or parameters throw
// InvalidArgument.
Problem generate(const GeneratorSpec& spec);
// Parses "k=v,k=v".
std::map<std::string, double> parse_params(std::string_view text);

}  // namespace nal
