#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>

#include "nal/errors.hpp"
#include "nal/probio.hpp"

namespace nal {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) fail(ErrorKind::kInvalidArgument, msg);
}

std::string family_name(const std::string& base,
                        std::initializer_list<std::pair<const char*, double>> params) {
  std::ostringstream os;
  os << base;
  for (auto [k, v] : params) os << "_" << k << v;
  return os.str();
}

}  // namespace

Problem gen_meb_points(const Matrix& points) {
  const Index d = points.rows();
  const Index n = points.cols();
  require(d >= 1 && n >= 1, "gen_meb: need at least one point of dimension >= 1");
  std::vector<BlockSpec> specs{Orthant(2 * d + 1)};
  for (Index i = 0; i < n; ++i) specs.push_back(SecondOrder(d + 1));
  Problem p;
  p.cone = ConeDesc(specs);
  const Index m = n * (d + 1);
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(n * (3 * d + 2)));
  p.b = Vector::Zero(m);
  for (Index i = 0; i < n; ++i) {
    const Index y = 2 * d + 1 + i * (d + 1);
    const Index row = i * (d + 1);
    trip.push_back({row, y, 1.0});
    trip.push_back({row, 0, -1.0});
    for (Index t = 0; t < d; ++t) {
      trip.push_back({row + 1 + t, y + 1 + t, 1.0});
      trip.push_back({row + 1 + t, 1 + t, -1.0});
      trip.push_back({row + 1 + t, 1 + d + t, 1.0});
      p.b[row + 1 + t] = -points(t, i);
    }
  }
  p.A = LinearMap(m, p.cone.vec_len(), trip);
  p.c = Vector::Zero(p.cone.vec_len());
  p.c[0] = 1.0;
  p.meta.family = "meb";
  p.meta.params = {{"n", static_cast<double>(n)}, {"d", static_cast<double>(d)}};
  p.name = family_name("meb", {{"n", double(n)}, {"d", double(d)}});
  return p;
}

Problem gen_meb(int n_points, int dim, std::uint64_t seed) {
  require(n_points >= 1 && dim >= 1, "gen_meb: need N >= 1 and d >= 1");
  Rng rng(seed);
  Matrix pts(dim, n_points);
  for (int i = 0; i < n_points; ++i)
    for (int t = 0; t < dim; ++t) pts(t, i) = rng.uniform(-1.0, 1.0);
  Problem p = gen_meb_points(pts);
  p.meta.seed = seed;
  return p;
}

Problem gen_sqrt_lasso_data(const Matrix& D, const Vector& d, double lambda_reg) {
  const Index rows = D.rows();
  const Index cols = D.cols();
  require(rows >= 1 && cols >= 1, "gen_sqrt_lasso: need rows, cols >= 1");
  require(d.size() == rows, "gen_sqrt_lasso: d length must equal rows");
  require(lambda_reg >= 0.0, "gen_sqrt_lasso: lambda_reg must be nonnegative");
  Problem p;
  p.cone = ConeDesc({Orthant(2 * cols), SecondOrder(rows + 1)});
  const Index t_col = 2 * cols;
  std::vector<Triplet> trip;
  for (Index i = 0; i < rows; ++i) {
    trip.push_back({i, t_col + 1 + i, 1.0});
    for (Index j = 0; j < cols; ++j) {
      if (D(i, j) == 0.0) continue;
      trip.push_back({i, j, -D(i, j)});
      trip.push_back({i, cols + j, D(i, j)});
    }
  }
  p.A = LinearMap(rows, p.cone.vec_len(), trip);
  p.b = -d;
  p.c = Vector::Zero(p.cone.vec_len());
  p.c.head(2 * cols).setConstant(lambda_reg);
  p.c[t_col] = 1.0;
  p.meta.family = "sqrt_lasso";
  p.meta.params = {{"m", double(rows)}, {"n", double(cols)}, {"lambda", lambda_reg}};
  p.name = family_name("lasso", {{"m", double(rows)}, {"n", double(cols)}});
  return p;
}

Problem gen_sqrt_lasso(int rows, int cols, double lambda_reg, std::uint64_t seed) {
  require(rows >= 1 && cols >= 1, "gen_sqrt_lasso: need rows, cols >= 1");
  Rng rng(seed);
  Matrix D(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) D(i, j) = rng.normal();
  // Planted sparse signal on a random tenth of the coordinates.
  const int support = std::max(1, static_cast<int>(std::lround(0.1 * cols)));
  std::vector<int> order(static_cast<std::size_t>(cols));
  std::iota(order.begin(), order.end(), 0);
  for (int i = cols - 1; i > 0; --i)
    std::swap(order[static_cast<std::size_t>(i)],
              order[static_cast<std::size_t>(rng.next() % static_cast<std::uint64_t>(i + 1))]);
  Vector planted = Vector::Zero(cols);
  for (int k = 0; k < support; ++k) planted[order[static_cast<std::size_t>(k)]] = rng.normal();
  Vector d = D * planted;
  for (int i = 0; i < rows; ++i) d[i] += 0.01 * rng.normal();
  Problem p = gen_sqrt_lasso_data(D, d, lambda_reg);
  p.meta.seed = seed;
  return p;
}

Problem gen_maxcut_edges(int p, const std::vector<std::pair<int, int>>& edges) {
  require(p >= 2, "gen_maxcut_sdp: need p >= 2");
  Matrix L = Matrix::Zero(p, p);
  for (auto [u, v] : edges) {
    require(u >= 0 && v >= 0 && u < p && v < p && u != v, "gen_maxcut_sdp: bad edge");
    L(u, u) += 1.0;
    L(v, v) += 1.0;
    L(u, v) -= 1.0;
    L(v, u) -= 1.0;
  }
  Problem prob;
  prob.cone = ConeDesc({Psd(p)});
  std::vector<Triplet> trip;
  for (int i = 0; i < p; ++i) trip.push_back({i, svec_index(p, i, i), 1.0});
  prob.A = LinearMap(p, prob.cone.vec_len(), trip);
  prob.b = Vector::Ones(p);
  prob.c = svec(-0.25 * L);
  prob.meta.family = "maxcut_sdp";
  prob.meta.params = {{"p", double(p)}};
  prob.name = family_name("maxcut", {{"p", double(p)}});
  return prob;
}

Problem gen_maxcut_sdp(int p, std::uint64_t seed) {
  require(p >= 2, "gen_maxcut_sdp: need p >= 2");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      if (rng.uniform() < 0.5) edges.emplace_back(i, j);
  Problem prob = gen_maxcut_edges(p, edges);
  prob.meta.seed = seed;
  return prob;
}

Matrix maxcut_laplacian(const Problem& problem) {
  require(problem.cone.blocks().size() == 1 &&
              problem.cone.blocks()[0].kind == ConeKind::kPsd,
          "maxcut_laplacian: expected a single PSD block");
  return -4.0 * smat(problem.c, problem.cone.blocks()[0].dim);
}

RandomLp gen_random_lp_with_certificate(int m, int n, std::uint64_t seed) {
  require(m >= 1 && m < n, "gen_random_lp: need 1 <= m < n");
  Rng rng(seed);
  RandomLp out;
  Problem& p = out.problem;
  p.cone = ConeDesc({Orthant(n)});
  for (;;) {
    std::vector<Triplet> trip;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (rng.uniform() < 0.3) trip.push_back({i, j, rng.normal()});
    LinearMap A(m, n, trip);
    Eigen::FullPivLU<Matrix> lu(A.dense());
    if (lu.rank() == m) {
      p.A = std::move(A);
      break;
    }
  }
  out.x0.resize(n);
  out.s0.resize(n);
  out.lambda0.resize(m);
  for (int j = 0; j < n; ++j) out.x0[j] = rng.uniform(0.5, 1.5);
  for (int j = 0; j < n; ++j) out.s0[j] = rng.uniform(0.5, 1.5);
  for (int i = 0; i < m; ++i) out.lambda0[i] = rng.normal();
  p.b = p.A.apply(out.x0);
  p.c = p.A.apply_transpose(out.lambda0) + out.s0;
  p.meta.family = "random_lp";
  p.meta.params = {{"m", double(m)}, {"n", double(n)}};
  p.meta.seed = seed;
  p.name = family_name("lp", {{"m", double(m)}, {"n", double(n)}, {"s", double(seed)}});
  return out;
}

Problem gen_random_lp(int m, int n, std::uint64_t seed) {
  return gen_random_lp_with_certificate(m, n, seed).problem;
}

std::map<std::string, double> parse_params(std::string_view text) {
  std::map<std::string, double> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    require(eq != std::string_view::npos && eq > 0,
            "parameter '" + std::string(item) + "' is not of the form key=value");
    const std::string key(item.substr(0, eq));
    const std::string value(item.substr(eq + 1));
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == value.size() && !value.empty(),
            "parameter '" + key + "' has a non-numeric value '" + value + "'");
    out[key] = v;
  }
  return out;
}

namespace {

double take(std::map<std::string, double>& params, const char* key,
            std::optional<double> fallback) {
  auto it = params.find(key);
  if (it == params.end()) {
    require(fallback.has_value(), std::string("missing parameter '") + key + "'");
    return *fallback;
  }
  const double v = it->second;
  params.erase(it);
  return v;
}

int take_int(std::map<std::string, double>& params, const char* key,
             std::optional<double> fallback) {
  const double v = take(params, key, fallback);
  require(v == std::floor(v) && std::abs(v) < 1e9,
          std::string("parameter '") + key + "' must be an integer");
  return static_cast<int>(v);
}

}  // namespace

Problem generate(const GeneratorSpec& spec) {
  auto params = spec.params;
  Problem p;
  if (spec.family == "meb") {
    const int n = take_int(params, "n", std::nullopt);
    const int d = take_int(params, "d", std::nullopt);
    p = gen_meb(n, d, spec.seed);
  } else if (spec.family == "sqrt_lasso" || spec.family == "lasso") {
    const int m = take_int(params, "m", std::nullopt);
    const int n = take_int(params, "n", std::nullopt);
    const double lambda = take(params, "lambda", 1.0);
    p = gen_sqrt_lasso(m, n, lambda, spec.seed);
  } else if (spec.family == "maxcut_sdp" || spec.family == "maxcut") {
    p = gen_maxcut_sdp(take_int(params, "p", std::nullopt), spec.seed);
  } else if (spec.family == "random_lp" || spec.family == "lp") {
    const int m = take_int(params, "m", std::nullopt);
    const int n = take_int(params, "n", std::nullopt);
    p = gen_random_lp(m, n, spec.seed);
  } else {
    fail(ErrorKind::kInvalidArgument, "unknown generator family '" + spec.family + "'");
  }
  if (!params.empty())
    fail(ErrorKind::kInvalidArgument,
         "unknown parameter '" + params.begin()->first + "' for family " + spec.family);
  return p;
}

}  // namespace nal
