#pragma once

// Random instance builders and brute-force oracles shared by the tests. The
// oracles rebuild every quantity from full matrices so that they do not share
// code paths with the library.

#include <cmath>
#include <random>
#include <vector>

#include "nal/cones.hpp"
#include "nal/linalg.hpp"
#include "nal/problem.hpp"

namespace nal::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double normal() { return norm_(eng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }
  Matrix normal_matrix(Index r, Index c) {
    Matrix m(r, c);
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) m(i, j) = normal();
    return m;
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  std::normal_distribution<double> norm_{0.0, 1.0};
};

inline ConeDesc mixed_cone() {
  return ConeDesc({Orthant(5), SecondOrder(4), Psd(6)});
}

// A random product of up to three blocks of small size.
inline ConeDesc random_cone(Gen& g) {
  std::vector<BlockSpec> specs;
  const int blocks = g.integer(1, 3);
  for (int b = 0; b < blocks; ++b) {
    switch (g.integer(0, 2)) {
      case 0: specs.push_back(Orthant(g.integer(1, 4))); break;
      case 1: specs.push_back(SecondOrder(g.integer(2, 5))); break;
      default: specs.push_back(Psd(g.integer(1, 4))); break;
    }
  }
  return ConeDesc(specs);
}

// Scaled lower triangle, written independently of the library.
inline Vector oracle_svec(const Matrix& X) {
  const Index p = X.rows();
  Vector v(p * (p + 1) / 2);
  Index k = 0;
  for (Index j = 0; j < p; ++j)
    for (Index i = j; i < p; ++i) v[k++] = (i == j ? 1.0 : std::sqrt(2.0)) * X(i, j);
  return v;
}

inline Matrix oracle_smat(const Vector& v, Index p) {
  Matrix X(p, p);
  Index k = 0;
  for (Index j = 0; j < p; ++j)
    for (Index i = j; i < p; ++i) {
      const double a = (i == j ? 1.0 : 1.0 / std::sqrt(2.0)) * v[k++];
      X(i, j) = a;
      X(j, i) = a;
    }
  return X;
}

inline Element random_element(const ConeDesc& cone, Gen& g) {
  return g.normal_vector(cone.vec_len());
}

// Interior element built per block from explicit cone membership.
inline Element random_interior(const ConeDesc& cone, Gen& g, double floor = 0.2) {
  Element x(cone.vec_len());
  for (const ConeBlock& b : cone.blocks()) {
    auto seg = x.segment(b.offset, b.size);
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (Index i = 0; i < b.size; ++i) seg[i] = g.uniform(floor, 2.0);
        break;
      case ConeKind::kSecondOrder: {
        Vector tail = g.normal_vector(b.dim - 1);
        seg[0] = tail.norm() + g.uniform(floor, 2.0);
        seg.tail(b.dim - 1) = tail;
        break;
      }
      case ConeKind::kPsd: {
        const Matrix G = g.normal_matrix(b.dim, b.dim);
        const Matrix X = G * G.transpose() / static_cast<double>(b.dim) +
                         floor * Matrix::Identity(b.dim, b.dim);
        seg = oracle_svec(X);
        break;
      }
    }
  }
  return x;
}

// Trace-form inner product evaluated blockwise from full matrices.
inline double oracle_inner(const ConeDesc& cone, const Element& x, const Element& y) {
  double acc = 0.0;
  for (const ConeBlock& b : cone.blocks()) {
    const Vector xs = x.segment(b.offset, b.size);
    const Vector ys = y.segment(b.offset, b.size);
    switch (b.kind) {
      case ConeKind::kOrthant: acc += xs.dot(ys); break;
      case ConeKind::kSecondOrder: acc += 2.0 * xs.dot(ys); break;
      case ConeKind::kPsd:
        acc += (oracle_smat(xs, b.dim) * oracle_smat(ys, b.dim)).trace();
        break;
    }
  }
  return acc;
}

inline Element oracle_product(const ConeDesc& cone, const Element& x, const Element& y) {
  Element out(cone.vec_len());
  for (const ConeBlock& b : cone.blocks()) {
    const Vector xs = x.segment(b.offset, b.size);
    const Vector ys = y.segment(b.offset, b.size);
    auto o = out.segment(b.offset, b.size);
    switch (b.kind) {
      case ConeKind::kOrthant: o = xs.cwiseProduct(ys); break;
      case ConeKind::kSecondOrder:
        o[0] = xs.dot(ys);
        o.tail(b.dim - 1) = xs[0] * ys.tail(b.dim - 1) + ys[0] * xs.tail(b.dim - 1);
        break;
      case ConeKind::kPsd: {
        const Matrix X = oracle_smat(xs, b.dim), Y = oracle_smat(ys, b.dim);
        o = oracle_svec(0.5 * (X * Y + Y * X));
        break;
      }
    }
  }
  return out;
}

inline Element oracle_identity(const ConeDesc& cone) {
  Element e = Element::Zero(cone.vec_len());
  for (const ConeBlock& b : cone.blocks()) {
    switch (b.kind) {
      case ConeKind::kOrthant: e.segment(b.offset, b.size).setOnes(); break;
      case ConeKind::kSecondOrder: e[b.offset] = 1.0; break;
      case ConeKind::kPsd:
        e.segment(b.offset, b.size) = oracle_svec(Matrix::Identity(b.dim, b.dim));
        break;
    }
  }
  return e;
}

// Dense matrix of the operator y -> x o y in coordinates.
inline Matrix oracle_lyapunov_matrix(const ConeDesc& cone, const Element& x) {
  const Index n = cone.vec_len();
  Matrix L(n, n);
  for (Index j = 0; j < n; ++j)
    L.col(j) = oracle_product(cone, x, Element::Unit(n, j));
  return L;
}

inline Vector oracle_weights(const ConeDesc& cone) {
  Vector w(cone.vec_len());
  for (const ConeBlock& b : cone.blocks())
    w.segment(b.offset, b.size).setConstant(b.kind == ConeKind::kSecondOrder ? 2.0 : 1.0);
  return w;
}

// Dense random full-row-rank operator.
inline LinearMap random_map(Index m, Index n, Gen& g) {
  std::vector<Triplet> t;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) t.push_back({i, j, g.normal()});
  return LinearMap(m, n, t);
}

// A random problem over `cone` with m rows that is strictly feasible on both
// sides: b = A x0 and c = A' y0 + weights o s0 (so that A* y0 + s0 = c in the
// trace form) for interior x0, s0.
inline Problem random_problem(const ConeDesc& cone, Index m, Gen& g) {
  Problem p;
  p.cone = cone;
  p.A = random_map(m, cone.vec_len(), g);
  p.b = apply_primal(p.A, random_interior(cone, g));
  const Vector y0 = g.normal_vector(m);
  p.c = p.A.apply_transpose(y0) +
        random_interior(cone, g).cwiseProduct(oracle_weights(cone));
  return p;
}

inline Problem make_problem(const ConeDesc& cone, Index m, const std::vector<Triplet>& t,
                            std::vector<double> b, std::vector<double> c) {
  Problem p;
  p.cone = cone;
  p.A = LinearMap(m, cone.vec_len(), t);
  p.b = Eigen::Map<Vector>(b.data(), static_cast<Index>(b.size()));
  p.c = Eigen::Map<Vector>(c.data(), static_cast<Index>(c.size()));
  return p;
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace nal::testing
