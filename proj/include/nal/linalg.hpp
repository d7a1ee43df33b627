#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Sparse>
#include <memory>
#include <optional>
#include <vector>

#include "nal/cones.hpp"

namespace nal {

struct Triplet {
  Index row;
  Index col;
  double value;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

// Sparse constraint operator with m rows over vec_len columns. Duplicate
// (row, col) entries are summed at construction; entries summing to exactly
// zero are dropped.
class LinearMap {
 public:
  using Csr = Eigen::SparseMatrix<double, Eigen::RowMajor>;

  LinearMap() = default;
  LinearMap(Index rows, Index cols, const std::vector<Triplet>& triplets);

  Index rows() const { return csr_.rows(); }
  Index cols() const { return csr_.cols(); }
  Index nonzeros() const { return csr_.nonZeros(); }
  const Csr& csr() const { return csr_; }

  Vector apply(const Vector& x) const;
  Vector apply_transpose(const Vector& y) const;
  // Entries in row-major order.
  std::vector<Triplet> triplets() const;
  Matrix dense() const;

  friend bool operator==(const LinearMap& a, const LinearMap& b);

 private:
  Csr csr_;
};

Vector apply_primal(const LinearMap& A, const Element& x);
// Adjoint with respect to the algebra inner product of `cone`:
// <A x, lambda> = <x, A* lambda>.
Element apply_adjoint(const LinearMap& A, const ConeDesc& cone,
                      const Vector& lambda);
// Dense A A* (m x m).
Matrix gram(const LinearMap& A, const ConeDesc& cone);

struct ScmMatrix {
  Matrix m;
  // Diagonal shift added before the factorization that succeeded.
  double shift = 0.0;
  std::optional<Eigen::LLT<Matrix>> factor;
};

// Smallest to largest relative shift tried on Cholesky breakdown; the
// absolute shift is ladder value * trace(M) / m.
inline constexpr double kShiftLadder[] = {0.0, 1e-14, 1e-12, 1e-10, 1e-8};

// M_ij = <a_i, W a_j> with a_j = A* e_j and W = L(z) L(z+s)^{-1}.
ScmMatrix scm_assemble(const LinearMap& A, const Spectral& s_spec,
                       const Spectral& z_spec);

// Factorizes M on first use (walking the shift ladder) and solves M d = r.
Vector scm_solve(ScmMatrix& M, const Vector& r);
void scm_factorize(ScmMatrix& M);

inline constexpr Index kMaxDenseEigen = 2000;

double cond_number(const Matrix& M);
inline double cond_number(const ScmMatrix& M) { return cond_number(M.m); }

}  // namespace nal
