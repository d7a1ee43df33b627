#include "nal/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "nal/errors.hpp"

namespace nal {

LinearMap::LinearMap(Index rows, Index cols,
                     const std::vector<Triplet>& triplets) {
  if (rows < 0 || cols < 0)
    fail(ErrorKind::kInvalidArgument, "LinearMap: negative dimensions");
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(triplets.size());
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      std::ostringstream os;
      os << "LinearMap: entry (" << t.row << ", " << t.col
         << ") outside " << rows << " x " << cols;
      fail(ErrorKind::kDimensionMismatch, os.str());
    }
    if (!std::isfinite(t.value))
      fail(ErrorKind::kInvalidArgument, "LinearMap: non-finite entry");
    entries.emplace_back(t.row, t.col, t.value);
  }
  csr_.resize(rows, cols);
  csr_.setFromTriplets(entries.begin(), entries.end());
  csr_.prune(0.0);
  csr_.makeCompressed();
}

Vector LinearMap::apply(const Vector& x) const {
  if (x.size() != cols())
    fail(ErrorKind::kDimensionMismatch, "LinearMap::apply: length mismatch");
  return csr_ * x;
}

Vector LinearMap::apply_transpose(const Vector& y) const {
  if (y.size() != rows())
    fail(ErrorKind::kDimensionMismatch, "LinearMap::apply_transpose: length mismatch");
  return csr_.transpose() * y;
}

std::vector<Triplet> LinearMap::triplets() const {
  std::vector<Triplet> out;
  out.reserve(static_cast<std::size_t>(csr_.nonZeros()));
  for (Index r = 0; r < csr_.outerSize(); ++r)
    for (Csr::InnerIterator it(csr_, r); it; ++it)
      out.push_back({it.row(), it.col(), it.value()});
  return out;
}

Matrix LinearMap::dense() const { return Matrix(csr_); }

bool operator==(const LinearMap& a, const LinearMap& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         a.triplets() == b.triplets();
}

Vector apply_primal(const LinearMap& A, const Element& x) { return A.apply(x); }

Element apply_adjoint(const LinearMap& A, const ConeDesc& cone,
                      const Vector& lambda) {
  if (A.cols() != cone.vec_len())
    fail(ErrorKind::kDimensionMismatch, "apply_adjoint: operator/cone mismatch");
  return A.apply_transpose(lambda).cwiseQuotient(metric_weights(cone));
}

Matrix gram(const LinearMap& A, const ConeDesc& cone) {
  const Vector winv = metric_weights(cone).cwiseInverse();
  const LinearMap::Csr& a = A.csr();
  Matrix g = Matrix(a * winv.asDiagonal() * a.transpose());
  return 0.5 * (g + g.transpose());
}

ScmMatrix scm_assemble(const LinearMap& A, const Spectral& s_spec,
                       const Spectral& z_spec) {
  const ConeDesc& cone = s_spec.cone();
  if (A.cols() != cone.vec_len())
    fail(ErrorKind::kDimensionMismatch, "scm_assemble: operator/cone mismatch");
  const Index m = A.rows();
  const Vector winv = metric_weights(cone).cwiseInverse();
  ScmMatrix out;
  out.m.resize(m, m);
  Element a_j(cone.vec_len());
  for (Index j = 0; j < m; ++j) {
    a_j.setZero();
    for (LinearMap::Csr::InnerIterator it(A.csr(), j); it; ++it)
      a_j[it.col()] = it.value() * winv[it.col()];
    out.m.col(j) = A.apply(weight_apply(s_spec, z_spec, a_j));
  }
  out.m = 0.5 * (out.m + out.m.transpose()).eval();
  return out;
}

void scm_factorize(ScmMatrix& M) {
  const Index m = M.m.rows();
  if (m == 0) {
    M.factor.emplace(M.m);
    return;
  }
  if (!M.m.allFinite())
    fail(ErrorKind::kNumericalFailure, "scm_factorize: non-finite Schur complement");
  const double scale = std::max(M.m.trace() / static_cast<double>(m), 0.0);
  for (double rel : kShiftLadder) {
    const double shift = rel * scale;
    Matrix shifted = M.m;
    shifted.diagonal().array() += shift;
    Eigen::LLT<Matrix> llt(shifted);
    if (llt.info() == Eigen::Success && llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0) {
      M.shift = shift;
      M.factor.emplace(std::move(llt));
      return;
    }
  }
  fail(ErrorKind::kRankDeficient,
       "Cholesky of the Schur complement failed after the maximum diagonal shift");
}

Vector scm_solve(ScmMatrix& M, const Vector& r) {
  if (r.size() != M.m.rows())
    fail(ErrorKind::kDimensionMismatch, "scm_solve: length mismatch");
  if (!M.factor) scm_factorize(M);
  Vector d = M.factor->solve(r);
  if (M.shift > 0.0) {
    // One refinement step against the unshifted matrix.
    d += M.factor->solve(r - M.m * d);
  }
  return d;
}

double cond_number(const Matrix& M) {
  if (M.rows() != M.cols())
    fail(ErrorKind::kDimensionMismatch, "cond_number: matrix not square");
  if (M.rows() > kMaxDenseEigen)
    fail(ErrorKind::kInvalidArgument, "cond_number: dense eigensolve limited to m <= 2000");
  if (M.rows() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(M, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0)) {
    std::ostringstream os;
    os << "cond_number: smallest eigenvalue " << lo << " is not positive";
    fail(ErrorKind::kNonPositiveEigenvalue, os.str());
  }
  return hi / lo;
}

}  // namespace nal
