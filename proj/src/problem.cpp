#include "nal/problem.hpp"

#include <cmath>

#include "nal/errors.hpp"

namespace nal {

void Problem::validate() const {
  const Index n = cone.vec_len();
  if (A.cols() != n)
    fail(ErrorKind::kDimensionMismatch,
         "A has " + std::to_string(A.cols()) + " columns, cone has " +
             std::to_string(n) + " coordinates");
  if (b.size() != A.rows())
    fail(ErrorKind::kDimensionMismatch,
         "b has length " + std::to_string(b.size()) + ", A has " +
             std::to_string(A.rows()) + " rows");
  if (c.size() != n)
    fail(ErrorKind::kDimensionMismatch,
         "c has length " + std::to_string(c.size()) + ", expected " +
             std::to_string(n));
  if (!b.allFinite()) fail(ErrorKind::kInvalidArgument, "b is not finite");
  if (!c.allFinite()) fail(ErrorKind::kInvalidArgument, "c is not finite");
}

const GramCache& Problem::gram_cache() const {
  GramCache& cache = gram_.get();
  std::call_once(cache.once, [this, &cache] {
    cache.gram = gram(A, cone);
    if (cache.gram.rows() == 0) {
      cache.full_rank = true;
      return;
    }
    Eigen::LLT<Matrix> llt(cache.gram);
    cache.full_rank = llt.info() == Eigen::Success &&
                      llt.matrixLLT().diagonal().minCoeff() >
                          1e-7 * std::sqrt(cache.gram.diagonal().maxCoeff());
  });
  return cache;
}

void Problem::check_rank() const {
  if (!gram_cache().full_rank)
    fail(ErrorKind::kRankDeficient, "A A* is singular: A must have full row rank");
}

const Matrix& Problem::gram_matrix() const { return gram_cache().gram; }

Element Problem::cost_riesz() const {
  return c.cwiseQuotient(metric_weights(cone));
}

std::map<std::string, double> Problem::original_values(const Element& x) const {
  std::map<std::string, double> out = meta.columns.shift;
  for (const ColumnMap::Entry& e : meta.columns.entries)
    out[e.variable] += e.sign * x[e.column];
  return out;
}

bool same_data(const Problem& a, const Problem& b) {
  return a.cone == b.cone && a.A == b.A && a.b == b.b && a.c == b.c;
}

}  // namespace nal
