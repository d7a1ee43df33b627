#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "nal/cones.hpp"
#include "nal/linalg.hpp"

namespace nal {

// How a column of the standard-form problem maps back to an original model
// variable: original value = sum over entries of sign * x[column] + shift.
struct ColumnMap {
  struct Entry {
    std::string variable;
    Index column;
    double sign;
  };
  std::vector<Entry> entries;
  std::map<std::string, double> shift;
};

struct ProblemMeta {
  double objective_constant = 0.0;
  std::string family;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  ColumnMap columns;
};

// Lazily computed A A*. Copies of a Problem start with an empty cache, so
// editing a copy's data never reads a stale factorization.
struct GramCache {
  std::once_flag once;
  Matrix gram;
  bool full_rank = false;
};

class GramSlot {
 public:
  GramSlot() = default;
  GramSlot(const GramSlot&) {}
  GramSlot& operator=(const GramSlot&) {
    cache_ = std::make_unique<GramCache>();
    return *this;
  }
  GramSlot(GramSlot&&) noexcept = default;
  GramSlot& operator=(GramSlot&&) noexcept = default;

  GramCache& get() const {
    if (!cache_) cache_ = std::make_unique<GramCache>();
    return *cache_;
  }

 private:
  mutable std::unique_ptr<GramCache> cache_ = std::make_unique<GramCache>();
};

// Standard-form primal: min <c, x> s.t. A x = b, x in cone. The cost c is
// stored in coordinates, so the objective is the plain dot product c'x.
struct Problem {
  LinearMap A;
  Vector b;
  Element c;
  ConeDesc cone;
  std::string name;
  ProblemMeta meta;

  // Checks dimensions and finiteness. Throws DimensionMismatch or
  // InvalidArgument.
  void validate() const;
  // Factorizes A A* once and throws RankDeficient if it is not positive
  // definite. The problem data must not change after the first call.
  void check_rank() const;
  // Dense A A* (computed once).
  const Matrix& gram_matrix() const;
  // Cost expressed in the algebra inner product: <c_J, x> = c'x.
  Element cost_riesz() const;
  // The original model values of an MPS-derived problem.
  std::map<std::string, double> original_values(const Element& x) const;

 private:
  GramSlot gram_;
  const GramCache& gram_cache() const;
};

// Field-by-field equality of the numerical data (A, b, c, cone).
bool same_data(const Problem& a, const Problem& b);

}  // namespace nal
