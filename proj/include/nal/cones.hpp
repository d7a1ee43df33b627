#pragma once

// Euclidean Jordan algebra kernels for products of nonnegative orthants,
// second-order cones and PSD cones.
//
// Coordinates: an Element is a flat vector segmented per block. Orthant and
// second-order blocks are stored as-is; a PSD block of order p is stored as
// the scaled lower triangle (column-major, off-diagonals times sqrt(2)), so
// that the coordinate dot product of two PSD blocks equals tr(XY).
//
// The algebra inner product is the trace form <x, y> = tr(x o y). On orthant
// and PSD blocks this is the coordinate dot product; on a second-order block
// it is 2 x'y. metric_weights() exposes the per-coordinate factor.

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

namespace nal {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Element = Eigen::VectorXd;

enum class ConeKind { kOrthant, kSecondOrder, kPsd };

struct BlockSpec {
  ConeKind kind;
  Index dim;

  friend bool operator==(const BlockSpec&, const BlockSpec&) = default;
};

constexpr BlockSpec Orthant(Index n) { return {ConeKind::kOrthant, n}; }
constexpr BlockSpec SecondOrder(Index n) { return {ConeKind::kSecondOrder, n}; }
constexpr BlockSpec Psd(Index p) { return {ConeKind::kPsd, p}; }

struct ConeBlock {
  ConeKind kind;
  Index dim;         // n for orthant / second-order, p for PSD
  Index offset;      // first coordinate of the block
  Index size;        // number of coordinates
  Index rank;        // number of eigenvalues
  Index eig_offset;  // first eigenvalue slot of the block
};

class ConeDesc {
 public:
  ConeDesc() = default;
  explicit ConeDesc(const std::vector<BlockSpec>& blocks);

  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  Index vec_len() const { return vec_len_; }
  Index rank() const { return rank_; }
  bool all_orthant() const;
  std::vector<BlockSpec> specs() const;
  std::string to_string() const;

  friend bool operator==(const ConeDesc& a, const ConeDesc& b) {
    return a.specs() == b.specs();
  }

 private:
  std::vector<ConeBlock> blocks_;
  Index vec_len_ = 0;
  Index rank_ = 0;
};

// Scaled lower-triangle vectorization of a symmetric matrix and its inverse.
Index svec_size(Index p);
Index svec_index(Index p, Index i, Index j);
Vector svec(const Matrix& X);
Matrix smat(const Eigen::Ref<const Vector>& v, Index p);

Element identity(const ConeDesc& cone);
Vector metric_weights(const ConeDesc& cone);
double inner(const ConeDesc& cone, const Element& x, const Element& y);
double norm(const ConeDesc& cone, const Element& x);

Element jordan_product(const ConeDesc& cone, const Element& x,
                       const Element& y);

// Jordan frame of one element: second-order blocks keep the unit direction u
// of the tail (idempotents (1, +-u)/2), PSD blocks keep the orthonormal
// eigenvector matrix. Orthant blocks use the standard basis and store nothing.
struct Frame {
  ConeDesc cone;
  std::vector<Matrix> bases;
};

// Eigenvalues paired with the idempotents of a frame. spectral() sorts them
// descending inside each second-order and PSD block; spectra derived from a
// shared frame keep the frame order so that eigenvalue i always belongs to
// idempotent v_i.
struct Spectral {
  std::shared_ptr<const Frame> frame;
  Vector eigenvalues;

  const ConeDesc& cone() const { return frame->cone; }
  bool shares_frame_with(const Spectral& other) const {
    return frame == other.frame;
  }
};

Spectral spectral(const ConeDesc& cone, const Element& x);
Spectral with_eigenvalues(const Spectral& spec, Vector eigenvalues);
Element recompose(const Spectral& spec);
// The idempotent v_i of the frame, i in [0, rank).
Element idempotent(const Spectral& spec, Index i);

struct ScalarMap {
  enum class Kind { kSquare, kSqrt, kInverse, kShiftScale };
  Kind kind = Kind::kSquare;
  double scale = 1.0;  // kShiftScale: f(t) = scale * t + shift
  double shift = 0.0;

  static ScalarMap square() { return {Kind::kSquare}; }
  static ScalarMap sqrt() { return {Kind::kSqrt}; }
  static ScalarMap inverse() { return {Kind::kInverse}; }
  static ScalarMap shift_scale(double scale, double shift) {
    return {Kind::kShiftScale, scale, shift};
  }
};

Element map_eigs(const Spectral& spec, const ScalarMap& f);

struct EigSummary {
  double trace = 0.0;
  double det = 1.0;
  std::vector<double> block_trace;
  std::vector<double> block_det;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool in_interior = false;
};

EigSummary eig_queries(const Spectral& spec);

struct BarrierValue {
  double value;
  Element grad;
};

// Natural barrier -ln det(x) and its gradient -x^{-1}.
BarrierValue barrier(const Spectral& spec);

Element lyapunov_apply(const ConeDesc& cone, const Element& x,
                       const Element& y);
// Solves x o w = y for interior x.
Element lyapunov_solve(const Spectral& x_spec, const Element& y);
// P(x) y = 2 x o (x o y) - x^2 o y, built from Jordan products only.
Element quad_rep_apply(const ConeDesc& cone, const Element& x,
                       const Element& y);

// Applies L(z) L(z + s)^{-1} for interior s, z sharing one frame.
Element weight_apply(const Spectral& s_spec, const Spectral& z_spec,
                     const Element& y);
// Every eigenvalue of that operator, one entry per Peirce space that is not
// trivial (second-order blocks of size 2 have no off-diagonal space).
Vector weight_eigenvalues(const Spectral& s_spec, const Spectral& z_spec);

}  // namespace nal
