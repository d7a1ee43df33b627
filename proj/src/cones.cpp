#include "nal/cones.hpp"

#include <cmath>
#include <sstream>

#include "nal/errors.hpp"

namespace nal {
namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

void check_len(const ConeDesc& cone, const Element& x, const char* what) {
  if (x.size() != cone.vec_len()) {
    std::ostringstream os;
    os << what << ": element has length " << x.size() << ", cone expects "
       << cone.vec_len();
    fail(ErrorKind::kDimensionMismatch, os.str());
  }
}

void require_interior(const Spectral& spec, const char* what) {
  for (Index i = 0; i < spec.eigenvalues.size(); ++i) {
    if (!(spec.eigenvalues[i] > 0.0)) {
      std::ostringstream os;
      os << what << ": eigenvalue " << i << " = " << spec.eigenvalues[i]
         << " is not positive";
      fail(ErrorKind::kNotInterior, os.str());
    }
  }
}

// Peirce-space scaling in a shared frame. `coef(i, j)` gives the factor for
// the space V_ij of the block, with i, j local eigenvalue indices (i == j for
// the diagonal spaces).
template <typename Coef>
Element peirce_scale(const Frame& frame, const Element& y, Coef&& coef) {
  const ConeDesc& cone = frame.cone;
  Element out(cone.vec_len());
  for (std::size_t b = 0; b < cone.blocks().size(); ++b) {
    const ConeBlock& blk = cone.blocks()[b];
    auto yb = y.segment(blk.offset, blk.size);
    auto ob = out.segment(blk.offset, blk.size);
    switch (blk.kind) {
      case ConeKind::kOrthant:
        for (Index i = 0; i < blk.size; ++i) ob[i] = coef(blk, i, i) * yb[i];
        break;
      case ConeKind::kSecondOrder: {
        const Vector u = frame.bases[b].col(0);
        const double y0 = yb[0];
        const auto ybar = yb.tail(blk.size - 1);
        const double uy = u.dot(ybar);
        // P11 y = (y0 + u'ybar)/2 (1, u), P22 y = (y0 - u'ybar)/2 (1, -u),
        // P12 y = (0, ybar - (u'ybar) u).
        const double a = 0.5 * (y0 + uy) * coef(blk, 0, 0);
        const double c = 0.5 * (y0 - uy) * coef(blk, 1, 1);
        const double g = coef(blk, 0, 1);
        ob[0] = a + c;
        ob.tail(blk.size - 1) = (a - c) * u + g * (ybar - uy * u);
        break;
      }
      case ConeKind::kPsd: {
        const Matrix& q = frame.bases[b];
        Matrix t = q.transpose() * smat(yb, blk.dim) * q;
        for (Index j = 0; j < blk.dim; ++j)
          for (Index i = 0; i < blk.dim; ++i) t(i, j) *= coef(blk, i, j);
        ob = svec(q * t * q.transpose());
        break;
      }
    }
  }
  return out;
}

}  // namespace

ConeDesc::ConeDesc(const std::vector<BlockSpec>& blocks) {
  for (const BlockSpec& spec : blocks) {
    if (spec.dim < 1)
      fail(ErrorKind::kInvalidArgument, "cone block dimension must be >= 1");
    if (spec.kind == ConeKind::kSecondOrder && spec.dim < 2)
      fail(ErrorKind::kInvalidArgument, "SOC n >= 2 required");
    ConeBlock blk{spec.kind, spec.dim, vec_len_, 0, 0, rank_};
    switch (spec.kind) {
      case ConeKind::kOrthant:
        blk.size = spec.dim;
        blk.rank = spec.dim;
        break;
      case ConeKind::kSecondOrder:
        blk.size = spec.dim;
        blk.rank = 2;
        break;
      case ConeKind::kPsd:
        blk.size = svec_size(spec.dim);
        blk.rank = spec.dim;
        break;
    }
    vec_len_ += blk.size;
    rank_ += blk.rank;
    blocks_.push_back(blk);
  }
}

bool ConeDesc::all_orthant() const {
  for (const ConeBlock& b : blocks_)
    if (b.kind != ConeKind::kOrthant) return false;
  return true;
}

std::vector<BlockSpec> ConeDesc::specs() const {
  std::vector<BlockSpec> out;
  out.reserve(blocks_.size());
  for (const ConeBlock& b : blocks_) out.push_back({b.kind, b.dim});
  return out;
}

std::string ConeDesc::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) os << " x ";
    switch (blocks_[i].kind) {
      case ConeKind::kOrthant: os << "NN(" << blocks_[i].dim << ")"; break;
      case ConeKind::kSecondOrder: os << "SOC(" << blocks_[i].dim << ")"; break;
      case ConeKind::kPsd: os << "PSD(" << blocks_[i].dim << ")"; break;
    }
  }
  return os.str();
}

Index svec_size(Index p) { return p * (p + 1) / 2; }

Index svec_index(Index p, Index i, Index j) {
  if (i < j) std::swap(i, j);
  return j * p - j * (j - 1) / 2 + (i - j);
}

Vector svec(const Matrix& X) {
  const Index p = X.rows();
  Vector v(svec_size(p));
  Index k = 0;
  for (Index j = 0; j < p; ++j) {
    v[k++] = X(j, j);
    for (Index i = j + 1; i < p; ++i) v[k++] = kSqrt2 * 0.5 * (X(i, j) + X(j, i));
  }
  return v;
}

Matrix smat(const Eigen::Ref<const Vector>& v, Index p) {
  Matrix X(p, p);
  Index k = 0;
  for (Index j = 0; j < p; ++j) {
    X(j, j) = v[k++];
    for (Index i = j + 1; i < p; ++i) {
      X(i, j) = X(j, i) = v[k++] / kSqrt2;
    }
  }
  return X;
}

Element identity(const ConeDesc& cone) {
  Element e = Element::Zero(cone.vec_len());
  for (const ConeBlock& b : cone.blocks()) {
    switch (b.kind) {
      case ConeKind::kOrthant: e.segment(b.offset, b.size).setOnes(); break;
      case ConeKind::kSecondOrder: e[b.offset] = 1.0; break;
      case ConeKind::kPsd:
        for (Index j = 0; j < b.dim; ++j) e[b.offset + svec_index(b.dim, j, j)] = 1.0;
        break;
    }
  }
  return e;
}

Vector metric_weights(const ConeDesc& cone) {
  Vector w = Vector::Ones(cone.vec_len());
  for (const ConeBlock& b : cone.blocks())
    if (b.kind == ConeKind::kSecondOrder) w.segment(b.offset, b.size).setConstant(2.0);
  return w;
}

double inner(const ConeDesc& cone, const Element& x, const Element& y) {
  check_len(cone, x, "inner");
  check_len(cone, y, "inner");
  double acc = 0.0;
  for (const ConeBlock& b : cone.blocks()) {
    const double d = x.segment(b.offset, b.size).dot(y.segment(b.offset, b.size));
    acc += b.kind == ConeKind::kSecondOrder ? 2.0 * d : d;
  }
  return acc;
}

double norm(const ConeDesc& cone, const Element& x) {
  return std::sqrt(inner(cone, x, x));
}

Element jordan_product(const ConeDesc& cone, const Element& x,
                       const Element& y) {
  check_len(cone, x, "jordan_product");
  check_len(cone, y, "jordan_product");
  Element out(cone.vec_len());
  for (const ConeBlock& b : cone.blocks()) {
    auto xb = x.segment(b.offset, b.size);
    auto yb = y.segment(b.offset, b.size);
    auto ob = out.segment(b.offset, b.size);
    switch (b.kind) {
      case ConeKind::kOrthant:
        ob = xb.cwiseProduct(yb);
        break;
      case ConeKind::kSecondOrder:
        ob[0] = xb.dot(yb);
        ob.tail(b.size - 1) = xb[0] * yb.tail(b.size - 1) + yb[0] * xb.tail(b.size - 1);
        break;
      case ConeKind::kPsd: {
        const Matrix X = smat(xb, b.dim);
        const Matrix Y = smat(yb, b.dim);
        const Matrix XY = X * Y;
        ob = svec(0.5 * (XY + XY.transpose()));
        break;
      }
    }
  }
  return out;
}

Spectral spectral(const ConeDesc& cone, const Element& x) {
  check_len(cone, x, "spectral");
  auto frame = std::make_shared<Frame>();
  frame->cone = cone;
  frame->bases.resize(cone.blocks().size());
  Vector eig(cone.rank());
  for (std::size_t bi = 0; bi < cone.blocks().size(); ++bi) {
    const ConeBlock& b = cone.blocks()[bi];
    auto xb = x.segment(b.offset, b.size);
    switch (b.kind) {
      case ConeKind::kOrthant:
        eig.segment(b.eig_offset, b.rank) = xb;
        break;
      case ConeKind::kSecondOrder: {
        const auto tail = xb.tail(b.size - 1);
        const double nrm = tail.norm();
        Matrix u = Matrix::Zero(b.size - 1, 1);
        if (nrm > 0.0) {
          u.col(0) = tail / nrm;
        } else {
          u(0, 0) = 1.0;
        }
        frame->bases[bi] = std::move(u);
        eig[b.eig_offset] = xb[0] + nrm;
        eig[b.eig_offset + 1] = xb[0] - nrm;
        break;
      }
      case ConeKind::kPsd: {
        Eigen::SelfAdjointEigenSolver<Matrix> es(smat(xb, b.dim));
        const Index p = b.dim;
        // Eigen sorts ascending; flip to descending.
        frame->bases[bi] = es.eigenvectors().rowwise().reverse();
        eig.segment(b.eig_offset, p) = es.eigenvalues().reverse();
        break;
      }
    }
  }
  return Spectral{std::move(frame), std::move(eig)};
}

Spectral with_eigenvalues(const Spectral& spec, Vector eigenvalues) {
  if (eigenvalues.size() != spec.eigenvalues.size())
    fail(ErrorKind::kDimensionMismatch, "with_eigenvalues: rank mismatch");
  return Spectral{spec.frame, std::move(eigenvalues)};
}

Element recompose(const Spectral& spec) {
  const ConeDesc& cone = spec.cone();
  Element out(cone.vec_len());
  for (std::size_t bi = 0; bi < cone.blocks().size(); ++bi) {
    const ConeBlock& b = cone.blocks()[bi];
    auto lam = spec.eigenvalues.segment(b.eig_offset, b.rank);
    auto ob = out.segment(b.offset, b.size);
    switch (b.kind) {
      case ConeKind::kOrthant:
        ob = lam;
        break;
      case ConeKind::kSecondOrder:
        ob[0] = 0.5 * (lam[0] + lam[1]);
        ob.tail(b.size - 1) = 0.5 * (lam[0] - lam[1]) * spec.frame->bases[bi].col(0);
        break;
      case ConeKind::kPsd: {
        const Matrix& q = spec.frame->bases[bi];
        ob = svec(q * lam.asDiagonal() * q.transpose());
        break;
      }
    }
  }
  return out;
}

Element idempotent(const Spectral& spec, Index i) {
  const ConeDesc& cone = spec.cone();
  if (i < 0 || i >= cone.rank())
    fail(ErrorKind::kInvalidArgument, "idempotent index out of range");
  Element v = Element::Zero(cone.vec_len());
  for (std::size_t bi = 0; bi < cone.blocks().size(); ++bi) {
    const ConeBlock& b = cone.blocks()[bi];
    if (i < b.eig_offset || i >= b.eig_offset + b.rank) continue;
    const Index local = i - b.eig_offset;
    switch (b.kind) {
      case ConeKind::kOrthant:
        v[b.offset + local] = 1.0;
        break;
      case ConeKind::kSecondOrder:
        v[b.offset] = 0.5;
        v.segment(b.offset + 1, b.size - 1) =
            (local == 0 ? 0.5 : -0.5) * spec.frame->bases[bi].col(0);
        break;
      case ConeKind::kPsd: {
        const Vector q = spec.frame->bases[bi].col(local);
        v.segment(b.offset, b.size) = svec(q * q.transpose());
        break;
      }
    }
  }
  return v;
}

Element map_eigs(const Spectral& spec, const ScalarMap& f) {
  const ConeDesc& cone = spec.cone();
  Vector mapped(spec.eigenvalues.size());
  for (std::size_t bi = 0; bi < cone.blocks().size(); ++bi) {
    const ConeBlock& b = cone.blocks()[bi];
    for (Index k = 0; k < b.rank; ++k) {
      const Index i = b.eig_offset + k;
      const double lam = spec.eigenvalues[i];
      auto domain_fail = [&](const char* need) {
        std::ostringstream os;
        os << need << ": eigenvalue " << k << " of block " << bi << " is "
           << lam;
        fail(ErrorKind::kDomainError, os.str());
      };
      switch (f.kind) {
        case ScalarMap::Kind::kSquare:
          mapped[i] = lam * lam;
          break;
        case ScalarMap::Kind::kSqrt:
          if (!(lam >= 0.0)) domain_fail("sqrt needs nonnegative eigenvalues");
          mapped[i] = std::sqrt(lam);
          break;
        case ScalarMap::Kind::kInverse:
          if (lam == 0.0 || !std::isfinite(lam)) domain_fail("inverse needs nonzero eigenvalues");
          mapped[i] = 1.0 / lam;
          break;
        case ScalarMap::Kind::kShiftScale:
          mapped[i] = f.scale * lam + f.shift;
          break;
      }
    }
  }
  return recompose(with_eigenvalues(spec, std::move(mapped)));
}

EigSummary eig_queries(const Spectral& spec) {
  const ConeDesc& cone = spec.cone();
  EigSummary out;
  out.lambda_min = spec.eigenvalues.size() ? spec.eigenvalues.minCoeff() : 0.0;
  out.lambda_max = spec.eigenvalues.size() ? spec.eigenvalues.maxCoeff() : 0.0;
  for (const ConeBlock& b : cone.blocks()) {
    auto lam = spec.eigenvalues.segment(b.eig_offset, b.rank);
    out.block_trace.push_back(lam.sum());
    out.block_det.push_back(lam.prod());
    out.trace += out.block_trace.back();
    out.det *= out.block_det.back();
  }
  out.in_interior = spec.eigenvalues.size() == 0 || out.lambda_min > 0.0;
  return out;
}

BarrierValue barrier(const Spectral& spec) {
  require_interior(spec, "barrier");
  double value = 0.0;
  for (Index i = 0; i < spec.eigenvalues.size(); ++i)
    value -= std::log(spec.eigenvalues[i]);
  return {value, -map_eigs(spec, ScalarMap::inverse())};
}

Element lyapunov_apply(const ConeDesc& cone, const Element& x,
                       const Element& y) {
  return jordan_product(cone, x, y);
}

Element lyapunov_solve(const Spectral& x_spec, const Element& y) {
  const ConeDesc& cone = x_spec.cone();
  check_len(cone, y, "lyapunov_solve");
  require_interior(x_spec, "lyapunov_solve");
  Element w(cone.vec_len());
  for (std::size_t bi = 0; bi < cone.blocks().size(); ++bi) {
    const ConeBlock& b = cone.blocks()[bi];
    auto lam = x_spec.eigenvalues.segment(b.eig_offset, b.rank);
    auto yb = y.segment(b.offset, b.size);
    auto wb = w.segment(b.offset, b.size);
    switch (b.kind) {
      case ConeKind::kOrthant:
        wb = yb.cwiseQuotient(lam);
        break;
      case ConeKind::kSecondOrder: {
        // Arrow system [x0 xbar'; xbar x0 I] w = y, pivoting on the head.
        const double x0 = 0.5 * (lam[0] + lam[1]);
        const Vector xbar = 0.5 * (lam[0] - lam[1]) * x_spec.frame->bases[bi].col(0);
        const double det = lam[0] * lam[1];
        const auto ybar = yb.tail(b.size - 1);
        const double w0 = (x0 * yb[0] - xbar.dot(ybar)) / det;
        wb[0] = w0;
        wb.tail(b.size - 1) = (ybar - w0 * xbar) / x0;
        break;
      }
      case ConeKind::kPsd: {
        const Matrix& q = x_spec.frame->bases[bi];
        Matrix t = q.transpose() * smat(yb, b.dim) * q;
        for (Index j = 0; j < b.dim; ++j) {
          for (Index i = 0; i < b.dim; ++i) {
            const double den = lam[i] + lam[j];
            if (!(den > 1e-300))
              fail(ErrorKind::kNotInterior, "lyapunov_solve: degenerate Sylvester denominator");
            t(i, j) *= 2.0 / den;
          }
        }
        wb = svec(q * t * q.transpose());
        break;
      }
    }
  }
  return w;
}

Element quad_rep_apply(const ConeDesc& cone, const Element& x,
                       const Element& y) {
  const Element xy = jordan_product(cone, x, y);
  const Element xx = jordan_product(cone, x, x);
  return 2.0 * jordan_product(cone, x, xy) - jordan_product(cone, xx, y);
}

Element weight_apply(const Spectral& s_spec, const Spectral& z_spec,
                     const Element& y) {
  if (!s_spec.shares_frame_with(z_spec))
    fail(ErrorKind::kFrameMismatch, "weight_apply: s and z come from different frames");
  check_len(s_spec.cone(), y, "weight_apply");
  require_interior(s_spec, "weight_apply(s)");
  require_interior(z_spec, "weight_apply(z)");
  const Vector& ls = s_spec.eigenvalues;
  const Vector& lz = z_spec.eigenvalues;
  return peirce_scale(*s_spec.frame, y, [&](const ConeBlock& b, Index i, Index j) {
    const double zi = lz[b.eig_offset + i];
    const double si = ls[b.eig_offset + i];
    if (i == j) return zi / (zi + si);
    const double zj = lz[b.eig_offset + j];
    const double sj = ls[b.eig_offset + j];
    return (zi + zj) / (zi + zj + si + sj);
  });
}

Vector weight_eigenvalues(const Spectral& s_spec, const Spectral& z_spec) {
  if (!s_spec.shares_frame_with(z_spec))
    fail(ErrorKind::kFrameMismatch, "weight_eigenvalues: s and z come from different frames");
  const Vector& ls = s_spec.eigenvalues;
  const Vector& lz = z_spec.eigenvalues;
  std::vector<double> out;
  for (const ConeBlock& b : s_spec.cone().blocks()) {
    const Index o = b.eig_offset;
    auto gamma = [&](Index i, Index j) {
      return (lz[o + i] + lz[o + j]) /
             (lz[o + i] + lz[o + j] + ls[o + i] + ls[o + j]);
    };
    switch (b.kind) {
      case ConeKind::kOrthant:
        for (Index i = 0; i < b.rank; ++i) out.push_back(gamma(i, i));
        break;
      case ConeKind::kSecondOrder:
        out.push_back(gamma(0, 0));
        out.push_back(gamma(1, 1));
        if (b.size > 2) out.push_back(gamma(0, 1));
        break;
      case ConeKind::kPsd:
        for (Index j = 0; j < b.rank; ++j)
          for (Index i = j; i < b.rank; ++i) out.push_back(gamma(i, j));
        break;
    }
  }
  return Eigen::Map<Vector>(out.data(), static_cast<Index>(out.size()));
}

}  // namespace nal
