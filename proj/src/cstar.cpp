#include "qsplit/cstar.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsplit/error.hpp"

namespace qsplit {

namespace {

Eigen::Map<const CVec> flat_view(const Mat& x) { return {x.data(), x.size()}; }

}  // namespace

Mat ConcreteStarAlgebra::element(const CVec& c) const {
  CVec v = flat_ * c;
  return Eigen::Map<Mat>(v.data(), n_, n_);
}

CVec ConcreteStarAlgebra::coords(const Mat& x) const {
  if (x.rows() != n_ || x.cols() != n_) throw InputError("ShapeMismatch", "element has wrong ambient size");
  return gram_inv_ * (flat_.adjoint() * flat_view(x));
}

double ConcreteStarAlgebra::span_residual(const Mat& x) const {
  const double nx = x.norm();
  if (nx == 0) return 0;
  return (flat_ * coords(x) - flat_view(x)).norm() / nx;
}

Mat ConcreteStarAlgebra::left_mul(const CVec& a) const {
  Mat out = Mat::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i)
    if (a(i) != cplx(0)) out += a(i) * lmul_[i];
  return out;
}

Mat ConcreteStarAlgebra::right_mul(const CVec& a) const {
  Mat out(dim(), dim());
  for (int j = 0; j < dim(); ++j) out.col(j) = lmul_[j] * a;
  return out;
}

CVec ConcreteStarAlgebra::mul(const CVec& a, const CVec& b) const { return left_mul(a) * b; }

CVec ConcreteStarAlgebra::star(const CVec& a) const { return star_ * a.conjugate(); }

cplx ConcreteStarAlgebra::trace(const CVec& a) const { return element(a).trace() / static_cast<double>(n_); }

CVec ConcreteStarAlgebra::basis_vector(int k) const { return CVec::Unit(dim(), k); }

ConcreteStarAlgebra closure_check(std::vector<Mat> basis, std::optional<CVec> unit, double tol) {
  if (basis.empty()) throw InputError("EmptyBasis", "algebra basis is empty");
  const int n = static_cast<int>(basis[0].rows());
  const int d = static_cast<int>(basis.size());
  for (const auto& b : basis)
    if (b.rows() != n || b.cols() != n) throw InputError("ShapeMismatch", "basis matrices must be square and equal size");

  ConcreteStarAlgebra a;
  a.n_ = n;
  a.basis_ = std::move(basis);
  a.flat_.resize(static_cast<Eigen::Index>(n) * n, d);
  for (int k = 0; k < d; ++k) a.flat_.col(k) = flat_view(a.basis_[k]);
  Mat gram = a.flat_.adjoint() * a.flat_;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram);
  if (es.eigenvalues()(0) <= kRankThreshold * es.eigenvalues()(d - 1))
    throw InputError("DependentBasis", "basis matrices are linearly dependent");
  a.gram_inv_ = gram.inverse();

  auto check = [&](const Mat& x, const std::string& what) {
    CVec c = a.coords(x);
    const double nx = x.norm();
    const double r = nx == 0 ? 0 : (a.flat_ * c - flat_view(x)).norm() / nx;
    if (r > tol) {
      std::ostringstream os;
      os << what << " leaves the span, residual " << r;
      throw MathError("NotClosed", os.str());
    }
    return c;
  };

  a.lmul_.assign(static_cast<std::size_t>(d), Mat(d, d));
  a.star_.resize(d, d);
  for (int i = 0; i < d; ++i) {
    a.star_.col(i) = check(a.basis_[i].adjoint(), "adjoint of basis element " + std::to_string(i));
    for (int j = 0; j < d; ++j)
      a.lmul_[i].col(j) = check(a.basis_[i] * a.basis_[j],
                                "product (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }

  if (unit) {
    if (unit->size() != d) throw InputError("ShapeMismatch", "unit coefficient vector has wrong length");
    a.unit_ = *unit;
  } else {
    // solve u b_i = b_i = b_i u in coordinates
    Mat sys(2 * d * d, d);
    CVec rhs(2 * d * d);
    for (int i = 0; i < d; ++i) {
      Mat r(d, d);
      for (int k = 0; k < d; ++k) r.col(k) = a.lmul_[k].col(i);
      sys.block(2 * i * d, 0, d, d) = r;
      sys.block((2 * i + 1) * d, 0, d, d) = a.lmul_[i];
      rhs.segment(2 * i * d, d) = CVec::Unit(d, i);
      rhs.segment((2 * i + 1) * d, d) = CVec::Unit(d, i);
    }
    a.unit_ = sys.colPivHouseholderQr().solve(rhs);
  }
  const Mat u = a.element(a.unit_);
  for (int i = 0; i < d; ++i) {
    const double r = std::max(rel_residual(a.basis_[i], u * a.basis_[i]), rel_residual(a.basis_[i], a.basis_[i] * u));
    if (r > tol) throw MathError("NoUnit", "unit fails on basis element " + std::to_string(i));
  }
  a.verified_ = true;
  return a;
}

ConcreteStarAlgebra scalar_algebra() { return closure_check({Mat::Identity(1, 1)}, CVec::Ones(1)); }

ConcreteStarAlgebra full_matrix_algebra(int n) {
  std::vector<Mat> basis;
  CVec unit = CVec::Zero(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat e = Mat::Zero(n, n);
      e(i, j) = 1;
      basis.push_back(e);
      if (i == j) unit(i * n + j) = 1;
    }
  return closure_check(std::move(basis), unit);
}

ConcreteStarAlgebra diagonal_algebra(int n) {
  std::vector<Mat> basis;
  for (int i = 0; i < n; ++i) {
    Mat e = Mat::Zero(n, n);
    e(i, i) = 1;
    basis.push_back(e);
  }
  return closure_check(std::move(basis), CVec::Ones(n));
}

ConcreteStarAlgebra direct_sum(const ConcreteStarAlgebra& a, const ConcreteStarAlgebra& b) {
  const int n = a.ambient() + b.ambient();
  std::vector<Mat> basis;
  for (const auto& x : a.basis()) {
    Mat m = Mat::Zero(n, n);
    m.topLeftCorner(a.ambient(), a.ambient()) = x;
    basis.push_back(m);
  }
  for (const auto& x : b.basis()) {
    Mat m = Mat::Zero(n, n);
    m.bottomRightCorner(b.ambient(), b.ambient()) = x;
    basis.push_back(m);
  }
  CVec unit(a.dim() + b.dim());
  unit << a.unit(), b.unit();
  return closure_check(std::move(basis), unit);
}

ConcreteStarAlgebra twisted_group_algebra(const Cochain2& mu) {
  const auto& g = mu.group;
  const int n = g.order();
  std::vector<Mat> basis;
  for (int x = 0; x < n; ++x) {
    Mat m = Mat::Zero(n, n);
    for (int h = 0; h < n; ++h) m(g.mul(x, h), h) = mu.value(x, h);
    basis.push_back(m);
  }
  return closure_check(std::move(basis), CVec::Unit(n, 0));
}

ConcreteStarAlgebra group_algebra(const FiniteGroup& g) { return twisted_group_algebra(trivial_cochain2(g)); }

ConcreteStarAlgebra corner(const ConcreteStarAlgebra& a, const CVec& p) {
  const Mat pm = a.element(p);
  Support s = psd_support(pm, 0.5);
  const Mat& u = s.vectors;
  std::vector<Mat> basis;
  Mat ortho(u.cols() * u.cols(), 0);
  for (const auto& b : a.basis()) {
    Mat c = u.adjoint() * b * u;
    CVec v = flat_view(c);
    CVec r = v - ortho * (ortho.adjoint() * v);
    if (r.norm() <= 1e-8 * std::max(v.norm(), 1e-300) || v.norm() < 1e-12) continue;
    ortho.conservativeResize(Eigen::NoChange, ortho.cols() + 1);
    ortho.col(ortho.cols() - 1) = r / r.norm();
    basis.push_back(c);
  }
  ConcreteStarAlgebra probe = closure_check(basis, std::nullopt);
  return closure_check(std::move(basis), probe.coords(Mat::Identity(u.cols(), u.cols())));
}

Mat center(const ConcreteStarAlgebra& a) {
  const int d = a.dim();
  Mat stacked(static_cast<Eigen::Index>(d) * d, d);
  double scale = 0;
  for (int i = 0; i < d; ++i) {
    const CVec e = a.basis_vector(i);
    const Mat l = a.left_mul(e);
    scale = std::max(scale, l.norm());
    stacked.middleRows(static_cast<Eigen::Index>(i) * d, d) = l - a.right_mul(e);
  }
  // commutative up to rounding: the relative cut in null_space would see only noise
  Mat z = stacked.norm() <= 1e-12 * std::max(scale, 1.0) ? Mat(Mat::Identity(d, d)) : null_space(stacked, 1e-9);
  // orthonormalize in <x, y> = tau(x^* y)
  Mat t(d, d);
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      t(k, l) = (a.basis()[k].adjoint() * a.basis()[l]).trace() / static_cast<double>(a.ambient());
  Mat g = z.adjoint() * t * z;
  return z * psd_pinv_sqrt(g);
}

std::vector<Mat> Wedderburn::phi(const Mat& x) const {
  std::vector<Mat> out;
  for (const auto& c : components) {
    const int n = c.size;
    Mat m(n, n);
    const cplx t11 = c.units[0][0].trace();
    for (int k = 0; k < n; ++k) {
      const Mat y = x * c.units[k][0];
      for (int j = 0; j < n; ++j) m(j, k) = c.units[0][j].transpose().cwiseProduct(y).sum() / t11;
    }
    out.push_back(m);
  }
  return out;
}

namespace {

CVec random_self_adjoint(const ConcreteStarAlgebra& a, Rng& rng) {
  CVec r = random_vector(a.dim(), rng);
  return (r + a.star(r)) / 2.0;
}

struct Clusters {
  bool ok = false;
  std::vector<Mat> vectors;  // eigenvectors per cluster
};

// Spectral clusters of a Hermitian matrix, accepted only if there are
// `expected` of them with well separated eigenvalues.
Clusters spectral_clusters(const Mat& h, int expected, int equal_size) {
  Clusters out;
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1e-300);
  auto starts = cluster_sorted(ev, 1e-8 * scale);
  if (static_cast<int>(starts.size()) - 1 != expected) return out;
  for (std::size_t c = 1; c + 1 < starts.size(); ++c)
    if (ev(starts[c]) - ev(starts[c] - 1) < kClusterGap * scale) return out;
  for (std::size_t c = 0; c + 1 < starts.size(); ++c) {
    const int len = starts[c + 1] - starts[c];
    if (equal_size > 0 && len != equal_size) return out;
    out.vectors.push_back(es.eigenvectors().middleCols(starts[c], len));
  }
  out.ok = true;
  return out;
}

}  // namespace

Wedderburn wedderburn(const ConcreteStarAlgebra& a, std::uint64_t seed) {
  Wedderburn w;
  w.seed = seed;
  Rng rng(seed);
  const Mat unit = a.element(a.unit());
  const Mat ur = psd_support(unit, 0.5).vectors;
  const double unit_trace = unit.trace().real();
  const Mat z = center(a);
  const int nz = static_cast<int>(z.cols());

  Clusters central;
  for (w.attempts = 1; w.attempts <= 3; ++w.attempts) {
    CVec c = CVec::Zero(a.dim());
    std::normal_distribution<double> nd;
    for (int k = 0; k < nz; ++k) {
      const CVec zk = z.col(k), zs = a.star(zk);
      const double r1 = nd(rng), r2 = nd(rng);
      c += r1 * (zk + zs) / 2.0 + r2 * (zk - zs) / cplx(0, 2);
    }
    central = spectral_clusters(ur.adjoint() * a.element(c) * ur, nz, 0);
    if (central.ok) break;
  }
  if (!central.ok) throw MathError("DecompositionUnstable", "central eigenvalue clusters not separated after 3 retries");
  w.attempts = std::min(w.attempts, 3);

  for (const Mat& vecs : central.vectors) {
    const Mat range = ur * vecs;
    WedderburnBlock blk;
    blk.central_projection = a.coords(range * range.adjoint());
    const int rank = numerical_rank(a.left_mul(blk.central_projection), 1e-8);
    const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(rank))));
    if (n * n != rank) throw MathError("DecompositionUnstable", "block dimension is not a square");
    blk.size = n;
    const int mult = static_cast<int>(range.cols()) / n;
    const Mat pj = a.element(blk.central_projection);

    std::vector<Mat> minimal;
    if (n == 1) {
      minimal.push_back(pj);
    } else {
      Clusters local;
      for (int attempt = 0; attempt < 3 && !local.ok; ++attempt) {
        const Mat h = pj * a.element(random_self_adjoint(a, rng)) * pj;
        local = spectral_clusters(range.adjoint() * h * range, n, mult);
      }
      if (!local.ok) throw MathError("DecompositionUnstable", "block eigenvalue clusters not separated");
      for (const Mat& v : local.vectors) minimal.push_back(range * v * v.adjoint() * range.adjoint());
    }

    std::vector<Mat> e1(n), ek1(n);
    e1[0] = minimal[0];
    ek1[0] = minimal[0];
    const double t11 = minimal[0].trace().real();
    for (int k = 1; k < n; ++k) {
      Mat v;
      double c = 0;
      for (int attempt = 0; attempt < 8 && c < 1e-8; ++attempt) {
        v = minimal[0] * a.element(random_vector(a.dim(), rng)) * minimal[k];
        c = (v * v.adjoint()).trace().real() / t11;
      }
      if (c < 1e-8) throw MathError("DecompositionUnstable", "could not link minimal projections");
      e1[k] = v / std::sqrt(c);
      ek1[k] = e1[k].adjoint();
    }
    blk.units.assign(static_cast<std::size_t>(n), std::vector<Mat>(static_cast<std::size_t>(n)));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) blk.units[j][k] = ek1[j] * e1[k];
    blk.trace_weight = t11 / unit_trace;
    w.components.push_back(std::move(blk));
  }
  std::stable_sort(w.components.begin(), w.components.end(),
                   [](const WedderburnBlock& x, const WedderburnBlock& y) { return x.size < y.size; });
  for (const auto& c : w.components) w.blocks.push_back(c.size);

  int total = 0;
  for (int n : w.blocks) total += n * n;
  if (total != a.dim()) throw MathError("DecompositionUnstable", "block dimensions do not add up");

  std::vector<std::vector<Mat>> images;
  for (const auto& b : a.basis()) images.push_back(w.phi(b));
  auto combine = [&](const CVec& coeffs) {
    std::vector<Mat> out;
    for (const auto& c : w.components) out.push_back(Mat::Zero(c.size, c.size));
    for (int i = 0; i < a.dim(); ++i)
      if (coeffs(i) != cplx(0))
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += coeffs(i) * images[i][c];
    return out;
  };
  for (int i = 0; i < a.dim(); ++i) {
    const CVec e = a.basis_vector(i);
    auto si = combine(a.star(e));
    for (std::size_t c = 0; c < si.size(); ++c)
      w.star_residual = std::max(w.star_residual, (si[c] - images[i][c].adjoint()).norm());
    const Mat li = a.left_mul(e);
    for (int k = 0; k < a.dim(); ++k) {
      auto p = combine(li.col(k));
      for (std::size_t c = 0; c < p.size(); ++c)
        w.hom_residual = std::max(w.hom_residual, (p[c] - images[i][c] * images[k][c]).norm());
    }
  }
  return w;
}

Positivity is_positive(const Mat& x, double tol) {
  if ((x - x.adjoint()).norm() > 1e-9 * std::max(x.norm(), 1e-300))
    throw MathError("NotSelfAdjoint", "element is not self-adjoint");
  Positivity p;
  if (x.size() == 0) {
    p.positive = true;
    return p;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(x), Eigen::EigenvaluesOnly);
  p.min_eigenvalue = es.eigenvalues().minCoeff();
  p.max_abs_eigenvalue = es.eigenvalues().cwiseAbs().maxCoeff();
  p.positive = p.min_eigenvalue >= -tol * p.max_abs_eigenvalue;
  return p;
}

Positivity is_positive(const CVec& x, const ConcreteStarAlgebra& a, double tol) {
  return is_positive(a.element(x), tol);
}

}  // namespace qsplit
