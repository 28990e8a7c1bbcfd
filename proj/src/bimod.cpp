#include "qsplit/bimod.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "qsplit/error.hpp"

namespace qsplit {

AlgebraPtr share(ConcreteStarAlgebra a) { return std::make_shared<const ConcreteStarAlgebra>(std::move(a)); }

bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->dim() != b->dim() || a->ambient() != b->ambient()) return false;
  for (int k = 0; k < a->dim(); ++k)
    if ((a->basis()[k] - b->basis()[k]).norm() > 1e-12) return false;
  return true;
}

Mat Correspondence::left_action(const CVec& a) const {
  Mat out = Mat::Zero(dim, dim);
  for (std::size_t k = 0; k < lact.size(); ++k)
    if (a(static_cast<Eigen::Index>(k)) != cplx(0)) out += a(static_cast<Eigen::Index>(k)) * lact[k];
  return out;
}

Mat Correspondence::right_action(const CVec& b) const {
  Mat out = Mat::Zero(dim, dim);
  for (std::size_t k = 0; k < ract.size(); ++k)
    if (b(static_cast<Eigen::Index>(k)) != cplx(0)) out += b(static_cast<Eigen::Index>(k)) * ract[k];
  return out;
}

CVec Correspondence::inner_product(const CVec& x, const CVec& y) const {
  CVec out(static_cast<Eigen::Index>(inner.size()));
  for (std::size_t c = 0; c < inner.size(); ++c) out(static_cast<Eigen::Index>(c)) = x.dot(inner[c] * y);
  return out;
}

Mat Correspondence::scalar_form() const {
  Mat s = Mat::Zero(dim, dim);
  for (int c = 0; c < right->dim(); ++c) s += right->trace(right->basis_vector(c)) * inner[c];
  return s;
}

Mat Correspondence::gram_ambient() const {
  const int n = right->ambient();
  Mat g(static_cast<Eigen::Index>(dim) * n, static_cast<Eigen::Index>(dim) * n);
  CVec v(right->dim());
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      for (int c = 0; c < right->dim(); ++c) v(c) = inner[c](i, j);
      g.block(static_cast<Eigen::Index>(i) * n, static_cast<Eigen::Index>(j) * n, n, n) = right->element(v);
    }
  return g;
}

namespace {

double mismatch(const Mat& a, const Mat& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-300});
  return (a - b).norm() / scale;
}

void require(double r, double tol, const char* kind, const std::string& where) {
  if (r > tol) {
    std::ostringstream os;
    os << where << ", residual " << r;
    throw MathError(kind, os.str());
  }
}

CVec pair_vec(const Correspondence& c, int i, int j) {
  CVec v(static_cast<Eigen::Index>(c.inner.size()));
  for (std::size_t k = 0; k < c.inner.size(); ++k) v(static_cast<Eigen::Index>(k)) = c.inner[k](i, j);
  return v;
}

std::vector<int> homogeneous_grades(const Mat& cols, const std::vector<int>& grading) {
  std::vector<int> out;
  for (Eigen::Index r = 0; r < cols.cols(); ++r) {
    int grade = -1;
    const double scale = cols.col(r).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < cols.rows(); ++i) {
      if (std::abs(cols(i, r)) <= 1e-10 * scale) continue;
      if (grade >= 0 && grading[static_cast<std::size_t>(i)] != grade) return {};
      grade = grading[static_cast<std::size_t>(i)];
    }
    out.push_back(std::max(grade, 0));
  }
  return out;
}

}  // namespace

Correspondence validate_correspondence(Correspondence c, double tol) {
  if (!c.left || !c.right) throw InputError("ShapeMismatch", "correspondence algebras missing");
  const int d = c.dim;
  const auto& a = *c.left;
  const auto& b = *c.right;
  if (static_cast<int>(c.lact.size()) != a.dim() || static_cast<int>(c.ract.size()) != b.dim() ||
      static_cast<int>(c.inner.size()) != b.dim())
    throw InputError("ShapeMismatch", "action or inner tensors do not match algebra dimensions");
  for (const auto* v : {&c.lact, &c.ract, &c.inner})
    for (const auto& m : *v)
      if (m.rows() != d || m.cols() != d) throw InputError("ShapeMismatch", "tensor slices must be dim x dim");
  if (c.graded() && (static_cast<int>(c.grading.size()) != d || !c.grade_group))
    throw InputError("ShapeMismatch", "grading length");

  const Mat id = Mat::Identity(d, d);
  require(mismatch(c.left_action(a.unit()), id), tol, "NotAnAction", "left unit");
  require(mismatch(c.right_action(b.unit()), id), tol, "NotAnAction", "right unit");
  for (int k = 0; k < a.dim(); ++k)
    for (int l = 0; l < a.dim(); ++l)
      require(mismatch(c.lact[k] * c.lact[l], c.left_action(a.mul(a.basis_vector(k), a.basis_vector(l)))), tol,
              "NotAnAction", "left (" + std::to_string(k) + "," + std::to_string(l) + ")");
  for (int k = 0; k < b.dim(); ++k)
    for (int l = 0; l < b.dim(); ++l)
      require(mismatch(c.ract[l] * c.ract[k], c.right_action(b.mul(b.basis_vector(k), b.basis_vector(l)))), tol,
              "NotAnAction", "right (" + std::to_string(k) + "," + std::to_string(l) + ")");
  for (int k = 0; k < a.dim(); ++k)
    for (int l = 0; l < b.dim(); ++l)
      require(mismatch(c.lact[k] * c.ract[l], c.ract[l] * c.lact[k]), tol, "ActionsDoNotCommute",
              "(a,b) = (" + std::to_string(k) + "," + std::to_string(l) + ")");

  std::vector<std::vector<CVec>> g(static_cast<std::size_t>(d), std::vector<CVec>(static_cast<std::size_t>(d)));
  double scale = 1e-300;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      g[i][j] = pair_vec(c, i, j);
      scale = std::max(scale, g[i][j].norm());
    }
  auto vres = [&](const CVec& x, const CVec& y) { return (x - y).norm() / scale; };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const std::string where = "(i,j) = (" + std::to_string(i) + "," + std::to_string(j) + ")";
      require(vres(g[j][i], b.star(g[i][j])), tol, "NotHermitian", where);
      for (int k = 0; k < b.dim(); ++k) {
        CVec lhs = CVec::Zero(b.dim());
        for (int m = 0; m < d; ++m) lhs += c.ract[k](m, j) * g[i][m];
        require(vres(lhs, b.mul(g[i][j], b.basis_vector(k))), tol, "NotRightLinear", where);
      }
      for (int k = 0; k < a.dim(); ++k) {
        const Mat ls = c.left_action(a.star(a.basis_vector(k)));
        CVec lhs = CVec::Zero(b.dim()), rhs = CVec::Zero(b.dim());
        for (int m = 0; m < d; ++m) {
          lhs += c.lact[k](m, j) * g[i][m];
          rhs += std::conj(ls(m, i)) * g[m][j];
        }
        require(vres(lhs, rhs), tol, "NotAdjointable", where + ", a = " + std::to_string(k));
      }
    }

  if (d > 0) {
    auto pos = is_positive(hermitian_part(c.gram_ambient()), tol);
    if (!pos.positive) {
      std::ostringstream os;
      os << "Gram element has eigenvalue " << pos.min_eigenvalue;
      throw MathError("NotPositive", os.str());
    }
    const Mat s = c.scalar_form();
    if (numerical_rank(s) < d) throw MathError("NotDefinite", "scalarized Gram is singular");
  }
  return c;
}

Correspondence unit_correspondence(const AlgebraPtr& b) {
  Correspondence c;
  c.left = c.right = b;
  const int d = b->dim();
  c.dim = d;
  for (int k = 0; k < d; ++k) {
    c.lact.push_back(b->left_mul(b->basis_vector(k)));
    c.ract.push_back(b->right_mul(b->basis_vector(k)));
  }
  c.inner.assign(static_cast<std::size_t>(d), Mat::Zero(d, d));
  for (int i = 0; i < d; ++i) {
    const CVec si = b->star(b->basis_vector(i));
    for (int j = 0; j < d; ++j) {
      const CVec v = b->mul(si, b->basis_vector(j));
      for (int k = 0; k < d; ++k) c.inner[k](i, j) = v(k);
    }
  }
  return c;
}

double bimodularity_residual(const Mat& f, const Correspondence& x, const Correspondence& y) {
  double r = 0;
  const double fn = std::max(f.norm(), 1e-300);
  for (std::size_t k = 0; k < x.lact.size(); ++k)
    r = std::max(r, (f * x.lact[k] - y.lact[k] * f).norm() / (fn * std::max(x.lact[k].norm(), y.lact[k].norm())));
  for (std::size_t k = 0; k < x.ract.size(); ++k)
    r = std::max(r, (f * x.ract[k] - y.ract[k] * f).norm() / (fn * std::max(x.ract[k].norm(), y.ract[k].norm())));
  return r;
}

Mat adjoint(const Mat& f, const Correspondence& x, const Correspondence& y) {
  const Mat sx = x.scalar_form();
  if (x.dim == 0 || y.dim == 0) return Mat::Zero(x.dim, y.dim);
  const Mat sy = y.scalar_form();
  if (sx.isIdentity(1e-13) && sy.isIdentity(1e-13)) return f.adjoint();
  Eigen::LDLT<Mat> ldlt(sx);
  if (ldlt.info() != Eigen::Success || numerical_rank(sx) < x.dim)
    throw MathError("SingularGram", "scalar form of the source is singular");
  return ldlt.solve(f.adjoint() * sy);
}

Tensor relative_tensor(const Correspondence& x, const Correspondence& y) {
  if (!same_algebra(x.right, y.left)) throw InputError("AlgebraMismatch", "middle algebras differ");
  const int dx = x.dim, dy = y.dim, n = dx * dy;
  const Mat sy = y.scalar_form();
  if (x.right->dim() == 1 && n > 0 && x.inner[0].isIdentity(1e-13) && y.lact[0].isIdentity(1e-13) &&
      sy.isIdentity(1e-13)) {
    // orthonormal carriers over C: the Kronecker basis is already orthonormal
    Tensor t;
    t.iota = t.pi = Mat::Identity(n, n);
    t.kronecker = true;
    Correspondence& c = t.c;
    c.left = x.left;
    c.right = y.right;
    c.dim = n;
    const Mat ix = Mat::Identity(dx, dx), iy = Mat::Identity(dy, dy);
    for (const auto& l : x.lact) c.lact.push_back(kron(l, iy));
    for (const auto& q : y.ract) c.ract.push_back(kron(ix, q));
    for (const auto& gy : y.inner) c.inner.push_back(kron(ix, gy));
    if (x.graded() && y.graded()) {
      c.grade_group = x.grade_group;
      for (int i = 0; i < dx; ++i)
        for (int k = 0; k < dy; ++k) c.grading.push_back(x.grade_group->mul(x.grading[i], y.grading[k]));
    }
    return t;
  }
  std::vector<Mat> mid(static_cast<std::size_t>(dx) * dx);
  for (int i = 0; i < dx; ++i)
    for (int j = 0; j < dx; ++j) mid[i * dx + j] = y.left_action(pair_vec(x, i, j));

  Mat s(n, n);
  for (int i = 0; i < dx; ++i)
    for (int j = 0; j < dx; ++j) s.block(i * dy, j * dy, dy, dy) = sy * mid[i * dx + j];
  s = hermitian_part(s);

  Tensor t;
  const bool ident = n > 0 && (s - Mat::Identity(n, n)).norm() <= 1e-13 * n;
  if (ident) {
    t.iota = Mat::Identity(n, n);
    t.pi = t.iota;
    t.kronecker = true;
  } else {
    if (n > 0 && numerical_rank(s) == n) {
      t.iota = psd_pinv_sqrt(s, 0.0);
    } else {
      Support sup = psd_support(s);
      t.iota = sup.vectors * sup.values.cwiseSqrt().cwiseInverse().asDiagonal();
    }
    t.pi = t.iota.adjoint() * s;
  }
  const int r = static_cast<int>(t.iota.cols());

  Correspondence& c = t.c;
  c.left = x.left;
  c.right = y.right;
  c.dim = r;
  const Mat ix = Mat::Identity(dx, dx), iy = Mat::Identity(dy, dy);
  auto compress = [&](const Mat& m) { return ident ? m : Mat(t.pi * m * t.iota); };
  for (const auto& l : x.lact) c.lact.push_back(compress(kron(l, iy)));
  for (const auto& q : y.ract) c.ract.push_back(compress(kron(ix, q)));
  for (const auto& gy : y.inner) {
    Mat g(n, n);
    for (int i = 0; i < dx; ++i)
      for (int j = 0; j < dx; ++j) g.block(i * dy, j * dy, dy, dy) = gy * mid[i * dx + j];
    c.inner.push_back(ident ? g : Mat(t.iota.adjoint() * g * t.iota));
  }
  if (x.graded() && y.graded()) {
    std::vector<int> kg(static_cast<std::size_t>(n));
    for (int i = 0; i < dx; ++i)
      for (int k = 0; k < dy; ++k) kg[i * dy + k] = x.grade_group->mul(x.grading[i], y.grading[k]);
    c.grading = homogeneous_grades(t.iota, kg);
    if (!c.grading.empty() || r == 0) c.grade_group = x.grade_group;
  }
  return t;
}

Mat tensor_maps(const Mat& f, const Mat& g, const Tensor& src, const Tensor& tgt) {
  if (src.kronecker && tgt.kronecker) return kron(f, g);
  if (src.kronecker) return tgt.pi * kron(f, g);
  if (tgt.kronecker) return kron(f, g) * src.iota;
  return tgt.pi * kron(f, g) * src.iota;
}

Mat associator(const Correspondence& x, const Correspondence& y, const Correspondence& z, const Twist& tw) {
  const Tensor xy = relative_tensor(x, y);
  const Tensor xy_z = relative_tensor(xy.c, z);
  const Tensor yz = relative_tensor(y, z);
  const Tensor x_yz = relative_tensor(x, yz.c);
  const bool plain = xy.kronecker && xy_z.kronecker && yz.kronecker && x_yz.kronecker;
  if (plain) {
    const int n = x.dim * y.dim * z.dim;
    if (!tw) return Mat::Identity(n, n);
    if (!x.graded() || !y.graded() || !z.graded()) throw InputError("NotGraded", "twisted associator needs gradings");
    const auto& w = *tw.omega;
    CVec phase(n);
    for (int i = 0; i < x.dim; ++i)
      for (int k = 0; k < y.dim; ++k)
        for (int l = 0; l < z.dim; ++l)
          phase((i * y.dim + k) * z.dim + l) = std::conj(w.value(x.grading[i], y.grading[k], z.grading[l]));
    return phase.asDiagonal();
  }
  const Mat ix = Mat::Identity(x.dim, x.dim), iz = Mat::Identity(z.dim, z.dim);
  Mat mid = kron(xy.iota, iz) * xy_z.iota;
  if (tw) {
    if (!x.graded() || !y.graded() || !z.graded()) throw InputError("NotGraded", "twisted associator needs gradings");
    const auto& w = *tw.omega;
    for (int i = 0; i < x.dim; ++i)
      for (int k = 0; k < y.dim; ++k)
        for (int l = 0; l < z.dim; ++l)
          mid.row((i * y.dim + k) * z.dim + l) *= std::conj(w.value(x.grading[i], y.grading[k], z.grading[l]));
  }
  return x_yz.pi * kron(ix, yz.pi) * mid;
}

Mat left_unitor(const Correspondence& y) {
  const Correspondence b = unit_correspondence(y.left);
  const Tensor t = relative_tensor(b, y);
  Mat u(y.dim, b.dim * y.dim);
  for (int k = 0; k < b.dim; ++k)
    for (int n = 0; n < y.dim; ++n) u.col(k * y.dim + n) = y.lact[k].col(n);
  return u * t.iota;
}

Mat right_unitor(const Correspondence& x) {
  const Correspondence b = unit_correspondence(x.right);
  const Tensor t = relative_tensor(x, b);
  Mat u(x.dim, x.dim * b.dim);
  for (int i = 0; i < x.dim; ++i)
    for (int k = 0; k < b.dim; ++k) u.col(i * b.dim + k) = x.ract[k].col(i);
  return u * t.iota;
}

double projector_residual(const Mat& p, const Correspondence& c) {
  if (p.size() == 0) return 0;
  return std::max(mismatch(p * p, p), mismatch(adjoint(p, c, c), p));
}

Mat separability_projector(const Correspondence& x, const Mat& rho_x, const Correspondence& q,
                           const Correspondence& y, const Mat& lambda_y, const Twist& tw) {
  const Tensor xq = relative_tensor(x, q);
  const Tensor xy = relative_tensor(x, y);
  const Tensor xq_y = relative_tensor(xq.c, y);
  const Tensor qy = relative_tensor(q, y);
  const Tensor x_qy = relative_tensor(x, qy.c);
  const Mat rho_dag = adjoint(rho_x, xq.c, x);
  const Mat down = tensor_maps(rho_dag, Mat::Identity(y.dim, y.dim), xy, xq_y);
  const Mat up = tensor_maps(Mat::Identity(x.dim, x.dim), lambda_y, x_qy, xy);
  const Mat p = up * associator(x, q, y, tw) * down;
  const double r = projector_residual(p, xy.c);
  if (r > 1e-8) {
    std::ostringstream os;
    os << "p^2 = p = p^dagger fails, residual " << r;
    throw MathError("NotIdempotent", os.str());
  }
  return p;
}

Splitting split_projector(const Mat& p, const Correspondence& c) {
  const Mat s = c.scalar_form();
  const Mat sh = psd_sqrt(s), shi = psd_pinv_sqrt(s, 0.0);
  const Mat ph = hermitian_part(sh * p * shi);

  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < c.dim; ++i) groups[c.graded() ? c.grading[i] : 0].push_back(i);
  std::vector<CVec> cols;
  std::vector<int> grades;
  for (const auto& [grade, idx] : groups) {
    const int m = static_cast<int>(idx.size());
    Mat sub(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) sub(a, b) = ph(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Mat> es(sub);
    for (int k = 0; k < m; ++k) {
      if (es.eigenvalues()(k) < 0.5) continue;
      CVec v = CVec::Zero(c.dim);
      for (int a = 0; a < m; ++a) v(idx[a]) = es.eigenvectors()(a, k);
      cols.push_back(v);
      grades.push_back(grade);
    }
  }
  const int r = static_cast<int>(cols.size());
  Mat v(c.dim, r);
  for (int k = 0; k < r; ++k) v.col(k) = cols[k];

  Splitting out;
  out.v = shi * v;
  out.u = out.v.adjoint() * s;
  Correspondence& img = out.image;
  img.left = c.left;
  img.right = c.right;
  img.dim = r;
  for (const auto& l : c.lact) img.lact.push_back(out.u * l * out.v);
  for (const auto& q : c.ract) img.ract.push_back(out.u * q * out.v);
  for (const auto& g : c.inner) img.inner.push_back(out.v.adjoint() * g * out.v);
  if (c.graded()) {
    img.grade_group = c.grade_group;
    img.grading = grades;
  }
  return out;
}

}  // namespace qsplit
