#include "qsplit/realize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qsplit/error.hpp"

namespace qsplit {

namespace {

Mat eye(int n) { return Mat::Identity(n, n); }

// q seen as the right B-linear map B -> Q, b -> q b
Mat as_map(const Correspondence& c, const CVec& q) {
  Mat out(c.dim, static_cast<Eigen::Index>(c.ract.size()));
  for (std::size_t k = 0; k < c.ract.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = c.ract[k] * q;
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

CVec pair_coeffs(const Correspondence& c, int i, int j) {
  CVec v(static_cast<Eigen::Index>(c.inner.size()));
  for (std::size_t k = 0; k < c.inner.size(); ++k) v(static_cast<Eigen::Index>(k)) = c.inner[k](i, j);
  return v;
}

Mat multiplication(const ConcreteStarAlgebra& c) {
  const int d = c.dim();
  Mat out(d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out.col(a * d + b) = c.mul(c.basis_vector(a), c.basis_vector(b));
  return out;
}

}  // namespace

Mat Realization::phi(const CVec& q) const {
  const int d = static_cast<int>(unit.size());
  Mat out = Mat::Zero(d, d);
  for (int k = 0; k < d; ++k)
    if (q(k) != cplx(0)) out += q(k) * product.middleCols(static_cast<Eigen::Index>(k) * d, d);
  return out;
}

Realization realize_qsystem(const QSystemPtr& qp) {
  const QSystem& q = *qp;
  if (q.twist) {
    const Cochain3& w = *q.twist.omega;
    for (int a : q.q.grading)
      for (int b : q.q.grading)
        for (int c : q.q.grading)
          if (!w.at(a, b, c).is_one())
            throw InputError("Twisted", "realization needs an untwisted Q-system; apply untwist first");
  }
  const Correspondence& c = q.q;
  const int d = c.dim;
  const Correspondence b = unit_correspondence(q.base);
  const Tensor qq = relative_tensor(c, c);

  Realization r;
  r.source = qp;
  r.product = q.m * qq.pi;
  r.unit = q.i * q.base->unit();
  r.embed_base = q.i;
  const Mat s = c.scalar_form();
  r.sqrt_form = psd_sqrt(s);
  r.sqrt_form_inv = psd_pinv_sqrt(s, 0.0);

  std::vector<Mat> basis;
  for (int k = 0; k < d; ++k) basis.push_back(r.sqrt_form * r.phi(CVec::Unit(d, k)) * r.sqrt_form_inv);
  r.algebra = share(closure_check(basis, r.unit, 1e-8));

  double hom = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Mat lhs = basis[i] * basis[j];
      const Mat rhs = r.sqrt_form * r.phi(r.product.col(i * d + j)) * r.sqrt_form_inv;
      hom = std::max(hom, (lhs - rhs).norm() / std::max(basis[i].norm() * basis[j].norm(), 1e-300));
    }
  r.hom_residual = hom;

  // q^* = lambda (q^dagger (x) id) m^dagger i
  const Tensor bq = relative_tensor(b, c);
  const Mat m_dag = adjoint(q.m, qq.c, c);
  const Mat lu = left_unitor(c);
  const CVec coev = m_dag * r.unit;
  r.star_map = Mat(d, d);
  double star = 0;
  for (int k = 0; k < d; ++k) {
    const Mat qd = adjoint(as_map(c, CVec::Unit(d, k)), b, c);
    r.star_map.col(k) = lu * tensor_maps(qd, eye(d), qq, bq) * coev;
    const Mat lhs = r.sqrt_form * r.phi(r.star_map.col(k)) * r.sqrt_form_inv;
    star = std::max(star, (lhs - basis[k].adjoint()).norm() / std::max(basis[k].norm(), 1e-300));
  }
  r.star_residual = star;
  double psi = 0;
  for (int k = 0; k < d; ++k) psi = std::max(psi, (r.phi(CVec::Unit(d, k)) * r.unit - CVec::Unit(d, k)).norm());
  r.psi_residual = psi;
  if (hom > 1e-8 || star > 1e-8 || psi > 1e-8)
    throw MathError("EmbeddingNotMultiplicative", "residuals " + fmt(hom) + ", " + fmt(star) + ", " + fmt(psi));
  return r;
}

Untwisted untwist(const QSystem& q) {
  Untwisted out;
  out.q = q;
  if (!q.twist) return out;
  if (q.base->dim() != 1 || !q.q.graded()) throw InputError("NotGraded", "twisted Q-systems must be graded over C");
  const FiniteGroup& g = *q.q.grade_group;
  out.support = generated_subgroup(g, q.q.grading);
  const auto mus = solve_mu(g, *q.twist.omega, out.support);
  if (mus.empty()) throw MathError("NotLiftable", "omega does not trivialize on the support of Q");
  out.mu0 = std::make_shared<const Cochain2>(mus.front());
  std::vector<int> index(static_cast<std::size_t>(g.order()), -1);
  for (int k = 0; k < out.support.size(); ++k) index[out.support.elements[k]] = k;

  const int d = q.q.dim;
  const Tensor qq = relative_tensor(q.q, q.q);
  CVec phase(d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      phase(a * d + b) = std::conj(out.mu0->value(index[q.q.grading[a]], index[q.q.grading[b]]));
  out.q.m = q.m * qq.pi * phase.asDiagonal() * qq.iota;
  out.q.twist = {};
  return out;
}

Expectation conditional_expectation(const Realization& r) {
  const QSystem& q = *r.source;
  const ConcreteStarAlgebra& b = *q.base;
  const ConcreteStarAlgebra& c = *r.algebra;
  const DQData d = dq(q);
  const Mat i_dag = adjoint(q.i, unit_correspondence(q.base), q.q);
  Expectation e;
  e.support = d.support;
  e.e = b.right_mul(d.d_inv) * i_dag;
  double bim = 0, range = 0;
  for (int j = 0; j < c.dim(); ++j) {
    const CVec x = c.basis_vector(j);
    const CVec ex = e.e * x;
    const double scale = std::max(ex.norm(), 1.0);
    for (int k = 0; k < b.dim(); ++k) {
      const CVec bk = b.basis_vector(k);
      const CVec ib = r.embed_base * bk;
      bim = std::max(bim, (e.e * c.mul(ib, x) - b.mul(bk, ex)).norm() / scale);
      bim = std::max(bim, (e.e * c.mul(x, ib) - b.mul(ex, bk)).norm() / scale);
    }
    range = std::max(range, (ex - b.mul(e.support, b.mul(ex, e.support))).norm() / scale);
  }
  e.bimodularity_residual = bim;
  e.range_residual = range;
  return e;
}

PimsnerPopaReport pimsner_popa(const Realization& r, const Expectation& e, int samples, std::uint64_t seed) {
  const ConcreteStarAlgebra& c = *r.algebra;
  const DQData d = dq(*r.source);
  PimsnerPopaReport rep;
  rep.samples = samples;
  rep.bound = d.norm * d.norm;
  rep.min_margin = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const CVec y = random_vector(c.dim(), rng);
    const CVec x = c.mul(c.star(y), y);
    const Mat xm = hermitian_part(c.element(x));
    const double xn = op_norm(xm);
    const CVec ex = r.embed_base * (e.e * x);
    const Mat em = hermitian_part(c.element(ex));
    if (xn > 1e-12 && em.norm() <= 1e-12 * xn) throw MathError("ExpectationNotFaithful", "E_B(x) = 0 for x > 0");
    Eigen::SelfAdjointEigenSolver<Mat> es(rep.bound * em - xm);
    rep.min_margin = std::min(rep.min_margin, es.eigenvalues()(0) / xn);
    const Mat h = psd_pinv_sqrt(em, 1e-10);
    Eigen::SelfAdjointEigenSolver<Mat> ratio(hermitian_part(h * xm * h));
    rep.best_constant = std::max(rep.best_constant, ratio.eigenvalues()(ratio.eigenvalues().size() - 1));
  }
  if (samples == 0) rep.min_margin = 0;
  rep.pass = rep.min_margin >= -1e-9;
  return rep;
}

RealizedBimodule realize_bimodule(const QBimodule& xb, const Realization& p, const Realization& q) {
  const Correspondence& x = xb.x;
  const Correspondence& pc = xb.left->q;
  const Correspondence& qc = xb.right->q;
  const int dx = x.dim;
  const Tensor px = relative_tensor(pc, x), xq = relative_tensor(x, qc);
  const Correspondence bq = unit_correspondence(xb.right->base);
  const Tensor bqq = relative_tensor(bq, qc);

  RealizedBimodule out;
  Correspondence& c = out.c;
  c.left = p.algebra;
  c.right = q.algebra;
  c.dim = dx;
  for (int k = 0; k < pc.dim; ++k)
    c.lact.push_back(xb.lambda * px.pi * kron(CVec::Unit(pc.dim, k), eye(dx)));
  for (int k = 0; k < qc.dim; ++k)
    c.ract.push_back(xb.rho * xq.pi * kron(eye(dx), CVec::Unit(qc.dim, k)));

  // <eta|xi> = lambda_Q (eta^dagger (x) id_Q) rho^dagger xi
  const Mat rho_dag = adjoint(xb.rho, xq.c, x);
  const Mat lu = left_unitor(qc);
  c.inner.assign(static_cast<std::size_t>(qc.dim), Mat::Zero(dx, dx));
  for (int i = 0; i < dx; ++i) {
    const Mat ed = adjoint(as_map(x, CVec::Unit(dx, i)), unit_correspondence(xb.right->base), x);
    const Mat row = lu * tensor_maps(ed, eye(qc.dim), xq, bqq) * rho_dag;
    for (int j = 0; j < dx; ++j)
      for (int k = 0; k < qc.dim; ++k) c.inner[k](i, j) = row(k, j);
  }
  out.c = validate_correspondence(std::move(c), 1e-8);

  const Mat sx = x.scalar_form();
  const Mat h = psd_pinv_sqrt(sx, 0.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(h * out.c.scalar_form() * h));
  if (dx > 0) {
    out.norm_lower = es.eigenvalues()(0);
    out.norm_upper = es.eigenvalues()(dx - 1);
  }
  return out;
}

Mat realize_intertwiner(const Mat& f, const QBimodule& x, const QBimodule& y, double tol) {
  const Correspondence& pc = x.left->q;
  const Correspondence& qc = x.right->q;
  if (f.rows() != y.x.dim || f.cols() != x.x.dim) throw InputError("ShapeMismatch", "intertwiner shape");
  const Tensor px = relative_tensor(pc, x.x), py = relative_tensor(pc, y.x);
  const Tensor xq = relative_tensor(x.x, qc), yq = relative_tensor(y.x, qc);
  const double scale = std::max(f.norm(), 1e-300);
  const double r = std::max({bimodularity_residual(f, x.x, y.x),
                             (f * x.lambda - y.lambda * tensor_maps(eye(pc.dim), f, px, py)).norm() / scale,
                             (f * x.rho - y.rho * tensor_maps(f, eye(qc.dim), xq, yq)).norm() / scale});
  if (r > tol) throw MathError("NotBimodular", "residual " + fmt(r));
  return f;
}

Tensorator tensorator(const QBimodule& x, const QBimodule& y, const Realization& p, const Realization& q,
                      const Realization& r) {
  const RealizedBimodule rx = realize_bimodule(x, p, q), ry = realize_bimodule(y, q, r);
  Tensorator t;
  t.source = relative_tensor(rx.c, ry.c);
  t.over_q = tensor_over_q(x, y);
  t.target = realize_bimodule(t.over_q.xy, p, r);
  t.mu = t.over_q.u * t.over_q.over_base.pi * t.source.iota;
  const Mat mu_dag = adjoint(t.mu, t.source.c, t.target.c);
  t.unitarity_residual = std::max(rel_residual(mu_dag * t.mu, eye(t.source.c.dim)),
                                  rel_residual(t.mu * mu_dag, eye(t.target.c.dim)));
  t.bimodularity_residual = bimodularity_residual(t.mu, t.source.c, t.target.c);
  if (t.unitarity_residual > 1e-8)
    throw MathError("NotUnitary", "tensorator residual " + fmt(t.unitarity_residual));
  return t;
}

QSystem restrict_to_support(const QSystem& q, Mat* to_base) {
  const ConcreteStarAlgebra& b = *q.base;
  const DQData d = dq(q);
  if ((d.support - b.unit()).norm() < 1e-10) {
    if (to_base) *to_base = eye(b.dim());
    return q;
  }
  const AlgebraPtr b0 = share(corner(b, d.support));
  const Mat u = psd_support(b.element(d.support), 0.5).vectors;
  Mat t(b.dim(), b0->dim());
  for (int k = 0; k < b0->dim(); ++k) t.col(k) = b.coords(u * b0->basis()[k] * u.adjoint());

  QSystem out;
  out.base = b0;
  out.twist = q.twist;
  Correspondence& c = out.q;
  c.left = c.right = b0;
  c.dim = q.q.dim;
  c.grade_group = q.q.grade_group;
  c.grading = q.q.grading;
  for (int k = 0; k < b0->dim(); ++k) {
    c.lact.push_back(q.q.left_action(t.col(k)));
    c.ract.push_back(q.q.right_action(t.col(k)));
  }
  c.inner.assign(static_cast<std::size_t>(b0->dim()), Mat::Zero(c.dim, c.dim));
  for (int i = 0; i < c.dim; ++i)
    for (int j = 0; j < c.dim; ++j) {
      const CVec v = b0->coords(u.adjoint() * b.element(pair_coeffs(q.q, i, j)) * u);
      for (int k = 0; k < b0->dim(); ++k) c.inner[k](i, j) = v(k);
    }
  const Tensor qq = relative_tensor(q.q, q.q), qq0 = relative_tensor(c, c);
  out.m = q.m * qq.pi * qq0.iota;
  out.i = q.i * t;
  if (to_base) *to_base = t;
  return out;
}

SplitCertificate split_qsystem(const QSystem& q, std::uint64_t seed) {
  SplitCertificate cert;
  cert.transported = untwist(q);
  cert.restricted = std::make_shared<const QSystem>(restrict_to_support(cert.transported.q));
  const QSystem& q0 = *cert.restricted;
  cert.realization = realize_qsystem(cert.restricted);
  const Realization& r = cert.realization;
  const AlgebraPtr& calg = r.algebra;
  const ConcreteStarAlgebra& c = *calg;
  cert.blocks = wedderburn(c, seed).blocks;
  const AlgebraPtr& b0 = q0.base;
  const int dc = c.dim(), db = b0->dim();
  const Mat& iota = r.embed_base;
  const Mat i_dag = adjoint(q0.i, unit_correspondence(b0), q0.q);

  Correspondence& x = cert.x;
  x.left = b0;
  x.right = calg;
  x.dim = dc;
  for (int k = 0; k < db; ++k) x.lact.push_back(c.left_mul(iota.col(k)));
  for (int k = 0; k < dc; ++k) x.ract.push_back(c.right_mul(c.basis_vector(k)));
  x.inner.assign(static_cast<std::size_t>(dc), Mat::Zero(dc, dc));
  Correspondence& xv = cert.xv;
  xv.left = calg;
  xv.right = b0;
  xv.dim = dc;
  for (int k = 0; k < dc; ++k) xv.lact.push_back(c.left_mul(c.basis_vector(k)));
  for (int k = 0; k < db; ++k) xv.ract.push_back(c.right_mul(iota.col(k)));
  xv.inner.assign(static_cast<std::size_t>(db), Mat::Zero(dc, dc));
  for (int i = 0; i < dc; ++i) {
    const CVec si = c.star(c.basis_vector(i));
    for (int j = 0; j < dc; ++j) {
      const CVec v = c.mul(si, c.basis_vector(j));
      const CVec e = i_dag * v;
      for (int k = 0; k < dc; ++k) x.inner[k](i, j) = v(k);
      for (int k = 0; k < db; ++k) xv.inner[k](i, j) = e(k);
    }
  }
  x = validate_correspondence(std::move(x), 1e-8);
  xv = validate_correspondence(std::move(xv), 1e-8);

  const Mat mult = multiplication(c);
  const Tensor xv_x = relative_tensor(xv, x), x_xv = relative_tensor(x, xv);
  const Mat ev0 = mult * xv_x.iota;
  const Correspondence cu = unit_correspondence(calg);
  const CVec z = ev0 * adjoint(ev0, xv_x.c, cu) * c.unit();
  const Mat zm = hermitian_part(c.element(z));
  cert.ev = c.left_mul(c.coords(psd_pinv_sqrt(zm, 1e-10))) * ev0;
  const Mat w = mult * x_xv.iota;
  if (w.rows() != w.cols() || numerical_rank(w) < w.rows())
    throw MathError("SplitFailed", "X (x)_C Xv is not identified with |Q|");
  const Mat w_inv = w.fullPivLu().inverse();
  cert.coev = w_inv * c.left_mul(c.coords(psd_sqrt(zm))) * iota;
  cert.dual = qsystem_from_dual_pair(x, xv, cert.ev, cert.coev, &cert.dual_residuals);
  cert.iso = w_inv;

  const Tensor qq = relative_tensor(q0.q, q0.q), dd = relative_tensor(cert.dual.q, cert.dual.q);
  const Mat iso_dag = adjoint(cert.iso, q0.q, cert.dual.q);
  cert.iso_residual = std::max({rel_residual(iso_dag * cert.iso, eye(q0.q.dim)),
                                rel_residual(cert.iso * iso_dag, eye(cert.dual.q.dim)),
                                rel_residual(cert.dual.m * tensor_maps(cert.iso, cert.iso, qq, dd), cert.iso * q0.m),
                                rel_residual(cert.dual.i, cert.iso * q0.i),
                                bimodularity_residual(cert.iso, q0.q, cert.dual.q)});
  if (cert.iso_residual > 1e-8) throw MathError("SplitFailed", "iso residual " + fmt(cert.iso_residual));
  return cert;
}

}  // namespace qsplit
