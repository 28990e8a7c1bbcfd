#include "qsplit/crossed_product.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsplit/error.hpp"

namespace qsplit {

namespace {

double rel(const CVec& lhs, const CVec& rhs) {
  const double scale = std::max({lhs.norm(), rhs.norm(), 1e-300});
  return (lhs - rhs).norm() / scale;
}

void check_shapes(const AnomalousAction& act) {
  if (!act.algebra) throw InputError("ShapeMismatch", "action has no algebra");
  const int n = act.group.order(), d = act.algebra->dim();
  if (static_cast<int>(act.alpha.size()) != n) throw InputError("ShapeMismatch", "one automorphism per group element is required");
  if (static_cast<int>(act.u.size()) != n * n) throw InputError("ShapeMismatch", "u needs |G|^2 entries");
  for (const auto& a : act.alpha)
    if (a.rows() != d || a.cols() != d) throw InputError("ShapeMismatch", "automorphism matrix has wrong size");
  for (const auto& v : act.u)
    if (v.size() != d) throw InputError("ShapeMismatch", "u entry has wrong length");
  if (act.points) {
    if (act.points->points != d) throw InputError("ShapeMismatch", "point count differs from the algebra dimension");
    validate_gset(act.group, *act.points);
  }
}

}  // namespace

ActionReport validate_anomalous_action(const AnomalousAction& act, const Cochain3& omega) {
  check_shapes(act);
  const ConcreteStarAlgebra& a = *act.algebra;
  const int n = act.group.order(), d = a.dim();
  if (omega.group.order() != n) throw InputError("ShapeMismatch", "omega lives on a different group");
  const FiniteGroup& g = act.group;
  auto uu = [&](int x, int y) -> const CVec& { return act.u[static_cast<std::size_t>(x * n + y)]; };

  ActionReport r;
  for (int x = 0; x < n; ++x) {
    const Mat& al = act.alpha[static_cast<std::size_t>(x)];
    double res = rel(al * a.unit(), a.unit());
    for (int i = 0; i < d; ++i) {
      const CVec ei = a.basis_vector(i);
      res = std::max(res, rel(al * a.star(ei), a.star(al * ei)));
      for (int j = 0; j < d; ++j) {
        const CVec ej = a.basis_vector(j);
        res = std::max(res, rel(al * a.mul(ei, ej), a.mul(al * ei, al * ej)));
      }
    }
    if (numerical_rank(al) < d) res = std::max(res, 1.0);
    r.automorphism_residual = std::max(r.automorphism_residual, res);
    if (res > kActionTol) {
      std::ostringstream os;
      os << "alpha_" << x << " is not a unital *-automorphism, residual " << res;
      throw MathError("NotAutomorphism", os.str());
    }
  }

  r.normalization_residual = (act.alpha[0] - Mat::Identity(d, d)).norm();
  for (int x = 0; x < n; ++x)
    r.normalization_residual = std::max({r.normalization_residual, rel(uu(0, x), a.unit()), rel(uu(x, 0), a.unit())});

  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      const CVec& u = uu(x, y);
      r.unitarity_residual = std::max({r.unitarity_residual, rel(a.mul(a.star(u), u), a.unit()), rel(a.mul(u, a.star(u)), a.unit())});
      const Mat& ax = act.alpha[static_cast<std::size_t>(x)];
      const Mat& ay = act.alpha[static_cast<std::size_t>(y)];
      const Mat& axy = act.alpha[static_cast<std::size_t>(g.mul(x, y))];
      for (int i = 0; i < d; ++i) {
        const CVec e = a.basis_vector(i);
        r.intertwining_residual = std::max(r.intertwining_residual, rel(a.mul(ax * (ay * e), u), a.mul(u, axy * e)));
      }
      for (int z = 0; z < n; ++z) {
        const CVec lhs = a.mul(uu(x, g.mul(y, z)), ax * uu(y, z));
        const CVec rhs = omega.value(x, y, z) * a.mul(uu(g.mul(x, y), z), u);
        r.cocycle_residual = std::max(r.cocycle_residual, rel(lhs, rhs));
      }
    }
  r.pass = std::max({r.automorphism_residual, r.unitarity_residual, r.normalization_residual, r.intertwining_residual,
                     r.cocycle_residual}) < kActionTol;
  return r;
}

AnomalousAction permutation_action(const FiniteGroup& g, const GSet& x) {
  const GSet pts = validate_gset(g, x);
  AnomalousAction act;
  act.group = g;
  act.algebra = share(diagonal_algebra(pts.points));
  for (int a = 0; a < g.order(); ++a) {
    Mat m = Mat::Zero(pts.points, pts.points);
    for (int p = 0; p < pts.points; ++p) m(pts.action[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)], p) = 1;
    act.alpha.push_back(m);
  }
  act.u.assign(static_cast<std::size_t>(g.order() * g.order()), CVec::Ones(pts.points));
  act.points = pts;
  return act;
}

AnomalousAction translation_action(const FiniteGroup& g, const Cochain3& omega, int copies) {
  if (copies < 1) throw InputError("ShapeMismatch", "copies must be positive");
  const int n = g.order();
  GSet x;
  x.points = n * copies;
  x.action.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(x.points)));
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < copies; ++j)
      for (int p = 0; p < n; ++p) x.action[static_cast<std::size_t>(a)][static_cast<std::size_t>(j * n + p)] = j * n + g.mul(a, p);
  AnomalousAction act = permutation_action(g, x);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      CVec& u = act.u[static_cast<std::size_t>(a * n + b)];
      for (int j = 0; j < copies; ++j)
        for (int p = 0; p < n; ++p) u(j * n + p) = omega.value(g.inv(p), a, b);
    }
  return act;
}

CrossedProduct twisted_crossed_product(const AnomalousAction& act, const Subgroup& h, const Cochain2& mu,
                                       std::uint64_t seed) {
  check_shapes(act);
  const ConcreteStarAlgebra& a = *act.algebra;
  const int n = act.group.order(), d = a.dim(), nh = h.size();
  if (mu.group.order() != nh) throw InputError("ShapeMismatch", "mu must live on the subgroup");
  for (int e : h.elements)
    if (e < 0 || e >= n) throw InputError("ShapeMismatch", "subgroup element out of range");
  const FiniteGroup hg = subgroup_as_group(act.group, h);
  auto alpha = [&](int k) -> const Mat& { return act.alpha[static_cast<std::size_t>(h.elements[static_cast<std::size_t>(k)])]; };

  CrossedProduct out;
  for (int x = 0; x < nh; ++x)
    for (int y = 0; y < nh; ++y) {
      const CVec& u = act.u[static_cast<std::size_t>(h.elements[static_cast<std::size_t>(x)] * n + h.elements[static_cast<std::size_t>(y)])];
      out.w.push_back(std::conj(mu.value(x, y)) * u);
    }
  auto w = [&](int x, int y) -> const CVec& { return out.w[static_cast<std::size_t>(x * nh + y)]; };
  for (int x = 0; x < nh; ++x)
    for (int y = 0; y < nh; ++y)
      for (int z = 0; z < nh; ++z) {
        const CVec lhs = a.mul(w(x, hg.mul(y, z)), alpha(x) * w(y, z));
        const CVec rhs = a.mul(w(hg.mul(x, y), z), w(x, y));
        out.cocycle_residual = std::max(out.cocycle_residual, rel(lhs, rhs));
      }
  for (int x = 0; x < nh; ++x)
    out.cocycle_residual = std::max({out.cocycle_residual, rel(w(0, x), a.unit()), rel(w(x, 0), a.unit())});
  if (out.cocycle_residual > kActionTol) {
    std::ostringstream os;
    os << "w = conj(mu) u is not an ordinary 2-cocycle on H, residual " << out.cocycle_residual;
    throw MathError("AnomalyNotCancelled", os.str());
  }

  // left regular representation made *-preserving by the form tau(E(x^* y))
  const int dim = nh * d;
  Mat s = Mat::Zero(dim, dim);
  std::vector<Mat> lk(static_cast<std::size_t>(d)), rw(static_cast<std::size_t>(nh * nh));
  for (int k = 0; k < d; ++k) lk[static_cast<std::size_t>(k)] = a.left_mul(a.basis_vector(k));
  for (int x = 0; x < nh * nh; ++x) rw[static_cast<std::size_t>(x)] = a.right_mul(out.w[static_cast<std::size_t>(x)]);
  for (int x = 0; x < nh; ++x) {
    const Mat inv = alpha(x).inverse();
    for (int k = 0; k < d; ++k)
      for (int l = 0; l < d; ++l)
        s(x * d + k, x * d + l) = a.trace(inv * a.mul(a.star(a.basis_vector(k)), a.basis_vector(l)));
  }
  s = hermitian_part(s);
  const Mat sh = psd_sqrt(s), shi = psd_pinv_sqrt(s, 0.0);
  std::vector<Mat> basis;
  for (int x = 0; x < nh; ++x)
    for (int k = 0; k < d; ++k) {
      Mat l = Mat::Zero(dim, dim);
      for (int y = 0; y < nh; ++y)
        l.block(hg.mul(x, y) * d, y * d, d, d) = rw[static_cast<std::size_t>(x * nh + y)] * lk[static_cast<std::size_t>(k)] * alpha(x);
      basis.push_back(sh * l * shi);
    }
  CVec unit = CVec::Zero(dim);
  unit.head(d) = a.unit();
  out.algebra = share(closure_check(std::move(basis), unit, 1e-8));
  const Wedderburn wd = wedderburn(*out.algebra, seed);
  out.blocks = wd.blocks;
  out.wedderburn_residual = std::max(wd.hom_residual, wd.star_residual);
  out.center_dimension = static_cast<int>(center(*out.algebra).cols());
  for (const auto& c : wd.components) {
    const Mat p = out.algebra->element(c.central_projection);
    out.traces.push_back(c.units[0][0].trace().real() / p.trace().real());
  }

  if (act.points) {
    const OrbitQuotient q = orbit_quotient(*act.points, h);
    out.orbits = static_cast<int>(q.orbits.size());
    out.free = q.free;
    if (q.free) {
      const bool sizes = std::all_of(out.blocks.begin(), out.blocks.end(), [&](int b) { return b == nh; });
      if (out.center_dimension != *out.orbits || !sizes) {
        std::ostringstream os;
        os << "free action with " << *out.orbits << " orbits gave center dimension " << out.center_dimension;
        throw MathError("SpectrumMismatch", os.str());
      }
    }
  }
  return out;
}

InducedActionReport induced_action_report(const Cochain3& omega, const Subgroup& h, const Cochain2& mu,
                                          const AnomalousAction& act, std::uint64_t seed) {
  check_shapes(act);
  if (!act.points) throw InputError("NeedsPoints", "the induced-action pipeline needs an action on C(X)");
  const OrbitQuotient full = orbit_quotient(*act.points, whole_group(act.group));
  if (!full.free) throw MathError("FreenessRequired", "G does not act freely on X");

  InducedActionReport r;
  r.action = validate_anomalous_action(act, omega);
  if (!r.action.pass) throw MathError("InvalidAction", "the action fails its anomalous action conditions");
  r.crossed = twisted_crossed_product(act, h, mu, seed);
  r.quotient_points = r.crossed.orbits.value_or(0);
  r.dual = dual_fusion_ring(act.group, omega, h, mu, seed);
  r.obstruction = integrality_obstruction(r.dual.ring);
  r.global_dimension_gap = r.dual.global_dimension_gap;
  for (std::size_t k = 0; k < r.crossed.blocks.size(); ++k) {
    K0Trace t;
    t.block = static_cast<int>(k);
    t.size = r.crossed.blocks[k];
    t.minimal_projection = r.crossed.traces[k];
    r.traces.push_back(t);
  }
  return r;
}

}  // namespace qsplit
