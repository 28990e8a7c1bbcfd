#include "qsplit/graded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsplit/error.hpp"

namespace qsplit {

namespace {

Mat eye(int n) { return Mat::Identity(n, n); }

Correspondence graded_line(const QSystemPtr& q, int grade) {
  Correspondence v;
  v.left = v.right = q->base;
  v.dim = 1;
  v.lact = v.ract = v.inner = {eye(1)};
  v.grade_group = q->q.grade_group;
  v.grading = {grade};
  return v;
}

std::vector<int> grade_indices(const Correspondence& c, int grade) {
  std::vector<int> out;
  for (int i = 0; i < c.dim; ++i)
    if (c.grading[static_cast<std::size_t>(i)] == grade) out.push_back(i);
  return out;
}

// max relative failure of f to intertwine the Q-Q actions of x and y
double action_residual(const Mat& f, const QBimodule& x, const QBimodule& y) {
  const Correspondence& q = x.left->q;
  const Tensor qx = relative_tensor(q, x.x), qy = relative_tensor(q, y.x);
  const Tensor xq = relative_tensor(x.x, q), yq = relative_tensor(y.x, q);
  const Mat iq = eye(q.dim);
  return std::max(rel_residual(f * x.lambda, y.lambda * tensor_maps(iq, f, qx, qy)),
                  rel_residual(f * x.rho, y.rho * tensor_maps(f, iq, xq, yq)));
}

// lexicographic key making block order independent of the random decomposition
std::vector<double> block_key(const WedderburnBlock& b) {
  std::vector<double> key{static_cast<double>(b.size)};
  key.push_back(std::round(b.units[0][0].trace().real()));
  const CVec& z = b.central_projection;
  for (Eigen::Index k = 0; k < z.size(); ++k) {
    key.push_back(std::round(z(k).real() * 1e6) / 1e6);
    key.push_back(std::round(z(k).imag() * 1e6) / 1e6);
  }
  return key;
}

}  // namespace

Mat free_extension(const QBimodule& y, const CVec& v) {
  const Correspondence& qc = y.left->q;
  const int nq = qc.dim, dy = y.x.dim;
  if (qc.left->dim() != 1 || !y.x.inner[0].isApprox(eye(dy)) || !qc.inner[0].isApprox(eye(nq)))
    throw InputError("NotOrthonormal", "free extensions need orthonormal carriers over C");
  // column h1*nq + h2 is rho(lambda(d_h1 (x) v) (x) d_h2)
  Mat out(dy, nq * nq);
  for (int h1 = 0; h1 < nq; ++h1) {
    const CVec u = y.lambda.middleCols(static_cast<Eigen::Index>(h1) * dy, dy) * v;
    for (int h2 = 0; h2 < nq; ++h2) {
      CVec col = CVec::Zero(dy);
      for (int i = 0; i < dy; ++i)
        if (u(i) != cplx(0)) col += u(i) * y.rho.col(static_cast<Eigen::Index>(i) * nq + h2);
      out.col(h1 * nq + h2) = col;
    }
  }
  return out;
}

DualFusion dual_fusion_ring(const FiniteGroup& g, const Cochain3& omega, const Subgroup& h, const Cochain2& mu,
                            std::uint64_t seed) {
  if (g.order() > kMaxDualGroupOrder) {
    std::ostringstream os;
    os << "dual fusion rings are limited to |G| <= " << kMaxDualGroupOrder << ", got " << g.order();
    throw InputError("ScaleExceeded", os.str());
  }
  validate_cocycle3(omega);
  bool trivial = true;
  for (auto e : omega.e) trivial = trivial && (e % omega.modulus == 0);
  auto shared = trivial ? nullptr : std::make_shared<const Cochain3>(omega);

  DualFusion out;
  out.q = std::make_shared<const QSystem>(pointed_qsystem(g, h, mu, shared));
  const AxiomReport qrep = check_qsystem(*out.q);
  if (!qrep.all_pass()) throw MathError("NotQSystem", "(H, mu) does not give a Q-system; is d mu = omega on H?");
  const Correspondence& qc = out.q->q;
  const Mat iq = eye(qc.dim);

  const auto cosets = double_cosets(g, h);
  for (std::size_t k = 0; k < cosets.size(); ++k) {
    const int rep = cosets[k].representative;
    const QBimodule f = free_bimodule(out.q, graded_line(out.q, rep), out.q);
    out.free.push_back(f);

    std::vector<Mat> maps;
    for (int i : grade_indices(f.x, rep)) {
      maps.push_back(free_extension(f, CVec::Unit(f.x.dim, i)));
      out.max_bimodule_residual = std::max(out.max_bimodule_residual, action_residual(maps.back(), f, f));
    }
    if (out.max_bimodule_residual > 1e-8) throw MathError("NotBimodular", "free extension is not a bimodule map");
    const ConcreteStarAlgebra end = closure_check(maps, std::nullopt, 1e-8);
    Wedderburn w = wedderburn(end, seed);
    std::vector<std::size_t> order(w.components.size());
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    std::vector<std::vector<double>> keys;
    for (const auto& c : w.components) keys.push_back(block_key(c));
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });

    std::vector<int> blocks;
    for (std::size_t j = 0; j < order.size(); ++j) {
      const WedderburnBlock& blk = w.components[order[j]];
      blocks.push_back(blk.size);
      DualSimple s;
      s.label = "D" + std::to_string(k) + "." + std::to_string(j);
      s.coset = static_cast<int>(k);
      s.representative = rep;
      s.projection = blk.units[0][0];
      const Splitting sp = split_projector(s.projection, f.x);
      s.inclusion = sp.v;
      s.x.left = s.x.right = out.q;
      s.x.x = sp.image;
      const Tensor qx = relative_tensor(qc, sp.image), qf = relative_tensor(qc, f.x);
      const Tensor xq = relative_tensor(sp.image, qc), fq = relative_tensor(f.x, qc);
      s.x.lambda = sp.u * f.lambda * tensor_maps(iq, sp.v, qx, qf);
      s.x.rho = sp.u * f.rho * tensor_maps(sp.v, iq, xq, fq);
      const AxiomReport rep_s = check_qbimodule(s.x, kAxiomTol, seed);
      for (const auto& a : rep_s.axioms) out.max_bimodule_residual = std::max(out.max_bimodule_residual, a.relative);
      out.simples.push_back(std::move(s));
    }
    out.end_blocks.push_back(blocks);
  }

  const int r = static_cast<int>(out.simples.size());
  auto multiplicity = [&](const QBimodule& y, const DualSimple& c) {
    const std::vector<int> idx = grade_indices(y.x, c.representative);
    if (idx.empty()) return 0;
    const Eigen::Index len = static_cast<Eigen::Index>(y.x.dim) * c.inclusion.cols();
    Mat stack(len, static_cast<Eigen::Index>(idx.size()));
    double scale = 0;
    for (std::size_t t = 0; t < idx.size(); ++t) {
      const Mat e = free_extension(y, CVec::Unit(y.x.dim, idx[t]));
      scale = std::max(scale, op_norm(e));
      const Mat m = e * c.inclusion;
      stack.col(static_cast<Eigen::Index>(t)) = Eigen::Map<const CVec>(m.data(), m.size());
    }
    // absolute threshold: a lone column of rounding noise must not count
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Mat>(stack).singularValues();
    return static_cast<int>((sv.array() > 1e-8 * scale).count());
  };
  auto decompose = [&](const QBimodule& y) {
    std::vector<int> mult;
    int total = 0;
    for (const auto& c : out.simples) {
      mult.push_back(multiplicity(y, c));
      total += mult.back() * c.x.x.dim;
    }
    if (total != y.x.dim) {
      std::ostringstream os;
      os << "decomposition accounts for " << total << " of " << y.x.dim << " dimensions";
      throw MathError("DecompositionUnstable", os.str());
    }
    return mult;
  };

  FusionRing& ring = out.ring;
  ring.rank = r;
  for (const auto& s : out.simples) ring.labels.push_back(s.label);
  const std::vector<int> reg = decompose(regular_bimodule(out.q));
  ring.unit = -1;
  for (int c = 0; c < r; ++c)
    if (reg[static_cast<std::size_t>(c)] == 1 && ring.unit < 0) ring.unit = c;
  if (ring.unit < 0) throw MathError("DecompositionUnstable", "Q is not simple as a bimodule");

  ring.n.assign(static_cast<std::size_t>(r * r * r), 0);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      const QTensor t = tensor_over_q(out.simples[static_cast<std::size_t>(a)].x, out.simples[static_cast<std::size_t>(b)].x);
      out.max_coequalizer_residual = std::max(out.max_coequalizer_residual, t.coequalizer_residual);
      const std::vector<int> m = decompose(t.xy);
      for (int c = 0; c < r; ++c) ring.n[static_cast<std::size_t>((a * r + b) * r + c)] = m[static_cast<std::size_t>(c)];
    }
  ring.dual.assign(static_cast<std::size_t>(r), -1);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      if (ring.at(b, a, ring.unit) == 1) ring.dual[static_cast<std::size_t>(a)] = b;
  for (int a = 0; a < r; ++a)
    if (ring.dual[static_cast<std::size_t>(a)] < 0) throw MathError("BadDual", "no dual found for " + ring.labels[static_cast<std::size_t>(a)]);
  ring = validate_fusion_ring(std::move(ring));
  out.global_dimension_gap = std::abs(fp_dimensions(ring).global_dimension - g.order());
  return out;
}

}  // namespace qsplit
