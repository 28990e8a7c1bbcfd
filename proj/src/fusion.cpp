#include "qsplit/fusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "qsplit/error.hpp"

namespace qsplit {

namespace {

std::string triple(int a, int b, int c) {
  std::ostringstream os;
  os << "(" << a << "," << b << "," << c << ")";
  return os.str();
}

bool irreducible(const Eigen::MatrixXi& m) {
  const int r = static_cast<int>(m.rows());
  for (int s = 0; s < r; ++s) {
    std::vector<char> seen(static_cast<std::size_t>(r), 0);
    std::vector<int> stack{s};
    seen[static_cast<std::size_t>(s)] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w = 0; w < r; ++w)
        if (m(v, w) > 0 && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    if (count != r) return false;
  }
  return true;
}

FusionRing make_ring(std::vector<std::string> labels, const std::vector<std::array<int, 3>>& ones,
                     std::vector<int> dual) {
  FusionRing r;
  r.rank = static_cast<int>(labels.size());
  r.labels = std::move(labels);
  r.n.assign(static_cast<std::size_t>(r.rank * r.rank * r.rank), 0);
  for (const auto& [a, b, c] : ones) r.n[static_cast<std::size_t>((a * r.rank + b) * r.rank + c)] += 1;
  r.unit = 0;
  r.dual = std::move(dual);
  return validate_fusion_ring(std::move(r));
}

}  // namespace

Eigen::MatrixXi FusionRing::fusion_matrix(int a) const {
  Eigen::MatrixXi m(rank, rank);
  for (int b = 0; b < rank; ++b)
    for (int c = 0; c < rank; ++c) m(b, c) = at(a, b, c);
  return m;
}

int FusionRing::label_index(const std::string& label) const {
  for (int k = 0; k < rank; ++k)
    if (labels[static_cast<std::size_t>(k)] == label) return k;
  throw InputError("UnknownLabel", "no fusion label " + label);
}

FusionRing validate_fusion_ring(FusionRing r) {
  const int n = r.rank;
  if (n <= 0) throw InputError("ShapeMismatch", "fusion ring rank must be positive");
  if (static_cast<int>(r.n.size()) != n * n * n) throw InputError("ShapeMismatch", "fusion tensor has wrong size");
  if (r.labels.empty())
    for (int k = 0; k < n; ++k) r.labels.push_back(std::to_string(k));
  if (static_cast<int>(r.labels.size()) != n) throw InputError("ShapeMismatch", "label count differs from rank");
  if (static_cast<int>(r.dual.size()) != n) throw InputError("ShapeMismatch", "duality has wrong length");
  if (r.unit < 0 || r.unit >= n) throw InputError("ShapeMismatch", "unit index out of range");
  for (int d : r.dual)
    if (d < 0 || d >= n) throw InputError("ShapeMismatch", "dual index out of range");
  for (int v : r.n)
    if (v < 0) throw InputError("NegativeMultiplicity", "fusion coefficients must be nonnegative");

  const int one = r.unit;
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      const int want = a == c ? 1 : 0;
      if (r.at(one, a, c) != want || r.at(a, one, c) != want)
        throw MathError("NotUnital", "unit fails at " + triple(one, a, c));
    }
  for (int a = 0; a < n; ++a) {
    const int ad = r.dual[static_cast<std::size_t>(a)];
    if (r.dual[static_cast<std::size_t>(ad)] != a) throw MathError("NotInvolution", "duality is not an involution at " + std::to_string(a));
    if (r.at(ad, a, one) != 1) throw MathError("BadDual", "N^1 of the dual pair is not 1 at " + std::to_string(a));
    for (int b = 0; b < n; ++b)
      if (b != ad && r.at(b, a, one) != 0) throw MathError("BadDual", "unit appears in a non-dual product at " + std::to_string(a));
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        if (r.at(a, b, c) != r.at(r.dual[static_cast<std::size_t>(a)], c, b))
          throw MathError("NotFrobenius", "reciprocity fails at " + triple(a, b, c));
        for (int d = 0; d < n; ++d) {
          long lhs = 0, rhs = 0;
          for (int e = 0; e < n; ++e) {
            lhs += static_cast<long>(r.at(a, b, e)) * r.at(e, c, d);
            rhs += static_cast<long>(r.at(b, c, e)) * r.at(a, e, d);
          }
          if (lhs != rhs) throw MathError("NotAssociative", "associativity fails at " + triple(a, b, c) + "->" + std::to_string(d));
        }
      }
  return r;
}

FusionRing fibonacci_ring() {
  return make_ring({"1", "tau"}, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {1, 1, 1}}, {0, 1});
}

FusionRing ising_ring() {
  return make_ring({"1", "sigma", "psi"},
                   {{0, 0, 0}, {0, 1, 1}, {0, 2, 2}, {1, 0, 1}, {2, 0, 2}, {1, 1, 0}, {1, 1, 2}, {1, 2, 1}, {2, 1, 1},
                    {2, 2, 0}},
                   {0, 1, 2});
}

FusionRing hilb_ring(const FiniteGroup& g) {
  std::vector<std::string> labels;
  std::vector<std::array<int, 3>> ones;
  std::vector<int> dual;
  for (int a = 0; a < g.order(); ++a) {
    labels.push_back("g" + std::to_string(a));
    dual.push_back(g.inv(a));
    for (int b = 0; b < g.order(); ++b) ones.push_back({a, b, g.mul(a, b)});
  }
  return make_ring(std::move(labels), ones, std::move(dual));
}

FusionRing rep_s3_ring() {
  return make_ring({"1", "sgn", "V"},
                   {{0, 0, 0}, {0, 1, 1}, {0, 2, 2}, {1, 0, 1}, {2, 0, 2}, {1, 1, 0}, {1, 2, 2}, {2, 1, 2}, {2, 2, 0},
                    {2, 2, 1}, {2, 2, 2}},
                   {0, 1, 2});
}

FPDimensions fp_dimensions(const FusionRing& ring) {
  FPDimensions out;
  for (int a = 0; a < ring.rank; ++a) {
    const Eigen::MatrixXi m = ring.fusion_matrix(a);
    if (!irreducible(m)) out.reducible.push_back(a);
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.cast<double>(), false);
    double rho = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) rho = std::max(rho, std::abs(es.eigenvalues()(k)));
    out.d.push_back(rho);
  }
  for (double x : out.d) out.global_dimension += x * x;
  return out;
}

Obstruction integrality_obstruction(const FusionRing& ring) {
  Obstruction o;
  o.dims = fp_dimensions(ring).d;
  for (int a = 0; a < ring.rank; ++a) {
    const double d = o.dims[static_cast<std::size_t>(a)];
    const double dist = std::abs(d - std::round(d));
    if (dist > 1e-9 && o.pass) {
      o.pass = false;
      o.witness = a;
      o.dimension = d;
      o.distance = dist;
    }
  }
  return o;
}

K0Module validate_k0_module(K0Module m, const FusionRing& ring) {
  if (m.rank <= 0) throw InputError("ShapeMismatch", "module rank must be positive");
  if (static_cast<int>(m.action.size()) != ring.rank) throw InputError("ShapeMismatch", "one action matrix per label is required");
  if (m.order_unit.size() != m.rank) throw InputError("ShapeMismatch", "order unit has wrong length");
  for (const auto& a : m.action) {
    if (a.rows() != m.rank || a.cols() != m.rank) throw InputError("ShapeMismatch", "action matrix has wrong size");
    if (a.minCoeff() < 0) throw InputError("NegativeMultiplicity", "action matrices must be nonnegative");
  }
  if ((m.order_unit.array() < 0).any()) throw InputError("NotOrderUnit", "order unit must be nonnegative");
  if (m.action[static_cast<std::size_t>(ring.unit)] != Eigen::MatrixXi::Identity(m.rank, m.rank))
    throw MathError("NotModule", "the unit does not act as the identity");
  for (int a = 0; a < ring.rank; ++a) {
    if (m.action[static_cast<std::size_t>(a)].isZero()) throw MathError("ZeroAction", "label " + std::to_string(a) + " acts by zero");
    for (int b = 0; b < ring.rank; ++b) {
      Eigen::MatrixXi rhs = Eigen::MatrixXi::Zero(m.rank, m.rank);
      for (int c = 0; c < ring.rank; ++c) rhs += ring.at(a, b, c) * m.action[static_cast<std::size_t>(c)];
      if (m.action[static_cast<std::size_t>(a)] * m.action[static_cast<std::size_t>(b)] != rhs)
        throw MathError("NotModule", "M_a M_b differs from the fusion rule at (" + std::to_string(a) + "," +
                                         std::to_string(b) + ")");
    }
  }
  return m;
}

K0Module regular_module(const FusionRing& ring) {
  K0Module m;
  m.rank = ring.rank;
  m.order_unit = Eigen::VectorXd::Unit(ring.rank, ring.unit);
  for (int a = 0; a < ring.rank; ++a) {
    Eigen::MatrixXi ma(ring.rank, ring.rank);
    for (int b = 0; b < ring.rank; ++b)
      for (int c = 0; c < ring.rank; ++c) ma(b, c) = ring.at(b, a, c);
    m.action.push_back(ma);
  }
  return validate_k0_module(std::move(m), ring);
}

Eigenstate fp_eigenstate(const K0Module& m, const FusionRing& ring, std::optional<Eigen::VectorXd> psi) {
  Eigenstate out;
  const Eigen::VectorXd& u = m.order_unit;
  if (psi) {
    if (psi->size() != m.rank) throw InputError("ShapeMismatch", "initial state has wrong length");
    out.psi = *psi;
  } else {
    out.psi = Eigen::VectorXd::Ones(m.rank) / Eigen::VectorXd::Ones(m.rank).dot(u);
  }
  if ((out.psi.array() < -1e-12).any()) throw MathError("NotAState", "initial state is negative on a cone generator");
  if (std::abs(out.psi.dot(u) - 1.0) > 1e-9) throw MathError("NotAState", "initial state is not 1 on the order unit");

  const std::vector<double> d = fp_dimensions(ring).d;
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(m.rank);
  for (int a = 0; a < ring.rank; ++a) phi += d[static_cast<std::size_t>(a)] * m.action[static_cast<std::size_t>(a)].cast<double>() * out.psi;
  out.normalization = phi.dot(u);
  if (!(out.normalization > 1e-300)) throw MathError("DegenerateNormalization", "the averaged state vanishes on the order unit");
  out.phi = phi / out.normalization;

  const double scale = std::max(1.0, out.phi.cwiseAbs().maxCoeff());
  for (int b = 0; b < ring.rank; ++b) {
    const Eigen::VectorXd moved = m.action[static_cast<std::size_t>(b)].cast<double>() * out.phi;
    out.eigen_residual = std::max(out.eigen_residual,
                                  (moved - d[static_cast<std::size_t>(b)] * out.phi).cwiseAbs().maxCoeff() /
                                      (scale * std::max(1.0, d[static_cast<std::size_t>(b)])));
  }
  out.unit_residual = std::abs(out.phi.dot(u) - 1.0);
  if (out.eigen_residual > 1e-9 || out.unit_residual > 1e-9)
    throw MathError("NotEigenstate", "eigenstate residual " + std::to_string(out.eigen_residual));
  return out;
}

std::vector<QSystemClass> enumerate_qsystems(const FiniteGroup& g, const Cochain3& omega) {
  validate_cocycle3(omega);
  bool trivial = true;
  for (auto e : omega.e) trivial = trivial && (e % omega.modulus == 0);
  auto shared = trivial ? nullptr : std::make_shared<const Cochain3>(omega);
  std::vector<QSystemClass> out;
  for (const Subgroup& h : enumerate_subgroups(g))
    for (Cochain2& mu : solve_mu(g, omega, h)) {
      QSystemClass c;
      c.h = h;
      c.q = pointed_qsystem(g, h, mu, shared);
      c.mu = std::move(mu);
      c.report = check_qsystem(c.q, 1e-10);
      out.push_back(std::move(c));
    }
  return out;
}

}  // namespace qsplit
