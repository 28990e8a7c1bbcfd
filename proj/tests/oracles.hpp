#pragma once

// Brute-force reference computations. Everything here is deliberately
// naive and independent of the library's algorithms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "qsplit/cstar.hpp"
#include "qsplit/fusion.hpp"
#include "qsplit/groups.hpp"

namespace oracle {

using qsplit::cplx;
using qsplit::Mat;

inline bool closed_subset(const qsplit::FiniteGroup& g, unsigned mask) {
  if (!(mask & 1u)) return false;
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b)
      if ((mask >> a & 1u) && (mask >> b & 1u) && !(mask >> g.mul(a, b) & 1u)) return false;
  return true;
}

/// Every subset containing e and closed under products (finite => subgroup).
inline std::vector<std::vector<int>> subgroups(const qsplit::FiniteGroup& g) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << g.order()); ++mask)
    if (closed_subset(g, mask)) {
      std::vector<int> s;
      for (int a = 0; a < g.order(); ++a)
        if (mask >> a & 1u) s.push_back(a);
      out.push_back(s);
    }
  return out;
}

inline int conjugacy_classes(const qsplit::FiniteGroup& g) {
  std::set<std::set<int>> classes;
  for (int x = 0; x < g.order(); ++x) {
    std::set<int> c;
    for (int y = 0; y < g.order(); ++y) c.insert(g.mul(g.mul(y, x), g.inv(y)));
    classes.insert(c);
  }
  return static_cast<int>(classes.size());
}

/// Orbits of a subgroup on points, by flood fill.
inline int orbit_count(const qsplit::GSet& x, const std::vector<int>& h) {
  std::vector<int> seen(static_cast<std::size_t>(x.points), 0);
  int count = 0;
  for (int p = 0; p < x.points; ++p) {
    if (seen[p]) continue;
    ++count;
    for (int a : h) seen[x.action[a][p]] = 1;
  }
  return count;
}

inline bool acts_freely(const qsplit::GSet& x, const std::vector<int>& h) {
  for (int a : h)
    if (a != 0)
      for (int p = 0; p < x.points; ++p)
        if (x.action[a][p] == p) return false;
  return true;
}

/// Block sizes of a finite-dimensional C*-algebra from the spectral
/// projections of a random central element: n_p^2 = dim(p A).
inline std::vector<int> wedderburn_blocks(const std::vector<Mat>& basis, unsigned seed = 1) {
  const int d = static_cast<int>(basis.size());
  const int n = static_cast<int>(basis[0].rows());
  // center: coefficient vectors c with sum_k c_k [B_k, B_i] = 0
  Mat sys(static_cast<Eigen::Index>(n) * n * d, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) {
      const Mat c = basis[k] * basis[i] - basis[i] * basis[k];
      sys.block(static_cast<Eigen::Index>(i) * n * n, k, n * n, 1) = Eigen::Map<const qsplit::CVec>(c.data(), n * n);
    }
  Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
  std::vector<Mat> centre;
  for (int k = 0; k < d; ++k)
    if (k >= sv.size() || sv(k) <= tol) {
      Mat z = Mat::Zero(n, n);
      for (int j = 0; j < d; ++j) z += svd.matrixV()(j, k) * basis[j];
      centre.push_back(z);
    }
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  Mat z = Mat::Zero(n, n);
  for (const auto& c : centre) z += cplx(u(rng), u(rng)) * c;
  z = (z + z.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(z);
  const auto& ev = es.eigenvalues();
  std::vector<int> blocks;
  int start = 0;
  for (int k = 1; k <= n; ++k) {
    if (k < n && std::abs(ev(k) - ev(k - 1)) < 1e-6) continue;
    const Mat v = es.eigenvectors().middleCols(start, k - start);
    const Mat p = v * v.adjoint();
    Mat span(static_cast<Eigen::Index>(n) * n, d);
    for (int j = 0; j < d; ++j) {
      const Mat pb = p * basis[j];
      span.col(j) = Eigen::Map<const qsplit::CVec>(pb.data(), n * n);
    }
    Eigen::JacobiSVD<Mat> s2(span);
    const auto& sv2 = s2.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv2.size(); ++i)
      if (sv2(i) > 1e-8 * std::max(1.0, sv2(0))) ++rank;
    if (rank > 0) blocks.push_back(static_cast<int>(std::lround(std::sqrt(static_cast<double>(rank)))));
    start = k;
  }
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

inline std::vector<int> wedderburn_blocks(const qsplit::ConcreteStarAlgebra& a) { return wedderburn_blocks(a.basis()); }

/// Fusion ring of a group: N^c_{ab} = [ab = c].
inline std::vector<int> group_fusion(const qsplit::FiniteGroup& g) {
  const int n = g.order();
  std::vector<int> out(static_cast<std::size_t>(n * n * n), 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) out[(a * n + b) * n + g.mul(a, b)] = 1;
  return out;
}

/// Fusion rules from a character table: N^c_{ab} = <chi_a chi_b, chi_c>.
inline std::vector<int> character_fusion(const std::vector<std::vector<cplx>>& chi, const std::vector<int>& class_sizes) {
  const int r = static_cast<int>(chi.size());
  const int order = std::accumulate(class_sizes.begin(), class_sizes.end(), 0);
  std::vector<int> out(static_cast<std::size_t>(r * r * r));
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        cplx s = 0;
        for (std::size_t k = 0; k < class_sizes.size(); ++k) s += cplx(class_sizes[k]) * chi[a][k] * chi[b][k] * std::conj(chi[c][k]);
        out[(a * r + b) * r + c] = static_cast<int>(std::lround(s.real() / order));
      }
  return out;
}

/// Permutations of S_3 in the library's lexicographic order, with the
/// characters trivial, sign and standard on each element.
inline std::vector<std::vector<cplx>> s3_characters_by_element() {
  std::vector<int> p{0, 1, 2};
  std::vector<std::vector<cplx>> chi(3);
  do {
    int fixed = 0, inversions = 0;
    for (int i = 0; i < 3; ++i) {
      fixed += p[i] == i;
      for (int j = i + 1; j < 3; ++j) inversions += p[i] > p[j];
    }
    chi[0].push_back(1.0);
    chi[1].push_back(inversions % 2 ? -1.0 : 1.0);
    chi[2].push_back(static_cast<double>(fixed - 1));
  } while (std::next_permutation(p.begin(), p.end()));
  return chi;
}

/// Whether two structure-constant tensors agree after relabelling.
inline bool isomorphic_rings(const std::vector<int>& n1, const std::vector<int>& n2, int r) {
  if (n1.size() != n2.size()) return false;
  std::vector<int> p(static_cast<std::size_t>(r));
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (int a = 0; a < r && ok; ++a)
      for (int b = 0; b < r && ok; ++b)
        for (int c = 0; c < r && ok; ++c) ok = n1[(a * r + b) * r + c] == n2[(p[a] * r + p[b]) * r + p[c]];
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

/// Largest real root of a monic polynomial (coefficients highest first) by bisection on [lo, hi].
inline double bisect_root(const std::vector<double>& poly, double lo, double hi) {
  auto f = [&](double x) {
    double s = 0;
    for (double c : poly) s = s * x + c;
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((f(lo) < 0) == (f(mid) < 0)) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Spectral radius by power iteration on N_a + I (same eigenvectors, positive shift).
inline double perron_root(const Eigen::MatrixXi& m) {
  const Eigen::MatrixXd a = m.cast<double>() + Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows());
  double lambda = 0;
  for (int it = 0; it < 5000; ++it) {
    const Eigen::VectorXd w = a * v;
    lambda = w.norm() / v.norm();
    v = w / w.norm();
  }
  return lambda - 1;
}

/// Number of pairs (H, [mu]) with d mu = omega on H for an abelian group,
/// by exhaustive search over normalized cochains with values in the
/// modulus-th roots of unity. omega must be given over the same modulus.
/// Classes on abelian H are told apart by the commutator form mu(a,b)/mu(b,a).
inline int abelian_qsystem_count(const qsplit::FiniteGroup& g, const std::vector<std::int64_t>& omega, int modulus) {
  const int n = g.order();
  int count = 0;
  for (const auto& h : subgroups(g)) {
    const int k = static_cast<int>(h.size());
    std::vector<std::pair<int, int>> free;
    for (int a = 1; a < k; ++a)
      for (int b = 1; b < k; ++b) free.emplace_back(a, b);
    std::size_t total = 1;
    for (std::size_t i = 0; i < free.size(); ++i) total *= static_cast<std::size_t>(modulus);
    std::set<std::vector<int>> forms;
    std::vector<int> mu(static_cast<std::size_t>(k * k), 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t x = idx;
      for (const auto& [a, b] : free) {
        mu[static_cast<std::size_t>(a * k + b)] = static_cast<int>(x % static_cast<std::size_t>(modulus));
        x /= static_cast<std::size_t>(modulus);
      }
      auto pos = [&](int elem) { return static_cast<int>(std::find(h.begin(), h.end(), elem) - h.begin()); };
      auto m = [&](int a, int b) { return mu[static_cast<std::size_t>(a * k + b)]; };
      bool ok = true;
      for (int a = 0; a < k && ok; ++a)
        for (int b = 0; b < k && ok; ++b)
          for (int c = 0; c < k && ok; ++c) {
            const int bc = pos(g.mul(h[b], h[c])), ab = pos(g.mul(h[a], h[b]));
            const std::int64_t d = m(b, c) + m(a, bc) - m(ab, c) - m(a, b) -
                                   omega[static_cast<std::size_t>((h[a] * n + h[b]) * n + h[c])];
            ok = ((d % modulus) + modulus) % modulus == 0;
          }
      if (!ok) continue;
      std::vector<int> form;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) form.push_back(((m(a, b) - m(b, a)) % modulus + modulus) % modulus);
      forms.insert(form);
    }
    count += static_cast<int>(forms.size());
  }
  return count;
}

}  // namespace oracle
