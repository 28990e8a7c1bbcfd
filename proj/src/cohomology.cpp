#include "qsplit/cohomology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "qsplit/error.hpp"
#include "qsplit/modular.hpp"

namespace qsplit {

using modular::HowellBasis;
using modular::Int;
using modular::Vec;

Phase Phase::make(std::int64_t num, std::int64_t den) {
  if (den <= 0) throw InputError("BadPhase", "denominator must be positive");
  num = modular::mod(num, den);
  const std::int64_t g = std::gcd(num, den);
  if (num == 0) return {0, 1};
  return {num / g, den / g};
}

Phase Phase::operator*(const Phase& o) const {
  const std::int64_t l = std::lcm(den, o.den);
  return make(num * (l / den) + o.num * (l / o.den), l);
}

Phase Phase::inverse() const { return make(-num, den); }

std::complex<double> Phase::value() const {
  if (num == 0) return 1.0;
  if (2 * num == den) return -1.0;
  if (4 * num == den) return {0.0, 1.0};
  if (4 * num == 3 * den) return {0.0, -1.0};
  const double t = 2.0 * std::numbers::pi * static_cast<double>(num) / static_cast<double>(den);
  return {std::cos(t), std::sin(t)};
}

Phase Cochain2::at(int g, int h) const {
  return Phase::make(e[static_cast<std::size_t>(g * group.order() + h)], modulus);
}

bool Cochain2::normalized() const {
  for (int g = 0; g < group.order(); ++g)
    if (!at(0, g).is_one() || !at(g, 0).is_one()) return false;
  return true;
}

Phase Cochain3::at(int g, int h, int k) const {
  const int n = group.order();
  return Phase::make(e[static_cast<std::size_t>((g * n + h) * n + k)], modulus);
}

bool Cochain3::normalized() const {
  const int n = group.order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (!at(0, a, b).is_one() || !at(a, 0, b).is_one() || !at(a, b, 0).is_one()) return false;
  return true;
}

Cochain2 trivial_cochain2(const FiniteGroup& g) {
  return {g, 1, std::vector<std::int64_t>(static_cast<std::size_t>(g.order() * g.order()), 0)};
}

Cochain3 trivial_cocycle3(const FiniteGroup& g) {
  const auto n = static_cast<std::size_t>(g.order());
  return {g, 1, std::vector<std::int64_t>(n * n * n, 0)};
}

Cochain3 cyclic_cocycle3(int n, int k) {
  Cochain3 w{cyclic_group(n), n, {}};
  w.e.resize(static_cast<std::size_t>(n) * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        w.e[static_cast<std::size_t>((a * n + b) * n + c)] = modular::mod(
            static_cast<Int>(k) * a * ((b + c) / n), n);
  return w;
}

Phase d3_at(const Cochain3& w, int g, int h, int k, int l) {
  const auto& G = w.group;
  return w.at(h, k, l) * w.at(G.mul(g, h), k, l).inverse() * w.at(g, G.mul(h, k), l) *
         w.at(g, h, G.mul(k, l)).inverse() * w.at(g, h, k);
}

std::optional<std::array<int, 4>> check_cocycle3(const Cochain3& w) {
  const int n = w.group.order();
  if (static_cast<int>(w.e.size()) != n * n * n) throw InputError("ShapeMismatch", "3-cochain size");
  if (!w.normalized()) throw MathError("NotNormalized", "3-cochain is not normalized");
  for (int g = 1; g < n; ++g)
    for (int h = 1; h < n; ++h)
      for (int k = 1; k < n; ++k)
        for (int l = 1; l < n; ++l)
          if (!d3_at(w, g, h, k, l).is_one()) return std::array<int, 4>{g, h, k, l};
  return std::nullopt;
}

Cochain3 validate_cocycle3(Cochain3 w) {
  if (auto bad = check_cocycle3(w)) {
    std::ostringstream os;
    os << "(g,h,k,l) = (" << (*bad)[0] << "," << (*bad)[1] << "," << (*bad)[2] << "," << (*bad)[3] << ")";
    throw MathError("NotACocycle", os.str());
  }
  return w;
}

Cochain3 d2(const Cochain2& mu) {
  const auto& G = mu.group;
  const int n = G.order();
  Cochain3 out{G, mu.modulus, std::vector<std::int64_t>(static_cast<std::size_t>(n) * n * n)};
  auto m = [&](int a, int b) { return mu.e[static_cast<std::size_t>(a * n + b)]; };
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        out.e[static_cast<std::size_t>((g * n + h) * n + k)] = modular::mod(
            m(h, k) + m(g, G.mul(h, k)) - m(G.mul(g, h), k) - m(g, h), mu.modulus);
  return out;
}

Cochain3 restrict_to(const Cochain3& w, const Subgroup& h) {
  FiniteGroup hg = subgroup_as_group(w.group, h);
  const int n = h.size(), big = w.group.order();
  Cochain3 out{hg, w.modulus, std::vector<std::int64_t>(static_cast<std::size_t>(n) * n * n)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        out.e[static_cast<std::size_t>((a * n + b) * n + c)] =
            w.e[static_cast<std::size_t>((h.elements[a] * big + h.elements[b]) * big + h.elements[c])];
  return out;
}

bool same_values(const Cochain2& a, const Cochain2& b) {
  if (a.group.order() != b.group.order()) return false;
  const int n = a.group.order();
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      if (!(a.at(g, h) == b.at(g, h))) return false;
  return true;
}

bool same_values(const Cochain3& a, const Cochain3& b) {
  if (a.group.order() != b.group.order()) return false;
  const int n = a.group.order();
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        if (!(a.at(g, h, k) == b.at(g, h, k))) return false;
  return true;
}

namespace {

// Normalized cochains are indexed by tuples of non-identity elements.
struct Indexer {
  int n;
  int idx(std::initializer_list<int> t) const {
    int r = 0;
    for (int x : t) r = r * (n - 1) + (x - 1);
    return r;
  }
  int size(int degree) const {
    int r = 1;
    for (int i = 0; i < degree; ++i) r *= n - 1;
    return r;
  }
};

void add_if(Vec& row, const Indexer& ix, std::initializer_list<int> t, Int c) {
  for (int x : t)
    if (x == 0) return;
  row[static_cast<std::size_t>(ix.idx(t))] += c;
}

// Rows of the integer coboundary C^1 -> C^2 on normalized cochains.
std::vector<Vec> coboundary1(const FiniteGroup& G) {
  const int n = G.order();
  Indexer ix{n};
  std::vector<Vec> rows;
  for (int g = 1; g < n; ++g)
    for (int h = 1; h < n; ++h) {
      Vec row(static_cast<std::size_t>(ix.size(1)), 0);
      add_if(row, ix, {g}, 1);
      add_if(row, ix, {h}, 1);
      add_if(row, ix, {G.mul(g, h)}, -1);
      rows.push_back(std::move(row));
    }
  return rows;
}

// Rows of the integer coboundary C^2 -> C^3 (the d2 convention above).
std::vector<Vec> coboundary2(const FiniteGroup& G) {
  const int n = G.order();
  Indexer ix{n};
  std::vector<Vec> rows;
  for (int g = 1; g < n; ++g)
    for (int h = 1; h < n; ++h)
      for (int k = 1; k < n; ++k) {
        Vec row(static_cast<std::size_t>(ix.size(2)), 0);
        add_if(row, ix, {h, k}, 1);
        add_if(row, ix, {g, G.mul(h, k)}, 1);
        add_if(row, ix, {G.mul(g, h), k}, -1);
        add_if(row, ix, {g, h}, -1);
        rows.push_back(std::move(row));
      }
  return rows;
}

std::vector<Vec> coboundary3(const FiniteGroup& G) {
  const int n = G.order();
  Indexer ix{n};
  std::vector<Vec> rows;
  for (int g = 1; g < n; ++g)
    for (int h = 1; h < n; ++h)
      for (int k = 1; k < n; ++k)
        for (int l = 1; l < n; ++l) {
          Vec row(static_cast<std::size_t>(ix.size(3)), 0);
          add_if(row, ix, {h, k, l}, 1);
          add_if(row, ix, {G.mul(g, h), k, l}, -1);
          add_if(row, ix, {g, G.mul(h, k), l}, 1);
          add_if(row, ix, {g, h, G.mul(k, l)}, -1);
          add_if(row, ix, {g, h, k}, 1);
          rows.push_back(std::move(row));
        }
  return rows;
}

// Exponent vectors (mod m) of U(1)-coboundaries of the integer map `e`
// whose values are m-th roots of unity. Torsion in the cokernel of `e` is
// killed by `t`, so preimages with denominator m*t suffice.
HowellBasis saturated_image(const std::vector<Vec>& e, int cols, Int m, Int t) {
  const int rows = static_cast<int>(e.size());
  std::vector<Vec> gens;
  for (int j = 0; j < cols; ++j) {
    Vec v(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) v[i] = modular::mod(e[i][j], m);
    gens.push_back(std::move(v));
  }
  for (const Vec& b : modular::kernel(e, cols, t)) {
    Vec v(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) {
      Int s = 0;
      for (int j = 0; j < cols; ++j) s += e[i][j] * b[j];
      v[i] = modular::mod(s / t, m);
    }
    gens.push_back(std::move(v));
  }
  return HowellBasis(std::move(gens), rows, m);
}

std::vector<Vec> enumerate_cosets(const Vec& start, const std::vector<Vec>& moves, const HowellBasis& w) {
  const Int m = w.modulus();
  std::set<Vec> seen{w.reduce(start)};
  std::deque<Vec> queue{*seen.begin()};
  while (!queue.empty()) {
    Vec x = std::move(queue.front());
    queue.pop_front();
    for (const Vec& k : moves) {
      Vec y = x;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] = modular::mod(y[i] + k[i], m);
      y = w.reduce(std::move(y));
      if (seen.insert(y).second) queue.push_back(std::move(y));
    }
  }
  return {seen.begin(), seen.end()};
}

template <class Cochain>
Cochain expand(const FiniteGroup& G, const Vec& x, Int m, int degree) {
  const int n = G.order();
  Int g = m;
  for (Int v : x) g = std::gcd(g, v);
  Cochain c{G, m / g, {}};
  std::size_t total = 1;
  for (int i = 0; i < degree; ++i) total *= static_cast<std::size_t>(n);
  c.e.assign(total, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    std::vector<int> t(static_cast<std::size_t>(degree));
    for (int i = degree - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = static_cast<int>(r % static_cast<std::size_t>(n));
      r /= static_cast<std::size_t>(n);
    }
    if (std::count(t.begin(), t.end(), 0) > 0) continue;
    int k = 0;
    for (int v : t) k = k * (n - 1) + (v - 1);
    c.e[flat] = x[static_cast<std::size_t>(k)] / g;
  }
  return c;
}

void check_scale(int n, int degree_rows, int degree_cols) {
  double cells = std::pow(n - 1.0, degree_rows) * std::pow(n - 1.0, degree_cols);
  if (cells > 6e7) throw InputError("ScaleExceeded", "cochain system too large for order " + std::to_string(n));
}

}  // namespace

std::vector<Cochain2> solve_mu(const FiniteGroup& g, const Cochain3& omega, const Subgroup& h,
                               const SolveOptions& opts) {
  if (omega.group.order() != g.order()) throw InputError("ShapeMismatch", "cocycle is on a different group");
  const Cochain3 w = restrict_to(omega, h);
  const FiniteGroup& hg = w.group;
  const int n = hg.order();
  const Int nw = w.modulus;
  const Int m = opts.modulus > 0 ? opts.modulus : nw * n * n;
  if (m % nw != 0) throw InputError("BadModulus", "solver modulus must be a multiple of the cocycle modulus");
  if (m > opts.max_modulus) throw InputError("ModulusOverflow", "modulus " + std::to_string(m) + " exceeds bound");
  if (n == 1) return {trivial_cochain2(hg)};
  check_scale(n, 3, 2);

  Indexer ix{n};
  const auto dmat = coboundary2(hg);
  const int cols = ix.size(2);
  Vec target;
  for (int a = 1; a < n; ++a)
    for (int b = 1; b < n; ++b)
      for (int c = 1; c < n; ++c)
        target.push_back(w.e[static_cast<std::size_t>((a * n + b) * n + c)] * (m / nw));

  auto x0 = modular::solve(dmat, target, cols, m);
  if (!x0) return {};
  auto moves = modular::kernel(dmat, cols, m);
  HowellBasis cob = saturated_image(coboundary1(hg), ix.size(1), m, n);
  std::vector<Cochain2> out;
  for (const Vec& x : enumerate_cosets(*x0, moves, cob)) out.push_back(expand<Cochain2>(hg, x, m, 2));
  return out;
}

bool cohomologous(const Cochain2& a, const Cochain2& b) {
  const int n = a.group.order();
  if (n != b.group.order()) throw InputError("ShapeMismatch", "cochains on different groups");
  if (n == 1) return true;
  const Int m = std::lcm(a.modulus, b.modulus);
  Indexer ix{n};
  Vec diff;
  for (int g = 1; g < n; ++g)
    for (int h = 1; h < n; ++h) {
      const auto k = static_cast<std::size_t>(g * n + h);
      diff.push_back(modular::mod(a.e[k] * (m / a.modulus) - b.e[k] * (m / b.modulus), m));
    }
  return saturated_image(coboundary1(a.group), ix.size(1), m, n).contains(diff);
}

std::vector<Cochain3> cocycle3_classes(const FiniteGroup& g, int max_modulus) {
  const int n = g.order();
  if (max_modulus < 1) throw InputError("BadModulus", "max modulus must be positive");
  if (n == 1) return {trivial_cocycle3(g)};
  check_scale(n, 4, 3);
  Indexer ix{n};
  const auto d3 = coboundary3(g);
  const auto d2m = coboundary2(g);
  const int cols = ix.size(3);

  Int l = 1;
  for (int k = 1; k <= max_modulus; ++k) l = std::lcm(l, static_cast<Int>(k));
  HowellBasis wl = saturated_image(d2m, ix.size(2), l, n);

  std::set<Vec> seen;
  std::vector<Cochain3> out;
  for (int nm = 1; nm <= max_modulus; ++nm) {
    HowellBasis wn = saturated_image(d2m, ix.size(2), nm, n);
    auto z = modular::kernel(d3, cols, nm);
    for (const Vec& x : enumerate_cosets(Vec(static_cast<std::size_t>(cols), 0), z, wn)) {
      Vec lifted = x;
      for (auto& v : lifted) v = modular::mod(v * (l / nm), l);
      if (!seen.insert(wl.reduce(lifted)).second) continue;
      out.push_back(expand<Cochain3>(g, x, nm, 3));
    }
  }
  return out;
}

}  // namespace qsplit
