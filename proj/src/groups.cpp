#include "qsplit/groups.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "qsplit/error.hpp"

namespace qsplit {

std::vector<std::vector<int>> FiniteGroup::table() const {
  std::vector<std::vector<int>> out(order_);
  for (int g = 0; g < order_; ++g)
    for (int h = 0; h < order_; ++h) out[g].push_back(mul(g, h));
  return out;
}

FiniteGroup validate_group(const std::vector<std::vector<int>>& table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw InputError("EmptyTable", "group table has no rows");
  if (n > kMaxGroupOrder)
    throw InputError("OrderTooLarge", "order " + std::to_string(n) + " exceeds " +
                                          std::to_string(kMaxGroupOrder));
  for (int g = 0; g < n; ++g) {
    const auto& row = table[g];
    if (static_cast<int>(row.size()) != n)
      throw InputError("NotSquare", "row " + std::to_string(g) + " has wrong length");
    for (int v : row)
      if (v < 0 || v >= n) throw InputError("OutOfRange", "entry " + std::to_string(v));
  }
  auto at = [&](int a, int b) { return table[a][b]; };

  int e = -1;
  for (int c = 0; c < n && e < 0; ++c) {
    bool ok = true;
    for (int g = 0; g < n && ok; ++g) ok = at(c, g) == g && at(g, c) == g;
    if (ok) e = c;
  }
  if (e < 0) throw MathError("NoIdentity", "no element acts trivially on both sides");
  if (e != 0)
    throw InputError("IdentityNotZero", "identity is element " + std::to_string(e) + ", must be 0");

  std::vector<int> inverse(n, -1);
  for (int g = 0; g < n; ++g) {
    for (int h = 0; h < n; ++h)
      if (at(g, h) == 0 && at(h, g) == 0) {
        inverse[g] = h;
        break;
      }
    if (inverse[g] < 0)
      throw MathError("NoInverse", "element " + std::to_string(g) + " has no two-sided inverse");
  }

  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        if (at(at(g, h), k) != at(g, at(h, k))) {
          std::ostringstream os;
          os << "(g,h,k) = (" << g << "," << h << "," << k << ")";
          throw MathError("NotAssociative", os.str());
        }

  FiniteGroup out;
  out.order_ = n;
  out.table_.reserve(n * n);
  for (const auto& row : table) out.table_.insert(out.table_.end(), row.begin(), row.end());
  out.inverse_ = std::move(inverse);
  return out;
}

FiniteGroup cyclic_group(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return validate_group(t);
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  // (x, y) -> x * |b| + y
  const int na = a.order(), nb = b.order(), n = na * nb;
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      t[g][h] = a.mul(g / nb, h / nb) * nb + b.mul(g % nb, h % nb);
  return validate_group(t);
}

FiniteGroup symmetric_group(int n) {
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  const int m = static_cast<int>(perms.size());
  auto index_of = [&](const std::vector<int>& q) {
    return static_cast<int>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
  };
  std::vector<std::vector<int>> t(m, std::vector<int>(m));
  for (int g = 0; g < m; ++g)
    for (int h = 0; h < m; ++h) {
      // (gh)(x) = g(h(x))
      std::vector<int> c(n);
      for (int x = 0; x < n; ++x) c[x] = perms[g][perms[h][x]];
      t[g][h] = index_of(c);
    }
  return validate_group(t);
}

bool Subgroup::contains(int g) const { return std::binary_search(elements.begin(), elements.end(), g); }

Subgroup make_subgroup(const FiniteGroup& g, std::vector<int> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  Subgroup h{std::move(elements)};
  for (int x : h.elements)
    if (x < 0 || x >= g.order()) throw InputError("OutOfRange", "subgroup element " + std::to_string(x));
  if (!h.contains(0)) throw MathError("NotSubgroup", "identity missing");
  for (int x : h.elements) {
    if (!h.contains(g.inv(x))) throw MathError("NotSubgroup", "inverse of " + std::to_string(x) + " missing");
    for (int y : h.elements)
      if (!h.contains(g.mul(x, y)))
        throw MathError("NotSubgroup", "product " + std::to_string(x) + "*" + std::to_string(y) + " missing");
  }
  return h;
}

Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<int>& generators) {
  std::set<int> s{0};
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (int gen : generators) {
        int y = g.mul(x, gen);
        if (s.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  return Subgroup{{s.begin(), s.end()}};
}

Subgroup whole_group(const FiniteGroup& g) {
  std::vector<int> all(g.order());
  std::iota(all.begin(), all.end(), 0);
  return Subgroup{std::move(all)};
}

Subgroup trivial_subgroup() { return Subgroup{{0}}; }

std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& g) {
  std::set<Subgroup> found{trivial_subgroup()};
  std::vector<Subgroup> frontier{trivial_subgroup()};
  while (!frontier.empty()) {
    std::vector<Subgroup> next;
    for (const auto& h : frontier)
      for (int x = 0; x < g.order(); ++x) {
        if (h.contains(x)) continue;
        auto gens = h.elements;
        gens.push_back(x);
        Subgroup k = generated_subgroup(g, gens);
        if (found.insert(k).second) next.push_back(std::move(k));
      }
    frontier = std::move(next);
  }
  std::vector<Subgroup> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.elements < b.elements;
  });
  return out;
}

FiniteGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& h) {
  const int n = h.size();
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int prod = g.mul(h.elements[a], h.elements[b]);
      auto it = std::lower_bound(h.elements.begin(), h.elements.end(), prod);
      if (it == h.elements.end() || *it != prod) throw MathError("NotSubgroup", "not closed");
      t[a][b] = static_cast<int>(it - h.elements.begin());
    }
  return validate_group(t);
}

std::vector<DoubleCoset> double_cosets(const FiniteGroup& g, const Subgroup& h) {
  std::vector<int> cls(g.order(), -1);
  std::vector<DoubleCoset> out;
  for (int x = 0; x < g.order(); ++x) {
    if (cls[x] >= 0) continue;
    std::set<int> members;
    for (int a : h.elements)
      for (int b : h.elements) members.insert(g.mul(g.mul(a, x), b));
    DoubleCoset dc{x, {members.begin(), members.end()}};
    for (int y : dc.elements) cls[y] = static_cast<int>(out.size());
    out.push_back(std::move(dc));
  }
  return out;
}

GSet validate_gset(const FiniteGroup& g, const GSet& x) {
  if (x.points < 0) throw InputError("BadGSet", "negative point count");
  if (static_cast<int>(x.action.size()) != g.order())
    throw InputError("BadGSet", "action must have one row per group element");
  for (const auto& row : x.action) {
    if (static_cast<int>(row.size()) != x.points) throw InputError("BadGSet", "row length != points");
    for (int p : row)
      if (p < 0 || p >= x.points) throw InputError("BadGSet", "point out of range");
  }
  auto act = [&](int a, int p) { return x.action[a][p]; };
  for (int p = 0; p < x.points; ++p)
    if (act(0, p) != p) throw MathError("NotAnAction", "identity moves point " + std::to_string(p));
  for (int a = 0; a < g.order(); ++a)
    for (int b = 0; b < g.order(); ++b)
      for (int p = 0; p < x.points; ++p)
        if (act(g.mul(a, b), p) != act(a, act(b, p))) {
          std::ostringstream os;
          os << "(g,h,x) = (" << a << "," << b << "," << p << ")";
          throw MathError("NotAnAction", os.str());
        }
  return x;
}

GSet regular_gset(const FiniteGroup& g) {
  GSet x{g.order(), g.table()};
  return x;
}

GSet trivial_gset(const FiniteGroup& g, int points) {
  GSet x;
  x.points = points;
  std::vector<int> id(points);
  std::iota(id.begin(), id.end(), 0);
  x.action.assign(g.order(), id);
  return x;
}

OrbitQuotient orbit_quotient(const GSet& x, const Subgroup& h) {
  OrbitQuotient out;
  std::vector<bool> seen(x.points, false);
  for (int p = 0; p < x.points; ++p) {
    if (seen[p]) continue;
    std::set<int> orbit;
    for (int a : h.elements) orbit.insert(x.action[a][p]);
    for (int q : orbit) seen[q] = true;
    out.orbits.emplace_back(orbit.begin(), orbit.end());
  }
  out.free = true;
  for (int a : h.elements) {
    if (a == 0) continue;
    for (int p = 0; p < x.points; ++p)
      if (x.action[a][p] == p) out.free = false;
  }
  return out;
}

}  // namespace qsplit
