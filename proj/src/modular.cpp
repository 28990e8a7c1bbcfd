#include "qsplit/modular.hpp"

#include <numeric>
#include <utility>

#include "qsplit/error.hpp"

namespace qsplit::modular {

namespace {

struct Gcdex {
  Int g, s, t, u, v;  // s*a + t*b = g, u*a + v*b = 0, s*v - t*u = 1
};

Gcdex gcdex(Int a, Int b) {
  Int old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Int q = old_r / r;
    old_r -= q * r;
    std::swap(old_r, r);
    old_s -= q * s;
    std::swap(old_s, s);
    old_t -= q * t;
    std::swap(old_t, t);
  }
  Int g = old_r;
  return {g, old_s, old_t, -b / g, a / g};
}

Int inverse_mod(Int a, Int m) {
  auto e = gcdex(mod(a, m), m);
  return mod(e.s, m);
}

// A unit c of Z/m with c*a = gcd(a, m) (mod m).
Int normalizing_unit(Int a, Int m) {
  Int g = std::gcd(a, m);
  Int mp = m / g;
  if (mp == 1) return 1;
  Int c0 = inverse_mod(a / g, mp);
  for (Int k = 0; k <= m; ++k) {
    Int c = c0 + k * mp;
    if (std::gcd(c, m) == 1) return mod(c, m);
  }
  throw MathError("Internal", "no normalizing unit found");
}

void axpy(Vec& y, Int alpha, const Vec& x, Int m) {
  if (alpha == 0) return;
  for (std::size_t k = 0; k < y.size(); ++k) y[k] = mod(y[k] + alpha * x[k], m);
}

bool is_zero(const Vec& v) {
  for (Int x : v)
    if (x != 0) return false;
  return true;
}

}  // namespace

Int mod(Int a, Int m) {
  Int r = a % m;
  return r < 0 ? r + m : r;
}

HowellBasis::HowellBasis(std::vector<Vec> a, int ncols, Int modulus) : n_(ncols), m_(modulus) {
  if (m_ <= 0) throw InputError("BadModulus", "modulus must be positive");
  for (auto& row : a) {
    if (static_cast<int>(row.size()) != n_) throw InputError("ShapeMismatch", "row length");
    for (auto& x : row) x = mod(x, m_);
  }
  std::erase_if(a, is_zero);

  std::size_t r = 0;
  for (int j = 0; j < n_ && r < a.size(); ++j) {
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (a[i][j] == 0) continue;
      auto e = gcdex(a[r][j], a[i][j]);
      Vec top(n_), bottom(n_);
      for (int k = 0; k < n_; ++k) {
        top[k] = mod(e.s * a[r][k] + e.t * a[i][k], m_);
        bottom[k] = mod(e.u * a[r][k] + e.v * a[i][k], m_);
      }
      a[r] = std::move(top);
      a[i] = std::move(bottom);
    }
    if (a[r][j] == 0) continue;

    Int c = normalizing_unit(a[r][j], m_);
    for (auto& x : a[r]) x = mod(x * c, m_);
    const Int p = a[r][j];
    for (std::size_t i = 0; i < r; ++i) axpy(a[i], -(a[i][j] / p), a[r], m_);

    Vec extra = a[r];
    for (auto& x : extra) x = mod(x * (m_ / p), m_);
    pivots_.push_back(j);
    ++r;
    if (!is_zero(extra)) a.insert(a.begin() + static_cast<std::ptrdiff_t>(r), std::move(extra));
    std::erase_if(a, [&, idx = std::size_t{0}](const Vec& v) mutable { return idx++ >= r && is_zero(v); });
  }
  a.resize(r);
  rows_ = std::move(a);
}

Vec HowellBasis::reduce(Vec x) const {
  if (static_cast<int>(x.size()) != n_) throw InputError("ShapeMismatch", "vector length");
  for (auto& v : x) v = mod(v, m_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const int j = pivots_[i];
    axpy(x, -(x[j] / rows_[i][j]), rows_[i], m_);
  }
  return x;
}

bool HowellBasis::contains(const Vec& x) const { return is_zero(reduce(x)); }

Int HowellBasis::cardinality() const {
  // Howell rows are in echelon form with pivot p | m, and the submodule is
  // the direct "triangular" product of the pivot ideals.
  Int card = 1;
  for (std::size_t i = 0; i < rows_.size(); ++i) card *= m_ / rows_[i][pivots_[i]];
  return card;
}

std::vector<Vec> kernel(const std::vector<Vec>& a, int ncols, Int m) {
  HowellBasis reduced(a, ncols, m);
  const auto& eq = reduced.rows();
  const int r = static_cast<int>(eq.size());
  std::vector<Vec> rows;
  for (int i = 0; i < ncols; ++i) {
    Vec row(r + ncols, 0);
    for (int k = 0; k < r; ++k) row[k] = eq[k][i];
    row[r + i] = 1;
    rows.push_back(std::move(row));
  }
  HowellBasis h(rows, r + ncols, m);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < h.rows().size(); ++i) {
    if (h.pivots()[i] < r) continue;
    out.emplace_back(h.rows()[i].begin() + r, h.rows()[i].end());
  }
  return out;
}

std::optional<Vec> solve(const std::vector<Vec>& a, const Vec& b, int ncols, Int m) {
  std::vector<Vec> aug;
  aug.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    Vec row = a[k];
    row.push_back(b[k]);
    aug.push_back(std::move(row));
  }
  HowellBasis reduced(aug, ncols + 1, m);
  const auto& eq = reduced.rows();
  const int r = static_cast<int>(eq.size());
  // rows: [A^T_i | 0 | e_i] and [-b | 1 | 0]
  std::vector<Vec> rows;
  for (int i = 0; i < ncols; ++i) {
    Vec row(r + 1 + ncols, 0);
    for (int k = 0; k < r; ++k) row[k] = eq[k][i];
    row[r + 1 + i] = 1;
    rows.push_back(std::move(row));
  }
  Vec last(r + 1 + ncols, 0);
  for (int k = 0; k < r; ++k) last[k] = mod(-eq[k][ncols], m);
  last[r] = 1;
  rows.push_back(std::move(last));
  HowellBasis h(rows, r + 1 + ncols, m);
  for (std::size_t i = 0; i < h.rows().size(); ++i) {
    if (h.pivots()[i] != r) continue;
    if (h.rows()[i][r] != 1) return std::nullopt;
    return Vec(h.rows()[i].begin() + r + 1, h.rows()[i].end());
  }
  return std::nullopt;
}

}  // namespace qsplit::modular
