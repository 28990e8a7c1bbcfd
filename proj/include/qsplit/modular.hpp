#pragma once

#include <cstdint>
#include <optional>
#include <vector>

// Linear algebra over the ring Z/M for arbitrary (not necessarily prime) M.
// Submodules of (Z/M)^n are kept in Howell form, which is canonical: two
// generating sets span the same submodule iff their Howell forms agree, and
// reduction against a Howell basis yields a unique coset representative.
namespace qsplit::modular {

using Int = std::int64_t;
using Vec = std::vector<Int>;

Int mod(Int a, Int m);

class HowellBasis {
 public:
  HowellBasis(std::vector<Vec> generators, int ncols, Int modulus);

  /// Unique representative of x + span.
  Vec reduce(Vec x) const;
  bool contains(const Vec& x) const;

  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }
  Int modulus() const { return m_; }
  int ncols() const { return n_; }
  /// Number of elements of the submodule.
  Int cardinality() const;

 private:
  int n_;
  Int m_;
  std::vector<Vec> rows_;
  std::vector<int> pivots_;
};

/// Generators of {x : A x = 0 mod m}; A is given by its rows (equations).
std::vector<Vec> kernel(const std::vector<Vec>& a, int ncols, Int m);

/// Some x with A x = b mod m, if one exists.
std::optional<Vec> solve(const std::vector<Vec>& a, const Vec& b, int ncols, Int m);

}  // namespace qsplit::modular
