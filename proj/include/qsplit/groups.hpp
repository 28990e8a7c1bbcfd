#pragma once

#include <cstddef>
#include <vector>

namespace qsplit {

inline constexpr int kMaxGroupOrder = 48;

/// A finite group stored as a dense Cayley table. Elements are the indices
/// 0..order-1 and the identity is always 0.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  int order() const { return order_; }
  int mul(int g, int h) const { return table_[static_cast<std::size_t>(g * order_ + h)]; }
  int inv(int g) const { return inverse_[static_cast<std::size_t>(g)]; }
  static constexpr int identity() { return 0; }

  std::vector<std::vector<int>> table() const;
  bool operator==(const FiniteGroup& other) const = default;

  friend FiniteGroup validate_group(const std::vector<std::vector<int>>& table);

 private:
  int order_ = 0;
  std::vector<int> table_;
  std::vector<int> inverse_;
};

/// Checks the group axioms on `table` (table[g][h] = gh). Throws MathError
/// (NotAssociative / NoIdentity / NoInverse) naming the first witness, or
/// InputError for shape problems and orders above kMaxGroupOrder.
FiniteGroup validate_group(const std::vector<std::vector<int>>& table);

FiniteGroup cyclic_group(int n);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
/// Symmetric group on n letters, elements ordered lexicographically by
/// their one-line notation (so the identity comes first).
FiniteGroup symmetric_group(int n);

struct Subgroup {
  std::vector<int> elements;  // sorted, contains 0

  int size() const { return static_cast<int>(elements.size()); }
  bool contains(int g) const;
  bool operator==(const Subgroup&) const = default;
  auto operator<=>(const Subgroup&) const = default;
};

Subgroup make_subgroup(const FiniteGroup& g, std::vector<int> elements);
Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<int>& generators);
Subgroup whole_group(const FiniteGroup& g);
Subgroup trivial_subgroup();

/// All subgroups, sorted by size and then lexicographically.
std::vector<Subgroup> enumerate_subgroups(const FiniteGroup& g);

/// The subgroup as a group in its own right; element k of the result is
/// h.elements[k].
FiniteGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& h);

struct DoubleCoset {
  int representative;         // minimal index in the class
  std::vector<int> elements;  // sorted
};

/// Partition of G into classes HgH ordered by representative.
std::vector<DoubleCoset> double_cosets(const FiniteGroup& g, const Subgroup& h);

/// A finite G-set: action[g][x] = g.x
struct GSet {
  int points = 0;
  std::vector<std::vector<int>> action;
};

GSet validate_gset(const FiniteGroup& g, const GSet& x);
GSet regular_gset(const FiniteGroup& g);
GSet trivial_gset(const FiniteGroup& g, int points);

struct OrbitQuotient {
  std::vector<std::vector<int>> orbits;  // each sorted, ordered by minimum
  bool free = false;
};

OrbitQuotient orbit_quotient(const GSet& x, const Subgroup& h);

}  // namespace qsplit
