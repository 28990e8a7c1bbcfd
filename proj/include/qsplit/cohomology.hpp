#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "qsplit/groups.hpp"

namespace qsplit {

/// An element r of Q/Z, standing for exp(2 pi i r). Always in lowest terms
/// with 0 <= num < den.
struct Phase {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Phase make(std::int64_t num, std::int64_t den);
  Phase operator*(const Phase& o) const;
  Phase inverse() const;
  bool is_one() const { return num == 0; }
  std::complex<double> value() const;
  bool operator==(const Phase&) const = default;
};

/// A U(1)-valued 2-cochain with values exp(2 pi i e(g,h)/modulus).
struct Cochain2 {
  FiniteGroup group;
  std::int64_t modulus = 1;
  std::vector<std::int64_t> e;  // e[g*n + h]

  Phase at(int g, int h) const;
  std::complex<double> value(int g, int h) const { return at(g, h).value(); }
  bool normalized() const;
};

/// A U(1)-valued 3-cochain with values exp(2 pi i e(g,h,k)/modulus).
struct Cochain3 {
  FiniteGroup group;
  std::int64_t modulus = 1;
  std::vector<std::int64_t> e;  // e[(g*n + h)*n + k]

  Phase at(int g, int h, int k) const;
  std::complex<double> value(int g, int h, int k) const { return at(g, h, k).value(); }
  bool normalized() const;
};
using Cocycle3 = Cochain3;

Cochain2 trivial_cochain2(const FiniteGroup& g);
Cochain3 trivial_cocycle3(const FiniteGroup& g);
/// The cocycle on Z/n with e(a,b,c) = k*a*floor((b+c)/n) mod n.
Cochain3 cyclic_cocycle3(int n, int k);

/// nullopt when dω = 1, otherwise the first failing quadruple (g,h,k,l).
/// Throws MathError(NotNormalized) for non-normalized input.
std::optional<std::array<int, 4>> check_cocycle3(const Cochain3& omega);

/// Throws MathError(NotACocycle) with the witness unless check_cocycle3 passes.
Cochain3 validate_cocycle3(Cochain3 omega);

/// dμ(g,h,k) = μ(h,k) μ(g,hk) μ(gh,k)^{-1} μ(g,h)^{-1}
Cochain3 d2(const Cochain2& mu);
/// The 4-cochain dω as an exponent table over lcm modulus (used in tests).
Phase d3_at(const Cochain3& omega, int g, int h, int k, int l);

/// ω restricted to H, re-indexed along subgroup_as_group(G, H).
Cochain3 restrict_to(const Cochain3& omega, const Subgroup& h);

/// Cochains equal as U(1)-valued functions.
bool same_values(const Cochain2& a, const Cochain2& b);
bool same_values(const Cochain3& a, const Cochain3& b);

struct SolveOptions {
  /// 0 selects N*|H|^2 where N is the modulus of ω.
  std::int64_t modulus = 0;
  std::int64_t max_modulus = std::int64_t{1} << 24;
};

/// All solutions of dμ = ω|_H up to normalized U(1) 2-coboundaries, one
/// canonical representative per class (cochains live on subgroup_as_group).
/// Empty iff [ω|_H] is nontrivial.
std::vector<Cochain2> solve_mu(const FiniteGroup& g, const Cochain3& omega, const Subgroup& h,
                               const SolveOptions& opts = {});

/// Whether μ₁/μ₂ is a U(1)-coboundary (cochains on the same group).
bool cohomologous(const Cochain2& a, const Cochain2& b);

/// Representatives of every cohomology class in H^3(G, U(1)) that admits a
/// normalized cocycle with values in the N-th roots of unity for some
/// N <= max_modulus. Sorted by smallest such N; the trivial class first.
std::vector<Cochain3> cocycle3_classes(const FiniteGroup& g, int max_modulus);

}  // namespace qsplit
