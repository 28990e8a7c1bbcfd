#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsplit/cohomology.hpp"
#include "qsplit/groups.hpp"
#include "qsplit/linalg.hpp"

namespace qsplit {

inline constexpr double kStructureTol = 1e-9;
inline constexpr double kClusterGap = 1e-6;

/// A unital *-subalgebra of M_N given by a linear basis of N x N matrices.
/// Elements are handled as coefficient vectors in that basis.
class ConcreteStarAlgebra {
 public:
  ConcreteStarAlgebra() = default;

  int ambient() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Mat>& basis() const { return basis_; }
  const CVec& unit() const { return unit_; }
  bool verified() const { return verified_; }

  Mat element(const CVec& coeffs) const;
  /// Least-squares coordinates of an ambient matrix.
  CVec coords(const Mat& x) const;
  /// Relative distance from x to the span.
  double span_residual(const Mat& x) const;

  CVec mul(const CVec& a, const CVec& b) const;
  CVec star(const CVec& a) const;
  /// Matrix of b -> a b in coordinates.
  Mat left_mul(const CVec& a) const;
  /// Matrix of b -> b a in coordinates.
  Mat right_mul(const CVec& a) const;
  /// Normalized ambient trace Tr(x)/N.
  cplx trace(const CVec& a) const;
  /// Basis of a basis coefficient vector e_k.
  CVec basis_vector(int k) const;

  friend ConcreteStarAlgebra closure_check(std::vector<Mat> basis, std::optional<CVec> unit, double tol);

 private:
  int n_ = 0;
  std::vector<Mat> basis_;
  CVec unit_;
  Mat flat_;        // N^2 x d, columns vec(basis_k)
  Mat gram_inv_;    // (flat^H flat)^{-1}
  std::vector<Mat> lmul_;  // lmul_[i](:, j) = coords(B_i B_j)
  Mat star_;        // star_(:, k) = coords(B_k^*)
  bool verified_ = false;
};

/// Verifies independence, *-closure, product closure and unit; residuals
/// are relative. Without `unit` the unit is solved for.
ConcreteStarAlgebra closure_check(std::vector<Mat> basis, std::optional<CVec> unit = std::nullopt,
                                  double tol = kStructureTol);

ConcreteStarAlgebra scalar_algebra();
ConcreteStarAlgebra full_matrix_algebra(int n);
ConcreteStarAlgebra diagonal_algebra(int n);
ConcreteStarAlgebra direct_sum(const ConcreteStarAlgebra& a, const ConcreteStarAlgebra& b);
/// Left regular representation of C[G].
ConcreteStarAlgebra group_algebra(const FiniteGroup& g);
/// Twisted regular representation with lambda(g) lambda(h) = mu(g,h) lambda(gh).
ConcreteStarAlgebra twisted_group_algebra(const Cochain2& mu);
/// The corner pAp for a central projection p (coefficients), represented on
/// the range of p in the ambient space.
ConcreteStarAlgebra corner(const ConcreteStarAlgebra& a, const CVec& p);

/// Orthonormal (normalized trace) basis of the center, as coefficient columns.
Mat center(const ConcreteStarAlgebra& a);

struct WedderburnBlock {
  int size = 0;
  CVec central_projection;            // coefficients
  std::vector<std::vector<Mat>> units;  // units[j][k] = e_jk as ambient matrices
  double trace_weight = 0;            // normalized trace of a minimal projection
};

struct Wedderburn {
  std::vector<int> blocks;  // ascending
  std::vector<WedderburnBlock> components;
  std::uint64_t seed = 0;
  int attempts = 0;
  double hom_residual = 0;   // max over basis pairs of ||phi(xy) - phi(x)phi(y)||
  double star_residual = 0;  // max over basis of ||phi(x*) - phi(x)^*||

  /// The block-diagonal image of an ambient element.
  std::vector<Mat> phi(const Mat& x) const;
};

Wedderburn wedderburn(const ConcreteStarAlgebra& a, std::uint64_t seed = 0);

struct Positivity {
  bool positive = false;
  double min_eigenvalue = 0;
  double max_abs_eigenvalue = 0;
};

/// Throws MathError(NotSelfAdjoint) unless x = x*.
Positivity is_positive(const Mat& x, double tol = 1e-9);
Positivity is_positive(const CVec& x, const ConcreteStarAlgebra& a, double tol = 1e-9);

}  // namespace qsplit
