#pragma once

#include <memory>
#include <vector>

#include "qsplit/cohomology.hpp"
#include "qsplit/cstar.hpp"

namespace qsplit {

using AlgebraPtr = std::shared_ptr<const ConcreteStarAlgebra>;

AlgebraPtr share(ConcreteStarAlgebra a);
bool same_algebra(const AlgebraPtr& a, const AlgebraPtr& b);

/// A finite-dimensional right correspondence _A X_B on C^dim.
///
/// lact[k] is the action of the k-th basis element of A, ract[k] the right
/// action of the k-th basis element of B (so ract is anti-multiplicative),
/// and <e_i|e_j>_B = sum_c inner[c](i, j) b_c.
struct Correspondence {
  AlgebraPtr left, right;
  int dim = 0;
  std::vector<Mat> lact, ract, inner;
  /// Optional G-grading of the basis vectors (pointed categories over C).
  std::shared_ptr<const FiniteGroup> grade_group;
  std::vector<int> grading;

  Mat left_action(const CVec& a) const;
  Mat right_action(const CVec& b) const;
  /// B-coordinates of <x|y>.
  CVec inner_product(const CVec& x, const CVec& y) const;
  /// Scalarized Gram S_ij = tau(<e_i|e_j>) for the normalized ambient trace of B.
  Mat scalar_form() const;
  /// The Gram element [<e_i|e_j>] of M_d(B) as a (d N) x (d N) matrix.
  Mat gram_ambient() const;
  bool graded() const { return !grading.empty(); }
};

/// Checks actions, inner product axioms, positivity and definiteness.
Correspondence validate_correspondence(Correspondence c, double tol = kStructureTol);

/// B as a B-B correspondence with <a|b> = a^* b.
Correspondence unit_correspondence(const AlgebraPtr& b);

/// max relative residual of f L_X(a) = L_Y(a) f and f R_X(b) = R_Y(b) f on bases.
double bimodularity_residual(const Mat& f, const Correspondence& x, const Correspondence& y);

/// The adjoint f^dagger : Y -> X of f : X -> Y.
Mat adjoint(const Mat& f, const Correspondence& x, const Correspondence& y);

struct Tensor {
  Correspondence c;
  Mat pi;    // dim(c) x (dim X * dim Y), factor map from the algebraic tensor product
  Mat iota;  // (dim X * dim Y) x dim(c), with pi * iota = id
  bool kronecker = false;  // pi = iota = id
};

/// X (x)_B Y, basis orthonormal in the scalar form (Kronecker basis kept when it already is).
Tensor relative_tensor(const Correspondence& x, const Correspondence& y);

/// f (x) g between tensor products, given both tensor factorizations.
Mat tensor_maps(const Mat& f, const Mat& g, const Tensor& src, const Tensor& tgt);

/// Associator phases for Hilb(G, omega); carriers must be graded.
struct Twist {
  std::shared_ptr<const Cochain3> omega;
  explicit operator bool() const { return static_cast<bool>(omega); }
};

/// (X (x) Y) (x) Z -> X (x) (Y (x) Z).
Mat associator(const Correspondence& x, const Correspondence& y, const Correspondence& z, const Twist& tw = {});
/// B (x) Y -> Y and X (x) B -> X.
Mat left_unitor(const Correspondence& y);
Mat right_unitor(const Correspondence& x);

/// p = (id_X (x) lambda_Y) alpha (rho_X^dagger (x) id_Y) on X (x)_B Y.
Mat separability_projector(const Correspondence& x, const Mat& rho_x, const Correspondence& q,
                           const Correspondence& y, const Mat& lambda_y, const Twist& tw = {});

struct Splitting {
  Correspondence image;
  Mat u;  // coisometry onto the image: u u^dagger = id, u^dagger u = p
  Mat v;  // u^dagger
};

/// Splits an idempotent that is self-adjoint for the scalar form of c.
Splitting split_projector(const Mat& p, const Correspondence& c);

/// Residual of p^2 = p = p^dagger, relative.
double projector_residual(const Mat& p, const Correspondence& c);

}  // namespace qsplit
