#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsplit/bimod.hpp"

namespace qsplit {

inline constexpr double kAxiomTol = 1e-8;

/// (Q, m, i) over the base algebra B. m : Q (x)_B Q -> Q in the basis of
/// relative_tensor(q, q); i : B -> Q with B the unit correspondence.
struct QSystem {
  AlgebraPtr base;
  Correspondence q;
  Mat m, i;
  Twist twist;
};
using QSystemPtr = std::shared_ptr<const QSystem>;

struct AxiomResidual {
  std::string name;
  double relative = 0;  // Frobenius norm of lhs - rhs over that of lhs
  double absolute = 0;  // operator norm of lhs - rhs
  bool pass = false;
};

struct AxiomReport {
  double tol = kAxiomTol;
  std::vector<AxiomResidual> axioms;
  /// False only if a known implication between the axioms is violated.
  bool dependencies_consistent = true;

  bool all_pass() const;
  const AxiomResidual& at(const std::string& name) const;
};

/// Q1 associativity, Q2 unitality, Q3 Frobenius, Q4 separability.
AxiomReport check_qsystem(const QSystem& q, double tol = kAxiomTol);

struct DQData {
  CVec d;        // central element of B (coefficients)
  CVec d_inv;    // pseudo-inverse
  CVec support;  // s_Q = d d^{-1}
  double norm = 0;
  double central_residual = 0;
  /// min eigenvalues of ||d|| - d (x) id and d (x) id - coev ev on Q (x) Q, when requested
  std::optional<double> z2_upper_gap, z2_lower_gap;
};

DQData dq(const QSystem& q, bool check_z2 = false);

/// 1_B: Q = B, m = unitor, i = id.
QSystem trivial_qsystem(const AlgebraPtr& b);

/// The pointed Q-system on C[H] over C: m(d_g (x) d_h) = c mu(g,h) d_gh and
/// i(1) = |H|^{1/2} d_e with c = |H|^{-1/2} (or 1 when unnormalized). mu lives
/// on subgroup_as_group(G, H); the carrier is graded by G. With omega the
/// associator is the Hilb(G, omega) one.
QSystem pointed_qsystem(const FiniteGroup& g, const Subgroup& h, const Cochain2& mu,
                        std::shared_ptr<const Cochain3> omega = nullptr, bool normalized = true);

struct InclusionQSystem {
  QSystem q;
  std::vector<CVec> quasi_basis;  // coordinates in B
  CVec index;                     // Watatani index, coordinates in B
  double quasi_basis_residual = 0;
  double index_central_residual = 0;
};

/// Q-system over A from A in B and an expectation E : B -> A given as a
/// dim(A) x dim(B) coefficient matrix (default: trace-preserving projection).
/// `spanning` optionally replaces the basis of B as the spanning set used
/// for the quasi-basis (columns are B-coefficients).
InclusionQSystem qsystem_from_inclusion(const AlgebraPtr& a, const AlgebraPtr& b,
                                        std::optional<Mat> expectation = std::nullopt,
                                        std::optional<Mat> spanning = std::nullopt);
/// The trace-preserving conditional expectation B -> A (coefficients).
Mat trace_expectation(const ConcreteStarAlgebra& a, const ConcreteStarAlgebra& b);

struct DualPairResidual {
  double zigzag_x = 0, zigzag_xv = 0, separability = 0;
};

/// X over (A,B), xv over (B,A); ev : xv (x) X -> B, coev : A -> X (x) xv.
QSystem qsystem_from_dual_pair(const Correspondence& x, const Correspondence& xv, const Mat& ev, const Mat& coev,
                               DualPairResidual* residuals = nullptr, double tol = kAxiomTol);

/// A P-Q bimodule: lambda : P (x) X -> X, rho : X (x) Q -> X.
struct QBimodule {
  QSystemPtr left, right;
  Correspondence x;
  Mat lambda, rho;
};

/// B1 (three identities), B2, B3, B4, plus the derived facts MM1 and MM2.
AxiomReport check_qbimodule(const QBimodule& x, double tol = kAxiomTol, std::uint64_t seed = 0);

/// Q over itself.
QBimodule regular_bimodule(const QSystemPtr& q);
/// P (x) V (x) Q with the free actions.
QBimodule free_bimodule(const QSystemPtr& p, const Correspondence& v, const QSystemPtr& q);

/// The P-Q bimodule maps X -> Y as a basis of matrices.
std::vector<Mat> bimodule_maps(const QBimodule& x, const QBimodule& y);

struct QTensor {
  QBimodule xy;  // X (x)_Q Y
  Tensor over_base;
  Mat p;          // separability projector on X (x)_B Y
  Mat u;          // coisometry X (x)_B Y -> X (x)_Q Y
  double coequalizer_residual = 0;
};

QTensor tensor_over_q(const QBimodule& x, const QBimodule& y);

/// A Q-system in the bimodule sense over R: m : Q (x)_R Q -> Q in the basis
/// of tensor_over_q(q, q), i : R -> Q.
struct QSystemOver {
  QSystemPtr r;
  QBimodule q;
  Mat m, i;
};

QSystem collapse_qsystem(const QSystemOver& q);

/// Transport of Q along an invertible endomorphism g of the carrier:
/// m' = g m (g^{-1} (x) g^{-1}), i' = g i.
QSystem conjugate_qsystem(const QSystem& q, const Mat& g);
QBimodule conjugate_bimodule(const QBimodule& x, const Mat& g);

/// A random B-B bimodular (and grade preserving) endomorphism of c; with
/// `unitary` its polar part for the scalar form.
Mat random_endomorphism(const Correspondence& c, Rng& rng, bool unitary);

}  // namespace qsplit
