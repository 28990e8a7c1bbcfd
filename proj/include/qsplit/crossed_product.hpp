#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qsplit/bimod.hpp"
#include "qsplit/fusion.hpp"
#include "qsplit/graded.hpp"

namespace qsplit {

inline constexpr double kActionTol = 1e-9;

/// g -> alpha_g in Aut(A) with unitaries u_{g,h} in A such that
/// alpha_g alpha_h = Ad(u_{g,h}) alpha_gh and
/// u_{g,hk} alpha_g(u_{h,k}) = omega(g,h,k) u_{gh,k} u_{g,h}.
struct AnomalousAction {
  FiniteGroup group;
  AlgebraPtr algebra;
  std::vector<Mat> alpha;  // coefficient matrices, one per group element
  std::vector<CVec> u;     // u[g*n + h], coefficients
  /// When A = C(X) in the diagonal basis and alpha permutes the points.
  std::optional<GSet> points;
};

struct ActionReport {
  double automorphism_residual = 0;
  double unitarity_residual = 0;
  double normalization_residual = 0;  // alpha_e = id, u_{e,g} = u_{g,e} = 1
  double intertwining_residual = 0;
  double cocycle_residual = 0;
  bool pass = false;
};

/// Throws MathError(NotAutomorphism) naming g when some alpha_g is not a
/// unital *-automorphism.
ActionReport validate_anomalous_action(const AnomalousAction& act, const Cochain3& omega);

/// G acting on C(X) by permuting points, u = 1.
AnomalousAction permutation_action(const FiniteGroup& g, const GSet& x);
/// G acting on C(G x {1..copies}) by left translation with
/// u_{g,h}(x, j) = omega(x^{-1}, g, h), an omega-anomalous action.
AnomalousAction translation_action(const FiniteGroup& g, const Cochain3& omega, int copies = 1);

struct CrossedProduct {
  AlgebraPtr algebra;          // on A (x) C[H], coordinates h*dim(A) + k
  std::vector<CVec> w;         // w[a*|H| + b] on subgroup indices
  double cocycle_residual = 0;
  std::vector<int> blocks;
  std::vector<double> traces;  // rank of a minimal projection over that of its block unit
  int center_dimension = 0;
  double wedderburn_residual = 0;
  /// Filled for actions on points: orbit count and freeness of H.
  std::optional<int> orbits;
  bool free = false;
};

/// The Busby-Smith product (a d_g)(b d_h) = a alpha_g(b) w_{g,h} d_gh over H
/// with w = conj(mu) u. Throws MathError(AnomalyNotCancelled) when w is not
/// an ordinary 2-cocycle and MathError(SpectrumMismatch) when a free action on
/// points does not give |X/H| blocks of size |H|.
CrossedProduct twisted_crossed_product(const AnomalousAction& act, const Subgroup& h, const Cochain2& mu,
                                       std::uint64_t seed = 0);

struct K0Trace {
  int block = 0;
  int size = 0;
  double minimal_projection = 0;  // tau(p) = rank at the point over rank of the unit
};

struct InducedActionReport {
  ActionReport action;
  CrossedProduct crossed;
  int quotient_points = 0;  // |X/H|
  DualFusion dual;
  Obstruction obstruction;
  double global_dimension_gap = 0;
  std::vector<K0Trace> traces;
};

InducedActionReport induced_action_report(const Cochain3& omega, const Subgroup& h, const Cochain2& mu,
                                          const AnomalousAction& act, std::uint64_t seed = 0);

}  // namespace qsplit
