#pragma once

#include <string>
#include <vector>

#include "qsplit/fusion.hpp"
#include "qsplit/qsystem.hpp"

namespace qsplit {

inline constexpr int kMaxDualGroupOrder = 16;

/// A simple Q-Q bimodule cut out of the free bimodule Q (x) C_g (x) Q.
struct DualSimple {
  std::string label;  // "D<double coset>.<block>"
  int coset = 0;
  int representative = 0;
  QBimodule x;
  Mat inclusion;                // isometry X -> free bimodule
  Mat projection;               // minimal idempotent on the free bimodule
};

struct DualFusion {
  QSystemPtr q;
  std::vector<QBimodule> free;  // one per double coset
  std::vector<std::vector<int>> end_blocks;
  std::vector<DualSimple> simples;
  FusionRing ring;
  double max_bimodule_residual = 0;   // worst axiom residual over simples and products
  double max_coequalizer_residual = 0;
  double global_dimension_gap = 0;    // |sum FPdim^2 - |G||
};

/// The fusion ring of Q-Q bimodules for the (H, mu) Q-system in Hilb(G, omega).
DualFusion dual_fusion_ring(const FiniteGroup& g, const Cochain3& omega, const Subgroup& h, const Cochain2& mu,
                            std::uint64_t seed = 0);

/// The bimodule map (Q (x) C_g) (x) Q -> Y extending v in the grade-g part of Y:
/// rho (lambda (x) 1)((1 (x) v) (x) 1).
Mat free_extension(const QBimodule& y, const CVec& v);

}  // namespace qsplit
