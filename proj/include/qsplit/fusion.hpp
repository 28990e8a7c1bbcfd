#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qsplit/cohomology.hpp"
#include "qsplit/groups.hpp"
#include "qsplit/linalg.hpp"
#include "qsplit/qsystem.hpp"

namespace qsplit {

/// A based ring with structure constants n[(a*r + b)*r + c] = N^c_{ab}.
struct FusionRing {
  int rank = 0;
  std::vector<std::string> labels;
  std::vector<int> n;
  int unit = 0;
  std::vector<int> dual;

  int at(int a, int b, int c) const { return n[static_cast<std::size_t>((a * rank + b) * rank + c)]; }
  /// (N_a)_{bc} = N^c_{ab}
  Eigen::MatrixXi fusion_matrix(int a) const;
  int label_index(const std::string& label) const;
};

/// Checks unit, duality, associativity and Frobenius reciprocity. Throws
/// InputError for shape problems and MathError for failed axioms.
FusionRing validate_fusion_ring(FusionRing ring);

FusionRing fibonacci_ring();
FusionRing ising_ring();
FusionRing hilb_ring(const FiniteGroup& g);
FusionRing rep_s3_ring();

struct FPDimensions {
  std::vector<double> d;
  std::vector<int> reducible;  // labels whose fusion matrix is reducible
  double global_dimension = 0;
};

FPDimensions fp_dimensions(const FusionRing& ring);

struct Obstruction {
  bool pass = true;
  int witness = -1;
  double dimension = 0;
  double distance = 0;  // from the nearest integer
  std::vector<double> dims;
};

Obstruction integrality_obstruction(const FusionRing& ring);

/// A right module over the fusion ring on Z^k: v |> a = v^T M_a.
struct K0Module {
  int rank = 0;
  Eigen::VectorXd order_unit;
  std::vector<Eigen::MatrixXi> action;
};

K0Module validate_k0_module(K0Module m, const FusionRing& ring);
/// The ring acting on itself from the right, order unit e_1.
K0Module regular_module(const FusionRing& ring);

struct Eigenstate {
  Eigen::VectorXd phi;  // values on the standard generators
  Eigen::VectorXd psi;
  double normalization = 0;
  double eigen_residual = 0;
  double unit_residual = 0;
};

/// psi defaults to the normalized all-ones functional.
Eigenstate fp_eigenstate(const K0Module& m, const FusionRing& ring,
                         std::optional<Eigen::VectorXd> psi = std::nullopt);

/// An irreducible Q-system in Hilb(G, omega): a subgroup and a mu class.
struct QSystemClass {
  Subgroup h;
  Cochain2 mu;
  QSystem q;
  AxiomReport report;
};

std::vector<QSystemClass> enumerate_qsystems(const FiniteGroup& g, const Cochain3& omega);

}  // namespace qsplit
