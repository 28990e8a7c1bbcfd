#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qsplit/qsystem.hpp"

namespace qsplit {

/// |Q| on the carrier of Q. The concrete algebra has basis
/// S^{1/2} L_{e_k} S^{-1/2}, so algebra coordinates are carrier coordinates.
struct Realization {
  QSystemPtr source;
  AlgebraPtr algebra;
  Mat product;      // column i*d+j holds e_i e_j
  Mat star_map;     // q^* = star_map * conj(q)
  CVec unit;
  Mat embed_base;   // B-coefficients -> |Q|-coefficients, b -> i(b)
  Mat sqrt_form, sqrt_form_inv;
  double hom_residual = 0;
  double star_residual = 0;
  double psi_residual = 0;

  /// Left multiplication by q on the carrier of Q.
  Mat phi(const CVec& q) const;
  CVec star(const CVec& q) const { return star_map * q.conjugate(); }
};

Realization realize_qsystem(const QSystemPtr& q);

/// A twisted pointed Q-system over C moved to the untwisted category along
/// the tensor functor with coherence conj(mu0), d mu0 = omega on the
/// subgroup of grades. Untwisted input is returned unchanged.
struct Untwisted {
  QSystem q;
  std::shared_ptr<const Cochain2> mu0;  // null when nothing was done
  Subgroup support;
};
Untwisted untwist(const QSystem& q);

struct Expectation {
  Mat e;          // dim B x dim |Q|
  CVec support;   // s_Q
  double bimodularity_residual = 0;
  double range_residual = 0;  // ||E(x) - s E(x) s||
};

Expectation conditional_expectation(const Realization& r);

struct PimsnerPopaReport {
  int samples = 0;
  double bound = 0;           // ||d_Q||^2
  double min_margin = 0;      // min over samples of lambda_min(bound iota E(x) - x) / ||x||
  double best_constant = 0;   // empirical smallest c with x <= c iota E(x)
  bool pass = false;
};

PimsnerPopaReport pimsner_popa(const Realization& r, const Expectation& e, int samples, std::uint64_t seed);

struct RealizedBimodule {
  Correspondence c;  // over (|P|, |Q|)
  double norm_lower = 0, norm_upper = 0;  // generalized eigenvalues of the two scalar forms
};

RealizedBimodule realize_bimodule(const QBimodule& x, const Realization& p, const Realization& q);

/// Checks that f : X -> Y is a P-Q bimodule map and returns |f| (the same matrix on carriers).
Mat realize_intertwiner(const Mat& f, const QBimodule& x, const QBimodule& y, double tol = 1e-8);

struct Tensorator {
  Mat mu;                   // |X| (x)_{|Q|} |Y| -> |X (x)_Q Y|
  Tensor source;            // |X| (x)_{|Q|} |Y|
  QTensor over_q;
  RealizedBimodule target;
  double unitarity_residual = 0;
  double bimodularity_residual = 0;
};

Tensorator tensorator(const QBimodule& x, const QBimodule& y, const Realization& p, const Realization& q,
                      const Realization& r);

/// Q restricted to the corner s_Q B s_Q. `to_base` maps corner coefficients to B-coefficients.
QSystem restrict_to_support(const QSystem& q, Mat* to_base = nullptr);

struct SplitCertificate {
  Untwisted transported;
  QSystemPtr restricted;     // over the support corner
  Realization realization;   // C = |Q|
  std::vector<int> blocks;
  Correspondence x, xv;      // X over (corner, C), its dual over (C, corner)
  Mat ev, coev;
  DualPairResidual dual_residuals;
  QSystem dual;              // X (x)_C Xv
  Mat iso;                   // carrier of Q -> carrier of X (x)_C Xv
  double iso_residual = 0;
};

SplitCertificate split_qsystem(const QSystem& q, std::uint64_t seed = 0);

}  // namespace qsplit
