#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qsplit/error.hpp"
#include "qsplit/realize.hpp"

using namespace qsplit;

namespace {

FiniteGroup klein() { return direct_product(cyclic_group(2), cyclic_group(2)); }

QSystemPtr pointed(const FiniteGroup& g, int mu_class) {
  return std::make_shared<const QSystem>(
      pointed_qsystem(g, whole_group(g), solve_mu(g, trivial_cocycle3(g), whole_group(g))[mu_class]));
}

// Q as a (1_C, Q) bimodule.
QBimodule as_right_module(const QSystemPtr& q) {
  QBimodule x;
  x.left = std::make_shared<const QSystem>(trivial_qsystem(q->base));
  x.right = q;
  x.x = q->q;
  x.lambda = left_unitor(q->q);
  x.rho = q->m;
  return x;
}

}  // namespace

TEST(Realize, TrivialRoundTrip) {
  for (const auto& b : {scalar_algebra(), diagonal_algebra(2), full_matrix_algebra(2),
                        direct_sum(scalar_algebra(), full_matrix_algebra(2)), group_algebra(symmetric_group(3))}) {
    const Realization r = realize_qsystem(std::make_shared<const QSystem>(trivial_qsystem(share(b))));
    EXPECT_EQ(wedderburn(*r.algebra).blocks, oracle::wedderburn_blocks(b));
    EXPECT_LT(r.hom_residual, 1e-8);
    EXPECT_LT(r.star_residual, 1e-8);
    EXPECT_LT(r.psi_residual, 1e-8);
    // the embedding of B is multiplicative and unital
    Rng rng(1);
    const CVec x = random_vector(b.dim(), rng), y = random_vector(b.dim(), rng);
    const CVec lhs = r.embed_base * b.mul(x, y);
    const CVec rhs = r.algebra->mul(r.embed_base * x, r.embed_base * y);
    EXPECT_LT((lhs - rhs).norm(), 1e-10 * std::max(1.0, lhs.norm()));
    EXPECT_LT((r.embed_base * b.unit() - r.unit).norm(), 1e-10);
  }
}

TEST(Realize, PointedBlocks) {
  const FiniteGroup z3 = cyclic_group(3);
  EXPECT_EQ(wedderburn(*realize_qsystem(pointed(z3, 0)).algebra).blocks, (std::vector<int>{1, 1, 1}));
  const FiniteGroup k4 = klein();
  const auto mus = solve_mu(k4, trivial_cocycle3(k4), whole_group(k4));
  ASSERT_EQ(mus.size(), 2u);
  std::vector<std::vector<int>> seen;
  for (std::size_t k = 0; k < mus.size(); ++k) {
    const Realization r = realize_qsystem(pointed(k4, static_cast<int>(k)));
    const auto blocks = wedderburn(*r.algebra).blocks;
    EXPECT_EQ(blocks, oracle::wedderburn_blocks(*r.algebra));
    EXPECT_EQ(blocks, oracle::wedderburn_blocks(twisted_group_algebra(mus[k])));
    seen.push_back(blocks);
  }
  std::sort(seen.begin(), seen.end());
  EXPECT_EQ(seen, (std::vector<std::vector<int>>{{1, 1, 1, 1}, {2}}));
}

TEST(Realize, ProductIsTheGraphicalOne) {
  const QSystemPtr q = pointed(klein(), 1);
  const Realization r = realize_qsystem(q);
  const int d = q->q.dim;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const CVec prod = r.product.col(i * d + j);
      EXPECT_LT((r.algebra->mul(CVec::Unit(d, i), CVec::Unit(d, j)) - prod).norm(), 1e-10);
      EXPECT_LT((r.phi(CVec::Unit(d, i)) * CVec::Unit(d, j) - prod).norm(), 1e-10);
    }
}

TEST(Expectation, BimodularAndLeftInverseToEmbedding) {
  for (const auto& q : {pointed(klein(), 0), pointed(klein(), 1), pointed(symmetric_group(3), 0)}) {
    const Realization r = realize_qsystem(q);
    const Expectation e = conditional_expectation(r);
    EXPECT_LT(e.bimodularity_residual, 1e-10);
    EXPECT_LT(e.range_residual, 1e-10);
    const Mat id = e.e * r.embed_base;
    EXPECT_LT((id - Mat::Identity(id.rows(), id.cols())).norm(), 1e-10);
  }
  const AlgebraPtr m2 = share(full_matrix_algebra(2));
  const AlgebraPtr c = share(closure_check({Mat::Identity(2, 2)}));
  const Realization r = realize_qsystem(std::make_shared<const QSystem>(qsystem_from_inclusion(c, m2).q));
  const Expectation e = conditional_expectation(r);
  EXPECT_LT(e.bimodularity_residual, 1e-10);
  EXPECT_EQ(wedderburn(*r.algebra).blocks, (std::vector<int>{2}));
}

TEST(PimsnerPopa, BoundHoldsOnRandomPositives) {
  for (const auto& q : {pointed(klein(), 0), pointed(klein(), 1), pointed(cyclic_group(3), 0)}) {
    const Realization r = realize_qsystem(q);
    const PimsnerPopaReport pp = pimsner_popa(r, conditional_expectation(r), 50, 5);
    EXPECT_TRUE(pp.pass);
    EXPECT_GE(pp.min_margin, -1e-9);
    EXPECT_NEAR(pp.bound, static_cast<double>(q->q.dim * q->q.dim), 1e-9);
    EXPECT_LE(pp.best_constant, pp.bound + 1e-9);
    EXPECT_GE(pp.best_constant, 1.0 - 1e-9);
  }
}

TEST(Untwist, AnomalousPointedBecomesOrdinary) {
  const FiniteGroup z4 = cyclic_group(4);
  const auto w = std::make_shared<const Cochain3>(cyclic_cocycle3(4, 2));
  const Subgroup h = make_subgroup(z4, {0, 2});
  const auto mus = solve_mu(z4, *w, h);
  ASSERT_FALSE(mus.empty());
  const QSystem q = pointed_qsystem(z4, h, mus[0], w);
  ASSERT_TRUE(check_qsystem(q).all_pass());
  const Untwisted u = untwist(q);
  ASSERT_TRUE(u.mu0);
  EXPECT_FALSE(u.q.twist);
  EXPECT_TRUE(same_values(d2(*u.mu0), restrict_to(*w, u.support)));
  EXPECT_TRUE(check_qsystem(u.q).all_pass());
  EXPECT_EQ(wedderburn(*realize_qsystem(std::make_shared<const QSystem>(u.q)).algebra).blocks,
            (std::vector<int>{1, 1}));

  const QSystem plain = pointed_qsystem(z4, h, solve_mu(z4, trivial_cocycle3(z4), h)[0]);
  EXPECT_FALSE(untwist(plain).mu0);
}

TEST(RealizedBimodule, RightModuleAndIntertwiners) {
  const QSystemPtr q = pointed(klein(), 1);
  const QBimodule x = as_right_module(q);
  ASSERT_TRUE(check_qbimodule(x).all_pass());
  const Realization one = realize_qsystem(x.left), rq = realize_qsystem(q);
  const RealizedBimodule rx = realize_bimodule(x, one, rq);
  EXPECT_EQ(rx.c.dim, 4);
  EXPECT_GT(rx.norm_lower, 0.0);
  EXPECT_NEAR(rx.norm_lower, rx.norm_upper, 1e-10);

  const Mat id = Mat::Identity(4, 4);
  EXPECT_LT((realize_intertwiner(id, x, x) - id).norm(), 1e-14);
  Mat bad = Mat::Zero(4, 4);
  bad(0, 1) = 1;
  try {
    realize_intertwiner(bad, x, x);
    FAIL() << "non-bimodular map accepted";
  } catch (const MathError& e) {
    EXPECT_EQ(e.kind(), "NotBimodular");
  }

  // bimodule maps compose and their adjoints are again bimodule maps
  const auto maps = bimodule_maps(x, x);
  ASSERT_FALSE(maps.empty());
  for (const auto& f : maps)
    for (const auto& g : maps) {
      EXPECT_NO_THROW(realize_intertwiner(Mat(f * g), x, x));
      EXPECT_LT(bimodularity_residual(adjoint(f, rx.c, rx.c), rx.c, rx.c), 1e-8);
    }
}

TEST(Tensorator, UnitaryAndBimodular) {
  for (int k : {0, 1}) {
    const QSystemPtr q = pointed(klein(), k);
    const Realization rq = realize_qsystem(q);
    const Tensorator t = tensorator(regular_bimodule(q), regular_bimodule(q), rq, rq, rq);
    EXPECT_LT(t.unitarity_residual, 1e-10);
    EXPECT_LT(t.bimodularity_residual, 1e-10);
    EXPECT_EQ(t.source.c.dim, 4);
    EXPECT_EQ(t.target.c.dim, 4);

    const QBimodule x = as_right_module(q);
    const Realization one = realize_qsystem(x.left);
    const Tensorator tx = tensorator(x, regular_bimodule(q), one, rq, rq);
    EXPECT_LT(tx.unitarity_residual, 1e-10);
  }
}

TEST(Split, RecoversTheRealization) {
  std::vector<QSystem> qs;
  for (const auto& b : {diagonal_algebra(2), direct_sum(scalar_algebra(), full_matrix_algebra(2))})
    qs.push_back(trivial_qsystem(share(b)));
  qs.push_back(*pointed(klein(), 0));
  qs.push_back(*pointed(klein(), 1));
  const AlgebraPtr m2 = share(full_matrix_algebra(2));
  qs.push_back(qsystem_from_inclusion(share(closure_check({Mat::Identity(2, 2)})), m2).q);
  for (const auto& q : qs) {
    const SplitCertificate c = split_qsystem(q);
    EXPECT_LT(c.iso_residual, 1e-8);
    EXPECT_LT(c.dual_residuals.zigzag_x, 1e-8);
    EXPECT_LT(c.dual_residuals.zigzag_xv, 1e-8);
    EXPECT_EQ(c.blocks, oracle::wedderburn_blocks(*c.realization.algebra));
    EXPECT_TRUE(check_qsystem(c.dual).all_pass());
  }
}

TEST(Split, DegenerateSupportIsRestricted) {
  const AlgebraPtr b = share(diagonal_algebra(2));
  QSystem q;
  q.base = b;
  q.q.left = q.q.right = b;
  q.q.dim = 1;
  q.q.lact = {Mat::Ones(1, 1), Mat::Zero(1, 1)};
  q.q.ract = q.q.lact;
  q.q.inner = {Mat::Ones(1, 1), Mat::Zero(1, 1)};
  q.q = validate_correspondence(q.q);
  q.m = Mat::Constant(1, 1, std::sqrt(2.0));
  q.i = Mat(1, 2);
  q.i << 1, 0;
  Mat to_base;
  const QSystem r = restrict_to_support(q, &to_base);
  EXPECT_EQ(r.base->dim(), 1);
  EXPECT_TRUE(check_qsystem(r).all_pass());
  const SplitCertificate c = split_qsystem(q);
  EXPECT_EQ(c.blocks, (std::vector<int>{1}));
  EXPECT_LT(c.iso_residual, 1e-8);
}

TEST(Split, CommutativeSubalgebraOverItself) {
  const FiniteGroup s3 = symmetric_group(3);
  const ConcreteStarAlgebra b = group_algebra(s3);
  for (const auto& h : enumerate_subgroups(s3)) {
    if (h.size() != 3) continue;
    std::vector<Mat> span;
    for (int x : h.elements) span.push_back(b.basis()[x]);
    const AlgebraPtr a = share(closure_check(span));
    EXPECT_EQ(center(*a).cols(), 3);
    const SplitCertificate c = split_qsystem(qsystem_from_inclusion(a, a).q);
    EXPECT_EQ(c.blocks, (std::vector<int>{1, 1, 1}));
    EXPECT_EQ(center(*c.realization.algebra).cols(), 3);
    EXPECT_LT(c.iso_residual, 1e-8);
  }
}
