#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qsplit/cstar.hpp"
#include "qsplit/error.hpp"

using namespace qsplit;

namespace {

Mat unit_matrix(int n, int i, int j) {
  Mat m = Mat::Zero(n, n);
  m(i, j) = 1;
  return m;
}

std::vector<ConcreteStarAlgebra> samples() {
  return {scalar_algebra(),
          diagonal_algebra(3),
          full_matrix_algebra(2),
          direct_sum(scalar_algebra(), full_matrix_algebra(2)),
          group_algebra(cyclic_group(3)),
          group_algebra(symmetric_group(3)),
          direct_sum(full_matrix_algebra(2), full_matrix_algebra(2))};
}

}  // namespace

TEST(Closure, Examples) {
  const ConcreteStarAlgebra d = closure_check({unit_matrix(2, 0, 0), unit_matrix(2, 1, 1)});
  EXPECT_EQ(d.dim(), 2);
  EXPECT_TRUE(d.verified());
  try {
    closure_check({Mat::Identity(2, 2), unit_matrix(2, 0, 1)});
    FAIL() << "span{I, e12} is not *-closed";
  } catch (const MathError& e) {
    EXPECT_EQ(e.kind(), "NotClosed");
  }
  EXPECT_EQ(group_algebra(symmetric_group(3)).dim(), 6);
  EXPECT_THROW(closure_check({Mat::Identity(2, 2), Mat::Identity(2, 2)}), InputError);
}

TEST(Closure, CoordinatesRoundTrip) {
  const ConcreteStarAlgebra a = direct_sum(scalar_algebra(), full_matrix_algebra(2));
  Rng rng(5);
  const CVec x = random_vector(a.dim(), rng), y = random_vector(a.dim(), rng);
  EXPECT_LT((a.coords(a.element(x)) - x).norm(), 1e-12);
  EXPECT_LT((a.element(a.mul(x, y)) - a.element(x) * a.element(y)).norm(), 1e-12);
  EXPECT_LT((a.element(a.star(x)) - a.element(x).adjoint()).norm(), 1e-12);
  EXPECT_LT((a.element(a.unit()) - Mat::Identity(a.ambient(), a.ambient())).norm(), 1e-12);
}

TEST(Wedderburn, Examples) {
  EXPECT_EQ(wedderburn(full_matrix_algebra(2)).blocks, (std::vector<int>{2}));
  EXPECT_EQ(wedderburn(group_algebra(cyclic_group(3))).blocks, (std::vector<int>{1, 1, 1}));
  EXPECT_EQ(wedderburn(group_algebra(symmetric_group(3))).blocks, (std::vector<int>{1, 1, 2}));
}

TEST(Wedderburn, MatchesOracleAndIsStarIsomorphism) {
  for (const auto& a : samples())
    for (std::uint64_t seed : {0u, 1u, 17u}) {
      const Wedderburn w = wedderburn(a, seed);
      EXPECT_EQ(w.blocks, oracle::wedderburn_blocks(a));
      int total = 0;
      for (int n : w.blocks) total += n * n;
      EXPECT_EQ(total, a.dim());
      EXPECT_LT(w.hom_residual, 1e-8);
      EXPECT_LT(w.star_residual, 1e-8);
      EXPECT_EQ(static_cast<int>(center(a).cols()), static_cast<int>(w.blocks.size()));
      for (const auto& blk : w.components) {
        Mat sum = Mat::Zero(a.ambient(), a.ambient());
        for (int j = 0; j < blk.size; ++j) {
          sum += blk.units[j][j];
          for (int k = 0; k < blk.size; ++k) {
            EXPECT_LT((blk.units[j][k].adjoint() - blk.units[k][j]).norm(), 1e-8);
            for (int l = 0; l < blk.size; ++l)
              EXPECT_LT((blk.units[j][k] * blk.units[k][l] - blk.units[j][l]).norm(), 1e-8);
          }
        }
        EXPECT_LT((sum - a.element(blk.central_projection)).norm(), 1e-8);
      }
    }
}

TEST(Center, Dimensions) {
  EXPECT_EQ(center(full_matrix_algebra(2)).cols(), 1);
  EXPECT_EQ(center(diagonal_algebra(2)).cols(), 2);
  const FiniteGroup s3 = symmetric_group(3);
  EXPECT_EQ(center(group_algebra(s3)).cols(), oracle::conjugacy_classes(s3));
  const ConcreteStarAlgebra a = group_algebra(s3);
  const Mat z = center(a);
  for (Eigen::Index c = 0; c < z.cols(); ++c)
    for (int k = 0; k < a.dim(); ++k) {
      const CVec zc = z.col(c);
      EXPECT_LT((a.mul(zc, a.basis_vector(k)) - a.mul(a.basis_vector(k), zc)).norm(), 1e-9);
    }
}

TEST(Positivity, Examples) {
  const ConcreteStarAlgebra m2 = full_matrix_algebra(2);
  EXPECT_TRUE(is_positive(m2.unit(), m2).positive);
  Rng rng(9);
  for (int k = 0; k < 10; ++k) {
    const Mat x = random_matrix(2, 2, rng);
    EXPECT_TRUE(is_positive(Mat(x.adjoint() * x)).positive);
  }
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1;
  d(1, 1) = -1;
  const Positivity p = is_positive(d);
  EXPECT_FALSE(p.positive);
  EXPECT_NEAR(p.min_eigenvalue, -1.0, 1e-12);
  EXPECT_THROW(is_positive(unit_matrix(2, 0, 1)), MathError);
}

TEST(TwistedGroupAlgebra, KleinNondegenerateIsM2) {
  const FiniteGroup k4 = direct_product(cyclic_group(2), cyclic_group(2));
  Cochain2 mu;
  mu.group = k4;
  mu.modulus = 2;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) mu.e.push_back((x / 2) * (y % 2));
  const ConcreteStarAlgebra a = twisted_group_algebra(mu);
  EXPECT_EQ(wedderburn(a).blocks, (std::vector<int>{2}));
  EXPECT_EQ(oracle::wedderburn_blocks(a), (std::vector<int>{2}));
}

TEST(Corner, CutsDownToBlock) {
  const ConcreteStarAlgebra a = direct_sum(scalar_algebra(), full_matrix_algebra(2));
  const Wedderburn w = wedderburn(a);
  for (const auto& blk : w.components) {
    const ConcreteStarAlgebra c = corner(a, blk.central_projection);
    EXPECT_EQ(c.dim(), blk.size * blk.size);
    EXPECT_EQ(wedderburn(c).blocks, (std::vector<int>{blk.size}));
  }
}
