#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qsplit/error.hpp"
#include "qsplit/groups.hpp"

using namespace qsplit;

namespace {

FiniteGroup klein() { return direct_product(cyclic_group(2), cyclic_group(2)); }

template <class F>
std::string math_kind(F&& f) {
  try {
    f();
  } catch (const MathError& e) {
    return e.kind();
  }
  return "";
}

}  // namespace

TEST(Groups, CyclicTwo) {
  const FiniteGroup g = validate_group({{0, 1}, {1, 0}});
  EXPECT_EQ(g.order(), 2);
  EXPECT_EQ(g.mul(1, 1), 0);
  EXPECT_EQ(g.inv(1), 1);
}

TEST(Groups, SymmetricThreeIsAssociative) {
  const FiniteGroup s3 = symmetric_group(3);
  ASSERT_EQ(s3.order(), 6);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) EXPECT_EQ(s3.mul(s3.mul(a, b), c), s3.mul(a, s3.mul(b, c)));
  EXPECT_NO_THROW(validate_group(s3.table()));
}

TEST(Groups, RejectsBadTables) {
  EXPECT_EQ(math_kind([] { validate_group({{0, 1}, {1, 1}}); }), "NoInverse");
  EXPECT_EQ(math_kind([] { validate_group({{1, 1}, {1, 1}}); }), "NoIdentity");
  // a Latin square with identity 0 that is not associative
  const std::vector<std::vector<int>> loop = {
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  EXPECT_EQ(math_kind([&] { validate_group(loop); }), "NotAssociative");
  EXPECT_THROW(validate_group({{0, 1}, {1}}), InputError);
  EXPECT_THROW(validate_group({{0, 2}, {2, 0}}), InputError);
  EXPECT_THROW(cyclic_group(49), InputError);
  EXPECT_THROW(validate_group({{1, 0}, {0, 1}}), InputError);
}

TEST(Groups, SubgroupCountsMatchBruteForce) {
  for (const FiniteGroup& g : {cyclic_group(2), cyclic_group(4), cyclic_group(6), klein(), symmetric_group(3)}) {
    const auto subs = enumerate_subgroups(g);
    const auto brute = oracle::subgroups(g);
    ASSERT_EQ(subs.size(), brute.size());
    std::set<std::vector<int>> a, b(brute.begin(), brute.end());
    for (const auto& s : subs) a.insert(s.elements);
    EXPECT_EQ(a, b);
    for (std::size_t k = 1; k < subs.size(); ++k) {
      EXPECT_TRUE(subs[k - 1].size() < subs[k].size() ||
                  (subs[k - 1].size() == subs[k].size() && subs[k - 1].elements < subs[k].elements));
    }
  }
  EXPECT_EQ(enumerate_subgroups(cyclic_group(2)).size(), 2u);
  EXPECT_EQ(enumerate_subgroups(klein()).size(), 5u);
  EXPECT_EQ(enumerate_subgroups(symmetric_group(3)).size(), 6u);
}

TEST(Groups, SubgroupsClosedUnderIntersection) {
  const FiniteGroup s3 = symmetric_group(3);
  const auto subs = enumerate_subgroups(s3);
  for (const auto& a : subs)
    for (const auto& b : subs) {
      std::vector<int> c;
      std::set_intersection(a.elements.begin(), a.elements.end(), b.elements.begin(), b.elements.end(), std::back_inserter(c));
      EXPECT_NE(std::find_if(subs.begin(), subs.end(), [&](const Subgroup& s) { return s.elements == c; }), subs.end());
    }
}

TEST(Groups, DoubleCosets) {
  const FiniteGroup s3 = symmetric_group(3);
  EXPECT_EQ(double_cosets(s3, whole_group(s3)).size(), 1u);
  EXPECT_EQ(double_cosets(s3, trivial_subgroup()).size(), 6u);
  for (const auto& h : enumerate_subgroups(s3)) {
    if (h.size() != 2) continue;
    const auto dc = double_cosets(s3, h);
    ASSERT_EQ(dc.size(), 2u);
    std::vector<std::size_t> sizes{dc[0].elements.size(), dc[1].elements.size()};
    std::sort(sizes.begin(), sizes.end());
    EXPECT_EQ(sizes, (std::vector<std::size_t>{2, 4}));
    for (const auto& c : dc) EXPECT_EQ(c.representative, c.elements.front());
  }
}

TEST(Groups, OrbitsAndFreeness) {
  const FiniteGroup s3 = symmetric_group(3);
  const GSet triv = trivial_gset(s3, 4);
  EXPECT_EQ(orbit_quotient(triv, whole_group(s3)).orbits.size(), 4u);
  EXPECT_FALSE(orbit_quotient(triv, whole_group(s3)).free);
  EXPECT_TRUE(orbit_quotient(triv, trivial_subgroup()).free);

  const FiniteGroup z2 = cyclic_group(2);
  const OrbitQuotient q2 = orbit_quotient(regular_gset(z2), whole_group(z2));
  EXPECT_EQ(q2.orbits.size(), 1u);
  EXPECT_TRUE(q2.free);

  const GSet reg = regular_gset(s3);
  for (const auto& h : enumerate_subgroups(s3)) {
    const OrbitQuotient q = orbit_quotient(reg, h);
    EXPECT_EQ(static_cast<int>(q.orbits.size()), oracle::orbit_count(reg, h.elements));
    EXPECT_TRUE(q.free);
    EXPECT_EQ(static_cast<int>(q.orbits.size()) * h.size(), 6);
  }
}

TEST(Groups, GSetValidation) {
  const FiniteGroup z2 = cyclic_group(2);
  GSet bad;
  bad.points = 2;
  bad.action = {{1, 0}, {1, 0}};
  EXPECT_EQ(math_kind([&] { validate_gset(z2, bad); }), "NotAnAction");
  bad.action = {{0, 1}};
  EXPECT_THROW(validate_gset(z2, bad), InputError);
}

TEST(Groups, SubgroupAsGroup) {
  const FiniteGroup s3 = symmetric_group(3);
  for (const auto& h : enumerate_subgroups(s3)) {
    const FiniteGroup k = subgroup_as_group(s3, h);
    ASSERT_EQ(k.order(), h.size());
    for (int a = 0; a < k.order(); ++a)
      for (int b = 0; b < k.order(); ++b) EXPECT_EQ(h.elements[k.mul(a, b)], s3.mul(h.elements[a], h.elements[b]));
  }
  EXPECT_THROW(make_subgroup(s3, {0, 1, 2}), MathError);
}
