#include <gtest/gtest.h>

#include <random>

#include "tori/groups.hpp"

using namespace tori;

namespace {

GroupPtr conjugated(const GroupPtr& g, const IntMat& x) {
  IntMat xi = x.inverse_unimodular();
  std::vector<IntMat> gens;
  for (const auto& m : g->generator_matrices()) gens.push_back(x * m * xi);
  return FiniteMatrixGroup::closure(gens);
}

void expect_conjugate(const GroupPtr& a, const GroupPtr& b) {
  auto r = glz_conjugate(a, b);
  ASSERT_EQ(r.verdict, ZClassVerdict::Conjugate) << r.reason;
  const IntMat& x = *r.conjugator;
  IntMat xi = x.inverse_unimodular();
  for (const auto& m : a->elements()) EXPECT_TRUE(b->find(x * m * xi).has_value());
}

}  // namespace

TEST(ZClass, Identity) {
  auto g = FiniteMatrixGroup::closure({IntMat{{0, -1}, {1, -1}}, IntMat{{0, 1}, {1, 0}}});
  auto r = glz_conjugate(g, g);
  EXPECT_EQ(r.verdict, ZClassVerdict::Conjugate);
  EXPECT_TRUE(r.conjugator->is_identity());
}

TEST(ZClass, DiagonalSwap) {
  auto a = FiniteMatrixGroup::closure({IntMat{{1, 0}, {0, -1}}});
  auto b = FiniteMatrixGroup::closure({IntMat{{-1, 0}, {0, 1}}});
  expect_conjugate(a, b);
}

TEST(ZClass, DistinctReflections) {
  // Same character, different lattices: Z + Z^- versus Z[C2].
  auto pm = FiniteMatrixGroup::closure({IntMat{{1, 0}, {0, -1}}});
  auto cm = FiniteMatrixGroup::closure({IntMat{{0, 1}, {1, 0}}});
  EXPECT_EQ(glz_conjugate(pm, cm).verdict, ZClassVerdict::ProvablyDistinct);
  auto minus = FiniteMatrixGroup::closure({IntMat{{-1, 0}, {0, -1}}});
  EXPECT_EQ(glz_conjugate(pm, minus).verdict, ZClassVerdict::ProvablyDistinct);
  EXPECT_NE(zclass_invariant(pm), zclass_invariant(cm));
}

TEST(ZClass, RandomConjugates) {
  std::mt19937 rng(3);
  std::vector<GroupPtr> groups{
      FiniteMatrixGroup::closure({IntMat{{0, 1}, {1, 0}}, IntMat{{-1, 0}, {0, 1}}}),
      FiniteMatrixGroup::closure({IntMat{{0, -1}, {1, -1}}, IntMat{{0, 1}, {1, 0}}}),
      FiniteMatrixGroup::closure({IntMat{{0, 0, -1, 0}, {-1, 0, 0, 0}, {1, 1, 1, -2}, {0, 1, 0, -1}},
                                  IntMat{{0, 1, 0, -1}, {0, 0, -1, 1}, {-1, 0, 0, 1}, {0, 1, 0, 0}}}),
      FiniteMatrixGroup::closure({IntMat{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}, IntMat{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}},
                                  IntMat{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}})};
  for (const auto& g : groups) {
    const size_t r = g->rank();
    for (int t = 0; t < 3; ++t) {
      IntMat x = IntMat::identity(r);
      for (int s = 0; s < 4; ++s) {
        size_t i = rng() % r, j = rng() % r;
        if (i == j) continue;
        IntMat e = IntMat::identity(r);
        e(i, j) = Integer(static_cast<long long>(rng() % 3) - 1);
        x = x * e;
      }
      auto h = conjugated(g, x);
      expect_conjugate(g, h);
      expect_conjugate(h, g);
      EXPECT_EQ(zclass_invariant(g), zclass_invariant(h));
    }
  }
}

TEST(ZClass, TransposeOfCubicGroup) {
  // The group generated by a transposed set is conjugate to the original
  // when the lattice is self-dual; the dual pair of the A3 root/weight
  // lattices is not.
  IntMat a{{0, 1, 0}, {0, 0, 1}, {-1, -1, -1}};  // rho_3 of a 4-cycle
  IntMat b{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}};
  auto g = FiniteMatrixGroup::closure({a, b});
  ASSERT_EQ(g->order(), 24u);
  auto gt = FiniteMatrixGroup::closure({a.transpose(), b.transpose()});
  EXPECT_EQ(glz_conjugate(g, gt).verdict, ZClassVerdict::ProvablyDistinct);
}
