#include <gtest/gtest.h>

#include <random>

#include "tori/lattices.hpp"

using namespace tori;

namespace {

IntMat perm_matrix(const std::vector<size_t>& img) {
  IntMat m(img.size(), img.size());
  for (size_t i = 0; i < img.size(); ++i) m(i, img[i]) = Integer(1);
  return m;
}

std::vector<size_t> cycle(size_t n, std::vector<size_t> c) {
  std::vector<size_t> img(n);
  for (size_t i = 0; i < n; ++i) img[i] = i;
  for (size_t i = 0; i < c.size(); ++i) img[c[i]] = c[(i + 1) % c.size()];
  return img;
}

GroupPtr symmetric(size_t n) {
  return FiniteMatrixGroup::closure({perm_matrix(cycle(n, {0, 1})), perm_matrix(cycle(n, [&] {
                                       std::vector<size_t> c(n);
                                       for (size_t i = 0; i < n; ++i) c[i] = i;
                                       return c;
                                     }()))});
}

GroupPtr alternating5() {
  return FiniteMatrixGroup::closure({perm_matrix(cycle(5, {0, 1, 2})), perm_matrix(cycle(5, {0, 1, 2, 3, 4}))});
}

// D_2n acting on n points.
GroupPtr dihedral(size_t n) {
  std::vector<size_t> rot(n), refl(n);
  for (size_t i = 0; i < n; ++i) {
    rot[i] = (i + 1) % n;
    refl[i] = (n - i) % n;
  }
  return FiniteMatrixGroup::closure({perm_matrix(rot), perm_matrix(refl)});
}

GroupPtr c2() { return FiniteMatrixGroup::closure({IntMat{{-1}}}); }

Subgroup by_perms(const GroupPtr& g, const std::vector<std::vector<size_t>>& gens) {
  std::vector<Elt> e;
  for (const auto& p : gens) e.push_back(*g->find(perm_matrix(p)));
  return generated_subgroup(g, e);
}

GroupPtr g4_33_2_1() {
  IntMat a{{0, 0, -1, 0}, {-1, 0, 0, 0}, {1, 1, 1, -2}, {0, 1, 0, -1}};
  IntMat b{{0, 1, 0, -1}, {0, 0, -1, 1}, {-1, 0, 0, 1}, {0, 1, 0, 0}};
  return FiniteMatrixGroup::closure({a, b});
}

AbelianInvariants inv(std::vector<long long> f) {
  AbelianInvariants a;
  for (long long x : f) a.factors.push_back(Integer(x));
  return a;
}

}  // namespace

TEST(Lattices, TateCyclicTwo) {
  auto g = c2();
  auto z = trivial_lattice(g);
  auto zm = std_lattice(g);
  auto whole = whole_group(g);
  EXPECT_EQ(tate(z, whole, 0), inv({2}));
  EXPECT_TRUE(tate(z, whole, -1).is_zero());
  EXPECT_TRUE(tate(z, whole, 1).is_zero());
  EXPECT_EQ(tate(zm, whole, 1), inv({2}));
  EXPECT_EQ(tate(zm, whole, -1), inv({2}));
  EXPECT_TRUE(tate(zm, whole, 0).is_zero());
  EXPECT_FALSE(is_coflasque(zm));
  EXPECT_TRUE(is_coflasque(z));
  EXPECT_TRUE(fixed_sublattice(zm, whole).rows() == 0);
  EXPECT_EQ(fixed_sublattice(z, whole).rows(), 1u);
}

TEST(Lattices, Tate433) {
  auto g = g4_33_2_1();
  auto l = std_lattice(g);
  ASSERT_TRUE(l.verify_homomorphism());
  Subgroup h3 = sylow(g, 3), h8 = sylow(g, 2);
  EXPECT_EQ(tate(l, h3, 1), inv({3, 3}));
  EXPECT_EQ(tate(l, h8, 1), inv({2}));
  EXPECT_TRUE(tate(l, whole_group(g), 1).is_zero());
  // L is self-dual, so degree -1 matches degree 1.
  EXPECT_EQ(tate(l, h3, -1), inv({3, 3}));
  auto iso = find_isomorphism(l, dual(l));
  EXPECT_EQ(iso.verdict, SearchVerdict::Found);
  // Every non-trivial subgroup has no fixed vectors.
  for (const auto& c : g->subgroup_classes().classes)
    if (c.representative.order() > 1) EXPECT_EQ(fixed_sublattice(l, c.representative).rows(), 0u);
}

TEST(Lattices, ConstructorsBasic) {
  auto s3 = symmetric(3);
  GSet x = natural_gset(s3);
  auto p = perm_lattice(x), i = aug_ideal(x), j = j_lattice(x);
  EXPECT_EQ(p.rank, 3u);
  EXPECT_EQ(i.rank, 2u);
  EXPECT_EQ(j.rank, 2u);
  for (const auto* m : {&p, &i, &j}) EXPECT_TRUE(m->verify_homomorphism());
  // J matrices: permutation matrices with one row possibly replaced by all -1.
  for (const auto& a : j.action)
    for (size_t r = 0; r < 2; ++r) {
      long long s = 0;
      for (size_t c = 0; c < 2; ++c) s += a(r, c).to_int64();
      EXPECT_TRUE(s == 1 || s == -2);
    }
  // Trivial G-set.
  auto one = FiniteMatrixGroup::closure({IntMat{{1}}});
  GSet pt = natural_gset(one);
  EXPECT_EQ(aug_ideal(pt).rank, 0u);
  EXPECT_EQ(j_lattice(pt).rank, 0u);
  EXPECT_THROW(natural_gset(c2()), Error);
}

TEST(Lattices, SignLattice) {
  auto g = c2();
  auto zm = sign_lattice(g, trivial_subgroup(g));
  EXPECT_EQ(zm.act(1), IntMat{{-1}});
  auto s3 = symmetric(3);
  auto a3 = by_perms(s3, {cycle(3, {0, 1, 2})});
  EXPECT_NO_THROW(sign_lattice(s3, a3));
  auto c2s = by_perms(s3, {cycle(3, {0, 1})});
  EXPECT_THROW(sign_lattice(s3, c2s), NotIndexTwoNormal);
}

TEST(Lattices, DualInvolution) {
  auto g = g4_33_2_1();
  auto l = std_lattice(g);
  auto dd = dual(dual(l));
  EXPECT_EQ(dd.action, l.action);
  EXPECT_TRUE(dual(l).verify_homomorphism());
}

TEST(Lattices, HomRanks) {
  auto g = c2();
  EXPECT_EQ(hom_lattice(trivial_lattice(g), trivial_lattice(g)).size(), 1u);
  EXPECT_EQ(hom_lattice(std_lattice(g), trivial_lattice(g)).size(), 0u);
  auto s3 = symmetric(3);
  auto p = perm_lattice(natural_gset(s3));
  auto h = hom_lattice(p, p);
  ASSERT_EQ(h.size(), 2u);
  // Identity and all-ones lie in the span.
  IntMat basis(0, 9);
  for (const auto& m : h) basis = basis.vstack(m.flatten());
  EXPECT_TRUE(in_row_lattice(basis, IntMat::identity(3).flatten()));
  IntMat ones(3, 3);
  for (size_t i = 0; i < 3; ++i)
    for (size_t k = 0; k < 3; ++k) ones(i, k) = Integer(1);
  EXPECT_TRUE(in_row_lattice(basis, ones.flatten()));
}

TEST(Lattices, AugTensorPermIsRegular) {
  // I_X (x) Z[X] = Z[S_n / S_{n-2}]
  for (size_t n : {3, 4, 5}) {
    auto g = symmetric(n);
    GSet x = natural_gset(g);
    auto lhs = tensor(aug_ideal(x), perm_lattice(x));
    // S_{n-2} fixing the last two points.
    std::vector<std::vector<size_t>> sg;
    for (size_t k = 0; k + 3 < n; ++k) sg.push_back(cycle(n, {k, k + 1}));
    Subgroup h = sg.empty() ? trivial_subgroup(g) : by_perms(g, sg);
    ASSERT_EQ(h.order() * n * (n - 1), g->order());
    auto rhs = coset_lattice(h);
    auto iso = find_isomorphism(lhs, rhs);
    ASSERT_EQ(iso.verdict, SearchVerdict::Found) << "n=" << n;
    EXPECT_TRUE(iso.map->verify());
    EXPECT_TRUE(iso.map->matrix.det().is_unit());
  }
}

TEST(Lattices, JIsDualOfAug) {
  std::vector<GroupPtr> groups{symmetric(3), symmetric(4), symmetric(5), dihedral(6),
                               FiniteMatrixGroup::closure({perm_matrix(cycle(6, {0, 1, 2, 3, 4, 5}))})};
  for (const auto& g : groups) {
    GSet x = natural_gset(g);
    auto iso = find_isomorphism(j_lattice(x), dual(aug_ideal(x)));
    EXPECT_EQ(iso.verdict, SearchVerdict::Found);
  }
}

TEST(Lattices, DihedralJ) {
  // J_{X_n} = I_{X_n} (x) Z^-_{C_n} over D_2n for odd n.
  for (size_t n : {3, 5, 7}) {
    auto g = dihedral(n);
    GSet x = natural_gset(g);
    std::vector<size_t> rot(n);
    for (size_t i = 0; i < n; ++i) rot[i] = (i + 1) % n;
    Subgroup cn = by_perms(g, {rot});
    auto rhs = tensor(aug_ideal(x), sign_lattice(g, cn));
    auto iso = find_isomorphism(j_lattice(x), rhs);
    EXPECT_EQ(iso.verdict, SearchVerdict::Found) << "n=" << n;
  }
}

TEST(Lattices, DistinctLattices) {
  auto g = c2();
  auto r = find_isomorphism(trivial_lattice(g), std_lattice(g));
  EXPECT_EQ(r.verdict, SearchVerdict::ProvablyNot);
  // Same character, different lattices: Z[C2] vs Z + Z^-.
  auto reg = coset_lattice(trivial_subgroup(g));
  auto split = direct_sum(trivial_lattice(g), std_lattice(g));
  auto r2 = find_isomorphism(reg, split);
  EXPECT_EQ(r2.verdict, SearchVerdict::ProvablyNot);
}

TEST(Lattices, InduceRank) {
  auto a5 = alternating5();
  Subgroup d10 = by_perms(a5, {cycle(5, {0, 1, 2, 3, 4}), std::vector<size_t>{0, 4, 3, 2, 1}});
  ASSERT_EQ(d10.order(), 10u);
  GroupPtr h = d10.as_group();
  Subgroup c2h = generated_subgroup(h, {static_cast<Elt>(std::find_if(h->elements().begin() + 1, h->elements().end(),
                                                                      [&](const IntMat& m) {
                                                                        return h->element_order(*h->find(m)) == 2;
                                                                      }) -
                                                     h->elements().begin())});
  ASSERT_EQ(c2h.order(), 2u);
  auto j = j_lattice(coset_gset(c2h));
  EXPECT_EQ(j.rank, 4u);
  auto ind = induce(d10, j);
  EXPECT_EQ(ind.rank, 24u);
  EXPECT_TRUE(ind.verify_homomorphism());
}

TEST(Lattices, MackeyFixedRanks) {
  auto g = symmetric(4);
  const auto& cls = g->subgroup_classes().classes;
  for (const auto& hc : cls) {
    const Subgroup& h = hc.representative;
    auto ind = induce(h, trivial_lattice(h.as_group()));
    ASSERT_TRUE(ind.verify_homomorphism());
    for (const auto& kc : cls) {
      const Subgroup& k = kc.representative;
      EXPECT_EQ(fixed_sublattice(ind, k).rows(), double_cosets(g, k, h).size());
    }
    // Induced trivial lattice is the coset lattice.
    EXPECT_EQ(find_isomorphism(ind, coset_lattice(h)).verdict, SearchVerdict::Found);
  }
}

TEST(Lattices, ShapiroVanishing) {
  std::mt19937 rng(7);
  std::vector<GroupPtr> groups{symmetric(4), dihedral(5), g4_33_2_1()};
  size_t cases = 0;
  while (cases < 200) {
    const auto& g = groups[rng() % groups.size()];
    const auto& cls = g->subgroup_classes().classes;
    const Subgroup& h = cls[rng() % cls.size()].representative;
    const Subgroup& k = cls[rng() % cls.size()].representative;
    auto p = coset_lattice(h);
    EXPECT_TRUE(tate(p, k, -1).is_zero());
    EXPECT_TRUE(tate(p, k, 1).is_zero());
    ++cases;
  }
}

TEST(Lattices, DualityRandom) {
  std::mt19937 rng(11);
  auto s4 = symmetric(4);
  auto g = g4_33_2_1();
  GSet x = natural_gset(s4);
  std::vector<GLattice> pool{aug_ideal(x), j_lattice(x), tensor(aug_ideal(x), aug_ideal(x)), std_lattice(g),
                             direct_sum(std_lattice(g), trivial_lattice(g)), tensor(std_lattice(g), std_lattice(g))};
  for (size_t n = 0; n < 200; ++n) {
    const auto& m = pool[rng() % pool.size()];
    const auto& cls = m.group->subgroup_classes().classes;
    const Subgroup& h = cls[rng() % cls.size()].representative;
    EXPECT_EQ(tate(m, h, 1), tate(dual(m), h, -1));
  }
}

TEST(Lattices, FlasqueExamples) {
  auto s5 = symmetric(5);
  GSet x = natural_gset(s5);
  EXPECT_TRUE(is_flasque(perm_lattice(x)));
  EXPECT_TRUE(is_coflasque(perm_lattice(x)));
  auto j = j_lattice(x);
  EXPECT_TRUE(is_flasque(tensor(j, j)));
  EXPECT_FALSE(is_flasque(j));
}

TEST(Lattices, SubAndQuotient) {
  auto s3 = symmetric(3);
  GSet x = natural_gset(s3);
  auto p = perm_lattice(x);
  IntMat sub{{1, -1, 0}, {0, 1, -1}};
  ASSERT_TRUE(is_invariant(p, sub));
  auto i = sublattice(p, sub);
  EXPECT_EQ(i.action, aug_ideal(x).action);
  auto [q, proj] = quotient_lattice(p, sub);
  EXPECT_EQ(q.rank, 1u);
  for (const auto& a : q.action) EXPECT_TRUE(a.is_identity());
  EXPECT_TRUE((EquivariantMap{p, q, proj}.verify()));
  auto [jq, jproj] = quotient_lattice(p, IntMat{{1, 1, 1}});
  EXPECT_EQ(find_isomorphism(jq, j_lattice(x)).verdict, SearchVerdict::Found);
  EXPECT_THROW(quotient_lattice(p, IntMat{{2, -2, 0}, {0, 1, -1}}), Error);
}

TEST(Lattices, FromGenerators) {
  auto s3 = symmetric(3);
  auto p = perm_lattice(natural_gset(s3));
  auto q = lattice_from_generators(s3, p.generator_images());
  EXPECT_EQ(p.action, q.action);
  EXPECT_THROW(lattice_from_generators(s3, {IntMat{{1}}, IntMat{{-1}}}), Error);
}

TEST(Lattices, RecognizePermutation) {
  auto s3 = symmetric(3);
  GSet x = natural_gset(s3);
  auto r = recognize_permutation(perm_lattice(x));
  ASSERT_EQ(r.verdict, SearchVerdict::Found);
  ASSERT_EQ(r.class_multiset.size(), 1u);
  EXPECT_EQ(s3->subgroup_classes().classes[r.class_multiset[0]].representative.order(), 2u);
  EXPECT_TRUE(r.map->verify());
  // A changed basis is still recognized.
  auto twisted = change_basis(perm_lattice(x), IntMat{{1, 1, 0}, {0, 1, 0}, {0, 1, 1}});
  EXPECT_EQ(recognize_permutation(twisted).verdict, SearchVerdict::Found);
  auto a5 = alternating5();
  auto j5 = j_lattice(natural_gset(a5));
  EXPECT_NE(recognize_permutation(j5).verdict, SearchVerdict::Found);
  EXPECT_NE(recognize_sign_permutation(j5, 20000).verdict, SearchVerdict::Found);
  EXPECT_EQ(recognize_permutation(std_lattice(c2())).verdict, SearchVerdict::ProvablyNot);
}

TEST(Lattices, RecognizeSignPermutation) {
  auto wb2 = FiniteMatrixGroup::closure({IntMat{{0, 1}, {1, 0}}, IntMat{{-1, 0}, {0, 1}}});
  auto twisted = change_basis(std_lattice(wb2), IntMat{{1, 1}, {0, 1}});
  auto r = recognize_sign_permutation(twisted);
  ASSERT_EQ(r.verdict, SearchVerdict::Found);
  EXPECT_TRUE(r.basis.det().is_unit());
  for (Elt e = 0; e < wb2->order(); ++e) {
    IntMat img = r.basis * twisted.act(e);
    for (size_t i = 0; i < 2; ++i) {
      bool hit = false;
      for (size_t k = 0; k < 2; ++k)
        if (img.row(i) == r.basis.row(k) || img.row(i) == -r.basis.row(k)) hit = true;
      EXPECT_TRUE(hit);
    }
  }
}

TEST(Lattices, HomMatchesCharacterInnerProduct) {
  auto g = symmetric(4);
  GSet x = natural_gset(g);
  std::vector<GLattice> pool{perm_lattice(x), aug_ideal(x), j_lattice(x), trivial_lattice(g)};
  for (const auto& m : pool)
    for (const auto& n : pool) {
      auto h = hom_lattice(m, n);
      EXPECT_EQ(h.size(), hom_dimension(m, n));
      // Saturated: the quotient of the full matrix space is torsion free.
      IntMat b(0, m.rank * n.rank);
      for (const auto& f : h) b = b.vstack(f.flatten());
      if (b.rows()) EXPECT_EQ(cokernel_invariants(b, m.rank * n.rank).factors.size(), 0u);
    }
}
