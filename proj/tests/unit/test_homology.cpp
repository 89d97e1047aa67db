#include <gtest/gtest.h>

#include "tori/catalog.hpp"
#include "tori/homology.hpp"
#include "tori/modular.hpp"

using namespace tori;

namespace {

IntMat perm_matrix(const std::string& cycles, size_t n) {
  auto p = parse_cycles(cycles, n);
  IntMat m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, p[i]) = Integer(1);
  return m;
}

std::string full_cycle(size_t n) {
  std::string s = "(";
  for (size_t i = 1; i <= n; ++i) s += std::to_string(i);
  return s + ")";
}

GroupPtr symmetric(size_t n) { return FiniteMatrixGroup::closure({perm_matrix("(12)", n), perm_matrix(full_cycle(n), n)}); }

GroupPtr dihedral(size_t n) {
  std::string refl;
  for (size_t i = 2; i < n - i + 2; ++i) refl += "(" + std::to_string(i) + "," + std::to_string(n - i + 2) + ")";
  return FiniteMatrixGroup::closure({perm_matrix(full_cycle(n), n), perm_matrix(refl, n)});
}

GroupPtr alternating5_on_j() {
  return FiniteMatrixGroup::closure({rho_matrix(parse_cycles("(12345)", 5)), rho_matrix(parse_cycles("(123)", 5))});
}

size_t class_of_order(const GroupPtr& g, size_t order) {
  const auto& cls = g->subgroup_classes().classes;
  for (size_t k = 0; k < cls.size(); ++k)
    if (cls[k].representative.order() == order) return k;
  throw Error("no subgroup of that order");
}

size_t order_of_class(const GroupPtr& g, size_t k) { return g->subgroup_classes().classes[k].representative.order(); }

// Number of H-orbits on the points of x, by flood fill.
size_t orbit_count(const GSet& x, const Subgroup& h) {
  std::vector<bool> seen(x.points, false);
  size_t n = 0;
  for (uint32_t p = 0; p < x.points; ++p) {
    if (seen[p]) continue;
    ++n;
    std::vector<uint32_t> stack{p};
    seen[p] = true;
    while (!stack.empty()) {
      uint32_t q = stack.back();
      stack.pop_back();
      for (Elt e : h.members) {
        uint32_t r = x.action[e][q];
        if (!seen[r]) {
          seen[r] = true;
          stack.push_back(r);
        }
      }
    }
  }
  return n;
}

bool is_abelian(const Subgroup& h) {
  for (Elt a : h.members)
    for (Elt b : h.members)
      if (h.parent->mul(a, b) != h.parent->mul(b, a)) return false;
  return true;
}

}  // namespace

TEST(Homology, ExactnessChecks) {
  auto s3 = symmetric(3);
  GSet x = natural_gset(s3);
  auto js = j_sequence(x);
  EXPECT_TRUE(js.verify());
  EXPECT_TRUE(verify_exact(js.seq));
  auto as = augmentation_sequence(x);
  EXPECT_TRUE(as.verify());
  EXPECT_EQ(as.degree, Integer(3));

  // Doubling the injection breaks saturation.
  ExactSequenceCert bad = js.seq;
  bad.inj.matrix = bad.inj.matrix.scaled(Integer(2));
  auto rep = check_exact(bad);
  EXPECT_FALSE(rep.ok);
  EXPECT_EQ(rep.failure, "saturation");
  // A non-equivariant map.
  bad = js.seq;
  bad.surj.matrix(0, 0) += Integer(1);
  EXPECT_FALSE(verify_exact(bad));
  // Dual of an exact sequence is exact.
  EXPECT_TRUE(verify_exact(dual_sequence(js.seq)));
  // A section of the wrong degree.
  auto wrong = js;
  wrong.degree = Integer(2);
  EXPECT_FALSE(wrong.verify());
}

TEST(Homology, FlasqueResolutionsAreFlasque) {
  for (const char* id : {"[4,33,2,1]", "[4,25,8,5]", "[4,31,1,3]"}) {
    auto g = catalog_entry(id).group();
    auto fr = flasque_resolution(std_lattice(g));
    EXPECT_TRUE(fr.verify()) << id;
    EXPECT_TRUE(is_flasque(fr.cert.right)) << id;
    auto co = coflasque_resolution(std_lattice(g));
    EXPECT_TRUE(verify_exact(co.cert)) << id;
    EXPECT_TRUE(is_coflasque(co.cert.left)) << id;
  }
}

TEST(Homology, ObstructionOn4_33_2_1) {
  auto g = catalog_entry("[4,33,2,1]").group();
  auto fr = flasque_resolution(std_lattice(g));
  ASSERT_TRUE(fr.verify());
  EXPECT_EQ(fr.cert.mid.rank, 24u);
  ASSERT_EQ(fr.perm_classes.size(), 1u);
  EXPECT_EQ(order_of_class(g, fr.perm_classes[0]), 1u);

  const GLattice& f = fr.cert.right;
  auto w = stably_permutation_obstruction(f);
  ASSERT_TRUE(w.has_value());
  EXPECT_TRUE(w->certificate_holds());
  EXPECT_TRUE(w->verify(f));

  // Rank rows: entry d counts H_k-orbits on G/H_d.
  const auto& cls = g->subgroup_classes().classes;
  for (size_t i = 0; i < w->equations.rows(); ++i) {
    if (!w->row_labels[i].second.is_zero()) continue;
    const Subgroup& hk = cls[w->row_labels[i].first].representative;
    for (size_t c = 0; c < w->unknowns.size(); ++c) {
      GSet cosets = coset_gset(cls[w->unknowns[c]].representative);
      EXPECT_EQ(w->equations(i, c), Integer(static_cast<long long>(orbit_count(cosets, hk))));
    }
  }

  // Restrict to G and the Sylow 2-subgroup, 2-power rows only, then check
  // x_a + x_b = 0 and 3 x_a + x_b = 1 lie in the row lattice, where a and b
  // are the classes of order 2 and 6.
  size_t whole = class_of_order(g, 24), h8 = class_of_order(g, 8);
  size_t a = w->unknowns.size(), b = w->unknowns.size();
  for (size_t c = 0; c < w->unknowns.size(); ++c) {
    if (order_of_class(g, w->unknowns[c]) == 2) a = c;
    if (order_of_class(g, w->unknowns[c]) == 6) b = c;
  }
  ASSERT_LT(a, w->unknowns.size());
  ASSERT_LT(b, w->unknowns.size());
  const size_t n = w->unknowns.size();
  IntMat rows(0, n + 1);
  for (size_t i = 0; i < w->equations.rows(); ++i) {
    auto [k, q] = w->row_labels[i];
    if (k != whole && k != h8) continue;
    if (q != Integer(2) && q != Integer(4) && q != Integer(8)) continue;
    IntMat r(1, n + 1);
    for (size_t c = 0; c < n; ++c) r(0, c) = w->equations(i, c);
    r(0, n) = w->rhs[i];
    rows = rows.vstack(r);
  }
  IntMat rel1(1, n + 1), rel2(1, n + 1);
  rel1(0, a) = Integer(1);
  rel1(0, b) = Integer(1);
  rel2(0, a) = Integer(3);
  rel2(0, b) = Integer(1);
  rel2(0, n) = Integer(1);
  EXPECT_TRUE(in_row_lattice(rows, rel1));
  EXPECT_TRUE(in_row_lattice(rows, rel2));

  auto q = quasi_permutation_check(std_lattice(g));
  EXPECT_EQ(q.verdict, Tri::No);
  ASSERT_TRUE(q.witness.has_value());
}

TEST(Homology, Pipeline4_25_8_5) {
  auto g = catalog_entry("[4,25,8,5]").group();
  GLattice m4 = std_lattice(g);
  auto co = coflasque_resolution(dual(m4));
  ASSERT_TRUE(verify_exact(co.cert));
  std::vector<size_t> sizes;
  for (const auto& s : co.summands) sizes.push_back(g->order() / order_of_class(g, s.subgroup_class));
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<size_t>{2, 12}));
  const GLattice& c = co.cert.left;
  EXPECT_EQ(c.rank, 10u);

  auto inv = is_invertible(c);
  EXPECT_EQ(inv.verdict, SearchVerdict::Found);
  for (const auto& p : inv.primes)
    if (p.p == 2) EXPECT_EQ(p.fixed_dim, 4u);

  // Q: sums of the two basis vectors of P with opposite images.
  const IntMat& surj = co.cert.surj.matrix;
  const size_t n = surj.rows();
  IntMat qrows(0, n);
  std::vector<bool> done(n, false);
  for (size_t i = 0; i < n; ++i) {
    if (done[i]) continue;
    for (size_t j = 0; j < n; ++j)
      if (surj.row(j) == -surj.row(i)) {
        IntMat v(1, n);
        v(0, i) += Integer(1);
        v(0, j) += Integer(1);
        qrows = qrows.vstack(v);
        done[i] = done[j] = true;
        break;
      }
  }
  EXPECT_EQ(qrows.rows(), 7u);
  auto qc = coordinates_in(co.cert.inj.matrix, qrows);
  ASSERT_TRUE(qc.has_value());
  GLattice q = sublattice(c, *qc);
  Subgroup syl2 = sylow(g, 2);
  EXPECT_EQ(fixed_sublattice(q, syl2).rows(), 3u);
  auto rq = recognize_permutation(q);
  ASSERT_EQ(rq.verdict, SearchVerdict::Found);
  std::vector<size_t> qorders;
  for (size_t k : rq.class_multiset) qorders.push_back(order_of_class(g, k));
  std::sort(qorders.begin(), qorders.end());
  EXPECT_EQ(qorders, (std::vector<size_t>{8, 48}));
  for (size_t k : rq.class_multiset)
    if (order_of_class(g, k) == 8) EXPECT_FALSE(is_abelian(g->subgroup_classes().classes[k].representative));

  auto [cq, proj] = quotient_lattice(c, *qc);
  EXPECT_EQ(cq.rank, 3u);
  auto sp = recognize_sign_permutation(cq);
  ASSERT_EQ(sp.verdict, SearchVerdict::Found);
  auto spr = sign_permutation_resolution(cq, sp.basis);
  ASSERT_TRUE(verify_exact(spr.cert));
  ASSERT_EQ(spr.left_classes.size(), 1u);
  ASSERT_EQ(spr.mid_classes.size(), 1u);
  EXPECT_EQ(order_of_class(g, spr.left_classes[0]), 16u);
  const Subgroup& c222 = g->subgroup_classes().classes[spr.mid_classes[0]].representative;
  EXPECT_EQ(c222.order(), 8u);
  EXPECT_TRUE(is_abelian(c222));

  // 0 -> F2 Q -> F2 C -> F2 (C/Q) -> 0 does not split over <g1>: the fixed
  // dimensions of the ends do not add up to that of the middle.
  Subgroup g1 = generated_subgroup(g, {g->generators()[0]});
  size_t fq = fixed_subspace(reduce_mod_p(q, 2), g1).rows(), fc = fixed_subspace(reduce_mod_p(c, 2), g1).rows(),
         fcq = fixed_subspace(reduce_mod_p(cq, 2), g1).rows();
  EXPECT_NE(fq + fcq, fc);

  auto bottom = make_sequence(q, c, cq, *qc, proj);
  ASSERT_TRUE(verify_exact(bottom));
  auto pb = pullback_split(bottom, spr.cert);
  ASSERT_TRUE(pb.has_value());
  EXPECT_TRUE(verify_exact(pb->via_left));
  EXPECT_TRUE(verify_exact(pb->via_top));
  EXPECT_TRUE(pb->iso.verify());
  EXPECT_TRUE(pb->iso.matrix.det().is_unit());
  EXPECT_EQ(pb->iso.source.rank, 13u);

  auto res = quasi_permutation_check(m4);
  EXPECT_EQ(res.verdict, Tri::Yes) << res.reason;
  ASSERT_TRUE(res.closing.has_value());
  EXPECT_TRUE(verify_exact(*res.closing));
  EXPECT_TRUE(res.resolution->verify());
}

TEST(Homology, AugmentationTimesPermutation) {
  for (size_t n : {3, 4, 5}) {
    auto g = symmetric(n);
    GSet x = natural_gset(g);
    GLattice lhs = tensor(aug_ideal(x), perm_lattice(x));
    // Pointwise stabilizer of the last two points.
    std::vector<Elt> e;
    for (Elt t = 0; t < g->order(); ++t)
      if (g->element(t)(n - 1, n - 1).is_unit() && g->element(t)(n - 2, n - 2).is_unit()) e.push_back(t);
    Subgroup h{g, e};
    auto iso = find_isomorphism(coset_lattice(h), lhs);
    ASSERT_EQ(iso.verdict, SearchVerdict::Found) << n;
    EXPECT_TRUE(iso.map->verify());
    EXPECT_TRUE(iso.map->matrix.det().is_unit());
  }
}

TEST(Homology, BpStablyPermutation) {
  for (size_t p : {3, 5}) {
    auto g = symmetric(p);
    GSet x = natural_gset(g);
    GLattice j = j_lattice(x);
    auto bottom = tensor_sequence(j, augmentation_sequence(x));
    auto right = j_sequence(x);
    ASSERT_TRUE(bottom.verify());
    auto pb = pullback_split(bottom.seq, right.seq);
    ASSERT_TRUE(pb.has_value()) << p;
    // (J (x) Z[X]) + Z iso B_p + Z[X].
    EXPECT_EQ(pb->iso.source.rank, p * (p - 1) + 1);
    EXPECT_TRUE(pb->iso.verify());
    EXPECT_TRUE(pb->iso.matrix.det().is_unit());
    auto rec = recognize_permutation(bottom.seq.mid);
    ASSERT_EQ(rec.verdict, SearchVerdict::Found);
    ASSERT_EQ(rec.class_multiset.size(), 1u);
    EXPECT_EQ(order_of_class(g, rec.class_multiset[0]), (p - 2 == 1 ? 1u : 6u));
  }
}

TEST(Homology, FlasqueTermOfJ) {
  for (size_t p : {3, 5}) {
    auto g = symmetric(p);
    GLattice j = j_lattice(natural_gset(g));
    auto fr = flasque_resolution(j);
    ASSERT_TRUE(fr.verify());
    EXPECT_EQ(fr.cert.mid.rank, p * (p - 1));
    auto iso = find_isomorphism(fr.cert.right, tensor(j, j));
    EXPECT_EQ(iso.verdict, SearchVerdict::Found) << p;
    if (p == 5) EXPECT_EQ(is_invertible(tensor(j, j)).verdict, SearchVerdict::Found);
  }
}

TEST(Homology, DihedralJIsTwistedAugmentation) {
  for (size_t n : {3, 5, 7}) {
    auto g = dihedral(n);
    ASSERT_EQ(g->order(), 2 * n);
    GSet x = natural_gset(g);
    Subgroup cn = generated_subgroup(g, {*g->find(perm_matrix(full_cycle(n), n))});
    auto iso = find_isomorphism(j_lattice(x), tensor(aug_ideal(x), sign_lattice(g, cn)));
    EXPECT_EQ(iso.verdict, SearchVerdict::Found) << n;
  }
}

TEST(Homology, CohomologicallyTrivialModFive) {
  auto g = symmetric(5);
  Subgroup f20 = normalizer(generated_subgroup(g, {*g->find(perm_matrix("(12345)", 5))}));
  ASSERT_EQ(f20.order(), 20u);
  auto m = reduce_mod_p(aug_ideal(coset_gset(f20)), 5);
  EXPECT_TRUE(is_cohomologically_trivial(m));
  // The permutation module itself is not.
  EXPECT_FALSE(is_cohomologically_trivial(reduce_mod_p(perm_lattice(coset_gset(f20)), 5)));
}

TEST(Homology, A5QuasiPermutation) {
  auto a5 = alternating5_on_j();
  ASSERT_EQ(a5->order(), 60u);
  auto q = quasi_permutation_check(std_lattice(a5));
  ASSERT_EQ(q.verdict, Tri::Yes) << q.reason;
  ASSERT_TRUE(q.iso.has_value());
  EXPECT_TRUE(q.iso->verify());
  EXPECT_TRUE(q.iso->matrix.det().is_unit());
  ASSERT_TRUE(q.closing.has_value());
  EXPECT_TRUE(verify_exact(*q.closing));
  EXPECT_TRUE(q.resolution->verify());
}

TEST(Homology, FlorenceSignedSequence) {
  auto g = catalog_entry("[4,31,6,2]").group();
  ASSERT_EQ(g->order(), 120u);
  GSet x5 = coset_gset(g->subgroup_classes().classes[class_of_order(g, 24)].representative);
  GSet y2 = coset_gset(g->subgroup_classes().classes[class_of_order(g, 60)].representative);
  GLattice j = j_lattice(x5);
  auto s1 = tensor_sequence(j, j_sequence(x5));
  auto s2 = augmentation_sequence(y2);
  auto s3 = florence_combine(s1, s2);
  ASSERT_TRUE(s3.verify());
  EXPECT_EQ(s3.degree, Integer(10));
  // B3 = (J Z[X] Z[Y]) + (J J), C3 = (J J Z[Y]) + (J Z[X]).
  EXPECT_EQ(s3.seq.left.rank, 4u);
  EXPECT_EQ(s3.seq.mid.rank, 20u * 2 + 16u);
  EXPECT_EQ(s3.seq.right.rank, 16u * 2 + 20u);
  // The left term has the character of J times the sign.
  GLattice signed_j = tensor(j, aug_ideal(y2));
  for (Elt e = 0; e < g->order(); ++e) EXPECT_EQ(character(s3.seq.left, e), character(signed_j, e));
  EXPECT_EQ(find_isomorphism(s3.seq.left, std_lattice(g)).verdict, SearchVerdict::Found);

  auto q = quasi_permutation_check(s3.seq.left);
  ASSERT_EQ(q.verdict, Tri::Yes) << q.reason;
  ASSERT_TRUE(q.closing.has_value());
  EXPECT_TRUE(verify_exact(*q.closing));
}

TEST(Homology, FlorenceRejectsCommonFactor) {
  auto s3 = symmetric(3);
  GSet x = natural_gset(s3);
  auto js = j_sequence(x);
  EXPECT_THROW(florence_combine(js, js), DegreesNotCoprime);
}
