#include <gtest/gtest.h>

#include "tori/catalog.hpp"
#include "tori/rationality.hpp"

using namespace tori;

namespace {

IntMat perm_matrix(const std::string& cycles, size_t n) {
  auto p = parse_cycles(cycles, n);
  IntMat m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, p[i]) = Integer(1);
  return m;
}

struct TableCase {
  std::string name;
  size_t degree;
  std::vector<std::string> g, h;  // cycle notation
  Level level;
};

NormOneSpec spec_of(const TableCase& c) {
  std::vector<IntMat> gens;
  for (const auto& s : c.g) gens.push_back(perm_matrix(s, c.degree));
  GroupPtr g = FiniteMatrixGroup::closure(gens);
  std::vector<Elt> hg;
  for (const auto& s : c.h) hg.push_back(*g->find(perm_matrix(s, c.degree)));
  return {g, generated_subgroup(g, hg)};
}

GLattice defining(const CatalogEntry& e) {
  GroupPtr g = e.group();
  return lattice_from_generators(g, g->generator_matrices());
}

}  // namespace

TEST(Rationality, LevelOrder) {
  EXPECT_TRUE(at_least(Level::HereditarilyRational, Level::RetractRational));
  EXPECT_TRUE(at_least(Level::StablyRational, Level::StablyRational));
  EXPECT_FALSE(at_least(Level::RetractRational, Level::StablyRational));
  EXPECT_FALSE(at_least(Level::NotRetractRational, Level::RetractRational));
  EXPECT_FALSE(at_least(Level::Unknown, Level::RetractRational));
  EXPECT_EQ(to_string(Level::StablyRational), "StablyRational");
}

TEST(Rationality, DimensionTwoAllRational) {
  auto rep = census(dade_roots(2));
  ASSERT_EQ(rep.count, kClassesDim2);
  for (const auto& c : rep.classes) {
    GLattice m = lattice_from_generators(c.representative, c.representative->generator_matrices());
    auto v = classify(m);
    EXPECT_TRUE(at_least(v.level, Level::Rational)) << c.label << " " << to_string(v.level);
    EXPECT_TRUE(v.verify()) << c.label;
  }
}

TEST(Rationality, DetectorsOnKnownLattices) {
  GroupPtr s4 = FiniteMatrixGroup::closure({perm_matrix("(12)", 4), perm_matrix("(1234)", 4)});
  GSet x = natural_gset(s4);
  auto p = detect_hereditary(perm_lattice(x));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->kind, "permutation");
  auto i = detect_hereditary(aug_ideal(x));
  ASSERT_TRUE(i);
  EXPECT_TRUE(i->verify());

  // I_X + I_X splits and both summands are detected.
  auto s = detect_hereditary(direct_sum(aug_ideal(x), aug_ideal(x)));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->kind, "direct_sum");
  EXPECT_TRUE(s->verify());

  // J_4 over S4 is not retract rational.
  auto v = classify(j_lattice(x));
  EXPECT_EQ(v.level, Level::NotRetractRational);
  EXPECT_EQ(v.stable, Tri::No);
  EXPECT_TRUE(v.verify());
}

TEST(Rationality, EvidenceTamperingIsCaught) {
  GroupPtr s3 = FiniteMatrixGroup::closure({perm_matrix("(12)", 3), perm_matrix("(123)", 3)});
  auto ev = detect_hereditary(aug_ideal(natural_gset(s3)));
  ASSERT_TRUE(ev && ev->map);
  ASSERT_TRUE(ev->verify());
  ev->map->matrix(0, 0) += Integer(1);
  EXPECT_FALSE(ev->verify());
}

TEST(Rationality, RetractOnlySeven) {
  for (std::string id : {"[4,31,1,3]", "[4,31,1,4]", "[4,31,2,2]", "[4,31,5,2]", "[4,31,4,2]", "[4,31,7,2]",
                         "[4,33,2,1]"}) {
    auto v = classify(defining(catalog_entry(id)));
    EXPECT_EQ(v.level, Level::RetractRational) << id;
    EXPECT_NE(v.stable, Tri::Yes) << id;
    EXPECT_TRUE(v.verify()) << id;
  }
  auto v = classify(defining(catalog_entry("[4,33,2,1]")));
  EXPECT_EQ(v.stable, Tri::No);
  bool witnessed = false;
  for (const auto& e : v.certificate) witnessed |= e.kind == "obstruction" && e.witness.has_value();
  EXPECT_TRUE(witnessed);
}

TEST(Rationality, NormOneTable) {
  using L = Level;
  const std::vector<TableCase> cases = {
      {"C6", 6, {"(123456)"}, {}, L::StablyRational},
      {"C5", 5, {"(12345)"}, {}, L::StablyRational},
      {"C15", 8, {"(12345)(678)"}, {}, L::StablyRational},
      {"S3", 3, {"(123)", "(12)"}, {}, L::StablyRational},
      {"C3:C4", 7, {"(123)", "(12)(4567)"}, {}, L::StablyRational},
      {"D10", 5, {"(12345)", "(25)(34)"}, {}, L::StablyRational},
      {"C2^2", 4, {"(12)", "(34)"}, {}, L::NotRetractRational},
      {"Q8", 8, {"(1234)(5678)", "(1537)(2846)"}, {}, L::NotRetractRational},
      {"C3xS3", 6, {"(123)", "(456)", "(45)"}, {}, L::NotRetractRational},
      {"F20", 5, {"(12345)", "(2354)"}, {}, L::RetractRational},
      {"S3/S2", 3, {"(123)", "(12)"}, {"(12)"}, L::Rational},
      {"S4/S3", 4, {"(1234)", "(12)"}, {"(12)", "(123)"}, L::NotRetractRational},
      {"S5/S4", 5, {"(12345)", "(12)"}, {"(12)", "(1234)"}, L::RetractRational},
      {"A5/A4", 5, {"(12345)", "(123)"}, {"(123)", "(234)"}, L::StablyRational},
      {"A4/A3", 4, {"(123)", "(12)(34)"}, {"(123)"}, L::NotRetractRational},
      {"D10/C2", 5, {"(12345)", "(25)(34)"}, {"(25)(34)"}, L::StablyRational},
      {"F20/C4", 5, {"(12345)", "(2354)"}, {"(2354)"}, L::RetractRational},
      {"D8/C2", 4, {"(1234)", "(24)"}, {"(24)"}, L::NotRetractRational},
      {"C3xD10/C2", 8, {"(123)", "(45678)", "(58)(67)"}, {"(58)(67)"}, L::StablyRational},
      {"D14/C2", 7, {"(1234567)", "(27)(36)(45)"}, {"(27)(36)(45)"}, L::StablyRational},
  };
  ASSERT_EQ(cases.size(), 20u);
  for (const auto& c : cases) {
    auto v = norm_one_structural(spec_of(c));
    EXPECT_EQ(v.level, c.level) << c.name << " got " << to_string(v.level);
    EXPECT_TRUE(v.verify()) << c.name;
    if (c.level == L::RetractRational) EXPECT_NE(v.stable, Tri::Yes) << c.name;

    // The lattice-level cascade on J_{G/H} must not contradict the table.
    NormOneSpec s = spec_of(c);
    auto lv = classify(j_lattice(coset_gset(s.h)));
    EXPECT_TRUE(lv.verify()) << c.name;
    if (lv.level == L::Unknown) continue;
    if (c.level == L::NotRetractRational) EXPECT_EQ(lv.level, L::NotRetractRational) << c.name;
    else EXPECT_NE(lv.level, L::NotRetractRational) << c.name;
    if (c.level == L::RetractRational) EXPECT_FALSE(at_least(lv.level, L::StablyRational)) << c.name;
  }
}

TEST(Rationality, SymmetricFiveAtLatticeLevel) {
  GroupPtr s5 = FiniteMatrixGroup::closure({perm_matrix("(12)", 5), perm_matrix("(12345)", 5)});
  auto v = classify(j_lattice(natural_gset(s5)));
  EXPECT_EQ(v.level, Level::RetractRational);
  EXPECT_NE(v.stable, Tri::Yes);
  EXPECT_TRUE(v.verify());
}

TEST(Rationality, UnrecognizedShapeFallsBack) {
  // S4 acting on the cosets of C4 has degree 6 and is outside the table.
  TableCase c{"S4/C4", 4, {"(1234)", "(12)"}, {"(1234)"}, Level::Unknown};
  NormOneSpec s = spec_of(c);
  EXPECT_THROW(norm_one_structural(s), UnrecognizedShape);
  auto v = norm_one_classify(s);
  EXPECT_TRUE(v.verify());
  EXPECT_NE(v.notes.find("no table entry"), std::string::npos);
}

TEST(Rationality, HereditaryClosure) {
  GroupPtr s3 = FiniteMatrixGroup::closure({perm_matrix("(12)", 3), perm_matrix("(123)", 3)});
  auto r = hereditary_closure(j_lattice(natural_gset(s3)));
  EXPECT_TRUE(r.hereditary);
  EXPECT_EQ(r.per_class.size(), s3->subgroup_classes().classes.size());

  GroupPtr c2sq = FiniteMatrixGroup::closure({perm_matrix("(12)", 4), perm_matrix("(34)", 4)});
  GSet reg = coset_gset(trivial_subgroup(c2sq));
  EXPECT_FALSE(hereditary_closure(j_lattice(reg)).hereditary);
}
