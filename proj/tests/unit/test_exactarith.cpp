#include <gtest/gtest.h>

#include <random>
#include <map>
#include <numeric>
#include <set>

#include "tori/exactarith.hpp"

using namespace tori;

namespace {

// Oracle: d_1 * ... * d_k = gcd of all k x k minors.
Integer minors_gcd(const IntMat& a, size_t k) {
  Integer g(0);
  std::vector<size_t> rs(k), cs(k);
  std::function<void(size_t, size_t)> pick_cols;
  std::function<void(size_t, size_t)> pick_rows = [&](size_t pos, size_t start) {
    if (pos == k) {
      pick_cols(0, 0);
      return;
    }
    for (size_t i = start; i < a.rows(); ++i) {
      rs[pos] = i;
      pick_rows(pos + 1, i + 1);
    }
  };
  pick_cols = [&](size_t pos, size_t start) {
    if (pos == k) {
      IntMat m(k, k);
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) m(i, j) = a(rs[i], cs[j]);
      g = gcd(g, m.det());
      return;
    }
    for (size_t j = start; j < a.cols(); ++j) {
      cs[pos] = j;
      pick_cols(pos + 1, j + 1);
    }
  };
  pick_rows(0, 0);
  return g;
}

IntMat random_mat(std::mt19937& rng, size_t r, size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMat m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m(i, j) = Integer(d(rng));
  return m;
}

IntMat random_unimodular(std::mt19937& rng, size_t n) {
  IntMat u = IntMat::identity(n);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1), q(-2, 2);
  for (int step = 0; step < 3 * static_cast<int>(n); ++step) {
    size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    u.add_row(i, j, Integer(q(rng)));
  }
  return u;
}

// Oracle: enumerate Z^n / rowspan(sub) by brute force over a box and count,
// for each m, the classes killed by m. For Z/f_1 + ... + Z/f_k this count is
// the product of gcd(m, f_i).
std::map<long long, size_t> brute_torsion_counts(const IntMat& sub, size_t n, long long order) {
  IntMat h = row_basis(sub);
  auto reduce = [&](std::vector<Integer> w) {
    for (size_t i = 0; i < h.rows(); ++i) {
      size_t piv = 0;
      while (h(i, piv).is_zero()) ++piv;
      Integer q = floor_div(w[piv], h(i, piv));
      for (size_t j = 0; j < n; ++j) w[j] -= q * h(i, j);
    }
    return w;
  };
  std::set<std::vector<Integer>> classes;
  std::vector<long long> v(n, 0);
  for (;;) {
    classes.insert(reduce(std::vector<Integer>(v.begin(), v.end())));
    size_t pos = n;
    while (pos-- > 0) {
      if (++v[pos] < order) break;
      v[pos] = 0;
    }
    if (pos == static_cast<size_t>(-1)) break;
  }
  std::map<long long, size_t> counts;
  counts[0] = classes.size();
  for (long long m = 1; m <= order; ++m) {
    if (order % m) continue;
    size_t c = 0;
    for (const auto& w : classes) {
      std::vector<Integer> mw;
      for (const auto& x : w) mw.push_back(x * Integer(m));
      auto r = reduce(mw);
      if (std::all_of(r.begin(), r.end(), [](const Integer& x) { return x.is_zero(); })) ++c;
    }
    counts[m] = c;
  }
  return counts;
}

}  // namespace

TEST(Integer, OverflowPromotesAndDemotes) {
  Integer a(std::numeric_limits<int64_t>::max());
  Integer b = a + Integer(1);
  EXPECT_FALSE(b.is_small());
  EXPECT_EQ(b.to_string(), "9223372036854775808");
  Integer c = b - Integer(1);
  EXPECT_TRUE(c.is_small());
  EXPECT_EQ(c, a);
  Integer big = a * a;
  EXPECT_EQ(big / a, a);
  EXPECT_EQ(Integer("-123456789012345678901234567890") % Integer(7),
            Integer(mpz_class("-123456789012345678901234567890") % 7));
}

TEST(Integer, FloorAndRound) {
  EXPECT_EQ(floor_div(Integer(-7), Integer(2)), Integer(-4));
  EXPECT_EQ(mod(Integer(-7), Integer(3)), Integer(2));
  EXPECT_EQ(round_div(Integer(7), Integer(2)), Integer(3));
  EXPECT_EQ(round_div(Integer(-8), Integer(3)), Integer(-3));
  Integer g, x, y;
  xgcd(Integer(240), Integer(46), g, x, y);
  EXPECT_EQ(g, Integer(2));
  EXPECT_EQ(x * Integer(240) + y * Integer(46), g);
}

TEST(Snf, Examples) {
  EXPECT_EQ(snf(IntMat::identity(3)).d, (std::vector<Integer>{1, 1, 1}));
  EXPECT_EQ(snf(IntMat{{2, 4}, {6, 8}}).d, (std::vector<Integer>{2, 4}));
  EXPECT_EQ(snf(IntMat{{6, 0}, {0, 4}}).d, (std::vector<Integer>{2, 12}));
}

TEST(Snf, MinorsOracleAndTransforms) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    IntMat a = random_mat(rng, r, c, -6, 6);
    SmithForm s = snf(a, {true, true, true});
    IntMat d(r, c);
    for (size_t i = 0; i < s.d.size(); ++i) d(i, i) = s.d[i];
    ASSERT_EQ(s.u * a * s.v, d);
    ASSERT_TRUE(s.u.det().is_unit());
    ASSERT_TRUE(s.v.det().is_unit());
    ASSERT_TRUE((s.v * s.vinv).is_identity());
    Integer prod(1);
    for (size_t k = 1; k <= s.d.size(); ++k) {
      prod *= s.d[k - 1];
      ASSERT_EQ(prod, minors_gcd(a, k)) << a;
      if (k < s.d.size() && !s.d[k - 1].is_zero()) ASSERT_TRUE((s.d[k] % s.d[k - 1]).is_zero());
    }
  }
}

TEST(Snf, InvariantUnderUnimodularChange) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    size_t n = 2 + rng() % 4;
    IntMat a = random_mat(rng, n, n, -9, 9);
    IntMat p = random_unimodular(rng, n), q = random_unimodular(rng, n);
    ASSERT_EQ(snf(a, {false, false, false}).d, snf(p * a * q, {false, false, false}).d);
  }
}

TEST(Hnf, Examples) {
  EXPECT_EQ(hnf(IntMat::identity(3)).h, IntMat::identity(3));
  EXPECT_EQ(hnf(IntMat{{0, 1}, {1, 0}}).h, IntMat::identity(2));
  EXPECT_EQ(hnf(IntMat{{2, 0}, {1, 1}}).h, (IntMat{{1, 1}, {0, 2}}));
}

TEST(Hnf, Canonical) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    IntMat a = random_mat(rng, r, c, -7, 7);
    HermiteForm h = hnf(a);
    ASSERT_EQ(h.u * a, h.h);
    ASSERT_TRUE(h.u.det().is_unit());
    size_t last = 0;
    for (size_t i = 0; i < h.rank; ++i) {
      size_t piv = 0;
      while (h.h(i, piv).is_zero()) ++piv;
      if (i) ASSERT_GT(piv, last);
      last = piv;
      ASSERT_GT(h.h(i, piv).sign(), 0);
      for (size_t k = 0; k < i; ++k) {
        ASSERT_GE(h.h(k, piv).sign(), 0);
        ASSERT_LT(h.h(k, piv), h.h(i, piv));
      }
    }
    for (size_t i = h.rank; i < r; ++i) ASSERT_TRUE(h.h.row_is_zero(i));
    IntMat p = random_unimodular(rng, r);
    ASSERT_EQ(hnf(p * a).h, h.h);
  }
}

TEST(Kernel, Examples) {
  EXPECT_EQ(kernel_basis(IntMat::identity(3)).rows(), 0u);
  IntMat k = kernel_basis(IntMat{{1, 1}, {1, 1}});
  ASSERT_EQ(k.rows(), 1u);
  EXPECT_EQ(abs(k(0, 0)), Integer(1));
  EXPECT_EQ(k(0, 0), -k(0, 1));
  IntMat eps{{1}, {1}, {1}};
  IntMat ia = kernel_basis(eps);
  EXPECT_EQ(ia.rows(), 2u);
  EXPECT_TRUE((ia * eps).is_zero());
  EXPECT_TRUE(cokernel_invariants(ia, 3).factors.empty());
}

TEST(Kernel, RankNullityAndSaturation) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    size_t r = 1 + rng() % 6, c = 1 + rng() % 4;
    IntMat a = random_mat(rng, r, c, -3, 3);
    IntMat k = kernel_basis(a);
    ASSERT_TRUE(k.rows() == 0 || (k * a).is_zero());
    ASSERT_EQ(k.rows() + a.rank(), r);
    if (k.rows()) {
      AbelianInvariants q = cokernel_invariants(k, r);
      ASSERT_TRUE(q.factors.empty());
    }
  }
}

TEST(Cokernel, Examples) {
  AbelianInvariants a = cokernel_invariants(IntMat::scalar(2, Integer(2)), 2);
  EXPECT_EQ(a.factors, (std::vector<Integer>{2, 2}));
  AbelianInvariants b = cokernel_invariants(IntMat(0, 1), 1);
  EXPECT_TRUE(b.factors.empty());
  EXPECT_EQ(b.free_rank, 1u);
  AbelianInvariants c = cokernel_invariants(IntMat{{2, 0}, {0, 3}}, 2);
  EXPECT_EQ(c.factors, (std::vector<Integer>{6}));
}

TEST(Cokernel, BruteForceOracle) {
  std::mt19937 rng(9);
  int checked = 0;
  while (checked < 150) {
    size_t n = 1 + rng() % 3;
    IntMat a = random_mat(rng, n + rng() % 2, n, -5, 5);
    if (a.rank() != n) continue;
    AbelianInvariants q = cokernel_invariants(a, n);
    long long order = q.order().to_int64();
    if (order > 200) continue;
    long long box = 1;
    for (size_t i = 0; i < n; ++i) box *= order;
    if (box > 40000) continue;
    ASSERT_EQ(q.free_rank, 0u);
    auto counts = brute_torsion_counts(a, n, order);
    ASSERT_EQ(counts[0], static_cast<size_t>(order));
    for (const auto& [m, c] : counts) {
      if (m == 0) continue;
      long long predicted = 1;
      for (const auto& f : q.factors) predicted *= std::gcd(m, f.to_int64());
      ASSERT_EQ(static_cast<long long>(c), predicted) << a << " m=" << m;
    }
    ++checked;
  }
}

TEST(Solve, LeftSolveAndMembership) {
  IntMat a{{2, 0}, {0, 3}};
  auto x = solve_left(a, IntMat{{4, 9}});
  ASSERT_TRUE(x);
  EXPECT_EQ(*x * a, (IntMat{{4, 9}}));
  EXPECT_FALSE(solve_left(a, IntMat{{1, 0}}));
  EXPECT_TRUE(in_row_lattice(a, IntMat{{2, 3}}));
  IntMat s = saturate(IntMat{{2, 4}});
  EXPECT_TRUE(s == (IntMat{{1, 2}}) || s == (IntMat{{-1, -2}}));
  IntMat t = saturate(IntMat{{2, 0, 2}, {0, 3, 3}});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_TRUE(in_row_lattice(t, IntMat{{1, 0, 1}, {0, 1, 1}}));
  EXPECT_TRUE(cokernel_invariants(t, 3).factors.empty());
}

TEST(Lll, PreservesLatticeAndShortens) {
  IntMat b{{1, 0, 0, 1345}, {0, 1, 0, 35}, {0, 0, 1, 154}};
  IntMat t;
  IntMat r = lll(b, &t);
  EXPECT_EQ(t * b, r);
  EXPECT_TRUE(t.det().is_unit());
  EXPECT_LT(r.row(0).max_abs(), Integer(20));
}

TEST(Unimodular, Examples) {
  auto a = unimodular_in_lattice({IntMat::identity(3)}, 100);
  ASSERT_TRUE(a.found);
  EXPECT_TRUE(a.found->det().is_unit());
  auto b = unimodular_in_lattice({IntMat::scalar(2, Integer(2))}, 1000);
  EXPECT_FALSE(b.found);
  EXPECT_TRUE(b.impossible);
  auto c = unimodular_in_lattice({IntMat{{1, 0}, {0, 0}}, IntMat{{0, 0}, {0, 1}}}, 100);
  ASSERT_TRUE(c.found);
  EXPECT_EQ(abs(c.found->det()), Integer(1));
  EXPECT_EQ(c.coefficients.size(), 2u);
  EXPECT_EQ(abs(c.coefficients[0]), Integer(1));
  EXPECT_EQ(abs(c.coefficients[1]), Integer(1));
}

TEST(Unimodular, ParityProof) {
  // Every combination of these has even determinant.
  auto r = unimodular_in_lattice({IntMat{{2, 0}, {0, 1}}, IntMat{{0, 1}, {0, 0}}}, 1000);
  EXPECT_FALSE(r.found);
  EXPECT_TRUE(r.impossible);
}
