#include "tori/modular.hpp"

#include <map>
#include <random>

namespace tori {

namespace {

using Row = std::vector<uint32_t>;

struct Fp {
  uint32_t p;
  uint32_t add(uint32_t a, uint32_t b) const { return (a + b) % p; }
  uint32_t sub(uint32_t a, uint32_t b) const { return (a + p - b) % p; }
  uint32_t mul(uint32_t a, uint32_t b) const { return static_cast<uint32_t>((uint64_t(a) * b) % p); }
  uint32_t inv(uint32_t a) const { return static_cast<uint32_t>(invmod(a, p)); }
};

std::vector<Row> to_rows(const IntMat& m, uint32_t p) {
  std::vector<Row> out(m.rows(), Row(m.cols()));
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) out[i][j] = static_cast<uint32_t>(residue(m(i, j), p));
  return out;
}

IntMat from_rows(const std::vector<Row>& rows, size_t cols) {
  IntMat m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols; ++j) m(i, j) = Integer(static_cast<long long>(rows[i][j]));
  return m;
}

// Reduced row echelon form in place; returns the pivot columns.
std::vector<size_t> rref(std::vector<Row>& rows, const Fp& f) {
  std::vector<size_t> piv;
  const size_t cols = rows.empty() ? 0 : rows[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows.size(); ++c) {
    size_t k = r;
    while (k < rows.size() && rows[k][c] == 0) ++k;
    if (k == rows.size()) continue;
    std::swap(rows[r], rows[k]);
    uint32_t iv = f.inv(rows[r][c]);
    for (auto& x : rows[r]) x = f.mul(x, iv);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      uint32_t q = rows[i][c];
      for (size_t j = c; j < cols; ++j) rows[i][j] = f.sub(rows[i][j], f.mul(q, rows[r][j]));
    }
    piv.push_back(c);
    ++r;
  }
  rows.resize(r);
  return piv;
}

size_t rank_of(std::vector<Row> rows, const Fp& f) { return rref(rows, f).size(); }

// Basis of {x : x a = 0} for an n x m matrix a.
std::vector<Row> left_kernel(const std::vector<Row>& a, size_t n, const Fp& f) {
  const size_t m = a.empty() ? 0 : a[0].size();
  // Solve a^T x^T = 0.
  std::vector<Row> t(m, Row(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) t[j][i] = a[i][j];
  std::vector<size_t> piv = rref(t, f);
  std::vector<char> is_piv(n, 0);
  for (size_t c : piv) is_piv[c] = 1;
  std::vector<Row> out;
  for (size_t fc = 0; fc < n; ++fc) {
    if (is_piv[fc]) continue;
    Row v(n, 0);
    v[fc] = 1;
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = f.sub(0, t[i][fc]);
    out.push_back(std::move(v));
  }
  return out;
}

Row row_times(const Row& v, const std::vector<Row>& a, const Fp& f) {
  const size_t m = a.empty() ? 0 : a[0].size();
  Row out(m, 0);
  for (size_t k = 0; k < v.size(); ++k) {
    if (!v[k]) continue;
    for (size_t j = 0; j < m; ++j) out[j] = f.add(out[j], f.mul(v[k], a[k][j]));
  }
  return out;
}

std::vector<Row> minus_identity(const IntMat& g, const Fp& f) {
  auto a = to_rows(g, f.p);
  for (size_t i = 0; i < a.size(); ++i) a[i][i] = f.sub(a[i][i], 1);
  return a;
}

std::vector<Row> norm_rows(const ModpModule& v, const Subgroup& h, const Fp& f) {
  std::vector<Row> n(v.dim, Row(v.dim, 0));
  for (Elt e : h.members) {
    const IntMat& a = v.act(e);
    for (size_t i = 0; i < v.dim; ++i)
      for (size_t j = 0; j < v.dim; ++j) n[i][j] = f.add(n[i][j], static_cast<uint32_t>(a(i, j).to_int64()));
  }
  return n;
}

std::vector<Row> fixed_rows(const ModpModule& v, const Subgroup& h, const Fp& f) {
  std::vector<Row> st(v.dim);
  for (Elt s : h.generators()) {
    auto a = minus_identity(v.act(s), f);
    for (size_t i = 0; i < v.dim; ++i) st[i].insert(st[i].end(), a[i].begin(), a[i].end());
  }
  if (st.empty() || st[0].empty()) {
    std::vector<Row> id(v.dim, Row(v.dim, 0));
    for (size_t i = 0; i < v.dim; ++i) id[i][i] = 1;
    return id;
  }
  return left_kernel(st, v.dim, f);
}

// dim H^0 and dim H^-1 of an F_p-module over h.
std::pair<size_t, size_t> tate_dims(const ModpModule& v, const Subgroup& h) {
  Fp f{v.p};
  size_t fixed = fixed_rows(v, h, f).size();
  size_t rn = rank_of(norm_rows(v, h, f), f);
  std::vector<Row> aug;
  for (Elt s : h.generators())
    for (auto& r : minus_identity(v.act(s), f)) aug.push_back(std::move(r));
  size_t ri = aug.empty() ? 0 : rank_of(aug, f);
  return {fixed - rn, v.dim - rn - ri};
}

bool is_p_group(size_t n, unsigned p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

}  // namespace

bool ModpModule::verify_homomorphism() const {
  if (action.size() != group->order()) return false;
  for (Elt x = 0; x < group->order(); ++x)
    for (Elt s : group->generators()) {
      IntMat prod = action[x] * action[s];
      for (size_t i = 0; i < dim; ++i)
        for (size_t j = 0; j < dim; ++j)
          if (residue(prod(i, j), p) != residue(action[group->mul(x, s)](i, j), p)) return false;
    }
  return true;
}

ModpModule reduce_mod_p(const GLattice& m, unsigned p) {
  ModpModule v{p, m.group, m.rank, {}};
  v.action.reserve(m.action.size());
  for (const auto& a : m.action) v.action.push_back(from_rows(to_rows(a, p), m.rank));
  return v;
}

ModpModule restrict(const ModpModule& v, const Subgroup& h) {
  ModpModule r{v.p, h.as_group(), v.dim, {}};
  for (Elt e : h.members) r.action.push_back(v.action[e]);
  return r;
}

IntMat fixed_subspace(const ModpModule& v, const Subgroup& h) {
  Fp f{v.p};
  return from_rows(fixed_rows(v, h, f), v.dim);
}

size_t norm_image_dimension(const ModpModule& v, const Subgroup& h) {
  Fp f{v.p};
  return rank_of(norm_rows(v, h, f), f);
}

bool is_cohomologically_trivial(const ModpModule& v) {
  // Over F_p only the p-part can be non-zero.
  if (v.group->order() % v.p != 0) return true;
  auto [h0, hm1] = tate_dims(v, sylow(v.group, v.p));
  return h0 == 0 && hm1 == 0;
}

bool is_cohomologically_trivial(const GLattice& m) {
  for (unsigned q : prime_divisors(m.group->order())) {
    Subgroup s = sylow(m.group, q);
    if (!tate(m, s, 0).is_zero() || !tate(m, s, -1).is_zero()) return false;
  }
  return true;
}

bool is_projective_modp(const ModpModule& v) {
  if (v.group->order() % v.p != 0) return true;
  Subgroup s = sylow(v.group, v.p);
  if (v.dim % s.order() != 0) return false;
  return norm_image_dimension(v, s) == v.dim / s.order();
}

bool is_permutation_basis(const ModpModule& v, const IntMat& basis) {
  Fp f{v.p};
  if (basis.rows() != v.dim || basis.cols() != v.dim) return false;
  auto b = to_rows(basis, v.p);
  if (rank_of(b, f) != v.dim) return false;
  std::map<Row, size_t> pos;
  for (size_t i = 0; i < b.size(); ++i) pos[b[i]] = i;
  if (pos.size() != b.size()) return false;
  for (Elt s : v.group->generators()) {
    auto a = to_rows(v.act(s), v.p);
    for (const auto& r : b)
      if (!pos.count(row_times(r, a, f))) return false;
  }
  return true;
}

ModpPermRecognition is_permutation_modp(const ModpModule& v, size_t budget) {
  ModpPermRecognition res;
  const auto& g = v.group;
  if (!is_p_group(g->order(), v.p)) throw Error("is_permutation_modp: group is not a p-group");
  Fp f{v.p};
  const auto& cls = g->subgroup_classes().classes;
  const size_t c = cls.size();
  std::vector<size_t> cols;
  for (size_t j = 0; j < c; ++j)
    if (g->order() / cls[j].representative.order() <= v.dim) cols.push_back(j);
  // For F_p[P/H] and a subgroup Q: dim of Q-fixed points = number of Q-orbits,
  // and dim of the Q-norm image = number of regular Q-orbits.
  std::vector<std::vector<long long>> rows;
  std::vector<long long> rhs;
  for (size_t k = 0; k < c; ++k) {
    const Subgroup& q = cls[k].representative;
    std::vector<long long> orb, reg;
    for (size_t j : cols) {
      auto dc = double_cosets(g, q, cls[j].representative);
      long long nreg = 0;
      for (const auto& d : dc)
        if (d.intersection.order() == 1) ++nreg;
      orb.push_back(static_cast<long long>(dc.size()));
      reg.push_back(nreg);
    }
    rows.push_back(std::move(orb));
    rhs.push_back(static_cast<long long>(fixed_rows(v, q, f).size()));
    rows.push_back(std::move(reg));
    rhs.push_back(static_cast<long long>(norm_image_dimension(v, q)));
  }
  auto sols = nonnegative_solutions(rows, rhs, 64);
  if (sols.empty()) {
    res.verdict = SearchVerdict::ProvablyNot;
    res.reason = "fixed-point and norm-image dimensions match no permutation module";
    return res;
  }
  std::mt19937_64 rng(0x5eed);
  bool all_refuted = sols.size() < 64;
  for (const auto& sol : sols) {
    // Summands: (subgroup, coset reps, basis of V^H).
    struct Summand {
      size_t cls;
      std::vector<Elt> reps;
      std::vector<Row> fixed;
    };
    std::vector<Summand> parts;
    size_t hom_dim = 0;
    for (size_t t = 0; t < cols.size(); ++t)
      for (long long k = 0; k < sol[t]; ++k) {
        const Subgroup& h = cls[cols[t]].representative;
        parts.push_back({cols[t], right_coset_reps(h), fixed_rows(v, h, f)});
        hom_dim += parts.back().fixed.size();
      }
    std::vector<std::vector<Row>> acts;
    acts.reserve(g->order());
    for (Elt e = 0; e < g->order(); ++e) acts.push_back(to_rows(v.act(e), v.p));
    // Image of the coset basis for given coefficient vector over the Hom basis.
    auto build = [&](const std::vector<uint32_t>& coef) {
      std::vector<Row> b;
      size_t off = 0;
      for (const auto& s : parts) {
        Row w(v.dim, 0);
        for (size_t i = 0; i < s.fixed.size(); ++i)
          if (coef[off + i])
            for (size_t j = 0; j < v.dim; ++j) w[j] = f.add(w[j], f.mul(coef[off + i], s.fixed[i][j]));
        off += s.fixed.size();
        for (Elt t : s.reps) b.push_back(row_times(w, acts[t], f));
      }
      return b;
    };
    auto accept = [&](const std::vector<Row>& b) {
      if (rank_of(b, f) != v.dim) return false;
      res.verdict = SearchVerdict::Found;
      for (size_t t = 0; t < cols.size(); ++t)
        for (long long k = 0; k < sol[t]; ++k) res.class_multiset.push_back(cols[t]);
      res.basis = from_rows(b, v.dim);
      return true;
    };
    double space = 1;
    for (size_t i = 0; i < hom_dim; ++i) space *= v.p;
    if (space <= 65536.0) {
      std::vector<uint32_t> coef(hom_dim, 0);
      for (;;) {
        if (accept(build(coef))) return res;
        size_t i = 0;
        while (i < hom_dim && coef[i] == v.p - 1) coef[i++] = 0;
        if (i == hom_dim) break;
        ++coef[i];
      }
      continue;  // this candidate is refuted exhaustively
    }
    all_refuted = false;
    std::uniform_int_distribution<uint32_t> dist(0, v.p - 1);
    for (size_t trial = 0; trial < budget; ++trial) {
      std::vector<uint32_t> coef(hom_dim);
      for (auto& x : coef) x = dist(rng);
      if (accept(build(coef))) return res;
    }
  }
  if (all_refuted) {
    res.verdict = SearchVerdict::ProvablyNot;
    res.reason = "every candidate permutation module was refuted by exhaustive search";
  } else {
    res.reason = "no permutation basis found by random search";
  }
  return res;
}

InvertibilityResult is_invertible(const GLattice& m, size_t budget) {
  InvertibilityResult res;
  bool unknown = false;
  for (unsigned p : prime_divisors(m.group->order())) {
    PrimeCheck pc;
    pc.p = p;
    Subgroup s = sylow(m.group, p);
    pc.sylow_order = s.order();
    ModpModule v = restrict(reduce_mod_p(m, p), s);
    pc.fixed_rank = fixed_sublattice(m, s).rows();
    pc.fixed_dim = fixed_subspace(v, whole_group(v.group)).rows();
    pc.recognition = is_permutation_modp(v, budget);
    const auto verdict = pc.recognition.verdict;
    res.primes.push_back(pc);
    if (p == 2 && pc.fixed_rank != pc.fixed_dim) {
      res.verdict = SearchVerdict::ProvablyNot;
      res.reason = "rank of M^Syl_2 differs from dim (F_2 M)^Syl_2";
      return res;
    }
    if (verdict == SearchVerdict::ProvablyNot) {
      res.verdict = SearchVerdict::ProvablyNot;
      res.reason = "F_" + std::to_string(p) + " M is not a permutation module over Syl_" + std::to_string(p);
      return res;
    }
    if (verdict == SearchVerdict::BudgetExhausted) unknown = true;
  }
  res.verdict = unknown ? SearchVerdict::BudgetExhausted : SearchVerdict::Found;
  if (unknown) res.reason = "permutation recognition inconclusive at some prime";
  return res;
}

}  // namespace tori
