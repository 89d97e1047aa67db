#include <algorithm>
#include <map>
#include <sstream>

#include "tori/groups.hpp"
#include "tori/lattices.hpp"

namespace tori {

namespace {

// Per-element invariants that any GL_r(Z)-conjugation preserves.
std::vector<std::string> element_types(const GroupPtr& g) {
  const size_t n = g->order(), r = g->rank();
  GLattice std = std_lattice(g);
  // conjugacy class sizes
  std::vector<size_t> csize(n, 0);
  std::vector<char> done(n, 0);
  for (Elt x = 0; x < n; ++x) {
    if (done[x]) continue;
    std::vector<Elt> cls;
    for (Elt y = 0; y < n; ++y) {
      Elt c = g->conj(y, x);
      if (!done[c]) {
        done[c] = 1;
        cls.push_back(c);
      }
    }
    for (Elt c : cls) csize[c] = cls.size();
  }
  std::map<std::vector<Elt>, std::string> cyc_cache;
  std::vector<std::string> out(n);
  for (Elt x = 0; x < n; ++x) {
    std::ostringstream os;
    os << 'o' << g->element_order(x) << 'c' << csize[x] << 't';
    Elt p = x;
    for (size_t k = 1; k <= r; ++k) {
      os << character(std, p) << ',';
      p = g->mul(p, x);
    }
    Subgroup c = generated_subgroup(g, {x});
    auto it = cyc_cache.find(c.members);
    if (it == cyc_cache.end()) {
      std::string h = "h" + tate(std, c, 0).str() + "|" + tate(std, c, -1).str() + "|" + tate(std, c, 1).str() +
                       "|f" + std::to_string(fixed_sublattice(std, c).rows());
      it = cyc_cache.emplace(c.members, h).first;
    }
    os << it->second;
    out[x] = os.str();
  }
  return out;
}

// Number of subspaces of F_p^r invariant under the group, per dimension.
std::vector<size_t> invariant_subspace_counts(const GroupPtr& g, unsigned p) {
  const size_t r = g->rank();
  std::vector<std::vector<std::vector<long long>>> gens;
  for (const auto& m : g->generator_matrices()) {
    std::vector<std::vector<long long>> a(r, std::vector<long long>(r));
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < r; ++j) a[i][j] = static_cast<long long>(residue(m(i, j), p));
    gens.push_back(std::move(a));
  }
  auto rank_mod = [p](std::vector<std::vector<long long>> rows) {
    size_t rk = 0;
    const size_t cols = rows.empty() ? 0 : rows[0].size();
    for (size_t c = 0; c < cols && rk < rows.size(); ++c) {
      size_t piv = rk;
      while (piv < rows.size() && rows[piv][c] % p == 0) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[rk], rows[piv]);
      long long inv = 1;
      while ((rows[rk][c] * inv) % p != 1) ++inv;
      for (auto& v : rows[rk]) v = (v * inv) % p;
      for (size_t i = 0; i < rows.size(); ++i)
        if (i != rk && rows[i][c] % p) {
          long long f = rows[i][c];
          for (size_t j = 0; j < cols; ++j) rows[i][j] = ((rows[i][j] - f * rows[rk][j]) % p + p) % p;
        }
      ++rk;
    }
    return rk;
  };
  std::vector<size_t> counts(r + 1, 0);
  counts[0] = 1;
  // Enumerate subspaces by reduced row echelon form: pivot set, then free entries.
  for (unsigned mask = 1; mask < (1u << r); ++mask) {
    std::vector<size_t> piv;
    for (size_t j = 0; j < r; ++j)
      if (mask & (1u << j)) piv.push_back(j);
    const size_t d = piv.size();
    std::vector<std::pair<size_t, size_t>> free;
    for (size_t i = 0; i < d; ++i)
      for (size_t j = piv[i] + 1; j < r; ++j)
        if (!(mask & (1u << j))) free.emplace_back(i, j);
    size_t total = 1;
    for (size_t k = 0; k < free.size(); ++k) total *= p;
    for (size_t code = 0; code < total; ++code) {
      std::vector<std::vector<long long>> b(d, std::vector<long long>(r, 0));
      for (size_t i = 0; i < d; ++i) b[i][piv[i]] = 1;
      size_t cc = code;
      for (auto [i, j] : free) {
        b[i][j] = static_cast<long long>(cc % p);
        cc /= p;
      }
      bool inv = true;
      for (const auto& a : gens) {
        auto rows = b;
        for (size_t i = 0; i < d; ++i) {
          std::vector<long long> v(r, 0);
          for (size_t k = 0; k < r; ++k)
            if (b[i][k])
              for (size_t j = 0; j < r; ++j) v[j] = (v[j] + b[i][k] * a[k][j]) % p;
          rows.push_back(std::move(v));
        }
        if (rank_mod(rows) != d) {
          inv = false;
          break;
        }
      }
      if (inv) ++counts[d];
    }
  }
  return counts;
}

}  // namespace

std::string zclass_invariant(const GroupPtr& g) {
  std::ostringstream os;
  os << "r" << g->rank() << "n" << g->order() << ";";
  std::map<std::string, size_t> types;
  for (auto& t : element_types(g)) ++types[t];
  for (const auto& [t, c] : types) os << c << "x" << t << ";";
  GLattice std = std_lattice(g);
  Subgroup w = whole_group(g);
  os << "G" << tate(std, w, 0).str() << "|" << tate(std, w, -1).str() << "|" << tate(std, w, 1).str() << "|f"
     << fixed_sublattice(std, w).rows() << ";";
  if (g->rank() <= 4)
    for (unsigned p : {2u, 3u}) {
      os << "F" << p << ":";
      for (size_t c : invariant_subspace_counts(g, p)) os << c << ",";
      os << ";";
    }
  return os.str();
}

ZClassResult glz_conjugate(const GroupPtr& g1, const GroupPtr& g2, size_t budget) {
  ZClassResult res;
  if (g1->rank() != g2->rank() || g1->order() != g2->order()) {
    res.verdict = ZClassVerdict::ProvablyDistinct;
    res.reason = "rank or order differs";
    return res;
  }
  if (g1->same_as(*g2) || std::all_of(g1->elements().begin(), g1->elements().end(),
                                      [&](const IntMat& m) { return g2->find(m).has_value(); })) {
    res.verdict = ZClassVerdict::Conjugate;
    res.conjugator = IntMat::identity(g1->rank());
    return res;
  }
  if (zclass_invariant(g1) != zclass_invariant(g2)) {
    res.verdict = ZClassVerdict::ProvablyDistinct;
    res.reason = "invariants differ";
    return res;
  }
  const size_t n = g1->order();
  auto t1 = element_types(g1), t2 = element_types(g2);
  const std::vector<Elt>& gens = g1->generators();
  const size_t k = gens.size();
  // Generator images: same type; pairwise products of the same type.
  std::vector<std::vector<Elt>> cand(k);
  for (size_t i = 0; i < k; ++i)
    for (Elt y = 0; y < n; ++y)
      if (t2[y] == t1[gens[i]]) cand[i].push_back(y);
  GLattice m1 = std_lattice(g1);
  std::optional<CohomologyProfile> prof1;
  std::vector<Elt> img(k);
  size_t spent = 0;
  bool unknown = false;
  std::vector<std::vector<Elt>> stab(k + 1);
  stab[0].resize(n);
  for (Elt x = 0; x < n; ++x) stab[0][x] = x;
  auto rec = [&](auto&& self, size_t pos) -> bool {
    if (spent > budget) {
      unknown = true;
      return false;
    }
    if (pos == k) {
      ++spent;
      std::vector<IntMat> images;
      for (Elt y : img) images.push_back(g2->element(y));
      if (generated_subgroup(g2, img).order() != n) return false;
      GLattice m2;
      try {
        m2 = lattice_from_generators(g1, images);
      } catch (const Error&) {
        return false;  // not a homomorphism
      }
      for (Elt x = 0; x < n; ++x)
        if (character(m1, x) != character(m2, x)) return false;
      auto hom = hom_lattice(m1, m2);
      size_t left = budget > spent ? budget - spent : 1;
      UnimodularSearch s = unimodular_in_lattice(hom, std::min<size_t>(left, 4000));
      spent += s.evaluations;
      if (s.found) {
        // rho1(g) F = F rho2(phi g), so X = F^-1 conjugates g1 onto g2.
        res.conjugator = s.found->inverse_unimodular();
        return true;
      }
      if (s.impossible) return false;
      if (!prof1) prof1 = cohomology_profile(m1);
      if (!(cohomology_profile(m2) == *prof1)) return false;
      unknown = true;
      return false;
    }
    // Up to conjugation by the centralizer of the images chosen so far.
    const auto& st = stab[pos];
    std::vector<char> seen(n, 0);
    for (Elt y : cand[pos]) {
      if (seen[y]) continue;
      for (Elt c : st) seen[g2->conj(c, y)] = 1;
      bool ok = true;
      for (size_t i = 0; i < pos && ok; ++i) {
        if (t1[g1->mul(gens[i], gens[pos])] != t2[g2->mul(img[i], y)]) ok = false;
        else if (t1[g1->mul(gens[i], g1->inv(gens[pos]))] != t2[g2->mul(img[i], g2->inv(y))]) ok = false;
      }
      if (!ok) continue;
      img[pos] = y;
      stab[pos + 1].clear();
      for (Elt c : st)
        if (g2->mul(c, y) == g2->mul(y, c)) stab[pos + 1].push_back(c);
      if (self(self, pos + 1)) return true;
      if (spent > budget) {
        unknown = true;
        return false;
      }
    }
    return false;
  };
  if (rec(rec, 0)) {
    const IntMat& x = *res.conjugator;
    IntMat xi = x.inverse_unimodular();
    for (Elt s : g1->generators())
      if (!g2->find(x * g1->element(s) * xi)) throw Error("glz_conjugate: conjugator check failed");
    res.verdict = ZClassVerdict::Conjugate;
    return res;
  }
  if (unknown) {
    res.verdict = ZClassVerdict::BudgetExhausted;
    res.reason = "no conjugator found within budget";
  } else {
    res.verdict = ZClassVerdict::ProvablyDistinct;
    res.reason = "no isomorphism of the groups is realized by an integral conjugation";
  }
  return res;
}

}  // namespace tori
