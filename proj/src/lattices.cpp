#include "tori/lattices.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

namespace tori {

namespace {

void require_same(const GroupPtr& a, const GroupPtr& b, const char* what) {
  if (!a->same_as(*b)) throw GroupMismatch(std::string(what) + ": lattices over different groups");
}

GLattice make_lattice(const GroupPtr& g, size_t rank) {
  GLattice m;
  m.group = g;
  m.rank = rank;
  m.action.reserve(g->order());
  return m;
}

// Incremental row echelon form modulo a prime, used to pick independent rows.
class ModEchelon {
 public:
  static constexpr uint64_t P = (uint64_t(1) << 61) - 1;
  explicit ModEchelon(size_t n) : n_(n) {}

  bool add(const IntMat& row) {
    std::vector<uint64_t> v(n_);
    for (size_t j = 0; j < n_; ++j) v[j] = residue(row(0, j), P);
    for (size_t k = 0; k < rows_.size(); ++k) {
      uint64_t c = v[piv_[k]];
      if (!c) continue;
      const auto& r = rows_[k];
      for (size_t j = piv_[k]; j < n_; ++j)
        if (r[j]) v[j] = (v[j] + P - static_cast<uint64_t>((static_cast<unsigned __int128>(c) * r[j]) % P)) % P;
    }
    size_t p = 0;
    while (p < n_ && !v[p]) ++p;
    if (p == n_) return false;
    uint64_t inv = invmod(v[p], P);
    for (size_t j = p; j < n_; ++j) v[j] = static_cast<uint64_t>((static_cast<unsigned __int128>(v[j]) * inv) % P);
    rows_.push_back(std::move(v));
    piv_.push_back(p);
    return true;
  }
  size_t rank() const { return rows_.size(); }

 private:
  size_t n_;
  std::vector<std::vector<uint64_t>> rows_;
  std::vector<size_t> piv_;
};

IntMat stacked_minus_identity(const std::vector<IntMat>& gens, size_t r) {
  IntMat out(r, 0);
  IntMat id = IntMat::identity(r);
  for (const auto& s : gens) out = out.hstack(s - id);
  return out;
}

IntMat vstacked_minus_identity(const std::vector<IntMat>& gens, size_t r) {
  IntMat out(0, r);
  IntMat id = IntMat::identity(r);
  for (const auto& s : gens) out = out.vstack(s - id);
  return out;
}

AbelianInvariants tate_core(size_t r, const std::vector<IntMat>& gens, const IntMat& norm, int k) {
  if (k == 0) {
    IntMat f = gens.empty() ? IntMat::identity(r) : kernel_basis(stacked_minus_identity(gens, r));
    if (f.rows() == 0) return {};
    auto c = coordinates_in(f, norm);
    if (!c) throw Error("tate: norm image outside the fixed lattice");
    return cokernel_invariants(*c, f.rows());
  }
  IntMat kn = kernel_basis(norm);
  if (kn.rows() == 0) return {};
  IntMat ih = vstacked_minus_identity(gens, r);
  auto c = coordinates_in(kn, ih);
  if (!c) throw Error("tate: augmentation image outside the norm kernel");
  return cokernel_invariants(*c, kn.rows());
}

}  // namespace

// ---------------------------------------------------------------- G-sets

GSet natural_gset(const GroupPtr& g) {
  GSet x{g, g->rank(), {}};
  x.action.reserve(g->order());
  for (const auto& m : g->elements()) {
    std::vector<uint32_t> img(x.points);
    for (size_t i = 0; i < x.points; ++i) {
      size_t ones = 0, at = 0;
      for (size_t j = 0; j < x.points; ++j) {
        if (m(i, j).is_one()) {
          ++ones;
          at = j;
        } else if (!m(i, j).is_zero()) {
          ones = 2;
        }
      }
      if (ones != 1) throw Error("natural_gset: not a permutation matrix: " + m.str());
      img[i] = static_cast<uint32_t>(at);
    }
    x.action.push_back(std::move(img));
  }
  return x;
}

GSet coset_gset(const Subgroup& h) {
  const auto& g = h.parent;
  std::vector<Elt> reps = right_coset_reps(h);
  std::vector<size_t> idx = right_coset_index(h, reps);
  GSet x{g, reps.size(), {}};
  x.action.reserve(g->order());
  for (Elt e = 0; e < g->order(); ++e) {
    std::vector<uint32_t> img(reps.size());
    for (size_t i = 0; i < reps.size(); ++i) img[i] = static_cast<uint32_t>(idx[g->mul(reps[i], e)]);
    x.action.push_back(std::move(img));
  }
  return x;
}

Subgroup point_stabilizer(const GSet& x, uint32_t point) {
  Subgroup s{x.group, {}};
  for (Elt e = 0; e < x.group->order(); ++e)
    if (x.action[e][point] == point) s.members.push_back(e);
  return s;
}

std::vector<std::vector<uint32_t>> orbits(const GSet& x) {
  std::vector<int> seen(x.points, -1);
  std::vector<std::vector<uint32_t>> out;
  for (uint32_t p = 0; p < x.points; ++p) {
    if (seen[p] >= 0) continue;
    std::vector<uint32_t> orb{p};
    seen[p] = static_cast<int>(out.size());
    for (size_t q = 0; q < orb.size(); ++q)
      for (Elt s : x.group->generators()) {
        uint32_t y = x.action[s][orb[q]];
        if (seen[y] < 0) {
          seen[y] = static_cast<int>(out.size());
          orb.push_back(y);
        }
      }
    std::sort(orb.begin(), orb.end());
    out.push_back(std::move(orb));
  }
  return out;
}

// ---------------------------------------------------------------- lattices

bool GLattice::verify_homomorphism() const {
  if (action.size() != group->order()) return false;
  if (!action[0].is_identity()) return false;
  for (Elt x = 0; x < group->order(); ++x)
    for (Elt s : group->generators())
      if (action[group->mul(x, s)] != action[x] * action[s]) return false;
  return true;
}

std::vector<IntMat> GLattice::generator_images() const {
  std::vector<IntMat> out;
  for (Elt s : group->generators()) out.push_back(action[s]);
  return out;
}

GLattice lattice_from_generators(const GroupPtr& g, const std::vector<IntMat>& images) {
  const auto& gens = g->generators();
  if (images.size() != gens.size()) throw Error("lattice_from_generators: wrong number of images");
  size_t r = images.empty() ? 0 : images[0].rows();
  for (const auto& m : images)
    if (m.rows() != r || m.cols() != r) throw Error("lattice_from_generators: images must be square of equal rank");
  GLattice m = make_lattice(g, r);
  std::vector<std::optional<IntMat>> act(g->order());
  act[0] = IntMat::identity(r);
  std::vector<Elt> queue{0};
  for (size_t q = 0; q < queue.size(); ++q)
    for (size_t k = 0; k < gens.size(); ++k) {
      Elt y = g->mul(queue[q], gens[k]);
      if (act[y]) continue;
      act[y] = *act[queue[q]] * images[k];
      queue.push_back(y);
    }
  for (auto& a : act) {
    if (!a) throw Error("lattice_from_generators: generators do not generate the group");
    m.action.push_back(std::move(*a));
  }
  if (!m.verify_homomorphism()) throw Error("lattice_from_generators: images do not define a homomorphism");
  return m;
}

bool EquivariantMap::verify() const {
  if (!source.group->same_as(*target.group)) return false;
  if (matrix.rows() != source.rank || matrix.cols() != target.rank) return false;
  for (Elt s : source.group->generators())
    if (source.act(s) * matrix != matrix * target.act(s)) return false;
  return true;
}

GLattice std_lattice(const GroupPtr& g) {
  GLattice m = make_lattice(g, g->rank());
  m.action = g->elements();
  return m;
}

GLattice trivial_lattice(const GroupPtr& g, size_t rank) {
  GLattice m = make_lattice(g, rank);
  m.action.assign(g->order(), IntMat::identity(rank));
  return m;
}

GLattice perm_lattice(const GSet& x) {
  GLattice m = make_lattice(x.group, x.points);
  for (const auto& img : x.action) {
    IntMat p(x.points, x.points);
    for (size_t i = 0; i < x.points; ++i) p(i, img[i]) = Integer(1);
    m.action.push_back(std::move(p));
  }
  return m;
}

GLattice aug_ideal(const GSet& x) {
  // Basis b_i = x_i - x_{i+1}; coordinates of a sum-zero vector are its partial sums.
  const size_t n = x.points;
  if (n == 0) throw Error("aug_ideal: empty G-set");
  GLattice m = make_lattice(x.group, n - 1);
  for (const auto& img : x.action) {
    IntMat a(n - 1, n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      std::vector<long long> v(n, 0);
      v[img[i]] += 1;
      v[img[i + 1]] -= 1;
      long long acc = 0;
      for (size_t j = 0; j + 1 < n; ++j) {
        acc += v[j];
        a(i, j) = Integer(acc);
      }
    }
    m.action.push_back(std::move(a));
  }
  return m;
}

GLattice j_lattice(const GSet& x) {
  // Z[X] / Z(sum), basis the images of x_0 .. x_{n-2}; x_{n-1} = -(sum of the rest).
  const size_t n = x.points;
  if (n == 0) throw Error("j_lattice: empty G-set");
  GLattice m = make_lattice(x.group, n - 1);
  for (const auto& img : x.action) {
    IntMat a(n - 1, n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      if (img[i] == n - 1)
        for (size_t j = 0; j + 1 < n; ++j) a(i, j) = Integer(-1);
      else
        a(i, img[i]) = Integer(1);
    }
    m.action.push_back(std::move(a));
  }
  return m;
}

GLattice sign_lattice(const GroupPtr& g, const Subgroup& n) {
  if (!n.parent->same_as(*g)) throw GroupMismatch("sign_lattice: subgroup of a different group");
  if (n.order() * 2 != g->order() || !is_normal(n))
    throw NotIndexTwoNormal("sign_lattice: subgroup is not normal of index 2");
  GLattice m = make_lattice(g, 1);
  for (Elt e = 0; e < g->order(); ++e) m.action.push_back(IntMat::scalar(1, Integer(n.contains(e) ? 1 : -1)));
  return m;
}

GLattice coset_lattice(const Subgroup& h) { return perm_lattice(coset_gset(h)); }

GLattice dual(const GLattice& m) {
  GLattice d = make_lattice(m.group, m.rank);
  for (Elt e = 0; e < m.group->order(); ++e) d.action.push_back(m.action[m.group->inv(e)].transpose());
  return d;
}

GLattice direct_sum(const GLattice& m, const GLattice& n) {
  require_same(m.group, n.group, "direct_sum");
  GLattice s = make_lattice(m.group, m.rank + n.rank);
  for (Elt e = 0; e < m.group->order(); ++e) s.action.push_back(m.action[e].block_diag(n.action[e]));
  return s;
}

GLattice direct_sum(const std::vector<GLattice>& parts) {
  if (parts.empty()) throw Error("direct_sum: no summands");
  size_t r = 0;
  for (const auto& p : parts) {
    require_same(parts[0].group, p.group, "direct_sum");
    r += p.rank;
  }
  const auto& g = parts[0].group;
  GLattice s = make_lattice(g, r);
  for (Elt e = 0; e < g->order(); ++e) {
    IntMat a(r, r);
    size_t off = 0;
    for (const auto& p : parts) {
      for (size_t i = 0; i < p.rank; ++i)
        for (size_t j = 0; j < p.rank; ++j) a(off + i, off + j) = p.action[e](i, j);
      off += p.rank;
    }
    s.action.push_back(std::move(a));
  }
  return s;
}

GLattice tensor(const GLattice& m, const GLattice& n) {
  require_same(m.group, n.group, "tensor");
  GLattice t = make_lattice(m.group, m.rank * n.rank);
  for (Elt e = 0; e < m.group->order(); ++e) t.action.push_back(m.action[e].kron(n.action[e]));
  return t;
}

GLattice restrict(const GLattice& m, const Subgroup& h) {
  require_same(m.group, h.parent, "restrict");
  GLattice r = make_lattice(h.as_group(), m.rank);
  for (Elt e : h.members) r.action.push_back(m.action[e]);
  return r;
}

GLattice induce(const Subgroup& h, const GLattice& m) {
  const auto& g = h.parent;
  if (m.group->order() != h.order()) throw GroupMismatch("induce: lattice is not over the subgroup");
  std::vector<Elt> reps = right_coset_reps(h);
  std::vector<size_t> idx = right_coset_index(h, reps);
  const size_t k = reps.size(), d = m.rank;
  GLattice out = make_lattice(g, k * d);
  for (Elt e = 0; e < g->order(); ++e) {
    IntMat a(k * d, k * d);
    for (size_t j = 0; j < k; ++j) {
      Elt tg = g->mul(reps[j], e);
      size_t kk = idx[tg];
      Elt hh = g->mul(tg, g->inv(reps[kk]));
      size_t local = static_cast<size_t>(std::lower_bound(h.members.begin(), h.members.end(), hh) - h.members.begin());
      const IntMat& b = m.action[local];
      for (size_t x = 0; x < d; ++x)
        for (size_t y = 0; y < d; ++y) a(j * d + x, kk * d + y) = b(x, y);
    }
    out.action.push_back(std::move(a));
  }
  return out;
}

GLattice inflate(const Subgroup& n, const GLattice& m) {
  Quotient q = quotient_group(n);
  require_same(q.group, m.group, "inflate");
  GLattice out = make_lattice(n.parent, m.rank);
  for (Elt e = 0; e < n.parent->order(); ++e) out.action.push_back(m.action[q.image[e]]);
  return out;
}

GLattice change_basis(const GLattice& m, const IntMat& b) {
  if (b.rows() != m.rank || b.cols() != m.rank) throw Error("change_basis: wrong shape");
  IntMat binv = b.inverse_unimodular();
  GLattice out = make_lattice(m.group, m.rank);
  for (const auto& a : m.action) out.action.push_back(b * a * binv);
  return out;
}

bool is_invariant(const GLattice& m, const IntMat& rows) {
  for (Elt s : m.group->generators()) {
    IntMat img = rows * m.act(s);
    for (size_t i = 0; i < img.rows(); ++i)
      if (!in_row_lattice(rows, img.row(i))) return false;
  }
  return true;
}

GLattice sublattice(const GLattice& m, const IntMat& basis) {
  if (basis.cols() != m.rank) throw Error("sublattice: wrong number of columns");
  if (basis.rank() != basis.rows()) throw Error("sublattice: basis rows are dependent");
  GLattice out = make_lattice(m.group, basis.rows());
  for (const auto& a : m.action) {
    auto c = coordinates_in(basis, basis * a);
    if (!c) throw Error("sublattice: rows do not span an invariant sublattice");
    out.action.push_back(std::move(*c));
  }
  return out;
}

std::pair<GLattice, IntMat> quotient_lattice(const GLattice& m, const IntMat& sub_basis) {
  if (sub_basis.cols() != m.rank) throw Error("quotient_lattice: wrong number of columns");
  const size_t k = sub_basis.rows(), r = m.rank;
  if (saturate(sub_basis).rows() != k || cokernel_invariants(sub_basis, r).order() != Integer(1))
    throw Error("quotient_lattice: sublattice is not saturated");
  if (!is_invariant(m, sub_basis)) throw Error("quotient_lattice: sublattice is not invariant");
  IntMat b = sub_basis.vstack(complete_to_basis(sub_basis));
  IntMat binv = b.inverse_unimodular();
  GLattice q = make_lattice(m.group, r - k);
  for (const auto& a : m.action) q.action.push_back((b * a * binv).submatrix(k, r - k, k, r - k));
  return {q, binv.submatrix(0, r, k, r - k)};
}

Integer character(const GLattice& m, Elt g) {
  Integer t(0);
  for (size_t i = 0; i < m.rank; ++i) t += m.action[g](i, i);
  return t;
}

bool same_group(const GLattice& m, const GLattice& n) { return m.group->same_as(*n.group); }

// ---------------------------------------------------------------- cohomology

IntMat fixed_sublattice(const GLattice& m, const Subgroup& h) {
  std::vector<IntMat> gens;
  for (Elt s : h.generators()) gens.push_back(m.act(s));
  if (gens.empty()) return IntMat::identity(m.rank);
  return kernel_basis(stacked_minus_identity(gens, m.rank));
}

IntMat norm_matrix(const GLattice& m, const Subgroup& h) {
  IntMat n(m.rank, m.rank);
  for (Elt e : h.members) n = n + m.act(e);
  return n;
}

AbelianInvariants tate(const GLattice& m, const Subgroup& h, int k) {
  require_same(m.group, h.parent, "tate");
  if (k < -1 || k > 1) throw Error("tate: only degrees -1, 0, 1 are supported");
  if (h.order() == 1 || m.rank == 0) return {};
  std::vector<IntMat> gens;
  IntMat nm = norm_matrix(m, h);
  if (k == 1) {
    // H^1(M) = H^-1(M*), with M* acting by inverse transposes.
    for (Elt s : h.generators()) gens.push_back(m.act(m.group->inv(s)).transpose());
    return tate_core(m.rank, gens, nm.transpose(), -1);
  }
  for (Elt s : h.generators()) gens.push_back(m.act(s));
  return tate_core(m.rank, gens, nm, k);
}

bool is_flasque(const GLattice& m) {
  // Restriction to a Sylow subgroup is injective on Tate cohomology, so
  // p-subgroups suffice.
  const auto& cls = m.group->subgroup_classes().classes;
  for (size_t i : m.group->p_subgroup_class_indices())
    if (!tate(m, cls[i].representative, -1).is_zero()) return false;
  return true;
}

bool is_coflasque(const GLattice& m) {
  const auto& cls = m.group->subgroup_classes().classes;
  for (size_t i : m.group->p_subgroup_class_indices())
    if (!tate(m, cls[i].representative, 1).is_zero()) return false;
  return true;
}

CohomologyProfile cohomology_profile(const GLattice& m, bool with_tate) {
  CohomologyProfile p;
  for (const auto& c : m.group->subgroup_classes().classes) {
    const Subgroup& h = c.representative;
    p.fixed_ranks.push_back(fixed_sublattice(m, h).rows());
    if (!with_tate) continue;
    p.h0.push_back(tate(m, h, 0));
    p.hm1.push_back(tate(m, h, -1));
    p.h1.push_back(tate(m, h, 1));
  }
  return p;
}

// ---------------------------------------------------------------- Hom

size_t hom_dimension(const GLattice& m, const GLattice& n) {
  require_same(m.group, n.group, "hom_dimension");
  Integer s(0);
  for (Elt e = 0; e < m.group->order(); ++e) s += character(m, m.group->inv(e)) * character(n, e);
  Integer o(static_cast<long long>(m.group->order()));
  if (!(s % o).is_zero()) throw Error("hom_dimension: character inner product is not integral");
  return static_cast<size_t>((s / o).to_int64());
}

std::vector<IntMat> hom_lattice(const GLattice& m, const GLattice& n) {
  const size_t d = hom_dimension(m, n);
  const size_t a = m.rank, b = n.rank;
  if (d == 0) return {};
  const auto& g = m.group;
  // Reynolds images of matrix units until the rank reaches d.
  ModEchelon ech(a * b);
  IntMat rows(0, a * b);
  for (size_t i = 0; i < a && ech.rank() < d; ++i)
    for (size_t j = 0; j < b && ech.rank() < d; ++j) {
      IntMat img(1, a * b);
      for (Elt e = 0; e < g->order(); ++e) {
        const IntMat& l = m.act(g->inv(e));
        const IntMat& r = n.act(e);
        for (size_t x = 0; x < a; ++x) {
          const Integer& lx = l(x, i);
          if (lx.is_zero()) continue;
          for (size_t y = 0; y < b; ++y) {
            const Integer& ry = r(j, y);
            if (!ry.is_zero()) img(0, x * b + y).addmul(lx, ry);
          }
        }
      }
      if (ech.add(img)) rows = rows.vstack(img);
    }
  if (ech.rank() != d) throw Error("hom_lattice: Reynolds images did not reach the expected rank");
  IntMat basis = saturate(rows);
  std::vector<IntMat> out;
  for (size_t k = 0; k < basis.rows(); ++k) {
    IntMat f = IntMat::unflatten(basis.row(k), a, b);
    for (Elt s : g->generators())
      if (m.act(s) * f != f * n.act(s)) throw Error("hom_lattice: basis element is not equivariant");
    out.push_back(std::move(f));
  }
  return out;
}

std::string to_string(SearchVerdict v) {
  switch (v) {
    case SearchVerdict::Found: return "found";
    case SearchVerdict::ProvablyNot: return "provably_not";
    case SearchVerdict::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

IsoResult find_isomorphism(const GLattice& m, const GLattice& n, size_t budget) {
  require_same(m.group, n.group, "find_isomorphism");
  IsoResult res;
  if (m.rank != n.rank) {
    res.verdict = SearchVerdict::ProvablyNot;
    res.reason = "ranks differ";
    return res;
  }
  for (Elt e = 0; e < m.group->order(); ++e)
    if (character(m, e) != character(n, e)) {
      res.verdict = SearchVerdict::ProvablyNot;
      res.reason = "characters differ";
      return res;
    }
  if (m.rank == 0) {
    res.verdict = SearchVerdict::Found;
    res.map = EquivariantMap{m, n, IntMat(0, 0)};
    return res;
  }
  std::vector<IntMat> basis = hom_lattice(m, n);
  UnimodularSearch s = unimodular_in_lattice(basis, budget);
  if (s.found) {
    res.verdict = SearchVerdict::Found;
    res.map = EquivariantMap{m, n, *s.found};
    return res;
  }
  if (s.impossible) {
    res.verdict = SearchVerdict::ProvablyNot;
    res.reason = "no equivariant map is invertible modulo a small prime";
    return res;
  }
  CohomologyProfile pm = cohomology_profile(m), pn = cohomology_profile(n);
  if (!(pm == pn)) {
    res.verdict = SearchVerdict::ProvablyNot;
    res.reason = "Tate cohomology differs on some subgroup";
    return res;
  }
  res.reason = "no invertible equivariant map found within budget";
  return res;
}

// ---------------------------------------------------------------- recognition

std::vector<std::vector<size_t>> table_of_marks(const GroupPtr& g) { return g->table_of_marks(); }

std::vector<std::vector<size_t>> permutation_candidates(const GLattice& m, size_t cap) {
  const auto& g = m.group;
  const auto& cls = g->subgroup_classes().classes;
  const size_t c = cls.size(), r = m.rank;
  std::vector<std::vector<size_t>> out;
  if (r == 0) {
    out.push_back({});
    return out;
  }
  // Unknowns: classes whose coset lattice fits in rank r.
  std::vector<size_t> cols;
  for (size_t j = 0; j < c; ++j)
    if (g->order() / cls[j].representative.order() <= r) cols.push_back(j);
  std::map<std::pair<size_t, size_t>, std::vector<DoubleCoset>> dc_cache;
  auto dcs = [&](size_t k, size_t j) -> const std::vector<DoubleCoset>& {
    auto key = std::make_pair(k, j);
    auto it = dc_cache.find(key);
    if (it == dc_cache.end())
      it = dc_cache.emplace(key, double_cosets(g, cls[k].representative, cls[j].representative)).first;
    return it->second;
  };
  // Constraints: fixed ranks, then H^0 multiplicities. All coefficients are
  // non-negative.
  std::vector<std::vector<long long>> rows;
  std::vector<long long> rhs;
  for (size_t k = 0; k < c; ++k) {
    rhs.push_back(static_cast<long long>(fixed_sublattice(m, cls[k].representative).rows()));
    std::vector<long long> row;
    for (size_t j : cols) row.push_back(static_cast<long long>(dcs(k, j).size()));
    rows.push_back(std::move(row));
  }
  auto sols = nonnegative_solutions(rows, rhs, 4096);
  if (sols.size() > 1) {
    // Z[G/H] restricted to K has H^0 = (+) Z/|K cap xHx^-1| over double cosets.
    for (size_t k = 0; k < c; ++k) {
      const Subgroup& kk = cls[k].representative;
      if (kk.order() == 1) continue;
      AbelianInvariants h0 = tate(m, kk, 0);
      for (unsigned p : prime_divisors(kk.order()))
        for (size_t q = p; kk.order() % q == 0; q *= p) {
          rhs.push_back(static_cast<long long>(h0.count_divisible(Integer(static_cast<long long>(q)))));
          std::vector<long long> row;
          for (size_t j : cols) {
            long long n = 0;
            for (const auto& d : dcs(k, j))
              if (d.intersection.order() % q == 0) ++n;
            row.push_back(n);
          }
          rows.push_back(std::move(row));
        }
    }
    sols = nonnegative_solutions(rows, rhs, cap);
  }
  for (const auto& sol : sols) {
    std::vector<size_t> ms;
    for (size_t t = 0; t < cols.size(); ++t)
      for (long long v = 0; v < sol[t]; ++v) ms.push_back(cols[t]);
    out.push_back(std::move(ms));
    if (out.size() >= cap) break;
  }
  return out;
}

std::optional<EquivariantMap> permutation_isomorphism(const GLattice& m, const std::vector<size_t>& classes,
                                                     size_t budget) {
  const auto& g = m.group;
  const auto& cls = g->subgroup_classes().classes;
  const size_t r = m.rank;
  size_t total = 0;
  for (size_t k : classes) total += g->order() / cls[k].representative.order();
  if (total != r) return std::nullopt;
  GLattice perm = classes.empty() ? trivial_lattice(g, 0) : coset_lattice(cls[classes[0]].representative);
  if (classes.size() > 1) {
    std::vector<GLattice> parts;
    for (size_t k : classes) parts.push_back(coset_lattice(cls[k].representative));
    perm = direct_sum(parts);
  }
  if (r == 0) return EquivariantMap{perm, m, IntMat(0, 0)};

  // Generators only matter modulo the span S of the summands already placed,
  // so candidates are short vectors of the image of m^H in m / S.
  std::map<size_t, IntMat> fixed;
  std::map<size_t, std::vector<Elt>> reps;
  for (size_t k : classes) {
    if (fixed.count(k)) continue;
    IntMat fb = fixed_sublattice(m, cls[k].representative);
    if (fb.rows() == 0) return std::nullopt;
    fixed[k] = fb;
    reps[k] = right_coset_reps(cls[k].representative);
  }
  auto orbit = [&](size_t k, const IntMat& v) {
    const auto& rs = reps[k];
    IntMat o(rs.size(), r);
    for (size_t x = 0; x < rs.size(); ++x) {
      IntMat row = v * m.act(rs[x]);
      for (size_t j = 0; j < r; ++j) o(x, j) = row(0, j);
    }
    return o;
  };
  // Candidate orbits for class k over the quotient with coordinates binv.
  auto candidates = [&](size_t k, size_t s, const IntMat& binv) {
    const size_t q = r - s;
    const IntMat& fb = fixed[k];
    IntMat proj = (fb * binv).submatrix(0, fb.rows(), s, q);
    HermiteForm hf = hnf(proj);
    std::vector<IntMat> out;
    if (hf.rank == 0) return out;
    IntMat pb = hf.h.submatrix(0, hf.rank, 0, q);
    IntMat lift = hf.u.submatrix(0, hf.rank, 0, fb.rows()) * fb;
    IntMat t;
    IntMat red = lll(pb, &t);
    lift = t * lift;
    const size_t f = red.rows();
    std::vector<std::pair<Integer, IntMat>> vecs;  // (norm in quotient, lift)
    std::set<std::vector<Integer>> seen;
    auto consider = [&](const IntMat& coef) {
      IntMat pv = coef * red;
      if (pv.is_zero()) return;
      IntMat c = coef;
      for (size_t j = 0; j < q; ++j)
        if (!pv(0, j).is_zero()) {
          if (pv(0, j).sign() < 0) {
            pv = -pv;
            c = -c;
          }
          break;
        }
      if (!seen.insert(pv.data()).second) return;
      Integer n(0);
      for (size_t j = 0; j < q; ++j) n.addmul(pv(0, j), pv(0, j));
      vecs.push_back({n, c * lift});
    };
    auto unit = [&](size_t i, long long a) {
      IntMat c(1, f);
      c(0, i) = Integer(a);
      return c;
    };
    for (size_t i = 0; i < f; ++i) {
      consider(unit(i, 1));
      for (size_t j = i + 1; j < f; ++j)
        for (long long b : {1, -1, 2, -2}) consider(unit(i, 1) + unit(j, b));
      for (size_t j = i + 1; j < f; ++j) consider(unit(i, 2) + unit(j, 1));
    }
    if (f <= 8)
      for (size_t i = 0; i < f; ++i)
        for (size_t j = i + 1; j < f; ++j)
          for (size_t l = j + 1; l < f; ++l)
            for (long long b : {1, -1})
              for (long long c : {1, -1}) consider(unit(i, 1) + unit(j, b) + unit(l, c));
    std::stable_sort(vecs.begin(), vecs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [n, v] : vecs) {
      IntMat o = orbit(k, v);
      IntMat po = (o * binv).submatrix(0, o.rows(), s, q);
      if (po.rank() != po.rows() || cokernel_invariants(po, q).order() != Integer(1)) continue;
      out.push_back(std::move(o));
      if (out.size() >= 48) break;
    }
    // Fall back to random combinations of the reduced basis.
    std::mt19937 rng(static_cast<unsigned>(k * 7919 + s));
    std::uniform_int_distribution<int> coef(-2, 2);
    for (size_t trial = 0; out.size() < 8 && trial < 400; ++trial) {
      IntMat c(1, f);
      for (size_t i = 0; i < f; ++i) c(0, i) = Integer(static_cast<long long>(coef(rng) / (trial < 200 ? 2 : 1)));
      if (c.is_zero()) continue;
      IntMat o = orbit(k, c * lift);
      IntMat po = (o * binv).submatrix(0, o.rows(), s, q);
      if (po.rank() != po.rows() || cokernel_invariants(po, q).order() != Integer(1)) continue;
      out.push_back(std::move(o));
    }
    return out;
  };
  std::vector<IntMat> chosen(classes.size());
  std::vector<bool> used(classes.size(), false);
  size_t nodes = 0;
  bool out = false;
  std::function<bool(size_t, const IntMat&)> rec = [&](size_t depth, const IntMat& cur) -> bool {
    if (depth == classes.size()) return cur.det().is_unit();
    IntMat basis = cur.rows() == 0 ? IntMat::identity(r) : cur.vstack(complete_to_basis(cur));
    IntMat binv = basis.inverse_unimodular();
    // Branch on the unplaced class with the fewest candidates.
    size_t best = classes.size();
    std::vector<IntMat> best_cs;
    std::set<size_t> tried_cls;
    for (size_t j = 0; j < classes.size(); ++j) {
      if (used[j] || !tried_cls.insert(classes[j]).second) continue;
      auto cs = candidates(classes[j], cur.rows(), binv);
      if (cs.empty()) return false;
      if (best == classes.size() || cs.size() < best_cs.size()) {
        best = j;
        best_cs = std::move(cs);
      }
    }
    used[best] = true;
    for (const auto& o : best_cs) {
      if (++nodes > budget) {
        out = true;
        break;
      }
      chosen[best] = o;
      if (rec(depth + 1, cur.vstack(o))) return true;
      if (out) break;
    }
    used[best] = false;
    return false;
  };
  if (!rec(0, IntMat(0, r))) return std::nullopt;
  IntMat mat(0, r);
  for (size_t j = 0; j < classes.size(); ++j) mat = mat.vstack(chosen[j]);
  EquivariantMap map{perm, m, mat};
  if (!map.verify() || !mat.det().is_unit()) return std::nullopt;
  return map;
}

PermRecognition recognize_permutation(const GLattice& m, size_t budget) {
  PermRecognition res;
  auto cands = permutation_candidates(m);
  if (cands.empty()) {
    res.verdict = SearchVerdict::ProvablyNot;
    res.reason = "fixed ranks and H^0 multiplicities match no permutation lattice";
    return res;
  }
  const auto& cls = m.group->subgroup_classes().classes;
  bool all_not = true;
  for (const auto& cand : cands) {
    std::vector<GLattice> parts;
    for (size_t i : cand) parts.push_back(coset_lattice(cls[i].representative));
    GLattice perm = parts.empty() ? trivial_lattice(m.group, 0) : direct_sum(parts);
    if (auto pm = permutation_isomorphism(m, cand, budget)) {
      res.verdict = SearchVerdict::Found;
      res.class_multiset = cand;
      res.perm = std::move(perm);
      res.map = std::move(pm);
      return res;
    }
    IsoResult iso = find_isomorphism(perm, m, budget);
    if (iso.verdict == SearchVerdict::Found) {
      res.verdict = SearchVerdict::Found;
      res.class_multiset = cand;
      res.perm = std::move(perm);
      res.map = iso.map;
      return res;
    }
    if (iso.verdict != SearchVerdict::ProvablyNot) all_not = false;
  }
  if (all_not && cands.size() < 64) {
    res.verdict = SearchVerdict::ProvablyNot;
    res.reason = "no candidate permutation lattice is isomorphic";
  } else {
    res.reason = "no isomorphism to a candidate permutation lattice found within budget";
  }
  return res;
}

SignPermRecognition recognize_sign_permutation(const GLattice& m, size_t budget) {
  SignPermRecognition res;
  const size_t r = m.rank;
  const auto& g = m.group;
  if (r == 0) {
    res.verdict = SearchVerdict::Found;
    res.basis = IntMat(0, 0);
    return res;
  }
  long long bound = r <= 4 ? 3 : r <= 6 ? 2 : r <= 12 ? 1 : 0;
  if (bound == 0) {
    res.reason = "rank too large for the short-vector search";
    return res;
  }
  using Vec = std::vector<long long>;
  auto canon = [](Vec v) {
    for (long long x : v)
      if (x != 0) {
        if (x < 0)
          for (auto& y : v) y = -y;
        break;
      }
    return v;
  };
  // Candidate vectors: first non-zero entry positive, sorted by length then lex.
  std::vector<Vec> cands;
  Vec v(r, -bound);
  for (;;) {
    bool nonzero = false;
    for (long long x : v)
      if (x) {
        nonzero = true;
        break;
      }
    if (nonzero && canon(v) == v) cands.push_back(v);
    size_t i = 0;
    while (i < r && v[i] == bound) v[i++] = -bound;
    if (i == r) break;
    ++v[i];
  }
  std::stable_sort(cands.begin(), cands.end(), [](const Vec& a, const Vec& b) {
    long long na = 0, nb = 0;
    for (long long x : a) na += x * x;
    for (long long x : b) nb += x * x;
    return na != nb ? na < nb : a < b;
  });
  // Line orbits of size at most r whose lines are independent and primitive.
  std::set<Vec> seen;
  std::vector<IntMat> orbs;
  for (const auto& c : cands) {
    if (seen.count(c)) continue;
    std::set<Vec> lines;
    IntMat row(1, r);
    for (size_t j = 0; j < r; ++j) row(0, j) = Integer(c[j]);
    bool big = false;
    for (Elt e = 0; e < g->order() && !big; ++e) {
      IntMat w = row * m.act(e);
      Vec wv(r);
      for (size_t j = 0; j < r; ++j) wv[j] = w(0, j).to_int64();
      lines.insert(canon(wv));
      if (lines.size() > r) big = true;
    }
    for (const auto& l : lines) seen.insert(l);
    if (big) continue;
    IntMat o(0, r);
    for (const auto& l : lines) {
      std::vector<Integer> iv(l.begin(), l.end());
      o.append_row(iv);
    }
    if (o.rank() != o.rows() || cokernel_invariants(o, r).order() != Integer(1)) continue;
    orbs.push_back(std::move(o));
  }
  size_t nodes = 0;
  IntMat cur(0, r);
  std::optional<IntMat> found;
  bool out_of_budget = false;
  auto rec = [&](auto&& self, size_t start) -> void {
    if (found || out_of_budget) return;
    if (cur.rows() == r) {
      if (cur.det().is_unit()) found = cur;
      return;
    }
    for (size_t k = start; k < orbs.size() && !found && !out_of_budget; ++k) {
      if (cur.rows() + orbs[k].rows() > r) continue;
      if (++nodes > budget) {
        out_of_budget = true;
        return;
      }
      IntMat next = cur.vstack(orbs[k]);
      if (next.rank() != next.rows() || cokernel_invariants(next, r).order() != Integer(1)) continue;
      IntMat saved = cur;
      cur = std::move(next);
      self(self, k + 1);
      cur = std::move(saved);
    }
  };
  rec(rec, 0);
  if (found) {
    res.verdict = SearchVerdict::Found;
    res.basis = *found;
    return res;
  }
  res.reason = out_of_budget ? "search budget exhausted" : "no basis among short vectors";
  return res;
}

}  // namespace tori
