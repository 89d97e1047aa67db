#include "tori/groups.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

namespace tori {

GroupPtr FiniteMatrixGroup::closure(const std::vector<IntMat>& gens, size_t order_cap) {
  if (gens.empty()) throw Error("closure: no generators");
  const size_t r = gens[0].rows();
  for (const auto& g : gens) {
    if (g.rows() != r || g.cols() != r) throw Error("closure: generators must be square of equal rank");
    if (!g.det().is_unit()) throw NotUnimodular("closure: generator with det != +-1: " + g.str());
  }
  auto grp = std::make_shared<FiniteMatrixGroup>();
  grp->rank_ = r;
  auto& els = grp->elements_;
  auto& index = grp->index_;
  std::vector<std::pair<Elt, size_t>> parent;  // (parent element, generator)
  els.push_back(IntMat::identity(r));
  index.emplace(els[0], 0);
  parent.emplace_back(0, 0);
  size_t layer_begin = 0, layer_end = 1;
  while (layer_begin < layer_end) {
    std::map<IntMat, std::pair<Elt, size_t>> next;
    for (size_t x = layer_begin; x < layer_end; ++x)
      for (size_t k = 0; k < gens.size(); ++k) {
        IntMat y = els[x] * gens[k];
        if (index.count(y) || next.count(y)) continue;
        next.emplace(std::move(y), std::make_pair(static_cast<Elt>(x), k));
      }
    for (auto& [m, pk] : next) {
      index.emplace(m, static_cast<Elt>(els.size()));
      els.push_back(m);
      parent.push_back(pk);
      if (els.size() > order_cap)
        throw OrderCapExceeded("closure: order exceeds cap " + std::to_string(order_cap));
    }
    layer_begin = layer_end;
    layer_end = els.size();
  }
  const size_t n = els.size();
  std::vector<std::vector<Elt>> right(gens.size(), std::vector<Elt>(n));
  for (size_t k = 0; k < gens.size(); ++k)
    for (size_t x = 0; x < n; ++x) right[k][x] = index.at(els[x] * gens[k]);
  grp->table_.assign(n * n, 0);
  for (size_t i = 0; i < n; ++i) {
    Elt* row = grp->table_.data() + i * n;
    row[0] = static_cast<Elt>(i);
    for (size_t j = 1; j < n; ++j) row[j] = right[parent[j].second][row[parent[j].first]];
  }
  for (const auto& g : gens) grp->generators_.push_back(index.at(g));
  grp->finish();
  return grp;
}

GroupPtr FiniteMatrixGroup::from_table(std::vector<IntMat> elements, std::vector<Elt> table,
                                       std::vector<Elt> generators) {
  auto grp = std::make_shared<FiniteMatrixGroup>();
  grp->rank_ = elements.empty() ? 0 : elements[0].rows();
  grp->elements_ = std::move(elements);
  grp->table_ = std::move(table);
  grp->generators_ = std::move(generators);
  for (size_t i = 0; i < grp->elements_.size(); ++i) grp->index_.emplace(grp->elements_[i], static_cast<Elt>(i));
  grp->finish();
  return grp;
}

void FiniteMatrixGroup::finish() {
  const size_t n = elements_.size();
  inverse_.assign(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (table_[i * n + j] == 0) {
        inverse_[i] = static_cast<Elt>(j);
        break;
      }
  orders_.assign(n, 1);
  for (size_t i = 1; i < n; ++i) {
    Elt x = static_cast<Elt>(i);
    size_t k = 1;
    while (x != 0) {
      x = mul(x, static_cast<Elt>(i));
      ++k;
    }
    orders_[i] = k;
  }
}

Elt FiniteMatrixGroup::pow(Elt a, long long e) const {
  long long o = static_cast<long long>(orders_[a]);
  e %= o;
  if (e < 0) e += o;
  Elt r = 0;
  for (long long i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

std::vector<IntMat> FiniteMatrixGroup::generator_matrices() const {
  std::vector<IntMat> out;
  for (Elt g : generators_) out.push_back(elements_[g]);
  return out;
}

std::optional<Elt> FiniteMatrixGroup::find(const IntMat& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool FiniteMatrixGroup::same_as(const FiniteMatrixGroup& o) const {
  return this == &o || (rank_ == o.rank_ && elements_ == o.elements_);
}

Elt FiniteMatrixGroup::evaluate_word(const std::string& word) const {
  Elt acc = 0;
  size_t i = 0;
  auto skip = [&] {
    while (i < word.size() && (word[i] == ' ' || word[i] == '*')) ++i;
  };
  skip();
  while (i < word.size()) {
    char c = word[i];
    Elt letter;
    if (c == '1') {
      letter = 0;
    } else if (c >= 'a' && c <= 'z') {
      size_t k = static_cast<size_t>(c - 'a');
      if (k >= generators_.size()) throw Error(std::string("unknown generator letter '") + c + "'");
      letter = generators_[k];
    } else {
      throw Error("bad character in word: " + word);
    }
    ++i;
    long long e = 1;
    if (i < word.size() && word[i] == '^') {
      ++i;
      size_t start = i;
      if (i < word.size() && word[i] == '-') ++i;
      while (i < word.size() && std::isdigit(static_cast<unsigned char>(word[i]))) ++i;
      if (start == i) throw Error("bad exponent in word: " + word);
      e = std::stoll(word.substr(start, i - start));
    }
    acc = mul(acc, pow(letter, e));
    skip();
  }
  return acc;
}

bool Subgroup::contains(Elt e) const { return std::binary_search(members.begin(), members.end(), e); }

std::vector<uint64_t> Subgroup::bits() const {
  std::vector<uint64_t> b((parent->order() + 63) / 64, 0);
  for (Elt e : members) b[e / 64] |= uint64_t(1) << (e % 64);
  return b;
}

std::vector<Elt> Subgroup::generators() const {
  std::vector<Elt> gens;
  std::vector<char> in(parent->order(), 0);
  in[0] = 1;
  size_t have = 1;
  for (Elt e : members) {
    if (in[e]) continue;
    gens.push_back(e);
    Subgroup s = generated_subgroup(parent, gens);
    for (Elt x : s.members) in[x] = 1;
    have = s.members.size();
    if (have == members.size()) break;
  }
  return gens;
}

GroupPtr Subgroup::as_group() const {
  const size_t n = members.size();
  std::vector<Elt> local(parent->order(), static_cast<Elt>(-1));
  for (size_t i = 0; i < n; ++i) local[members[i]] = static_cast<Elt>(i);
  std::vector<IntMat> els;
  els.reserve(n);
  for (Elt e : members) els.push_back(parent->element(e));
  std::vector<Elt> table(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) table[i * n + j] = local[parent->mul(members[i], members[j])];
  std::vector<Elt> gens;
  for (Elt g : generators()) gens.push_back(local[g]);
  if (gens.empty()) gens.push_back(0);
  return FiniteMatrixGroup::from_table(std::move(els), std::move(table), std::move(gens));
}

bool Subgroup::operator<(const Subgroup& o) const {
  if (members.size() != o.members.size()) return members.size() < o.members.size();
  return members < o.members;
}

Subgroup whole_group(const GroupPtr& g) {
  Subgroup s{g, {}};
  s.members.resize(g->order());
  std::iota(s.members.begin(), s.members.end(), 0);
  return s;
}

Subgroup trivial_subgroup(const GroupPtr& g) { return Subgroup{g, {0}}; }

Subgroup generated_subgroup(const GroupPtr& g, const std::vector<Elt>& gens) {
  std::vector<char> in(g->order(), 0);
  std::vector<Elt> queue{0};
  in[0] = 1;
  for (size_t q = 0; q < queue.size(); ++q)
    for (Elt s : gens) {
      Elt y = g->mul(queue[q], s);
      if (!in[y]) {
        in[y] = 1;
        queue.push_back(y);
      }
    }
  std::sort(queue.begin(), queue.end());
  return Subgroup{g, std::move(queue)};
}

Subgroup join(const Subgroup& h, Elt x) {
  const auto& g = h.parent;
  if (h.contains(x)) return h;
  // Close the set h u {x} under right multiplication by the generators.
  std::vector<Elt> gens = h.generators();
  gens.push_back(x);
  return generated_subgroup(g, gens);
}

Subgroup conjugate(const Subgroup& h, Elt g) {
  Subgroup s{h.parent, {}};
  s.members.reserve(h.members.size());
  for (Elt e : h.members) s.members.push_back(h.parent->conj(g, e));
  std::sort(s.members.begin(), s.members.end());
  return s;
}

Subgroup normalizer(const Subgroup& h) {
  const auto& g = h.parent;
  std::vector<char> in(g->order(), 0);
  for (Elt e : h.members) in[e] = 1;
  std::vector<Elt> gens = h.generators();
  Subgroup n{g, {}};
  for (Elt x = 0; x < g->order(); ++x) {
    bool ok = true;
    for (Elt s : gens)
      if (!in[g->conj(x, s)]) {
        ok = false;
        break;
      }
    if (ok) n.members.push_back(x);
  }
  return n;
}

Subgroup centralizer(const GroupPtr& g, const std::vector<Elt>& elts) {
  Subgroup c{g, {}};
  for (Elt x = 0; x < g->order(); ++x) {
    bool ok = true;
    for (Elt s : elts)
      if (g->mul(x, s) != g->mul(s, x)) {
        ok = false;
        break;
      }
    if (ok) c.members.push_back(x);
  }
  return c;
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
  Subgroup s{a.parent, {}};
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                        std::back_inserter(s.members));
  return s;
}

bool is_normal(const Subgroup& h) { return normalizer(h).order() == h.parent->order(); }

bool is_subset(const Subgroup& a, const Subgroup& b) {
  return std::includes(b.members.begin(), b.members.end(), a.members.begin(), a.members.end());
}

std::vector<Elt> right_coset_reps(const Subgroup& h) {
  const auto& g = h.parent;
  std::vector<char> done(g->order(), 0);
  std::vector<Elt> reps;
  for (Elt t = 0; t < g->order(); ++t) {
    if (done[t]) continue;
    reps.push_back(t);
    for (Elt e : h.members) done[g->mul(e, t)] = 1;
  }
  return reps;
}

std::vector<size_t> right_coset_index(const Subgroup& h, const std::vector<Elt>& reps) {
  const auto& g = h.parent;
  std::vector<size_t> idx(g->order(), 0);
  for (size_t i = 0; i < reps.size(); ++i)
    for (Elt e : h.members) idx[g->mul(e, reps[i])] = i;
  return idx;
}

size_t SubgroupClassification::total() const {
  size_t t = 0;
  for (const auto& c : classes) t += c.conjugates.size();
  return t;
}

size_t SubgroupClassification::class_of(const Subgroup& h) const {
  for (size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i];
    if (c.representative.order() != h.order()) continue;
    if (std::binary_search(c.conjugates.begin(), c.conjugates.end(), h)) return i;
  }
  throw Error("subgroup not found in classification");
}

namespace {

std::string bits_key(const std::vector<Elt>& members, size_t n) {
  std::string key((n + 7) / 8, '\0');
  for (Elt e : members) key[e / 8] = static_cast<char>(key[e / 8] | (1 << (e % 8)));
  return key;
}

struct UnionFind {
  std::vector<size_t> p;
  explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  size_t find(size_t x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(size_t a, size_t b) {
    a = find(a);
    b = find(b);
    if (a < b) std::swap(a, b);
    p[a] = b;
  }
};

}  // namespace

Subgroup canonical_conjugate(const Subgroup& h) {
  Subgroup best = h;
  for (Elt g = 1; g < h.parent->order(); ++g) {
    Subgroup c = conjugate(h, g);
    if (c.members < best.members) best = std::move(c);
  }
  return best;
}

SubgroupClassification all_subgroups(const GroupPtr& g, size_t cap) {
  const size_t n = g->order();
  if (n > cap) throw Error("all_subgroups: group order above cap");
  // cyclic subgroups
  std::vector<std::vector<Elt>> cyc;
  std::vector<Elt> cyc_gen;
  std::vector<size_t> elt_cyc(n, 0);
  std::unordered_map<std::string, size_t> cyc_index;
  for (Elt e = 0; e < n; ++e) {
    std::vector<Elt> pw{0};
    for (Elt x = e; x != 0; x = g->mul(x, e)) pw.push_back(x);
    std::sort(pw.begin(), pw.end());
    std::string key = bits_key(pw, n);
    auto it = cyc_index.find(key);
    if (it == cyc_index.end()) {
      cyc_index.emplace(key, cyc.size());
      elt_cyc[e] = cyc.size();
      cyc.push_back(std::move(pw));
      cyc_gen.push_back(e);
    } else {
      elt_cyc[e] = it->second;
    }
  }

  SubgroupClassification out;
  std::unordered_set<std::string> seen;
  std::deque<size_t> queue;
  auto add_class = [&](const Subgroup& k) {
    std::set<std::vector<Elt>> conj;
    for (Elt x = 0; x < n; ++x) conj.insert(conjugate(k, x).members);
    SubgroupClass c;
    for (const auto& m : conj) {
      seen.insert(bits_key(m, n));
      c.conjugates.push_back(Subgroup{g, m});
    }
    c.representative = c.conjugates.front();
    queue.push_back(out.classes.size());
    out.classes.push_back(std::move(c));
  };
  add_class(trivial_subgroup(g));
  while (!queue.empty()) {
    size_t ci = queue.front();
    queue.pop_front();
    Subgroup h = out.classes[ci].representative;
    if (h.order() == n) continue;
    Subgroup nh = normalizer(h);
    std::vector<Elt> ngens = nh.generators();
    UnionFind uf(cyc.size());
    for (Elt s : ngens)
      for (size_t c = 0; c < cyc.size(); ++c) uf.unite(c, elt_cyc[g->conj(s, cyc_gen[c])]);
    std::vector<char> in(n, 0);
    for (Elt e : h.members) in[e] = 1;
    for (size_t c = 0; c < cyc.size(); ++c) {
      if (uf.find(c) != c) continue;
      if (in[cyc_gen[c]]) continue;
      Subgroup k = join(h, cyc_gen[c]);
      if (seen.count(bits_key(k.members, n))) continue;
      add_class(k);
    }
  }
  std::sort(out.classes.begin(), out.classes.end(),
            [](const SubgroupClass& a, const SubgroupClass& b) { return a.representative < b.representative; });
  return out;
}

const SubgroupClassification& FiniteMatrixGroup::subgroup_classes() const {
  std::call_once(classes_once_, [this] {
    // The classification refers back to this group through a non-owning
    // pointer; the group outlives its cache.
    GroupPtr self(std::shared_ptr<const FiniteMatrixGroup>(), this);
    classes_ = std::make_shared<SubgroupClassification>(all_subgroups(self));
  });
  return *classes_;
}

std::vector<size_t> FiniteMatrixGroup::p_subgroup_class_indices() const {
  const auto& cls = subgroup_classes();
  std::vector<size_t> out;
  for (size_t i = 0; i < cls.classes.size(); ++i) {
    size_t n = cls.classes[i].representative.order();
    if (n == 1) continue;
    if (prime_divisors(n).size() == 1) out.push_back(i);
  }
  return out;
}

const std::vector<std::vector<size_t>>& FiniteMatrixGroup::table_of_marks() const {
  std::call_once(marks_once_, [this] {
    const auto& cls = subgroup_classes().classes;
    const size_t c = cls.size();
    marks_.assign(c, std::vector<size_t>(c, 0));
    std::vector<std::vector<Elt>> gens(c);
    for (size_t i = 0; i < c; ++i) gens[i] = cls[i].representative.generators();
    for (size_t j = 0; j < c; ++j) {
      const Subgroup& h = cls[j].representative;
      std::vector<char> in(order(), 0);
      for (Elt e : h.members) in[e] = 1;
      std::vector<Elt> reps = right_coset_reps(h);
      for (size_t i = 0; i < c; ++i) {
        if (cls[i].representative.order() > h.order() || h.order() % cls[i].representative.order()) continue;
        size_t cnt = 0;
        for (Elt t : reps) {
          bool fixed = true;
          for (Elt k : gens[i])
            if (!in[conj(t, k)]) {
              fixed = false;
              break;
            }
          if (fixed) ++cnt;
        }
        marks_[i][j] = cnt;
      }
    }
  });
  return marks_;
}

std::vector<unsigned> prime_divisors(size_t n) {
  std::vector<unsigned> ps;
  for (unsigned p = 2; static_cast<size_t>(p) * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(static_cast<unsigned>(n));
  return ps;
}

Subgroup sylow(const GroupPtr& g, unsigned p) {
  size_t target = 1;
  for (size_t n = g->order(); n % p == 0; n /= p) target *= p;
  Subgroup cur = trivial_subgroup(g);
  auto is_p_power = [p](size_t k) {
    while (k % p == 0) k /= p;
    return k == 1;
  };
  while (cur.order() < target) {
    Subgroup nrm = normalizer(cur);
    bool grown = false;
    for (Elt x : nrm.members) {
      if (cur.contains(x) || !is_p_power(g->element_order(x))) continue;
      cur = join(cur, x);
      grown = true;
      break;
    }
    if (!grown) throw Error("sylow: failed to grow p-subgroup");
  }
  return canonical_conjugate(cur);
}

std::vector<DoubleCoset> double_cosets(const GroupPtr& g, const Subgroup& a, const Subgroup& b) {
  std::vector<char> done(g->order(), 0);
  std::vector<DoubleCoset> out;
  for (Elt x = 0; x < g->order(); ++x) {
    if (done[x]) continue;
    size_t cnt = 0;
    for (Elt s : a.members)
      for (Elt t : b.members) {
        Elt y = g->mul(g->mul(s, x), t);
        if (!done[y]) {
          done[y] = 1;
          ++cnt;
        }
      }
    out.push_back(DoubleCoset{x, intersect(a, conjugate(b, x)), cnt});
  }
  return out;
}

StructureProbe structure_probe(const GroupPtr& g) {
  StructureProbe sp;
  sp.order = g->order();
  for (Elt e = 0; e < g->order(); ++e)
    if (g->element_order(e) == g->order()) sp.is_cyclic = true;
  const auto& gens = g->generators();
  sp.is_abelian = true;
  for (Elt a : gens)
    for (Elt b : gens)
      if (g->mul(a, b) != g->mul(b, a)) sp.is_abelian = false;
  sp.sylows_all_cyclic = true;
  for (unsigned p : prime_divisors(g->order())) {
    size_t pp = 1;
    for (size_t n = g->order(); n % p == 0; n /= p) pp *= p;
    bool found = false;
    for (Elt e = 0; e < g->order() && !found; ++e)
      if (g->element_order(e) == pp) found = true;
    if (!found) sp.sylows_all_cyclic = false;
  }
  sp.center = centralizer(g, gens);
  for (const auto& c : g->subgroup_classes().classes)
    if (c.conjugates.size() == 1) sp.normal_subgroups.push_back(c.representative);
  return sp;
}

Quotient quotient_group(const Subgroup& n) {
  const auto& g = n.parent;
  std::vector<Elt> reps = right_coset_reps(n);
  std::vector<size_t> idx = right_coset_index(n, reps);
  const size_t k = reps.size();
  auto perm_matrix = [&](Elt x) {
    IntMat m(k, k);
    for (size_t i = 0; i < k; ++i) m(i, idx[g->mul(reps[i], x)]) = Integer(1);
    return m;
  };
  std::vector<IntMat> gens;
  for (Elt s : g->generators()) gens.push_back(perm_matrix(s));
  Quotient q;
  q.group = FiniteMatrixGroup::closure(gens);
  q.image.resize(g->order());
  for (Elt x = 0; x < g->order(); ++x) q.image[x] = *q.group->find(perm_matrix(x));
  return q;
}

}  // namespace tori
