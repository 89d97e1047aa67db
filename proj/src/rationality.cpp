#include "tori/rationality.hpp"

#include <numeric>

namespace tori {

namespace {

Evidence make_step(std::string kind, std::string detail) {
  Evidence ev;
  ev.kind = std::move(kind);
  ev.detail = std::move(detail);
  return ev;
}

bool is_permutation_matrix(const IntMat& a) {
  for (size_t i = 0; i < a.rows(); ++i) {
    size_t ones = 0;
    for (size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j).is_zero()) continue;
      if (a(i, j) != Integer(1)) return false;
      ++ones;
    }
    if (ones != 1) return false;
  }
  return true;
}

bool acts_by_permutations(const GLattice& m) {
  for (const auto& a : m.action)
    if (!is_permutation_matrix(a)) return false;
  return true;
}

bool is_iso(const std::optional<EquivariantMap>& f) {
  return f && f->verify() && f->matrix.rows() == f->matrix.cols() && f->matrix.det().is_unit();
}

size_t index_of(const GroupPtr& g, size_t k) { return g->order() / g->subgroup_classes().classes[k].representative.order(); }

bool is_central(const GroupPtr& g, Elt z) {
  for (Elt s : g->generators())
    if (g->mul(s, z) != g->mul(z, s)) return false;
  return true;
}

// A central element of the given order, if any.
std::optional<Elt> central_of_order(const GroupPtr& g, size_t order) {
  for (Elt z = 0; z < g->order(); ++z)
    if (g->element_order(z) == order && is_central(g, z)) return z;
  return std::nullopt;
}

bool is_power_of(size_t n, size_t p) {
  if (n < 1) return false;
  while (n % p == 0) n /= p;
  return n == 1;
}

size_t factorial(size_t n) {
  size_t f = 1;
  for (size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

bool is_prime(size_t n) {
  if (n < 2) return false;
  for (size_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Idempotent e in End_G(m) other than 0 and 1, from small combinations of a basis.
std::optional<IntMat> find_idempotent(const GLattice& m) {
  auto basis = hom_lattice(m, m);
  const size_t k = basis.size();
  if (k <= 1 || k > 8) return std::nullopt;
  const IntMat id = IntMat::identity(m.rank);
  std::vector<int> c(k, -1);
  while (true) {
    IntMat e(m.rank, m.rank);
    for (size_t i = 0; i < k; ++i)
      if (c[i]) e = e + basis[i].scaled(Integer(c[i]));
    if (!e.is_zero() && e != id && e * e == e) return e;
    size_t i = 0;
    while (i < k && c[i] == 1) c[i++] = -1;
    if (i == k) break;
    ++c[i];
  }
  return std::nullopt;
}

std::optional<Evidence> detect(const GLattice& m, const ClassifyOptions& opt, size_t depth) {
  const auto& g = m.group;
  const auto& cls = g->subgroup_classes().classes;
  if (m.rank == 0) {
    Evidence ev = make_step("zero", "zero lattice");
    ev.lattice = m;
    return ev;
  }
  auto perm = recognize_permutation(m, opt.iso_budget);
  if (perm.verdict == SearchVerdict::Found) {
    Evidence ev = make_step("permutation", "isomorphic to a permutation lattice");
    ev.map = perm.map;
    return ev;
  }
  auto sp = recognize_sign_permutation(m);
  if (sp.verdict == SearchVerdict::Found) {
    Evidence ev = make_step("sign_permutation", "basis permuted up to sign");
    ev.lattice = m;
    ev.basis = sp.basis;
    return ev;
  }
  // Augmentation ideals, then coprime tensor products of two of them.
  std::vector<size_t> idx(cls.size());
  for (size_t k = 0; k < cls.size(); ++k) idx[k] = index_of(g, k);
  for (size_t k = 0; k < cls.size(); ++k) {
    if (idx[k] < 2 || idx[k] - 1 != m.rank) continue;
    GLattice aug = aug_ideal(coset_gset(cls[k].representative));
    auto iso = find_isomorphism(aug, m, opt.iso_budget);
    if (iso.verdict == SearchVerdict::Found) {
      Evidence ev = make_step("augmentation_ideal", "I_{G/H} with |G/H| = " + std::to_string(idx[k]));
      ev.map = iso.map;
      return ev;
    }
  }
  for (size_t a = 0; a < cls.size(); ++a)
    for (size_t b = a; b < cls.size(); ++b) {
      if (idx[a] < 2 || idx[b] < 2 || std::gcd(idx[a], idx[b]) != 1) continue;
      if ((idx[a] - 1) * (idx[b] - 1) != m.rank) continue;
      GLattice t = tensor(aug_ideal(coset_gset(cls[a].representative)), aug_ideal(coset_gset(cls[b].representative)));
      auto iso = find_isomorphism(t, m, opt.iso_budget);
      if (iso.verdict == SearchVerdict::Found) {
        Evidence ev = make_step("coprime_tensor",
                    "I_X (x) I_Y with |X| = " + std::to_string(idx[a]) + ", |Y| = " + std::to_string(idx[b]));
        ev.map = iso.map;
        return ev;
      }
    }
  if (depth == 0) return std::nullopt;

  if (auto e = find_idempotent(m)) {
    IntMat b1 = row_basis(*e), b2 = row_basis(IntMat::identity(m.rank) - *e);
    GLattice s1 = sublattice(m, b1), s2 = sublattice(m, b2);
    auto d1 = detect(s1, opt, depth - 1);
    auto d2 = d1 ? detect(s2, opt, depth - 1) : std::nullopt;
    if (d1 && d2) {
      Evidence ev = make_step("direct_sum", "summands of ranks " + std::to_string(s1.rank) + " and " + std::to_string(s2.rank));
      ev.map = EquivariantMap{direct_sum(s1, s2), m, b1.vstack(b2)};
      ev.parts = {*d1, *d2};
      return ev;
    }
  }

  // 0 -> M' -> M -> Z[G/H] -> 0 with M' detected.
  for (size_t k = cls.size(); k-- > 0;) {
    if (idx[k] >= m.rank) continue;
    GLattice p = coset_lattice(cls[k].representative);
    auto homs = hom_lattice(m, p);
    std::vector<IntMat> trial = homs;
    for (size_t i = 0; i < homs.size() && i < 4; ++i)
      for (size_t j = i + 1; j < homs.size() && j < 4; ++j) {
        trial.push_back(homs[i] + homs[j]);
        trial.push_back(homs[i] - homs[j]);
      }
    for (const auto& f : trial) {
      if (f.rank() != p.rank || !cokernel_invariants(f, p.rank).is_zero()) continue;
      IntMat ker = kernel_basis(f);
      GLattice sub = sublattice(m, ker);
      auto d = detect(sub, opt, depth - 1);
      if (!d) continue;
      Evidence ev = make_step("extension", "quotient Z[G/H] with |G/H| = " + std::to_string(idx[k]));
      ev.sequence = make_sequence(sub, m, p, ker, f);
      ev.parts = {*d};
      return ev;
    }
  }
  return std::nullopt;
}

Evidence structure_step(const std::string& detail, std::function<bool()> check) {
  Evidence ev = make_step("structure", detail);
  ev.recheck = std::move(check);
  return ev;
}

}  // namespace

std::string to_string(Level l) {
  switch (l) {
    case Level::HereditarilyRational: return "HereditarilyRational";
    case Level::Rational: return "Rational";
    case Level::StablyRational: return "StablyRational";
    case Level::RetractRational: return "RetractRational";
    case Level::NotRetractRational: return "NotRetractRational";
    case Level::Unknown: return "Unknown";
  }
  return "Unknown";
}

bool at_least(Level have, Level want) {
  auto chain = [](Level l) -> int {
    switch (l) {
      case Level::HereditarilyRational: return 4;
      case Level::Rational: return 3;
      case Level::StablyRational: return 2;
      case Level::RetractRational: return 1;
      default: return 0;
    }
  };
  if (want == Level::NotRetractRational || want == Level::Unknown) return have == want;
  return chain(have) >= chain(want);
}

bool Evidence::verify() const {
  for (const auto& p : parts)
    if (!p.verify()) return false;
  if (kind == "zero") return lattice && lattice->rank == 0;
  if (kind == "permutation") return is_iso(map) && acts_by_permutations(map->source);
  if (kind == "sign_permutation") {
    if (!lattice || !basis || !basis->det().is_unit()) return false;
    GLattice b = change_basis(*lattice, *basis);
    for (const auto& a : b.action)
      for (size_t i = 0; i < a.rows(); ++i) {
        size_t nz = 0;
        for (size_t j = 0; j < a.cols(); ++j)
          if (!a(i, j).is_zero()) {
            if (!a(i, j).is_unit()) return false;
            ++nz;
          }
        if (nz != 1) return false;
      }
    return true;
  }
  if (kind == "augmentation_ideal" || kind == "coprime_tensor") return is_iso(map);
  if (kind == "direct_sum") return is_iso(map) && parts.size() == 2;
  if (kind == "extension")
    return sequence && verify_exact(*sequence) && acts_by_permutations(sequence->right) && parts.size() == 1;
  if (kind == "flasque_resolution") return sequence && verify_exact(*sequence) && is_flasque(sequence->right);
  if (kind == "quasi_permutation")
    return sequence && verify_exact(*sequence) && acts_by_permutations(sequence->right) && is_iso(map);
  if (kind == "obstruction") return witness && lattice && witness->verify(*lattice);
  return recheck ? recheck() : false;
}

bool RationalityVerdict::verify() const {
  for (const auto& e : certificate)
    if (!e.verify()) return false;
  return true;
}

std::optional<Evidence> detect_hereditary(const GLattice& m, const ClassifyOptions& opt) {
  return detect(m, opt, opt.detector_depth);
}

RationalityVerdict classify(const GLattice& m, const ClassifyOptions& opt) {
  RationalityVerdict v;
  if (auto ev = detect_hereditary(m, opt)) {
    v.level = Level::HereditarilyRational;
    v.stable = Tri::Yes;
    v.certificate.push_back(std::move(*ev));
    return v;
  }
  FlasqueResolution fr = flasque_resolution(m);
  const GLattice f = fr.cert.right;
  {
    Evidence ev = make_step("flasque_resolution", "flasque term of rank " + std::to_string(f.rank));
    ev.sequence = fr.cert;
    v.certificate.push_back(std::move(ev));
  }
  if (opt.stable_search) {
    size_t budget = opt.padding_rank ? opt.padding_rank : std::max<size_t>(f.rank, 1);
    QuasiPermResult q = quasi_permutation_check(m, budget, opt.iso_budget);
    if (q.verdict == Tri::Yes) {
      v.level = Level::StablyRational;
      v.stable = Tri::Yes;
      Evidence ev = make_step("quasi_permutation", q.reason);
      ev.map = q.iso;
      ev.sequence = q.closing;
      v.certificate.push_back(std::move(ev));
      v.notes = "stable rationality is certified; rationality is not decided";
      return v;
    }
    if (q.verdict == Tri::No) {
      v.stable = Tri::No;
      Evidence ev = make_step("obstruction", q.reason);
      ev.witness = q.witness;
      ev.lattice = f;
      v.certificate.push_back(std::move(ev));
    } else {
      v.notes = q.reason;
    }
  }
  InvertibilityResult inv = is_invertible(f);
  if (inv.verdict == SearchVerdict::Found) {
    v.level = Level::RetractRational;
    v.certificate.push_back(structure_step("flasque term is invertible", [f] {
      return is_invertible(f).verdict == SearchVerdict::Found;
    }));
  } else if (inv.verdict == SearchVerdict::ProvablyNot) {
    v.level = Level::NotRetractRational;
    v.stable = Tri::No;
    v.certificate.push_back(structure_step("flasque term is not invertible: " + inv.reason, [f] {
      return is_invertible(f).verdict == SearchVerdict::ProvablyNot;
    }));
  } else {
    v.level = Level::Unknown;
    if (!v.notes.empty()) v.notes += "; ";
    v.notes += "invertibility undecided: " + inv.reason;
  }
  return v;
}

// ---------------------------------------------------------------- structure

bool is_cyclic_group(const GroupPtr& g) {
  for (Elt e = 0; e < g->order(); ++e)
    if (g->element_order(e) == g->order()) return true;
  return false;
}

bool sylows_cyclic(const GroupPtr& g) {
  const size_t n = g->order();
  for (unsigned p : prime_divisors(n)) {
    size_t pp = 1;
    while (n % (pp * p) == 0) pp *= p;
    bool found = false;
    for (Elt e = 0; e < n && !found; ++e) found = g->element_order(e) == pp;
    if (!found) return false;
  }
  return true;
}

bool is_nilpotent(const GroupPtr& g) {
  // Each Sylow subgroup is normal iff the p-elements number exactly |P|.
  const size_t n = g->order();
  for (unsigned p : prime_divisors(n)) {
    size_t pp = 1;
    while (n % (pp * p) == 0) pp *= p;
    size_t count = 0;
    for (Elt e = 0; e < n; ++e)
      if (is_power_of(g->element_order(e), p)) ++count;
    if (count != pp) return false;
  }
  return true;
}

bool galois_stable_shape(const GroupPtr& g) {
  if (is_cyclic_group(g)) return true;
  if (!sylows_cyclic(g)) return false;
  const size_t n = g->order();
  for (Elt s = 0; s < n; ++s) {
    size_t k = g->element_order(s);
    if (k < 3 || k % 2 == 0) continue;
    Elt sinv = g->inv(s);
    for (Elt t = 0; t < n; ++t) {
      size_t td = g->element_order(t);
      if (td < 2 || !is_power_of(td, 2)) continue;
      if (g->conj(t, s) != sinv) continue;
      if (n % (k * td) != 0) continue;
      size_t rest = n / (k * td);
      if (rest % 2 == 0 || std::gcd(rest, k) != 1) continue;
      if (central_of_order(g, rest)) return true;
    }
  }
  return false;
}

bool dihedral_stable_shape(const GroupPtr& g, const Subgroup& h) {
  if (h.order() != 2) return false;
  const Elt t = h.members[0] == 0 ? h.members[1] : h.members[0];
  const size_t n = g->order();
  for (Elt s = 0; s < n; ++s) {
    size_t k = g->element_order(s);
    if (k < 3 || k % 2 == 0) continue;
    if (g->conj(t, s) != g->inv(s)) continue;
    if (n % (2 * k) != 0) continue;
    size_t m = n / (2 * k);
    if (std::gcd(m, 2 * k) != 1) continue;
    if (central_of_order(g, m)) return true;
  }
  return false;
}

RationalityVerdict norm_one_structural(const NormOneSpec& spec, const ClassifyOptions& opt) {
  // Faithful image of G acting on G/H.
  GSet x = coset_gset(spec.h);
  const size_t deg = x.points;
  std::vector<IntMat> gens;
  for (Elt s : spec.g->generators()) {
    IntMat pm(deg, deg);
    for (size_t i = 0; i < deg; ++i) pm(i, x.action[s][i]) = Integer(1);
    gens.push_back(pm);
  }
  GroupPtr img = FiniteMatrixGroup::closure(gens);
  GSet nat = natural_gset(img);
  Subgroup hh = point_stabilizer(nat, 0);
  const size_t order = img->order();

  RationalityVerdict v;
  v.notes = "action kernel of order " + std::to_string(spec.g->order() / order) + "; degree " + std::to_string(deg);
  auto set = [&](Level l, Tri st, const std::string& why, std::function<bool()> chk) {
    v.level = l;
    v.stable = st;
    v.certificate.push_back(structure_step(why, std::move(chk)));
  };

  if (deg <= 1) {
    v.level = Level::HereditarilyRational;
    v.stable = Tri::Yes;
    v.certificate.push_back(structure_step("trivial torus", [] { return true; }));
    return v;
  }
  if (order == deg) {
    // Galois case.
    if (!sylows_cyclic(img))
      set(Level::NotRetractRational, Tri::No, "Galois, a Sylow subgroup is not cyclic", [img] { return !sylows_cyclic(img); });
    else if (galois_stable_shape(img))
      set(Level::StablyRational, Tri::Yes, "Galois, cyclic or C_n x (C_k : C_2^d) with inversion",
          [img] { return galois_stable_shape(img); });
    else
      set(Level::RetractRational, Tri::No, "Galois, Sylow subgroups cyclic, not of the stable shape",
          [img] { return sylows_cyclic(img) && !galois_stable_shape(img); });
  } else if (order == factorial(deg)) {
    if (deg == 3)
      set(Level::Rational, Tri::Yes, "S_3 / S_2", [] { return true; });
    else if (is_prime(deg))
      set(Level::RetractRational, Tri::No, "S_n / S_n-1 with n prime, n > 3", [] { return true; });
    else
      set(Level::NotRetractRational, Tri::No, "S_n / S_n-1 with n not prime", [] { return true; });
  } else if (deg >= 4 && order * 2 == factorial(deg)) {
    if (deg == 5) {
      // Certified on the lattice.
      GLattice j = j_lattice(coset_gset(hh));
      QuasiPermResult q = quasi_permutation_check(j, opt.padding_rank, opt.iso_budget);
      if (q.verdict == Tri::Yes) {
        set(Level::StablyRational, Tri::Yes, "A_5 / A_4", [] { return true; });
        Evidence ev = make_step("quasi_permutation", q.reason);
        ev.map = q.iso;
        ev.sequence = q.closing;
        v.certificate.push_back(std::move(ev));
      } else {
        set(Level::RetractRational, Tri::Unknown, "A_5 / A_4, stable certificate not found", [] { return true; });
      }
    } else if (is_prime(deg)) {
      set(Level::RetractRational, Tri::No, "A_n / A_n-1 with n prime, n != 5", [] { return true; });
    } else {
      set(Level::NotRetractRational, Tri::No, "A_n / A_n-1 with n not prime", [] { return true; });
    }
  } else if (is_nilpotent(img)) {
    set(Level::NotRetractRational, Tri::No, "non-Galois with nilpotent G", [img] { return is_nilpotent(img); });
  } else if (sylows_cyclic(img)) {
    if (dihedral_stable_shape(img, hh))
      set(Level::StablyRational, Tri::Yes, "C_m x D_2n, n odd, H of order 2 in D_2n",
          [img, hh] { return dihedral_stable_shape(img, hh); });
    else
      set(Level::RetractRational, Tri::No, "Sylow subgroups cyclic, not C_m x D_2n",
          [img, hh] { return sylows_cyclic(img) && !dihedral_stable_shape(img, hh); });
  } else {
    throw UnrecognizedShape("norm_one_classify: no table entry for this (G, H)");
  }

  // Tori of dimension at most 2 are rational; certify on the lattice.
  if (deg - 1 <= 2 && !at_least(v.level, Level::Rational)) {
    RationalityVerdict lv = classify(j_lattice(coset_gset(hh)), opt);
    if (at_least(lv.level, Level::Rational)) {
      v.level = Level::Rational;
      v.stable = Tri::Yes;
      for (auto& e : lv.certificate) v.certificate.push_back(std::move(e));
      v.certificate.push_back(structure_step("dimension at most 2", [deg] { return deg <= 3; }));
    }
  }
  return v;
}

RationalityVerdict norm_one_classify(const NormOneSpec& spec, const ClassifyOptions& opt) {
  try {
    return norm_one_structural(spec, opt);
  } catch (const UnrecognizedShape&) {
    RationalityVerdict v = classify(j_lattice(coset_gset(spec.h)), opt);
    v.notes = "no table entry; classified on J_{G/H}" + (v.notes.empty() ? "" : "; " + v.notes);
    return v;
  }
}

HereditaryReport hereditary_closure(const GLattice& m, const ClassifyOptions& opt) {
  HereditaryReport r;
  r.hereditary = true;
  const auto& cls = m.group->subgroup_classes().classes;
  for (size_t k = 0; k < cls.size(); ++k) {
    RationalityVerdict v = classify(restrict(m, cls[k].representative), opt);
    if (!at_least(v.level, Level::Rational)) r.hereditary = false;
    r.per_class.emplace_back(k, std::move(v));
  }
  return r;
}

}  // namespace tori
