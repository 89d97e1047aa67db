#include "tori/homology.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <numeric>

namespace tori {

namespace {

std::atomic<bool> audit_on{false};
std::atomic<size_t> audit_produced{0}, audit_passed{0};

void audit(const std::function<bool()>& check) {
  if (!audit_on.load()) return;
  ++audit_produced;
  if (check()) ++audit_passed;
}

bool in_span(const IntMat& rows, const IntMat& v) {
  if (rows.rows() == 0) return v.is_zero();
  return in_row_lattice(rows, v);
}

IntMat cols_of(const IntMat& a, size_t c0, size_t nc) { return a.submatrix(0, a.rows(), c0, nc); }

IntMat zero(size_t r, size_t c) { return IntMat(r, c); }

// Orbit sums of the points of x under the subgroup h.
std::vector<std::vector<uint32_t>> subgroup_orbits(const GSet& x, const Subgroup& h) {
  std::vector<int> seen(x.points, -1);
  std::vector<std::vector<uint32_t>> out;
  std::vector<Elt> gens = h.generators();
  for (uint32_t p = 0; p < x.points; ++p) {
    if (seen[p] >= 0) continue;
    std::vector<uint32_t> orb{p};
    seen[p] = 1;
    for (size_t q = 0; q < orb.size(); ++q)
      for (Elt s : gens) {
        uint32_t y = x.action[s][orb[q]];
        if (seen[y] < 0) {
          seen[y] = 1;
          orb.push_back(y);
        }
      }
    out.push_back(std::move(orb));
  }
  return out;
}

struct SummandData {
  PermSummand s;
  GSet cosets;
  IntMat images;  // one row per coset
};

SummandData summand_data(const GLattice& m, size_t cls, const IntMat& v) {
  const Subgroup& k = m.group->subgroup_classes().classes[cls].representative;
  SummandData d{{cls, v}, coset_gset(k), IntMat(0, m.rank)};
  std::vector<Elt> reps = right_coset_reps(k);
  d.images = IntMat(reps.size(), m.rank);
  for (size_t x = 0; x < reps.size(); ++x) {
    IntMat r = v * m.act(reps[x]);
    for (size_t j = 0; j < m.rank; ++j) d.images(x, j) = r(0, j);
  }
  return d;
}

// Image of P^H in M for the given summands.
IntMat fixed_image(const std::vector<SummandData>& ss, const Subgroup& h, size_t rank) {
  IntMat rows(0, rank);
  for (const auto& s : ss)
    for (const auto& orb : subgroup_orbits(s.cosets, h)) {
      IntMat sum(1, rank);
      for (uint32_t p : orb)
        for (size_t j = 0; j < rank; ++j) sum(0, j) += s.images(p, j);
      if (!sum.is_zero()) rows = rows.vstack(sum);
    }
  return rows.rows() ? row_basis(rows) : rows;
}

bool covers(const std::vector<SummandData>& ss, const Subgroup& h, const IntMat& fixed, size_t rank) {
  IntMat img = fixed_image(ss, h, rank);
  for (size_t i = 0; i < fixed.rows(); ++i)
    if (!in_span(img, fixed.row(i))) return false;
  return true;
}

Integer integer(size_t n) { return Integer(static_cast<long long>(n)); }

}  // namespace

// ---------------------------------------------------------------- sequences

ExactSequenceCert make_sequence(const GLattice& left, const GLattice& mid, const GLattice& right, const IntMat& inj,
                                const IntMat& surj) {
  return {left, mid, right, EquivariantMap{left, mid, inj}, EquivariantMap{mid, right, surj}};
}

ExactnessReport check_exact(const ExactSequenceCert& c) {
  auto fail = [](const std::string& why) { return ExactnessReport{false, why}; };
  if (c.inj.matrix.rows() != c.left.rank || c.inj.matrix.cols() != c.mid.rank ||
      c.surj.matrix.rows() != c.mid.rank || c.surj.matrix.cols() != c.right.rank)
    return fail("shape: map sizes do not match the lattices");
  if (!c.inj.verify() || !c.surj.verify()) return fail("equivariance");
  if (c.left.rank > 0) {
    if (c.inj.matrix.rank() != c.left.rank) return fail("injectivity");
    if (cokernel_invariants(c.inj.matrix, c.mid.rank).order() != Integer(1)) return fail("saturation");
  }
  if (c.left.rank + c.right.rank != c.mid.rank) return fail("kernel equality: ranks do not add up");
  if (c.left.rank > 0 && c.right.rank > 0 && !(c.inj.matrix * c.surj.matrix).is_zero())
    return fail("kernel equality: surj o inj is not zero");
  if (c.right.rank > 0) {
    if (c.mid.rank == 0 || !cokernel_invariants(c.surj.matrix, c.right.rank).is_zero())
      return fail("surjectivity");
  }
  return {true, ""};
}

bool verify_exact(const ExactSequenceCert& c) { return check_exact(c).ok; }

ExactSequenceCert dual_sequence(const ExactSequenceCert& c) {
  return make_sequence(dual(c.right), dual(c.mid), dual(c.left), c.surj.matrix.transpose(),
                       c.inj.matrix.transpose());
}

GLattice permutation_lattice_of(const GroupPtr& g, const std::vector<size_t>& classes) {
  if (classes.empty()) return trivial_lattice(g, 0);
  const auto& cls = g->subgroup_classes().classes;
  std::vector<GLattice> parts;
  for (size_t k : classes) parts.push_back(coset_lattice(cls[k].representative));
  return parts.size() == 1 ? parts[0] : direct_sum(parts);
}

// ---------------------------------------------------------------- resolutions

CoflasqueResolution coflasque_resolution(const GLattice& m) {
  const auto& g = m.group;
  const auto& cls = g->subgroup_classes().classes;
  const size_t r = m.rank;
  std::vector<IntMat> fixed(cls.size());
  for (size_t k = 0; k < cls.size(); ++k) fixed[k] = fixed_sublattice(m, cls[k].representative);

  // Largest subgroups first; a summand is added for each reduced fixed basis
  // vector not yet in the image of P^H.
  std::vector<SummandData> ss;
  for (size_t k = cls.size(); k-- > 0;) {
    const Subgroup& h = cls[k].representative;
    IntMat img = fixed_image(ss, h, r);
    IntMat reduced = fixed[k].rows() ? lll(fixed[k]) : fixed[k];
    for (size_t i = 0; i < reduced.rows(); ++i) {
      IntMat v = reduced.row(i);
      if (in_span(img, v)) continue;
      ss.push_back(summand_data(m, k, v));
      img = fixed_image(ss, h, r);
    }
  }
  // Drop summands, latest first, while P^H -> M^H stays onto for every H.
  for (size_t i = ss.size(); i-- > 0;) {
    std::vector<SummandData> trial = ss;
    trial.erase(trial.begin() + static_cast<long>(i));
    bool ok = true;
    for (size_t k = 0; k < cls.size() && ok; ++k) ok = covers(trial, cls[k].representative, fixed[k], r);
    if (ok) ss = std::move(trial);
  }

  CoflasqueResolution out;
  std::vector<size_t> classes;
  IntMat surj(0, r);
  for (const auto& s : ss) {
    out.summands.push_back(s.s);
    classes.push_back(s.s.subgroup_class);
    surj = surj.vstack(s.images);
  }
  GLattice p = permutation_lattice_of(g, classes);
  IntMat ker = p.rank ? kernel_basis(surj) : IntMat(0, 0);
  if (ker.cols() != p.rank) ker = IntMat(0, p.rank);
  GLattice c = ker.rows() ? sublattice(p, ker) : trivial_lattice(g, 0);
  out.cert = make_sequence(c, p, m, ker, surj);
  audit([&] { return verify_exact(out.cert) && is_coflasque(out.cert.left); });
  return out;
}

bool FlasqueResolution::verify() const {
  if (!verify_exact(cert)) return false;
  const auto& cls = cert.right.group->subgroup_classes().classes;
  for (const auto& chk : flasque_check)
    if (!(tate(cert.right, cls[chk.subgroup_class].representative, -1) == chk.value) || !chk.value.is_zero())
      return false;
  return true;
}

FlasqueResolution flasque_resolution(const GLattice& m) {
  CoflasqueResolution co = coflasque_resolution(dual(m));
  FlasqueResolution out;
  out.cert = dual_sequence(co.cert);
  out.cert.left = m;
  out.cert.inj.source = m;
  for (const auto& s : co.summands) out.perm_classes.push_back(s.subgroup_class);
  const auto& cls = m.group->subgroup_classes().classes;
  for (size_t k : m.group->p_subgroup_class_indices())
    out.flasque_check.push_back({k, tate(out.cert.right, cls[k].representative, -1)});
  audit([&] { return out.verify() && is_flasque(out.cert.right); });
  return out;
}

// ---------------------------------------------------------------- split sequences

bool SplitSequence::verify() const {
  if (!verify_exact(seq)) return false;
  if (section.rows() != seq.right.rank || section.cols() != seq.mid.rank) return false;
  if (!EquivariantMap{seq.right, seq.mid, section}.verify()) return false;
  if (seq.right.rank == 0) return true;
  return section * seq.surj.matrix == IntMat::scalar(seq.right.rank, degree);
}

SplitSequence j_sequence(const GSet& x) {
  const size_t n = x.points;
  GLattice z = trivial_lattice(x.group, 1), p = perm_lattice(x), j = j_lattice(x);
  IntMat inj(1, n), surj(n, n - 1), s(n - 1, n);
  for (size_t i = 0; i < n; ++i) inj(0, i) = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t c = 0; c + 1 < n; ++c) surj(i, c) = i + 1 == n ? -1 : (i == c ? 1 : 0);
  for (size_t k = 0; k + 1 < n; ++k)
    for (size_t i = 0; i < n; ++i) s(k, i) = (i == k ? integer(n) : Integer(0)) - Integer(1);
  return {make_sequence(z, p, j, inj, surj), s, integer(n)};
}

SplitSequence augmentation_sequence(const GSet& x) {
  const size_t n = x.points;
  GLattice a = aug_ideal(x), p = perm_lattice(x), z = trivial_lattice(x.group, 1);
  IntMat inj(n - 1, n), surj(n, 1), s(1, n);
  for (size_t i = 0; i + 1 < n; ++i) {
    inj(i, i) = 1;
    inj(i, i + 1) = -1;
  }
  for (size_t i = 0; i < n; ++i) surj(i, 0) = s(0, i) = 1;
  return {make_sequence(a, p, z, inj, surj), s, integer(n)};
}

SplitSequence tensor_sequence(const GLattice& d, const SplitSequence& s) {
  IntMat id = IntMat::identity(d.rank);
  const auto& q = s.seq;
  return {make_sequence(tensor(d, q.left), tensor(d, q.mid), tensor(d, q.right), id.kron(q.inj.matrix),
                        id.kron(q.surj.matrix)),
          id.kron(s.section), s.degree};
}

SplitSequence florence_combine(const SplitSequence& s1, const SplitSequence& s2) {
  if (!s1.verify()) throw SectionInvalid("florence_combine: first sequence or section fails verification");
  if (!s2.verify()) throw SectionInvalid("florence_combine: second sequence or section fails verification");
  Integer g, u, v;
  xgcd(s1.degree, s2.degree, g, u, v);
  if (!g.is_one()) throw DegreesNotCoprime("florence_combine: degrees " + s1.degree.to_string() + " and " +
                                           s2.degree.to_string() + " are not coprime");
  const auto &q1 = s1.seq, &q2 = s2.seq;
  const size_t b1 = q1.mid.rank, c1 = q1.right.rank, b2 = q2.mid.rank, c2 = q2.right.rank;
  const IntMat &pi1 = q1.surj.matrix, &pi2 = q2.surj.matrix, &t1 = s1.section, &t2 = s2.section;
  const Integer &d1 = s1.degree, &d2 = s2.degree;
  IntMat ib1 = IntMat::identity(b1), ib2 = IntMat::identity(b2), ic1 = IntMat::identity(c1),
         ic2 = IntMat::identity(c2);

  GLattice a3 = tensor(q1.left, q2.left);
  GLattice b3 = direct_sum(tensor(q1.mid, q2.mid), tensor(q1.right, q2.right));
  GLattice c3 = direct_sum(tensor(q1.right, q2.mid), tensor(q1.mid, q2.right));
  const size_t nc = c1 * b2 + b1 * c2, nw = c1 * c2;

  IntMat j3 = q1.inj.matrix.kron(q2.inj.matrix).hstack(zero(a3.rank, nw));
  // B1 (x) B2 -> (pi1 (x) 1, 1 (x) pi2); C1 (x) C2 -> (v (1 (x) s2), -u (s1 (x) 1)).
  IntMat top = pi1.kron(ib2).hstack(ib1.kron(pi2));
  IntMat phi = ic1.kron(t2).scaled(v).hstack(t1.kron(ic2).scaled(-u));
  IntMat pi3 = top.vstack(phi);
  // delta: C3 -> C1 (x) C2 with delta o phi = id.
  IntMat delta = ic1.kron(pi2).vstack(-pi1.kron(ic2));
  // t: fibre product -> B1 (x) B2 with pi3 o t = d1 d2.
  IntMat tp = t1.kron(ib2).scaled(d2) - ic1.kron(pi2) * t1.kron(t2);
  IntMat tq = ib1.kron(t2).scaled(d1);
  IntMat t = tp.vstack(tq).hstack(zero(nc, nw));
  IntMat inc = zero(nw, b1 * b2).hstack(IntMat::identity(nw));
  IntMat s3 = (IntMat::identity(nc) - delta * phi) * t + (delta * inc).scaled(d1 * d2);
  SplitSequence out{make_sequence(a3, b3, c3, j3, pi3), s3, d1 * d2};
  if (!out.verify()) throw Error("florence_combine: combined sequence failed verification");
  return out;
}

SignPermResolution sign_permutation_resolution(const GLattice& s, const IntMat& basis) {
  const auto& g = s.group;
  const size_t r = s.rank;
  GLattice sp = change_basis(s, basis);
  auto image_of = [&](Elt e, size_t i) -> std::pair<size_t, int> {
    const IntMat& a = sp.act(e);
    for (size_t j = 0; j < r; ++j)
      if (!a(i, j).is_zero()) return {j, a(i, j).sign()};
    throw Error("sign_permutation_resolution: basis is not sign-permuted");
  };
  for (Elt e = 0; e < g->order(); ++e)
    for (size_t i = 0; i < r; ++i) {
      const IntMat& a = sp.act(e);
      size_t nz = 0;
      for (size_t j = 0; j < r; ++j)
        if (!a(i, j).is_zero()) {
          if (!a(i, j).is_unit()) throw Error("sign_permutation_resolution: basis is not sign-permuted");
          ++nz;
        }
      if (nz != 1) throw Error("sign_permutation_resolution: basis is not sign-permuted");
    }
  SignPermResolution out;
  const auto& classes = g->subgroup_classes();
  std::vector<bool> seen(r, false);
  std::vector<GLattice> lefts, mids;
  std::vector<IntMat> surj_blocks, inj_blocks;  // inj blocks indexed against their own mid summand
  for (size_t i = 0; i < r; ++i) {
    if (seen[i]) continue;
    Subgroup gv{g, {}}, gpm{g, {}};
    for (Elt e = 0; e < g->order(); ++e) {
      auto [j, sg] = image_of(e, i);
      seen[j] = true;
      if (j != i) continue;
      gpm.members.push_back(e);
      if (sg > 0) gv.members.push_back(e);
    }
    std::vector<Elt> reps = right_coset_reps(gv);
    std::vector<size_t> idx = right_coset_index(gv, reps);
    IntMat surj(reps.size(), r);
    for (size_t x = 0; x < reps.size(); ++x) {
      IntMat row = sp.act(reps[x]).row(i) * basis;
      for (size_t c = 0; c < r; ++c) surj(x, c) = row(0, c);
    }
    mids.push_back(coset_lattice(gv));
    out.mid_classes.push_back(classes.class_of(gv));
    surj_blocks.push_back(surj);
    if (gpm.order() == gv.order()) {
      inj_blocks.push_back(IntMat(0, reps.size()));
      continue;
    }
    Elt sigma = 0;
    for (Elt e : gpm.members)
      if (!gv.contains(e)) {
        sigma = e;
        break;
      }
    std::vector<Elt> reps_pm = right_coset_reps(gpm);
    IntMat inj(reps_pm.size(), reps.size());
    for (size_t y = 0; y < reps_pm.size(); ++y) {
      inj(y, idx[reps_pm[y]]) += 1;
      inj(y, idx[g->mul(sigma, reps_pm[y])]) += 1;
    }
    lefts.push_back(coset_lattice(gpm));
    out.left_classes.push_back(classes.class_of(gpm));
    inj_blocks.push_back(inj);
  }
  // Assemble block matrices.
  size_t nmid = 0, nleft = 0;
  for (const auto& m : mids) nmid += m.rank;
  for (const auto& b : inj_blocks) nleft += b.rows();
  IntMat inj(nleft, nmid), surj(0, r);
  size_t ro = 0, co = 0;
  for (size_t k = 0; k < mids.size(); ++k) {
    const IntMat& b = inj_blocks[k];
    for (size_t a = 0; a < b.rows(); ++a)
      for (size_t c = 0; c < b.cols(); ++c) inj(ro + a, co + c) = b(a, c);
    ro += b.rows();
    co += mids[k].rank;
    surj = surj.vstack(surj_blocks[k]);
  }
  GLattice left = lefts.empty() ? trivial_lattice(g, 0) : (lefts.size() == 1 ? lefts[0] : direct_sum(lefts));
  GLattice mid = mids.size() == 1 ? mids[0] : direct_sum(mids);
  out.cert = make_sequence(left, mid, s, inj, surj);
  audit([&] { return verify_exact(out.cert); });
  return out;
}

// ---------------------------------------------------------------- pullbacks

std::optional<IntMat> find_retraction(const EquivariantMap& inj) {
  const size_t a = inj.source.rank, e = inj.target.rank;
  if (a == 0) return IntMat(e, 0);
  std::vector<IntMat> basis = hom_lattice(inj.target, inj.source);
  if (basis.empty()) return std::nullopt;
  IntMat rows(0, a * a);
  for (const auto& h : basis) rows = rows.vstack((inj.matrix * h).flatten());
  auto c = solve_left(rows, IntMat::identity(a).flatten());
  if (!c) return std::nullopt;
  IntMat r(e, a);
  for (size_t k = 0; k < basis.size(); ++k)
    if (!(*c)(0, k).is_zero()) r = r + basis[k].scaled((*c)(0, k));
  return r;
}

std::optional<PullbackSplit> pullback_split(const ExactSequenceCert& bottom, const ExactSequenceCert& rightcol,
                                            size_t budget) {
  if (!verify_exact(bottom) || !verify_exact(rightcol)) throw Error("pullback_split: input sequence is not exact");
  const GLattice &a = bottom.left, &b = bottom.mid, &k = rightcol.left, &p = rightcol.mid;
  // phi: D' -> D
  IntMat phi;
  if (rightcol.right.rank == bottom.right.rank && rightcol.right.action == bottom.right.action) {
    phi = IntMat::identity(bottom.right.rank);
  } else {
    IsoResult iso = find_isomorphism(rightcol.right, bottom.right, budget);
    if (iso.verdict != SearchVerdict::Found)
      throw Error("pullback_split: quotient terms are not isomorphic (" + iso.reason + ")");
    phi = iso.map->matrix;
  }
  IntMat joint = bottom.surj.matrix.vstack(-(rightcol.surj.matrix * phi));
  IntMat eb = kernel_basis(joint);
  GLattice bp = direct_sum(b, p);
  PullbackSplit out;
  out.pullback_basis = eb;
  out.pullback = sublattice(bp, eb);
  const GLattice& e = out.pullback;

  IntMat ja = bottom.inj.matrix.hstack(zero(a.rank, p.rank));
  IntMat jk = zero(k.rank, b.rank).hstack(rightcol.inj.matrix);
  auto ca = a.rank ? coordinates_in(eb, ja) : std::optional<IntMat>(IntMat(0, e.rank));
  auto ck = k.rank ? coordinates_in(eb, jk) : std::optional<IntMat>(IntMat(0, e.rank));
  if (!ca || !ck) throw Error("pullback_split: inclusions do not land in the pullback");
  out.via_left = make_sequence(a, e, p, *ca, cols_of(eb, b.rank, p.rank));
  out.via_top = make_sequence(k, e, b, *ck, cols_of(eb, 0, b.rank));
  if (!verify_exact(out.via_left) || !verify_exact(out.via_top))
    throw Error("pullback_split: induced sequences are not exact");

  auto r1 = find_retraction(out.via_left.inj);
  auto r2 = find_retraction(out.via_top.inj);
  if (!r1 || !r2) return std::nullopt;
  IntMat to_ap = r1->hstack(out.via_left.surj.matrix);  // E -> A + P
  IntMat to_bk = out.via_top.surj.matrix.hstack(*r2);   // E -> B + K
  IntMat m = to_bk.inverse_unimodular() * to_ap;
  out.iso = EquivariantMap{direct_sum(b, k), direct_sum(a, p), m};
  if (!out.iso.verify() || !m.det().is_unit()) throw Error("pullback_split: assembled map is not an isomorphism");
  return out;
}

// ---------------------------------------------------------------- obstruction

ObstructionWitness obstruction_system(const GLattice& f) {
  const auto& g = f.group;
  const auto& cls = g->subgroup_classes().classes;
  const size_t c = cls.size();
  ObstructionWitness w;
  for (size_t k = 0; k < c; ++k) {
    w.test_subgroups.push_back(k);
    w.unknowns.push_back(k);
  }
  std::vector<std::vector<Integer>> rows;
  for (size_t k = 0; k < c; ++k) {
    const Subgroup& h = cls[k].representative;
    // Z[G/H_d] restricted to H: one orbit per double coset H x H_d, with
    // H^0 = Z/|H cap x H_d x^-1|.
    std::vector<std::vector<DoubleCoset>> dcs;
    for (size_t d = 0; d < c; ++d) dcs.push_back(double_cosets(g, h, cls[d].representative));
    std::vector<Integer> row;
    for (size_t d = 0; d < c; ++d) row.push_back(integer(dcs[d].size()));
    rows.push_back(row);
    w.rhs.push_back(integer(fixed_sublattice(f, h).rows()));
    w.row_labels.push_back({k, Integer(0)});
    if (h.order() == 1) continue;
    AbelianInvariants h0 = tate(f, h, 0);
    for (unsigned p : prime_divisors(h.order()))
      for (size_t q = p; h.order() % q == 0; q *= p) {
        std::vector<Integer> r2;
        for (size_t d = 0; d < c; ++d) {
          long long n = 0;
          for (const auto& dc : dcs[d])
            if (dc.intersection.order() % q == 0) ++n;
          r2.push_back(Integer(n));
        }
        rows.push_back(r2);
        w.rhs.push_back(integer(h0.count_divisible(integer(q))));
        w.row_labels.push_back({k, integer(q)});
      }
  }
  w.equations = IntMat(rows.size(), c);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < c; ++j) w.equations(i, j) = rows[i][j];
  w.combination = IntMat(1, rows.size());
  w.denominator = 1;
  return w;
}

bool ObstructionWitness::certificate_holds() const {
  if (denominator.sign() <= 0 || combination.cols() != equations.rows()) return false;
  IntMat ca = combination * equations;
  for (size_t j = 0; j < ca.cols(); ++j)
    if (!mod(ca(0, j), denominator).is_zero()) return false;
  Integer cb(0);
  for (size_t i = 0; i < rhs.size(); ++i) cb.addmul(combination(0, i), rhs[i]);
  return !mod(cb, denominator).is_zero();
}

bool ObstructionWitness::verify(const GLattice& f) const {
  ObstructionWitness fresh = obstruction_system(f);
  if (!(fresh.equations == equations) || fresh.rhs != rhs || fresh.row_labels != row_labels) return false;
  return certificate_holds();
}

std::optional<ObstructionWitness> stably_permutation_obstruction(const GLattice& f) {
  ObstructionWitness w = obstruction_system(f);
  const IntMat& a = w.equations;
  SmithForm s = snf(a);
  IntMat b(a.rows(), 1);
  for (size_t i = 0; i < a.rows(); ++i) b(i, 0) = w.rhs[i];
  IntMat y = s.u * b;
  for (size_t i = 0; i < a.rows(); ++i) {
    Integer d = i < s.d.size() ? s.d[i] : Integer(0);
    const Integer& yi = y(i, 0);
    Integer den;
    if (d.is_zero()) {
      if (yi.is_zero()) continue;
      den = abs(yi) + Integer(1);
    } else {
      if (mod(yi, d).is_zero()) continue;
      den = d;
    }
    w.combination = s.u.row(i);
    w.denominator = den;
    if (!w.certificate_holds()) throw Error("stably_permutation_obstruction: certificate failed to verify");
    return w;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- quasi-permutation

void set_resolution_audit(bool on) { audit_on.store(on); }

ResolutionAudit resolution_audit() { return {audit_produced.load(), audit_passed.load()}; }

std::string to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

namespace {

// Multisets of class indices (non-decreasing) with total coset-rank exactly t.
void paddings_of_rank(const std::vector<size_t>& index, size_t t, size_t from, std::vector<size_t>& cur,
                      std::vector<std::vector<size_t>>& out, size_t cap) {
  if (out.size() >= cap) return;
  if (t == 0) {
    out.push_back(cur);
    return;
  }
  for (size_t k = from; k < index.size(); ++k) {
    if (index[k] > t) continue;
    cur.push_back(k);
    paddings_of_rank(index, t - index[k], k, cur, out, cap);
    cur.pop_back();
  }
}

}  // namespace

QuasiPermResult stably_permutation_check(const GLattice& f, size_t rank_budget, size_t iso_budget) {
  QuasiPermResult res;
  const auto& g = f.group;
  const auto& cls = g->subgroup_classes().classes;
  if (f.rank == 0) {
    res.verdict = Tri::Yes;
    res.iso = EquivariantMap{f, f, IntMat(0, 0)};
    res.reason = "zero lattice";
    return res;
  }
  if (auto w = stably_permutation_obstruction(f)) {
    res.verdict = Tri::No;
    res.witness = std::move(w);
    res.reason = "integer obstruction from fixed ranks and H^0 multiplicities";
    return res;
  }
  std::vector<size_t> index(cls.size());
  for (size_t d = 0; d < cls.size(); ++d) index[d] = g->order() / cls[d].representative.order();
  if (rank_budget == 0) rank_budget = 3 * f.rank;
  size_t tried = 0;
  for (size_t t = 0; t <= rank_budget; ++t) {
    std::vector<std::vector<size_t>> pads;
    std::vector<size_t> cur;
    paddings_of_rank(index, t, 0, cur, pads, 256);
    for (const auto& pad : pads) {
      GLattice lhs = pad.empty() ? f : direct_sum(f, permutation_lattice_of(g, pad));
      for (const auto& target : permutation_candidates(lhs, 16)) {
        auto iso = permutation_isomorphism(lhs, target, iso_budget);
        ++tried;
        if (iso) {
          res.verdict = Tri::Yes;
          res.padding = pad;
          res.target = target;
          res.iso = std::move(iso);
          res.reason = "explicit isomorphism with a permutation lattice";
          return res;
        }
      }
    }
  }
  res.reason = "no stable permutation isomorphism found within padding rank " + std::to_string(rank_budget) + " (" +
               std::to_string(tried) + " candidates" + ")";
  return res;
}

QuasiPermResult quasi_permutation_check(const GLattice& m, size_t rank_budget, size_t iso_budget) {
  FlasqueResolution fr = flasque_resolution(m);
  QuasiPermResult res = stably_permutation_check(fr.cert.right, rank_budget, iso_budget);
  if (res.verdict == Tri::Yes) {
    const auto& g = m.group;
    const ExactSequenceCert& c = fr.cert;
    GLattice pad = permutation_lattice_of(g, res.padding);
    GLattice mid = res.padding.empty() ? c.mid : direct_sum(c.mid, pad);
    IntMat inj = c.inj.matrix.hstack(zero(m.rank, pad.rank));
    IntMat surj = c.surj.matrix.block_diag(IntMat::identity(pad.rank)) * res.iso->matrix.inverse_unimodular();
    res.closing = make_sequence(m, mid, res.iso->source, inj, surj);
  }
  res.resolution = std::move(fr);
  return res;
}

}  // namespace tori
