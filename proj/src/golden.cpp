#include "tori/golden.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <random>

#include "tori/catalog.hpp"
#include "tori/exactarith.hpp"
#include "tori/homology.hpp"
#include "tori/modular.hpp"
#include "tori/rationality.hpp"

namespace tori {

namespace {

struct Recorder {
  std::vector<GoldenCheck>& out;
  bool operator()(const std::string& what, bool ok, const std::string& detail = "") {
    out.push_back({what, ok, detail});
    return ok;
  }
};

IntMat perm_matrix(const std::string& cycles, size_t n) {
  auto p = parse_cycles(cycles, n);
  IntMat m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, p[i]) = Integer(1);
  return m;
}

std::string full_cycle(size_t n) {
  std::string s = "(";
  for (size_t i = 1; i <= n; ++i) s += std::to_string(i) + (i < n ? "," : "");
  return s + ")";
}

GroupPtr symmetric(size_t n) { return FiniteMatrixGroup::closure({perm_matrix("(1,2)", n), perm_matrix(full_cycle(n), n)}); }

GroupPtr dihedral(size_t n) {
  std::string refl;
  for (size_t i = 2; i < n - i + 2; ++i) refl += "(" + std::to_string(i) + "," + std::to_string(n - i + 2) + ")";
  return FiniteMatrixGroup::closure({perm_matrix(full_cycle(n), n), perm_matrix(refl, n)});
}

const Subgroup& rep(const GroupPtr& g, size_t k) { return g->subgroup_classes().classes[k].representative; }

std::optional<size_t> class_of_order(const GroupPtr& g, size_t order) {
  const auto& cls = g->subgroup_classes().classes;
  for (size_t k = 0; k < cls.size(); ++k)
    if (cls[k].representative.order() == order) return k;
  return std::nullopt;
}

bool is_abelian(const Subgroup& h) {
  for (Elt a : h.members)
    for (Elt b : h.members)
      if (h.parent->mul(a, b) != h.parent->mul(b, a)) return false;
  return true;
}

bool is_cyclic(const Subgroup& h) {
  for (Elt e : h.members)
    if (h.parent->element_order(e) == h.order()) return true;
  return false;
}

// Number of H-orbits on the points of x.
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

bool is_iso(const std::optional<EquivariantMap>& f) {
  return f && f->verify() && f->matrix.rows() == f->matrix.cols() && f->matrix.det().is_unit();
}

AbelianInvariants invariants(std::vector<long long> f) {
  IntMat d(f.size(), f.size());
  for (size_t i = 0; i < f.size(); ++i) d(i, i) = Integer(f[i]);
  return cokernel_invariants(d, f.size());
}

GLattice defining(const std::string& id) {
  GroupPtr g = catalog_entry(id).group();
  return std_lattice(g);
}

// ---------------------------------------------------------------- cases

void census_dim2(Recorder& check, const GoldenOptions& opt) {
  auto rep2 = census(dade_roots(2), opt.budget, opt.jobs);
  check("Dade(2,1), Dade(2,2) merge to 13 classes", rep2.count == kClassesDim2, std::to_string(rep2.count));
  check("no undecided pairs", rep2.undecided_pairs.empty());
  size_t rational = 0;
  for (const auto& c : rep2.classes) {
    auto v = classify(std_lattice(c.representative));
    if (at_least(v.level, Level::Rational) && v.verify()) ++rational;
  }
  check("all classes classify at least Rational", rational == rep2.classes.size(),
        std::to_string(rational) + " of " + std::to_string(rep2.classes.size()));
}

void census_dim3(Recorder& check, const GoldenOptions& opt) {
  auto all = census(dade_roots(3), opt.budget, opt.jobs);
  check("Dade(3,1..4) merge to 73 classes", all.count == kClassesDim3, std::to_string(all.count));
  auto her = census(hereditary_roots(3), opt.budget, opt.jobs);
  check("four hereditary roots merge to 58 classes", her.count == kRationalDim3, std::to_string(her.count));
  check("no undecided pairs", all.undecided_pairs.empty() && her.undecided_pairs.empty());
}

void census_dim4(Recorder& check, const GoldenOptions& opt) {
  auto roots = hereditary_roots(4);
  auto her = census(roots, opt.budget, opt.jobs);
  check("eight hereditary roots merge to 477 classes", her.count == kHereditaryDim4, std::to_string(her.count));
  const size_t base = roots.size();
  roots.push_back(catalog_entry("[4,25,8,5]"));
  roots.push_back(catalog_entry("[4,31,6,2]"));
  auto ext = census(roots, opt.budget, opt.jobs);
  check("adding [4,25,8,5] and [4,31,6,2] gives 487", ext.count == kStablyRationalDim4, std::to_string(ext.count));
  check("no undecided pairs", her.undecided_pairs.empty() && ext.undecided_pairs.empty());
  std::vector<size_t> fresh;
  size_t from_a = 0, from_b = 0;
  for (size_t i = 0; i < ext.classes.size(); ++i) {
    const auto& o = ext.classes[i].origins;
    if (std::any_of(o.begin(), o.end(), [&](size_t r) { return r < base; })) continue;
    fresh.push_back(i);
    if (std::count(o.begin(), o.end(), base)) ++from_a;
    if (std::count(o.begin(), o.end(), base + 1)) ++from_b;
  }
  check("10 new classes", fresh.size() == 10, std::to_string(fresh.size()));
  check("8 new classes below [4,25,8,5], 2 below [4,31,6,2]", from_a == 8 && from_b == 2,
        std::to_string(from_a) + ", " + std::to_string(from_b));
  for (std::string id : {"[4,25,8,5]", "[4,31,6,2]", "[4,31,3,2]"}) {
    auto l = census_lookup(ext, catalog_entry(id).group(), opt.budget);
    check(id + " is one of the new classes", l && std::count(fresh.begin(), fresh.end(), *l));
  }
  size_t stable = 0;
  for (size_t i : fresh) {
    auto v = classify(std_lattice(ext.classes[i].representative));
    if (v.level == Level::StablyRational && v.verify()) ++stable;
  }
  check("new classes certify StablyRational", stable == fresh.size(), std::to_string(stable));
}

void census_dade4(Recorder& check, const GoldenOptions& opt) {
  auto rep4 = census(dade_roots(4), opt.budget, opt.jobs);
  check("Dade(4,1..9) merge to 710 classes", rep4.count == kClassesDim4, std::to_string(rep4.count));
  check("no undecided pairs", rep4.undecided_pairs.empty());
}

void tate_4_33_2_1(Recorder& check, const GoldenOptions&) {
  GLattice l = defining("[4,33,2,1]");
  const auto& g = l.group;
  check("|G| = 24", g->order() == 24);
  Subgroup h3 = sylow(g, 3), h8 = sylow(g, 2);
  auto t3 = tate(l, h3, 1), t8 = tate(l, h8, 1), tg = tate(l, whole_group(g), 1);
  check("H^1(H3, L) = (Z/3)^2", t3 == invariants({3, 3}), t3.str());
  check("H^1(H8, L) = Z/2", t8 == invariants({2}), t8.str());
  check("H^1(G, L) = 0", tg.is_zero(), tg.str());
  Subgroup z = structure_probe(g).center;
  check("center is C4", z.order() == 4 && is_cyclic(z));
  size_t c8 = 0, c8_classes = 0;
  for (const auto& c : g->subgroup_classes().classes)
    if (c.representative.order() == 8 && is_cyclic(c.representative)) {
      c8 += c.conjugates.size();
      ++c8_classes;
    }
  check("exactly three C8, all conjugate", c8 == 3 && c8_classes == 1, std::to_string(c8));
}

void obstruction_4_33_2_1(Recorder& check, const GoldenOptions&) {
  GLattice l = defining("[4,33,2,1]");
  const auto& g = l.group;
  auto fr = flasque_resolution(l);
  check("flasque resolution verifies", fr.verify());
  check("middle term is Z[G] of rank 24",
        fr.cert.mid.rank == 24 && fr.perm_classes.size() == 1 && rep(g, fr.perm_classes[0]).order() == 1);
  const GLattice& f = fr.cert.right;
  auto w = stably_permutation_obstruction(f);
  if (!check("obstruction witness found", w.has_value())) return;
  check("witness re-verifies", w->certificate_holds() && w->verify(f));

  // Rank rows count H_k-orbits on G/H_d.
  bool ranks_ok = true;
  for (size_t i = 0; i < w->equations.rows(); ++i) {
    if (!w->row_labels[i].second.is_zero()) continue;
    const Subgroup& hk = rep(g, w->row_labels[i].first);
    for (size_t c = 0; c < w->unknowns.size(); ++c) {
      GSet cosets = coset_gset(rep(g, w->unknowns[c]));
      ranks_ok &= w->equations(i, c) == Integer(static_cast<long long>(orbit_count(cosets, hk)));
    }
  }
  check("rank rows match orbit counts", ranks_ok);

  auto whole = class_of_order(g, 24), h8 = class_of_order(g, 8);
  const size_t n = w->unknowns.size();
  size_t a = n, b = n;
  for (size_t c = 0; c < n; ++c) {
    if (rep(g, w->unknowns[c]).order() == 2) a = c;
    if (rep(g, w->unknowns[c]).order() == 6) b = c;
  }
  if (!check("unknowns x2 and x6 present", a < n && b < n && whole && h8)) return;
  IntMat rows(0, n + 1);
  for (size_t i = 0; i < w->equations.rows(); ++i) {
    auto [k, q] = w->row_labels[i];
    if (k != *whole && k != *h8) continue;
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
  check("x2 + x6 = 0 follows from the {G, H8}, p = 2 rows", in_row_lattice(rows, rel1));
  check("3 x2 + x6 = 1 follows from the {G, H8}, p = 2 rows", in_row_lattice(rows, rel2));
  std::string eqs;
  for (size_t i = 0; i < rows.rows(); ++i) {
    std::string lhs;
    for (size_t c = 0; c < n; ++c) {
      if (rows(i, c).is_zero()) continue;
      lhs += (lhs.empty() ? "" : " + ") + rows(i, c).to_string() + " x" +
             std::to_string(rep(g, w->unknowns[c]).order());
    }
    eqs += (eqs.empty() ? "" : "; ") + (lhs.empty() ? "0" : lhs) + " = " + rows(i, n).to_string();
  }
  check("relations over {G, H8}, p = 2 (x_d for the class of order d)", true, eqs);
  auto q = quasi_permutation_check(l);
  check("quasi_permutation_check = no", q.verdict == Tri::No && q.witness.has_value(), to_string(q.verdict));
  auto v = classify(l);
  check("classify: retract rational, not stably rational",
        v.level == Level::RetractRational && v.stable == Tri::No && v.verify(),
        to_string(v.level) + ", stable " + to_string(v.stable));
}

void pipeline_4_25_8_5(Recorder& check, const GoldenOptions&) {
  GLattice m4 = defining("[4,25,8,5]");
  const auto& g = m4.group;
  auto co = coflasque_resolution(dual(m4));
  check("coflasque resolution of M4* is exact", verify_exact(co.cert));
  std::vector<size_t> sizes;
  for (const auto& s : co.summands) sizes.push_back(g->order() / rep(g, s.subgroup_class).order());
  std::sort(sizes.begin(), sizes.end());
  check("orbit sizes 2 and 12", sizes == std::vector<size_t>{2, 12});
  const GLattice& c = co.cert.left;
  check("kernel C has rank 10", c.rank == 10, std::to_string(c.rank));
  auto inv = is_invertible(c);
  check("C is invertible", inv.verdict == SearchVerdict::Found, inv.reason);
  for (const auto& p : inv.primes)
    if (p.p == 2) check("dim (F2 C)^Syl2 = 4", p.fixed_dim == 4, std::to_string(p.fixed_dim));

  // Q: sums of pairs of basis vectors of P with opposite images.
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
  auto qc = coordinates_in(co.cert.inj.matrix, qrows);
  if (!check("Q lies in C", qc.has_value())) return;
  GLattice q = sublattice(c, *qc);
  Subgroup syl2 = sylow(g, 2);
  check("rank Q^Syl2 = 3", fixed_sublattice(q, syl2).rows() == 3);
  auto [cq, proj] = quotient_lattice(c, *qc);
  auto sp = recognize_sign_permutation(cq);
  if (!check("C/Q is sign-permutation", sp.verdict == SearchVerdict::Found)) return;
  auto spr = sign_permutation_resolution(cq, sp.basis);
  auto bottom = make_sequence(q, c, cq, *qc, proj);
  check("0 -> Q -> C -> C/Q -> 0 is exact", verify_exact(bottom));
  auto pb = pullback_split(bottom, spr.cert);
  if (!check("pullback splits", pb.has_value())) return;
  check("C + Z[G/K] iso Q + P by an explicit map", is_iso(pb->iso));
  bool shape = spr.left_classes.size() == 1 && spr.mid_classes.size() == 1 &&
               rep(g, spr.left_classes[0]).order() == syl2.order() && rep(g, spr.mid_classes[0]).order() == 8 &&
               is_abelian(rep(g, spr.mid_classes[0]));
  check("K = Syl2, P = Z[G/C2^3]", shape);
  auto rq = recognize_permutation(q);
  std::vector<size_t> qorders;
  for (size_t k : rq.class_multiset) qorders.push_back(rep(g, k).order());
  std::sort(qorders.begin(), qorders.end());
  bool d8 = false;
  for (size_t k : rq.class_multiset) d8 |= rep(g, k).order() == 8 && !is_abelian(rep(g, k));
  check("Q iso Z + Z[G/D8]", rq.verdict == SearchVerdict::Found && qorders == std::vector<size_t>{8, 48} && d8);
  auto res = quasi_permutation_check(m4);
  check("quasi_permutation_check(M4) = yes", res.verdict == Tri::Yes, res.reason);
  check("closing sequence is exact", res.closing && verify_exact(*res.closing));
}

void identities(Recorder& check, const GoldenOptions&) {
  for (size_t n : {3, 4, 5}) {
    auto g = symmetric(n);
    GSet x = natural_gset(g);
    std::vector<Elt> e;
    for (Elt t = 0; t < g->order(); ++t)
      if (g->element(t)(n - 1, n - 1).is_unit() && g->element(t)(n - 2, n - 2).is_unit()) e.push_back(t);
    auto iso = find_isomorphism(coset_lattice(Subgroup{g, e}), tensor(aug_ideal(x), perm_lattice(x)));
    check("(a) I (x) Z[X] iso Z[S_n/S_n-2], n = " + std::to_string(n), is_iso(iso.map));
  }
  for (size_t p : {3, 5}) {
    auto g = symmetric(p);
    GSet x = natural_gset(g);
    GLattice j = j_lattice(x);
    auto bottom = tensor_sequence(j, augmentation_sequence(x));
    auto pb = pullback_split(bottom.seq, j_sequence(x).seq);
    auto rec = recognize_permutation(bottom.seq.mid);
    bool mid_ok = rec.verdict == SearchVerdict::Found && rec.class_multiset.size() == 1 &&
                  rep(g, rec.class_multiset[0]).order() == (p == 3 ? 1u : 6u);
    check("(b) B_p + Z[X] iso Z[S_p/S_p-2] + Z, p = " + std::to_string(p), pb && is_iso(pb->iso) && mid_ok);
  }
  for (size_t p : {3, 5}) {
    auto g = symmetric(p);
    GLattice j = j_lattice(natural_gset(g));
    auto fr = flasque_resolution(j);
    auto iso = find_isomorphism(fr.cert.right, tensor(j, j));
    check("(c) flasque term of J iso J (x) J, p = " + std::to_string(p), fr.verify() && is_iso(iso.map));
    if (p == 5)
      check("(c) J (x) J invertible over S5", is_invertible(tensor(j, j)).verdict == SearchVerdict::Found);
  }
  for (size_t n : {3, 5, 7}) {
    auto g = dihedral(n);
    GSet x = natural_gset(g);
    Subgroup cn = generated_subgroup(g, {*g->find(perm_matrix(full_cycle(n), n))});
    auto iso = find_isomorphism(j_lattice(x), tensor(aug_ideal(x), sign_lattice(g, cn)));
    check("(d) J iso I (x) Z^- over D_2n, n = " + std::to_string(n), is_iso(iso.map));
  }
  auto s5 = symmetric(5);
  Subgroup f20 = normalizer(generated_subgroup(s5, {*s5->find(perm_matrix("(1,2,3,4,5)", 5))}));
  check("(e) F5 I_{S5/F20} cohomologically trivial",
        f20.order() == 20 && is_cohomologically_trivial(reduce_mod_p(aug_ideal(coset_gset(f20)), 5)));
}

void alternating_five(Recorder& check, const GoldenOptions&) {
  auto a5 = FiniteMatrixGroup::closure(
      {rho_matrix(parse_cycles("(1,2,3,4,5)", 5)), rho_matrix(parse_cycles("(1,2,3)", 5))});
  auto q = quasi_permutation_check(std_lattice(a5));
  check("(J_X5, A5) quasi-permutation", q.verdict == Tri::Yes && is_iso(q.iso), q.reason);
  check("A5 closing sequence is exact", q.closing && verify_exact(*q.closing) && q.resolution->verify());

  auto g = catalog_entry("[4,31,6,2]").group();
  auto k24 = class_of_order(g, 24), k60 = class_of_order(g, 60);
  if (!check("A5 x C2 has classes of order 24 and 60", g->order() == 120 && k24 && k60)) return;
  GSet x5 = coset_gset(rep(g, *k24)), y2 = coset_gset(rep(g, *k60));
  GLattice j = j_lattice(x5);
  auto s3 = florence_combine(tensor_sequence(j, j_sequence(x5)), augmentation_sequence(y2));
  check("combined sequence is exact with a section of degree 10", s3.verify() && s3.degree == Integer(10));
  check("ranks 4, 56, 52", s3.seq.left.rank == 4 && s3.seq.mid.rank == 56 && s3.seq.right.rank == 52);
  GLattice signed_j = tensor(j, aug_ideal(y2));
  bool same = true;
  for (Elt e = 0; e < g->order(); ++e) same &= character(s3.seq.left, e) == character(signed_j, e);
  check("left term has the character of J (x) Z^-", same);
  check("left term iso the defining lattice",
        find_isomorphism(s3.seq.left, std_lattice(g)).verdict == SearchVerdict::Found);
  auto q2 = quasi_permutation_check(std_lattice(g));
  check("(J_X5 (x) Z^-, A5 x C2) quasi-permutation", q2.verdict == Tri::Yes && is_iso(q2.iso), q2.reason);
  check("A5 x C2 closing sequence is exact", q2.closing && verify_exact(*q2.closing));
}

void retract_seven(Recorder& check, const GoldenOptions&) {
  for (std::string id :
       {"[4,31,1,3]", "[4,31,1,4]", "[4,31,2,2]", "[4,31,5,2]", "[4,31,4,2]", "[4,31,7,2]", "[4,33,2,1]"}) {
    auto v = classify(defining(id));
    check(id + " RetractRational, not stable", v.level == Level::RetractRational && v.stable != Tri::Yes && v.verify(),
          to_string(v.level) + ", stable " + to_string(v.stable));
    if (id == "[4,33,2,1]") {
      bool witnessed = false;
      for (const auto& e : v.certificate) witnessed |= e.kind == "obstruction" && e.witness.has_value();
      check(id + " not stably rational by obstruction", v.stable == Tri::No && witnessed);
    }
  }
}

struct TableRow {
  std::string name;
  size_t degree;
  std::vector<std::string> g, h;
  Level level;
};

void norm_one(Recorder& check, const GoldenOptions&) {
  using L = Level;
  const std::vector<TableRow> rows = {
      {"(C6, 1)", 6, {"(1,2,3,4,5,6)"}, {}, L::StablyRational},
      {"(C5, 1)", 5, {"(1,2,3,4,5)"}, {}, L::StablyRational},
      {"(C15, 1)", 8, {"(1,2,3,4,5)(6,7,8)"}, {}, L::StablyRational},
      {"(S3, 1)", 3, {"(1,2,3)", "(1,2)"}, {}, L::StablyRational},
      {"(C3:C4, 1)", 7, {"(1,2,3)", "(1,2)(4,5,6,7)"}, {}, L::StablyRational},
      {"(D10, 1)", 5, {"(1,2,3,4,5)", "(2,5)(3,4)"}, {}, L::StablyRational},
      {"(C2^2, 1)", 4, {"(1,2)", "(3,4)"}, {}, L::NotRetractRational},
      {"(Q8, 1)", 8, {"(1,2,3,4)(5,6,7,8)", "(1,5,3,7)(2,8,4,6)"}, {}, L::NotRetractRational},
      {"(C3 x S3, 1)", 6, {"(1,2,3)", "(4,5,6)", "(4,5)"}, {}, L::NotRetractRational},
      {"(F20, 1)", 5, {"(1,2,3,4,5)", "(2,3,5,4)"}, {}, L::RetractRational},
      {"(S3, S2)", 3, {"(1,2,3)", "(1,2)"}, {"(1,2)"}, L::Rational},
      {"(S4, S3)", 4, {"(1,2,3,4)", "(1,2)"}, {"(1,2)", "(1,2,3)"}, L::NotRetractRational},
      {"(S5, S4)", 5, {"(1,2,3,4,5)", "(1,2)"}, {"(1,2)", "(1,2,3,4)"}, L::RetractRational},
      {"(A5, A4)", 5, {"(1,2,3,4,5)", "(1,2,3)"}, {"(1,2,3)", "(2,3,4)"}, L::StablyRational},
      {"(A4, A3)", 4, {"(1,2,3)", "(1,2)(3,4)"}, {"(1,2,3)"}, L::NotRetractRational},
      {"(D10, C2)", 5, {"(1,2,3,4,5)", "(2,5)(3,4)"}, {"(2,5)(3,4)"}, L::StablyRational},
      {"(F20, C4)", 5, {"(1,2,3,4,5)", "(2,3,5,4)"}, {"(2,3,5,4)"}, L::RetractRational},
      {"(D8, C2)", 4, {"(1,2,3,4)", "(2,4)"}, {"(2,4)"}, L::NotRetractRational},
      {"(C3 x D10, C2)", 8, {"(1,2,3)", "(4,5,6,7,8)", "(5,8)(6,7)"}, {"(5,8)(6,7)"}, L::StablyRational},
      {"(D14, C2)", 7, {"(1,2,3,4,5,6,7)", "(2,7)(3,6)(4,5)"}, {"(2,7)(3,6)(4,5)"}, L::StablyRational},
  };
  for (const auto& r : rows) {
    std::vector<IntMat> gens;
    for (const auto& s : r.g) gens.push_back(perm_matrix(s, r.degree));
    GroupPtr g = FiniteMatrixGroup::closure(gens);
    std::vector<Elt> hg;
    for (const auto& s : r.h) hg.push_back(*g->find(perm_matrix(s, r.degree)));
    auto v = norm_one_classify({g, generated_subgroup(g, hg)});
    bool ok = v.level == r.level && v.verify() && (r.level != L::RetractRational || v.stable != Tri::Yes);
    check(r.name + " -> " + to_string(r.level), ok, to_string(v.level));
  }
  auto s5 = symmetric(5);
  auto v = classify(j_lattice(natural_gset(s5)));
  check("classify(J_X5, S5) RetractRational without a stable certificate",
        v.level == Level::RetractRational && v.stable != Tri::Yes && v.verify(), to_string(v.level));
}

// ---------------------------------------------------------------- properties

IntMat random_mat(std::mt19937& rng, size_t r, size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMat m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m(i, j) = Integer(d(rng));
  return m;
}

IntMat random_unimodular(std::mt19937& rng, size_t n) {
  IntMat u = IntMat::identity(n);
  if (n < 2) return u;
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  std::uniform_int_distribution<int> q(-2, 2);
  for (size_t step = 0; step < 3 * n; ++step) {
    size_t i = pick(rng), j = pick(rng);
    if (i != j) u.add_row(i, j, Integer(q(rng)));
  }
  return u;
}

bool snf_case(std::mt19937& rng) {
  size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
  IntMat a = random_mat(rng, r, c, -9, 9);
  SmithForm s = snf(a, {true, true, true});
  IntMat d(r, c);
  for (size_t i = 0; i < s.d.size(); ++i) d(i, i) = s.d[i];
  if (s.u * a * s.v != d || !s.u.det().is_unit() || !(s.v * s.vinv).is_identity()) return false;
  for (size_t k = 1; k < s.d.size(); ++k)
    if (!s.d[k - 1].is_zero() && !(s.d[k] % s.d[k - 1]).is_zero()) return false;
  IntMat p = random_unimodular(rng, r), q = random_unimodular(rng, c);
  if (snf(p * a * q, {false, false, false}).d != s.d) return false;
  HermiteForm h = hnf(a);
  if (h.u * a != h.h || !h.u.det().is_unit()) return false;
  return hnf(p * a).h == h.h;
}

std::vector<GroupPtr> sample_groups() {
  return {symmetric(3), symmetric(4), dihedral(4), dihedral(5),
          FiniteMatrixGroup::closure({perm_matrix("(1,2,3)", 4), perm_matrix("(1,2)(3,4)", 4)}),
          catalog_entry("[4,33,2,1]").group(), catalog_entry("[4,25,8,5]").group()};
}

bool shapiro_case(std::mt19937& rng, const std::vector<GroupPtr>& groups) {
  const GroupPtr& g = groups[rng() % groups.size()];
  const auto& cls = g->subgroup_classes().classes;
  const Subgroup& h = cls[rng() % cls.size()].representative;
  const Subgroup& k = cls[rng() % cls.size()].representative;
  GLattice p = change_basis(coset_lattice(h), random_unimodular(rng, g->order() / h.order()));
  if (!tate(p, k, 1).is_zero() || !tate(p, k, -1).is_zero()) return false;
  // Mackey: H^0(K, Z[G/H]) is the sum of Z/|K cap H^x| over double cosets.
  std::vector<long long> f;
  for (const auto& dc : double_cosets(g, k, h)) f.push_back(static_cast<long long>(dc.intersection.order()));
  return tate(p, k, 0) == invariants(f);
}

GLattice random_lattice(std::mt19937& rng, const GroupPtr& g) {
  const auto& cls = g->subgroup_classes().classes;
  auto piece = [&]() -> GLattice {
    const Subgroup& h = cls[rng() % cls.size()].representative;
    GSet x = coset_gset(h);
    switch (rng() % 4) {
      case 0: return std_lattice(g);
      case 1: return x.points > 1 ? aug_ideal(x) : std_lattice(g);
      case 2: return x.points > 1 ? j_lattice(x) : std_lattice(g);
      default: return coset_lattice(h);
    }
  };
  GLattice m = piece();
  if (rng() % 3 == 0) {
    GLattice n = piece();
    m = (m.rank * n.rank <= 24 && rng() % 2) ? tensor(m, n) : direct_sum(m, n);
  }
  return change_basis(m, random_unimodular(rng, m.rank));
}

bool duality_case(std::mt19937& rng, const std::vector<GroupPtr>& groups) {
  const GroupPtr& g = groups[rng() % groups.size()];
  const auto& cls = g->subgroup_classes().classes;
  const Subgroup& h = cls[rng() % cls.size()].representative;
  GLattice m = random_lattice(rng, g);
  return tate(m, h, 1) == tate(dual(m), h, -1) && tate(m, h, -1) == tate(dual(m), h, 1);
}

void properties(Recorder& check, const GoldenOptions& opt) {
  std::mt19937 rng(opt.seed);
  size_t ok = 0;
  for (size_t i = 0; i < opt.snf_cases; ++i) ok += snf_case(rng);
  check("SNF/HNF identities", ok == opt.snf_cases, std::to_string(ok) + "/" + std::to_string(opt.snf_cases));
  auto groups = sample_groups();
  ok = 0;
  for (size_t i = 0; i < opt.shapiro_cases; ++i) ok += shapiro_case(rng, groups);
  check("Shapiro vanishing and Mackey H^0 on permutation lattices", ok == opt.shapiro_cases,
        std::to_string(ok) + "/" + std::to_string(opt.shapiro_cases));
  ok = 0;
  for (size_t i = 0; i < opt.duality_cases; ++i) ok += duality_case(rng, groups);
  check("H^1(H, M) = H^-1(H, M*)", ok == opt.duality_cases,
        std::to_string(ok) + "/" + std::to_string(opt.duality_cases));
  // Resolutions built by this case.
  ok = 0;
  for (size_t i = 0; i < 20; ++i) {
    GLattice m = random_lattice(rng, groups[rng() % groups.size()]);
    ok += flasque_resolution(m).verify() && verify_exact(coflasque_resolution(m).cert);
  }
  check("resolutions of random lattices re-verify", ok == 20, std::to_string(ok) + "/20");
  auto a = resolution_audit();
  if (a.produced)
    check("every audited resolution re-verified", a.passed == a.produced,
          std::to_string(a.passed) + "/" + std::to_string(a.produced));
}

using Runner = std::function<void(Recorder&, const GoldenOptions&)>;

const std::vector<std::pair<GoldenCase, Runner>>& registry() {
  static const std::vector<std::pair<GoldenCase, Runner>> r = {
      {{"dim2-census", 1, "rank 2 census and rationality"}, census_dim2},
      {{"dim3-census", 2, "rank 3 census"}, census_dim3},
      {{"dim4-census", 3, "rank 4 stably rational census"}, census_dim4},
      {{"dade4-census", 4, "rank 4 full census"}, census_dade4},
      {{"4-33-2-1-tate", 5, "Tate groups of [4,33,2,1]"}, tate_4_33_2_1},
      {{"4-33-2-1", 6, "obstruction for [4,33,2,1]"}, obstruction_4_33_2_1},
      {{"4-25-8-5", 7, "quasi-permutation proof for [4,25,8,5]"}, pipeline_4_25_8_5},
      {{"identities", 8, "lattice identities over S_n and D_2n"}, identities},
      {{"a5", 9, "A5 and A5 x C2 quasi-permutation"}, alternating_five},
      {{"retract-seven", 10, "retract rational, not stably rational"}, retract_seven},
      {{"norm-one", 11, "norm one torus decision table"}, norm_one},
      {{"properties", 12, "randomized property suites"}, properties},
  };
  return r;
}

}  // namespace

bool GoldenReport::pass() const {
  if (checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const GoldenCheck& c) { return c.ok; });
}

const std::vector<GoldenCase>& golden_cases() {
  static const std::vector<GoldenCase> cases = [] {
    std::vector<GoldenCase> v;
    for (const auto& [c, run] : registry()) v.push_back(c);
    return v;
  }();
  return cases;
}

GoldenReport run_golden(const std::string& id, const GoldenOptions& opt) {
  for (const auto& [c, run] : registry()) {
    if (c.id != id) continue;
    GoldenReport rep;
    rep.id = c.id;
    rep.criterion = c.criterion;
    rep.title = c.title;
    Recorder check{rep.checks};
    auto t0 = std::chrono::steady_clock::now();
    try {
      run(check, opt);
    } catch (const std::exception& e) {
      check("no exception", false, e.what());
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
  }
  throw Error("unknown golden case: " + id);
}

}  // namespace tori
