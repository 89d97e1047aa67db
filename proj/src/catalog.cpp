#include "tori/catalog.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "tori/expr.hpp"

namespace tori {

namespace {

using Perm = std::vector<uint32_t>;

Perm inverse_perm(const Perm& p) {
  Perm q(p.size());
  for (size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<uint32_t>(i);
  return q;
}

IntMat neg(const IntMat& a) { return -a; }

IntMat diag1(long long s, const IntMat& a) { return IntMat{{s}}.block_diag(a); }

IntMat rho(const std::string& cyc, size_t n) { return rho_matrix(parse_cycles(cyc, n + 1)); }
IntMat rhod(const std::string& cyc, size_t n) { return rho_dual_matrix(parse_cycles(cyc, n + 1)); }

// Signed permutation tau * sigma; taus lists the indices i of tau_i (1-based).
IntMat eta(const std::vector<int>& taus, const std::string& cyc, size_t n) {
  std::vector<int> signs(n, 1);
  for (int t : taus) signs[t - 1] = -1;
  return eta_matrix(parse_cycles(cyc, n), signs);
}

std::string lower_key(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    else if (!out.empty() && out.back() != '-')
      out += '-';
  }
  while (!out.empty() && out.back() == '-') out.pop_back();
  return out;
}

CatalogEntry make(std::string name, std::optional<std::array<int, 4>> id, std::vector<IntMat> gens,
                  std::optional<std::string> lattice, std::optional<std::string> verdict, std::string prov) {
  CatalogEntry e;
  e.name = std::move(name);
  e.gap_id = id;
  e.rank = gens.front().rows();
  e.generators = std::move(gens);
  e.expected_lattice = std::move(lattice);
  e.expected_verdict = std::move(verdict);
  e.provenance = std::move(prov);
  return e;
}

// Basis beta = {w1+w1', s2 s1 (w1+w1'), a1', s2' s1' (a1')} of the lattice
// between ZA2+ZA2 and its weight lattice, written in fundamental weights.
std::vector<IntMat> intermediate_a2a2_generators() {
  IntMat s1{{-1, 1}, {0, 1}}, s2{{1, 0}, {1, -1}}, i2 = IntMat::identity(2), z2 = IntMat::zero(2, 2);
  IntMat S1 = s1.block_diag(i2), S2 = s2.block_diag(i2), T1 = i2.block_diag(s1), T2 = i2.block_diag(s2);
  IntMat tau = z2.hstack(i2).vstack(i2.hstack(z2));
  IntMat b1{{1, 0, 1, 0}};
  IntMat a1p{{0, 0, 2, -1}};
  // s2 s1 applied to a row vector: first s1, then s2.
  IntMat basis = b1.vstack(b1 * S1 * S2).vstack(a1p).vstack(a1p * T1 * T2);
  std::vector<IntMat> out;
  for (const IntMat& w : {S1, IntMat(S1 * S2), T1, IntMat(T1 * T2), tau, IntMat(-IntMat::identity(4))}) {
    auto c = coordinates_in(basis, basis * w);
    if (!c) throw Error("intermediate A2+A2 basis is not invariant");
    out.push_back(*c);
  }
  return out;
}

std::vector<CatalogEntry> build_catalog() {
  std::vector<CatalogEntry> v;
  const IntMat I2 = IntMat::identity(2), I3 = IntMat::identity(3), I4 = IntMat::identity(4);
  const std::string printed = "printed generators";
  const std::string built = "constructed from the named representation images";

  // Rank 2.
  v.push_back(make("Dade(2,1)", std::array{2, 3, 2, 1}, {IntMat{{1, 0}, {0, -1}}, IntMat{{0, -1}, {1, 0}}, neg(I2)},
                   "named(eta_B,2)", "HereditarilyRational", printed));
  v.push_back(make("Dade(2,2)", std::array{2, 4, 4, 1}, {IntMat{{0, 1}, {1, 0}}, neg(I2), IntMat{{0, -1}, {1, -1}}},
                   "named(root_A,2)", "HereditarilyRational", printed));

  // Rank 3.
  {
    IntMat a = rhod("(12)", 2), b = rhod("(132)", 2);
    v.push_back(make("Dade(3,1)", std::array{3, 6, 7, 1},
                     {neg(I3), a.block_diag(IntMat{{-1}}), neg(I2).block_diag(IntMat{{1}}), b.block_diag(IntMat{{1}})},
                     "blocks(named(root_A,2),named(eta_B,1))", "HereditarilyRational", built));
  }
  v.push_back(make("Dade(3,2)", std::array{3, 7, 5, 1},
                   {eta({1, 2, 3}, "()", 3), eta({3}, "(12)", 3), eta({}, "(132)", 3), eta({1, 3}, "()", 3),
                    eta({1, 2}, "()", 3)},
                   "named(eta_B,3)", "HereditarilyRational", built));
  {
    std::vector<IntMat> g33 = {neg(I3), neg(rho("(34)", 3)), rho("(132)", 3), rho("(13)(24)", 3),
                               rho("(12)(34)", 3)};
    std::vector<IntMat> g34;
    for (const auto& m : g33) g34.push_back(m.transpose());
    v.push_back(make("Dade(3,3)", std::array{3, 7, 5, 2}, g33, "named(weight_A,3)", std::nullopt, built));
    v.push_back(make("Dade(3,4)", std::array{3, 7, 5, 3}, g34, "named(root_A,3)", "HereditarilyRational",
                     "transposes of the Dade(3,3) generators"));
  }
  v.push_back(make("[3,7,4,3]", std::array{3, 7, 4, 3},
                   {rhod("(34)", 3), rhod("(132)", 3), rhod("(13)(24)", 3), rhod("(12)(34)", 3)},
                   "named(rho_dual,3)", "HereditarilyRational", built));
  v.push_back(make("[3,4,5,2]", std::array{3, 4, 5, 2},
                   {IntMat{{0, 1, -1}, {0, 1, 0}, {-1, 1, 0}}, IntMat{{0, 1, 0}, {0, 1, -1}, {-1, 1, 0}},
                    IntMat{{0, 1, -1}, {1, 0, -1}, {0, 0, -1}}},
                   std::nullopt, "HereditarilyRational", printed));

  // Rank 4 Dade groups.
  {
    IntMat a1 = eta({2}, "()", 2), a2 = eta({1}, "(12)", 2), b1 = rho("(23)", 2), b2 = rho("(13)", 2);
    v.push_back(make("Dade(4,1)", std::array{4, 20, 22, 1},
                     {I2.block_diag(b1), a1.block_diag(b2), a2.block_diag(I2), neg(I4)},
                     "blocks(named(eta_B,2),named(weight_A,2))", "HereditarilyRational", built));
  }
  {
    IntMat a1{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, a2{{1, 0, -1}, {1, -1, 0}, {1, 0, 0}},
        a3{{-1, 0, 0}, {-1, 0, 1}, {-1, 1, 0}}, a4{{0, -1, 1}, {-1, 0, 1}, {0, 0, 1}};
    v.push_back(make("Dade(4,2)", std::array{4, 25, 11, 2},
                     {diag1(1, a1), diag1(1, a2), diag1(1, a3), diag1(-1, a4), neg(I4)},
                     "blocks(named(eta_B,1),named(root_A,3))", "HereditarilyRational", printed));
  }
  {
    IntMat b1{{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}, b2{{0, 0, -1}, {0, -1, 0}, {1, 1, 1}},
        b3{{-1, -1, -1}, {0, 0, 1}, {0, 1, 0}}, b4{{0, -1, 0}, {-1, 0, 0}, {1, 1, 1}};
    v.push_back(make("Dade(4,3)", std::array{4, 25, 11, 4},
                     {diag1(1, b1), diag1(1, b2), diag1(1, b3), diag1(-1, b4), neg(I4)},
                     "blocks(named(eta_B,1),named(weight_A,3))", std::nullopt, printed));
  }
  v.push_back(make("Dade(4,4)", std::array{4, 29, 9, 1},
                   {IntMat{{1, -1, 0, 0}, {0, -1, 0, 0}, {0, 0, 1, -1}, {0, 0, 0, -1}},
                    IntMat{{1, -1, 0, 0}, {0, 0, 1, -1}, {0, -1, 0, 0}, {0, 0, 0, -1}},
                    IntMat{{1, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, -1}, {0, 0, 1, 0}},
                    IntMat{{0, 0, 0, 1}, {0, 0, -1, 1}, {0, -1, 0, 1}, {1, -1, -1, 1}}},
                   "catalog(IntermediateA2A2)", std::nullopt, printed));
  v.push_back(make("IntermediateA2A2", std::nullopt, intermediate_a2a2_generators(), std::nullopt, std::nullopt,
                   "s1, s2s1, s1', s2's1', tau, -1 recomputed on the basis beta; the printed s1 is singular"));
  {
    IntMat p{{0, 1}, {1, 0}}, y{{0, 1}, {-1, 1}}, z{{1, -1}, {1, 0}}, z2 = IntMat::zero(2, 2);
    v.push_back(make("Dade(4,5)", std::array{4, 30, 13, 1},
                     {I2.block_diag(p), z2.hstack(I2).vstack(p.hstack(z2)), I2.block_diag(y), z.block_diag(I2)},
                     std::nullopt, "HereditarilyRational", printed));
  }
  v.push_back(make("Dade(4,6)", std::array{4, 31, 7, 1},
                   {neg(rhod("(15)(234)", 4)), neg(rhod("(14532)", 4)), neg(rhod("(1423)", 4))}, "named(root_A,4)",
                   "HereditarilyRational", built));
  v.push_back(make("Dade(4,7)", std::array{4, 31, 7, 2},
                   {neg(rho("(132)(45)", 4)), neg(rho("(15234)", 4)), neg(rho("(1324)", 4))}, "named(weight_A,4)",
                   "RetractRational", built));
  v.push_back(make("Dade(4,8)", std::array{4, 32, 21, 1},
                   {eta({2, 4}, "(24)", 4), eta({1, 3, 4}, "(234)", 4), eta({1, 2}, "()", 4),
                    eta({3, 4}, "(12)(34)", 4), eta({1, 2}, "(13)(24)", 4), eta({1, 4}, "(14)(23)", 4)},
                   "named(eta_B,4)", "HereditarilyRational", built));
  v.push_back(make("Dade(4,9)", std::array{4, 33, 16, 1},
                   {IntMat{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}},
                    IntMat{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {1, 1, 1, -1}},
                    IntMat{{0, 1, 0, -1}, {0, 0, 1, -1}, {1, 0, 0, -1}, {1, 1, 1, -2}},
                    IntMat{{-1, 0, 0, 1}, {0, 0, -1, 1}, {-1, -1, -1, 1}, {-1, -1, -1, 2}},
                    IntMat{{0, 0, -1, 0}, {1, 1, 1, -2}, {-1, 0, 0, 0}, {0, 0, 0, -1}},
                    IntMat{{-1, -1, -1, 2}, {0, 0, 1, 0}, {0, -1, 0, 0}, {-1, -1, 0, 1}},
                    IntMat{{1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, -1, -1, 1}}},
                   "catalog(WF4)", std::nullopt, printed));
  v.push_back(make("WF4", std::nullopt,
                   {IntMat{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}},
                    IntMat{{1, 0, 0, 0}, {0, 1, 0, 0}, {-1, -1, -1, 2}, {0, 0, 0, 1}},
                    IntMat{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {1, 1, 1, -1}},
                    IntMat{{0, 0, 0, 1}, {1, 1, 0, -1}, {1, 0, 1, -1}, {1, 0, 0, 0}}},
                   std::nullopt, std::nullopt, "printed simple reflections of F4"));

  // Rank 4, maximal among the stably rational ones.
  v.push_back(make("[4,25,9,2]", std::array{4, 25, 9, 2},
                   {diag1(1, rhod("(34)", 3)), diag1(-1, rhod("(124)", 3)), diag1(1, rhod("(14)(23)", 3)),
                    diag1(1, rhod("(12)(34)", 3))},
                   "blocks(named(eta_B,1),named(rho_dual,3))", "HereditarilyRational", built));
  {
    IntMat a{{1, 0, 0}, {1, 0, -1}, {1, -1, 0}}, b{{0, 0, 1}, {-1, 0, 1}, {0, -1, 1}}, m1{{-1}};
    v.push_back(make("[4,13,6,4]", std::array{4, 13, 6, 4}, {I3.block_diag(m1), a.block_diag(m1), b.block_diag(m1)},
                     "blocks(catalog([3,4,5,2]),named(eta_B,1))", "HereditarilyRational", printed));
  }
  v.push_back(make("[4,25,7,5]", std::array{4, 25, 7, 5},
                   {IntMat{{1, 0, 1, 1}, {0, 1, 0, 0}, {0, 0, 0, -1}, {0, 0, -1, 0}},
                    IntMat{{1, 0, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, -1, 0, 0}},
                    IntMat{{1, -1, 1, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}},
                    IntMat{{1, 0, 1, 1}, {0, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}}},
                   std::nullopt, "HereditarilyRational", printed));
  v.push_back(make("[4,24,3,4]", std::array{4, 24, 3, 4},
                   {IntMat{{1, -1, 0, 0}, {0, -1, 0, 0}, {0, -1, 1, 0}, {0, -1, 0, 1}},
                    IntMat{{1, -1, 0, 1}, {0, -1, 0, 1}, {0, -1, 1, 0}, {0, -1, 0, 0}},
                    IntMat{{1, -1, -1, 1}, {0, 0, -1, 1}, {0, 0, -1, 0}, {0, 1, -1, 0}},
                    IntMat{{1, -1, -1, 1}, {0, -1, 0, 0}, {0, -1, 0, 1}, {0, -1, 1, 0}}},
                   std::nullopt, "HereditarilyRational", printed));
  const std::vector<IntMat> d1c = {IntMat{{-1, 0, 0, 0}, {0, -1, 0, 0}, {0, 0, 0, -1}, {0, 0, -1, 0}},
                                   IntMat{{1, 0, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, -1, 0, 0}},
                                   IntMat{{1, -1, 1, 0}, {0, -1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}},
                                   IntMat{{1, 0, 1, 1}, {0, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, -1}}};
  v.push_back(make("[4,25,8,5]", std::array{4, 25, 8, 5}, d1c, std::nullopt, "StablyRational", printed));
  v.push_back(make("Section6", std::nullopt, d1c, "catalog([4,25,8,5])", "StablyRational",
                   "printed g1, g2, g3, g4 of the closing example"));
  v.push_back(make("[4,31,6,2]", std::array{4, 31, 6, 2},
                   {neg(rho("(15243)", 4)), rho("(132)", 4), rho("(12)(34)", 4), rho("(13)(24)", 4)},
                   "tensor(J([b,c,d,a^5]),sign([a^2,b,c,d]))", "StablyRational", built));
  v.push_back(make("[4,31,3,2]", std::array{4, 31, 3, 2},
                   {rho("(14352)", 4), rho("(123)", 4), rho("(13)(25)", 4), rho("(12)(35)", 4)},
                   "J([b,c,d])", "StablyRational", built));

  // Retract rational, not stably rational: subgroups of Dade(4,7) and [4,33,2,1].
  const std::string sub47 = "constructed as a subgroup of the Dade(4,7) image";
  v.push_back(make("[4,31,1,3]", std::array{4, 31, 1, 3}, {rho("(12345)", 4), rho("(2354)", 4)}, "J([b])",
                   "RetractRational", sub47));
  v.push_back(make("[4,31,1,4]", std::array{4, 31, 1, 4}, {rho("(12345)", 4), neg(rho("(2354)", 4))},
                   std::nullopt, "RetractRational", sub47));
  v.push_back(make("[4,31,2,2]", std::array{4, 31, 2, 2}, {rho("(12345)", 4), rho("(2354)", 4), neg(I4)},
                   std::nullopt, "RetractRational", sub47));
  v.push_back(make("[4,31,4,2]", std::array{4, 31, 4, 2}, {rho("(12)", 4), rho("(12345)", 4)}, "named(rho,4)",
                   "RetractRational", sub47));
  v.push_back(make("[4,31,5,2]", std::array{4, 31, 5, 2}, {neg(rho("(12)", 4)), rho("(12345)", 4)}, std::nullopt,
                   "RetractRational", sub47));
  v.push_back(make("[4,33,2,1]", std::array{4, 33, 2, 1},
                   {IntMat{{0, 0, -1, 0}, {-1, 0, 0, 0}, {1, 1, 1, -2}, {0, 1, 0, -1}},
                    IntMat{{0, 1, 0, -1}, {0, 0, -1, 1}, {-1, 0, 0, 1}, {0, 1, 0, 0}}},
                   std::nullopt, "RetractRational", printed));
  return v;
}

}  // namespace

std::vector<uint32_t> parse_cycles(const std::string& cycles, size_t degree) {
  Perm p(degree);
  for (size_t i = 0; i < degree; ++i) p[i] = static_cast<uint32_t>(i);
  size_t pos = 0;
  while (pos < cycles.size()) {
    if (std::isspace(static_cast<unsigned char>(cycles[pos]))) {
      ++pos;
      continue;
    }
    if (cycles[pos] != '(') throw Error("bad cycle notation: " + cycles);
    size_t end = cycles.find(')', pos);
    if (end == std::string::npos) throw Error("bad cycle notation: " + cycles);
    std::string body = cycles.substr(pos + 1, end - pos - 1);
    std::vector<uint32_t> pts;
    if (body.find(',') != std::string::npos) {
      size_t s = 0;
      while (s <= body.size()) {
        size_t c = body.find(',', s);
        if (c == std::string::npos) c = body.size();
        pts.push_back(static_cast<uint32_t>(std::stoul(body.substr(s, c - s))));
        s = c + 1;
      }
    } else {
      for (char ch : body)
        if (std::isdigit(static_cast<unsigned char>(ch))) pts.push_back(static_cast<uint32_t>(ch - '0'));
    }
    for (size_t i = 0; i < pts.size(); ++i) {
      if (pts[i] < 1 || pts[i] > degree) throw Error("cycle point out of range: " + cycles);
      p[pts[i] - 1] = pts[(i + 1) % pts.size()] - 1;
    }
    pos = end + 1;
  }
  return p;
}

IntMat rho_matrix(const std::vector<uint32_t>& sigma) {
  const size_t n = sigma.size() - 1;
  IntMat m(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (sigma[i] == n)
      for (size_t j = 0; j < n; ++j) m(i, j) = -1;
    else
      m(i, sigma[i]) = 1;
  }
  return m;
}

IntMat rho_dual_matrix(const std::vector<uint32_t>& sigma) { return rho_matrix(inverse_perm(sigma)).transpose(); }

IntMat eta_matrix(const std::vector<uint32_t>& sigma, const std::vector<int>& signs) {
  const size_t n = sigma.size();
  IntMat p(n, n), d(n, n);
  for (size_t i = 0; i < n; ++i) {
    p(i, sigma[i]) = 1;
    d(i, i) = signs[i];
  }
  return p * d;
}

IntMat companion_matrix(const std::vector<long long>& monic) {
  const size_t d = monic.size();
  IntMat m(d, d);
  for (size_t i = 0; i + 1 < d; ++i) m(i, i + 1) = 1;
  for (size_t j = 0; j < d; ++j) m(d - 1, j) = -monic[j];
  return m;
}

std::vector<long long> cyclotomic_polynomial(size_t m) {
  // x^m - 1 divided by Phi_d for every proper divisor d.
  std::vector<long long> num(m + 1, 0);
  num[0] = -1;
  num[m] = 1;
  for (size_t d = 1; d < m; ++d) {
    if (m % d) continue;
    std::vector<long long> den = cyclotomic_polynomial(d);
    const size_t dn = den.size() - 1;
    std::vector<long long> q(num.size() - dn, 0);
    for (size_t k = num.size() - 1; k + 1 > dn; --k) {
      long long c = num[k];  // den is monic
      q[k - dn] = c;
      for (size_t j = 0; j <= dn; ++j) num[k - dn + j] -= c * den[j];
      if (k == dn) break;
    }
    num = q;
  }
  return num;
}

std::vector<std::string> named_builders() {
  return {"rho", "rho_dual", "rho_sign", "rho_sign_dual", "eta_B", "cyclotomic_companion", "weight_A", "root_A"};
}

GLattice named_lattice(const std::string& builder, size_t n) {
  if (n == 0) throw UnknownBuilder("size must be positive");
  std::vector<IntMat> gens;
  auto sym_gens = [](size_t deg) {
    Perm t(deg), c(deg);
    for (size_t i = 0; i < deg; ++i) {
      t[i] = static_cast<uint32_t>(i);
      c[i] = static_cast<uint32_t>((i + 1) % deg);
    }
    if (deg > 1) std::swap(t[0], t[1]);
    return std::vector<Perm>{t, c};
  };
  if (builder == "rho" || builder == "rho_sign" || builder == "weight_A") {
    for (const auto& s : sym_gens(n + 1)) gens.push_back(rho_matrix(s));
    if (builder != "rho") gens.push_back(-IntMat::identity(n));
  } else if (builder == "rho_dual" || builder == "rho_sign_dual" || builder == "root_A") {
    for (const auto& s : sym_gens(n + 1)) gens.push_back(rho_dual_matrix(s));
    if (builder != "rho_dual") gens.push_back(-IntMat::identity(n));
  } else if (builder == "eta_B") {
    std::vector<int> signs(n, 1);
    signs[0] = -1;
    Perm id(n);
    for (size_t i = 0; i < n; ++i) id[i] = static_cast<uint32_t>(i);
    gens.push_back(eta_matrix(id, signs));
    std::vector<int> plus(n, 1);
    for (const auto& s : sym_gens(n)) gens.push_back(eta_matrix(s, plus));
  } else if (builder == "cyclotomic_companion") {
    auto phi = cyclotomic_polynomial(n);
    phi.pop_back();
    gens.push_back(companion_matrix(phi));
  } else {
    throw UnknownBuilder("unknown builder '" + builder + "'");
  }
  return std_lattice(FiniteMatrixGroup::closure(gens));
}

GroupPtr CatalogEntry::group() const { return FiniteMatrixGroup::closure(generators); }

std::string CatalogEntry::gap_id_string() const {
  if (!gap_id) return "";
  const auto& a = *gap_id;
  return "[" + std::to_string(a[0]) + "," + std::to_string(a[1]) + "," + std::to_string(a[2]) + "," +
         std::to_string(a[3]) + "]";
}

const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> cat = build_catalog();
  return cat;
}

std::optional<CatalogEntry> find_catalog_entry(const std::string& key) {
  const std::string k = lower_key(key);
  for (const auto& e : builtin_catalog())
    if (e.name == key || lower_key(e.name) == k || (e.gap_id && lower_key(e.gap_id_string()) == k)) return e;
  return std::nullopt;
}

const CatalogEntry& catalog_entry(const std::string& key) {
  const std::string k = lower_key(key);
  for (const auto& e : builtin_catalog())
    if (e.name == key || lower_key(e.name) == k || (e.gap_id && lower_key(e.gap_id_string()) == k)) return e;
  throw CatalogError("no catalog entry '" + key + "'");
}

std::string catalog_to_json(const std::vector<CatalogEntry>& entries) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    j["name"] = e.name;
    if (e.gap_id)
      j["gap_id"] = *e.gap_id;
    else
      j["gap_id"] = nullptr;
    j["rank"] = e.rank;
    nlohmann::ordered_json gens = nlohmann::ordered_json::array();
    for (const auto& m : e.generators) {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (size_t i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (size_t c = 0; c < m.cols(); ++c) row.push_back(static_cast<long long>(m(i, c).to_int64()));
        rows.push_back(row);
      }
      gens.push_back(rows);
    }
    j["generators"] = gens;
    j["expected_lattice"] = e.expected_lattice ? nlohmann::ordered_json(*e.expected_lattice) : nullptr;
    j["expected_verdict"] = e.expected_verdict ? nlohmann::ordered_json(*e.expected_verdict) : nullptr;
    j["provenance"] = e.provenance;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

namespace {

std::vector<CatalogEntry> parse_entries(const std::string& text, std::vector<std::string>* problems) {
  auto fail = [&](const std::string& msg) {
    if (!problems) throw CatalogError(msg);
    problems->push_back(msg);
  };
  std::vector<CatalogEntry> out;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    fail(std::string("invalid JSON: ") + ex.what());
    return out;
  }
  if (!doc.is_array()) {
    fail("catalog must be a JSON array");
    return out;
  }
  static const std::vector<std::string> verdicts = {"HereditarilyRational", "Rational", "StablyRational",
                                                    "RetractRational", "NotRetractRational", "Unknown"};
  for (size_t idx = 0; idx < doc.size(); ++idx) {
    const auto& j = doc[idx];
    const std::string where = "entry " + std::to_string(idx);
    size_t before = problems ? problems->size() : 0;
    try {
      CatalogEntry e;
      if (!j.is_object()) {
        fail(where + ": not an object");
        continue;
      }
      for (const char* key : {"name", "gap_id", "rank", "generators", "expected_lattice", "expected_verdict",
                              "provenance"})
        if (!j.contains(key)) fail(where + ": missing field '" + key + "'");
      if (problems && problems->size() > before) continue;
      e.name = j.at("name").get<std::string>();
      if (!j.at("gap_id").is_null()) {
        auto id = j.at("gap_id").get<std::vector<int>>();
        if (id.size() != 4) fail(where + ": gap_id must have 4 entries");
        else e.gap_id = std::array{id[0], id[1], id[2], id[3]};
      }
      e.rank = j.at("rank").get<size_t>();
      for (const auto& g : j.at("generators")) {
        auto rows = g.get<std::vector<std::vector<long long>>>();
        if (rows.size() != e.rank || std::any_of(rows.begin(), rows.end(), [&](auto& r) { return r.size() != e.rank; })) {
          fail(where + ": generator is not " + std::to_string(e.rank) + "x" + std::to_string(e.rank));
          continue;
        }
        IntMat m = IntMat::from_rows(rows, e.rank);
        Integer d = m.det();
        if (!d.is_unit()) fail(where + ": generator is not unimodular");
        e.generators.push_back(m);
      }
      if (e.generators.empty()) fail(where + ": no generators");
      if (!j.at("expected_lattice").is_null()) {
        e.expected_lattice = j.at("expected_lattice").get<std::string>();
        try {
          parse_lattice_expr(*e.expected_lattice);
        } catch (const ParseError& ex) {
          fail(where + ": expected_lattice: " + ex.what());
        }
      }
      if (!j.at("expected_verdict").is_null()) {
        e.expected_verdict = j.at("expected_verdict").get<std::string>();
        if (std::find(verdicts.begin(), verdicts.end(), *e.expected_verdict) == verdicts.end())
          fail(where + ": unknown verdict '" + *e.expected_verdict + "'");
      }
      e.provenance = j.at("provenance").get<std::string>();
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      fail(where + ": " + ex.what());
    }
  }
  return out;
}

}  // namespace

std::vector<CatalogEntry> catalog_from_json(const std::string& text) { return parse_entries(text, nullptr); }

std::vector<std::string> validate_catalog(const std::string& text) {
  std::vector<std::string> problems;
  parse_entries(text, &problems);
  return problems;
}

std::string to_string(CheckOutcome c) {
  switch (c) {
    case CheckOutcome::Pass:
      return "pass";
    case CheckOutcome::Fail:
      return "fail";
    case CheckOutcome::Unknown:
      return "unknown";
  }
  return "?";
}

std::vector<IdentificationCheck> verify_identifications(size_t budget) {
  std::vector<IdentificationCheck> out;
  for (const auto& e : builtin_catalog()) {
    if (!e.expected_lattice) continue;
    IdentificationCheck c;
    c.name = e.name;
    c.expression = *e.expected_lattice;
    try {
      GroupPtr g = e.group();
      GLattice target = evaluate(*e.expected_lattice, g);
      GroupPtr img = image_group(target);
      ZClassResult r = glz_conjugate(g, img, budget);
      if (r.verdict == ZClassVerdict::Conjugate) {
        c.outcome = CheckOutcome::Pass;
        c.detail = "conjugate";
      } else if (r.verdict == ZClassVerdict::ProvablyDistinct) {
        c.outcome = CheckOutcome::Fail;
        c.detail = r.reason;
      } else {
        c.detail = r.reason;
      }
    } catch (const Error& ex) {
      c.outcome = CheckOutcome::Fail;
      c.detail = ex.what();
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

struct Item {
  size_t root, sub;
  GroupPtr group;
  std::string invariant;
};

}  // namespace

CensusReport census_groups(const std::vector<std::pair<std::string, GroupPtr>>& roots, size_t budget, size_t jobs) {
  CensusReport rep;
  std::vector<Item> items;
  for (size_t r = 0; r < roots.size(); ++r) {
    rep.roots.push_back(roots[r].first);
    const auto& cls = roots[r].second->subgroup_classes().classes;
    for (size_t k = 0; k < cls.size(); ++k) items.push_back({r, k, cls[k].representative.as_group(), {}});
  }
  if (jobs == 0) jobs = 1;
  auto run_parallel = [&](size_t count, auto&& fn) {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next++; i < count; i = next++) fn(i);
    };
    std::vector<std::thread> pool;
    for (size_t t = 1; t < std::min(jobs, count); ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  };
  run_parallel(items.size(), [&](size_t i) { items[i].invariant = zclass_invariant(items[i].group); });

  std::map<std::string, std::vector<size_t>> buckets;
  for (size_t i = 0; i < items.size(); ++i) buckets[items[i].invariant].push_back(i);
  std::vector<const std::vector<size_t>*> blist;
  for (const auto& [k, v] : buckets) blist.push_back(&v);

  // Per bucket: classes as lists of item indices, plus undecided pairs.
  std::vector<std::vector<std::vector<size_t>>> bclasses(blist.size());
  std::vector<std::vector<std::pair<size_t, size_t>>> bundecided(blist.size());
  run_parallel(blist.size(), [&](size_t b) {
    auto& classes = bclasses[b];
    for (size_t i : *blist[b]) {
      bool placed = false;
      std::vector<size_t> open;
      for (size_t c = 0; c < classes.size() && !placed; ++c) {
        const Item& rep_item = items[classes[c].front()];
        // Subgroups of one root in the same class are the same group up to
        // conjugation inside that root, which was already resolved.
        ZClassResult r = glz_conjugate(rep_item.group, items[i].group, budget);
        if (r.verdict == ZClassVerdict::Conjugate) {
          classes[c].push_back(i);
          placed = true;
        } else if (r.verdict == ZClassVerdict::BudgetExhausted) {
          open.push_back(classes[c].front());
        }
      }
      if (!placed) {
        for (size_t o : open) bundecided[b].emplace_back(o, i);
        classes.push_back({i});
      }
    }
  });

  auto item_name = [&](size_t i) {
    return rep.roots[items[i].root] + "/H" + std::to_string(items[i].sub);
  };
  struct Tmp {
    size_t order;
    std::string inv;
    std::vector<size_t> members;
  };
  std::vector<Tmp> all;
  for (size_t b = 0; b < blist.size(); ++b) {
    for (auto& c : bclasses[b]) all.push_back({items[c.front()].group->order(), items[c.front()].invariant, c});
    for (auto [x, y] : bundecided[b]) rep.undecided_pairs.emplace_back(item_name(x), item_name(y));
  }
  std::sort(all.begin(), all.end(), [&](const Tmp& a, const Tmp& b) {
    if (a.order != b.order) return a.order < b.order;
    if (a.inv != b.inv) return a.inv < b.inv;
    return a.members < b.members;
  });
  std::map<size_t, size_t> per_order;
  const size_t rank = roots.empty() ? 0 : roots.front().second->rank();
  for (auto& t : all) {
    CensusClass c;
    c.label = "r" + std::to_string(rank) + "." + std::to_string(t.order) + "." + std::to_string(++per_order[t.order]);
    c.representative = items[t.members.front()].group;
    for (size_t i : t.members) {
      c.members.push_back({items[i].root, items[i].sub});
      c.origins.push_back(items[i].root);
    }
    std::sort(c.origins.begin(), c.origins.end());
    c.origins.erase(std::unique(c.origins.begin(), c.origins.end()), c.origins.end());
    rep.classes.push_back(std::move(c));
  }
  rep.count = rep.classes.size();
  return rep;
}

CensusReport census(const std::vector<CatalogEntry>& roots, size_t budget, size_t jobs) {
  std::vector<std::pair<std::string, GroupPtr>> gs;
  for (const auto& e : roots) gs.emplace_back(e.name, e.group());
  return census_groups(gs, budget, jobs);
}

std::optional<size_t> census_lookup(const CensusReport& report, const GroupPtr& g, size_t budget) {
  const std::string inv = zclass_invariant(g);
  for (size_t i = 0; i < report.classes.size(); ++i) {
    const auto& rep = report.classes[i].representative;
    if (rep->order() != g->order() || rep->rank() != g->rank()) continue;
    if (zclass_invariant(rep) != inv) continue;
    if (glz_conjugate(rep, g, budget).verdict == ZClassVerdict::Conjugate) return i;
  }
  return std::nullopt;
}

std::vector<CatalogEntry> dade_roots(size_t dim) {
  static const std::map<size_t, size_t> counts = {{2, 2}, {3, 4}, {4, 9}};
  auto it = counts.find(dim);
  if (it == counts.end()) throw CatalogError("no Dade groups of rank " + std::to_string(dim));
  std::vector<CatalogEntry> out;
  for (size_t k = 1; k <= it->second; ++k)
    out.push_back(catalog_entry("Dade(" + std::to_string(dim) + "," + std::to_string(k) + ")"));
  return out;
}

std::vector<CatalogEntry> hereditary_roots(size_t dim) {
  std::vector<std::string> names;
  if (dim == 2) names = {"Dade(2,1)", "Dade(2,2)"};
  else if (dim == 3) names = {"[3,6,7,1]", "[3,7,5,1]", "[3,7,4,3]", "[3,4,5,2]"};
  else if (dim == 4)
    names = {"[4,20,22,1]", "[4,30,13,1]", "[4,31,7,1]", "[4,32,21,1]",
             "[4,25,9,2]",  "[4,13,6,4]",  "[4,25,7,5]", "[4,24,3,4]"};
  else
    throw CatalogError("no hereditary root list for rank " + std::to_string(dim));
  std::vector<CatalogEntry> out;
  for (const auto& n : names) out.push_back(catalog_entry(n));
  return out;
}

}  // namespace tori
