#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tori/groups.hpp"

namespace tori {

// A finite G-set; action[g][x] is the image of point x under g.
struct GSet {
  GroupPtr group;
  size_t points = 0;
  std::vector<std::vector<uint32_t>> action;
};

// Points are the coordinate vectors permuted by a group of permutation matrices.
GSet natural_gset(const GroupPtr& g);
// Right cosets H\G, ordered by least element, with action Ht -> Htg.
GSet coset_gset(const Subgroup& h);
// Stabilizer of a point.
Subgroup point_stabilizer(const GSet& x, uint32_t point);
std::vector<std::vector<uint32_t>> orbits(const GSet& x);

// A lattice with one unimodular matrix per group element (row action).
struct GLattice {
  GroupPtr group;
  size_t rank = 0;
  std::vector<IntMat> action;

  const IntMat& act(Elt g) const { return action[g]; }
  // act(x * s) == act(x) * act(s) for all x and generators s; equivalent to
  // the full Cayley-table check.
  bool verify_homomorphism() const;
  std::vector<IntMat> generator_images() const;
};

// Build a lattice from images of the group's generators.
GLattice lattice_from_generators(const GroupPtr& g, const std::vector<IntMat>& images);

struct EquivariantMap {
  GLattice source, target;
  IntMat matrix;  // source.rank x target.rank; act_src(g) * matrix == matrix * act_tgt(g)
  bool verify() const;
};

GLattice std_lattice(const GroupPtr& g);
GLattice trivial_lattice(const GroupPtr& g, size_t rank = 1);
GLattice perm_lattice(const GSet& x);
GLattice aug_ideal(const GSet& x);
GLattice j_lattice(const GSet& x);
struct NotIndexTwoNormal : Error {
  using Error::Error;
};
GLattice sign_lattice(const GroupPtr& g, const Subgroup& n);
// Z[G/H] as a lattice over G.
GLattice coset_lattice(const Subgroup& h);

GLattice dual(const GLattice& m);
GLattice direct_sum(const GLattice& m, const GLattice& n);
GLattice direct_sum(const std::vector<GLattice>& parts);
GLattice tensor(const GLattice& m, const GLattice& n);
// Lattice over h.as_group().
GLattice restrict(const GLattice& m, const Subgroup& h);
// m is a lattice over h.as_group(); result is over h.parent.
GLattice induce(const Subgroup& h, const GLattice& m);
// m is a lattice over quotient_group(n).group; result is over n.parent.
GLattice inflate(const Subgroup& n, const GLattice& m);
// Change of basis: rows of b are the new basis vectors; act' = b act b^-1.
GLattice change_basis(const GLattice& m, const IntMat& b);
// Sublattice spanned (saturated or not) by invariant rows; basis given by rows.
GLattice sublattice(const GLattice& m, const IntMat& basis);
// Quotient by an invariant saturated sublattice; returns the lattice and the
// projection matrix (m.rank x quotient rank).
std::pair<GLattice, IntMat> quotient_lattice(const GLattice& m, const IntMat& sub_basis);
bool is_invariant(const GLattice& m, const IntMat& rows);

Integer character(const GLattice& m, Elt g);
bool same_group(const GLattice& m, const GLattice& n);

IntMat fixed_sublattice(const GLattice& m, const Subgroup& h);
IntMat norm_matrix(const GLattice& m, const Subgroup& h);
// Tate cohomology in degrees -1, 0, 1.
AbelianInvariants tate(const GLattice& m, const Subgroup& h, int k);
bool is_flasque(const GLattice& m);
bool is_coflasque(const GLattice& m);

// Z-basis of Hom_G(m, n) as (m.rank x n.rank) matrices.
std::vector<IntMat> hom_lattice(const GLattice& m, const GLattice& n);
// dim_Q Hom_G(m, n) from characters.
size_t hom_dimension(const GLattice& m, const GLattice& n);

enum class SearchVerdict { Found, ProvablyNot, BudgetExhausted };
std::string to_string(SearchVerdict v);

struct IsoResult {
  SearchVerdict verdict = SearchVerdict::BudgetExhausted;
  std::optional<EquivariantMap> map;
  std::string reason;
};
IsoResult find_isomorphism(const GLattice& m, const GLattice& n, size_t budget = 20000);

// Table of marks: marks[i][j] = number of fixed points of class rep i on
// the cosets of class rep j.
std::vector<std::vector<size_t>> table_of_marks(const GroupPtr& g);

struct PermRecognition {
  SearchVerdict verdict = SearchVerdict::BudgetExhausted;
  std::vector<size_t> class_multiset;  // subgroup class index per orbit
  std::optional<EquivariantMap> map;   // from the permutation lattice to m
  GLattice perm;                       // the permutation lattice itself
  std::string reason;
};
// Multisets of subgroup classes {H_i} such that (+)Z[G/H_i] matches m in
// fixed ranks and H^0 multiplicities on every subgroup class. An empty
// result proves m is not a permutation lattice. At most cap are returned.
std::vector<std::vector<size_t>> permutation_candidates(const GLattice& m, size_t cap = 64);
PermRecognition recognize_permutation(const GLattice& m, size_t budget = 20000);
// An isomorphism (+)Z[G/H_k] -> m, k over classes, found by choosing one
// generator per summand in the fixed sublattices; nullopt when the bounded
// search fails (not a proof).
std::optional<EquivariantMap> permutation_isomorphism(const GLattice& m, const std::vector<size_t>& classes,
                                                     size_t budget = 20000);

struct SignPermRecognition {
  SearchVerdict verdict = SearchVerdict::BudgetExhausted;
  IntMat basis;  // rows permuted up to sign by every group element
  std::string reason;
};
SignPermRecognition recognize_sign_permutation(const GLattice& m, size_t budget = 200000);

// Ranks and Tate groups of m over each subgroup class representative.
struct CohomologyProfile {
  std::vector<size_t> fixed_ranks;
  std::vector<AbelianInvariants> h0, hm1, h1;
  bool operator==(const CohomologyProfile& o) const = default;
};
CohomologyProfile cohomology_profile(const GLattice& m, bool with_tate = true);

}  // namespace tori
