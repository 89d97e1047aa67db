#pragma once

#include <string>
#include <vector>

#include "tori/lattices.hpp"

namespace tori {

// A finite-dimensional F_p[G]-module; matrices have entries in [0, p).
struct ModpModule {
  unsigned p = 2;
  GroupPtr group;
  size_t dim = 0;
  std::vector<IntMat> action;

  const IntMat& act(Elt g) const { return action[g]; }
  bool verify_homomorphism() const;
};

ModpModule reduce_mod_p(const GLattice& m, unsigned p);
ModpModule restrict(const ModpModule& v, const Subgroup& h);

// Basis (rows) of V^H.
IntMat fixed_subspace(const ModpModule& v, const Subgroup& h);
size_t norm_image_dimension(const ModpModule& v, const Subgroup& h);

// Vanishing of H^0 and H^-1 at every Sylow subgroup.
bool is_cohomologically_trivial(const ModpModule& v);
bool is_cohomologically_trivial(const GLattice& m);
// Free on restriction to a Sylow p-subgroup.
bool is_projective_modp(const ModpModule& v);

struct ModpPermRecognition {
  SearchVerdict verdict = SearchVerdict::BudgetExhausted;
  std::vector<size_t> class_multiset;  // subgroup classes of v.group
  IntMat basis;                        // rows permuted by the group
  std::string reason;
};
// v.group must be a p-group. budget is the number of random trials when
// the Hom space is too large to enumerate.
ModpPermRecognition is_permutation_modp(const ModpModule& v, size_t budget = 512);
// Rows are a basis of F_p^dim permuted by every group element.
bool is_permutation_basis(const ModpModule& v, const IntMat& basis);

struct PrimeCheck {
  unsigned p = 0;
  size_t sylow_order = 0;
  ModpPermRecognition recognition;
  size_t fixed_rank = 0;  // rank of M^{Syl_p}
  size_t fixed_dim = 0;   // dim of (F_p M)^{Syl_p}
};

struct InvertibilityResult {
  SearchVerdict verdict = SearchVerdict::BudgetExhausted;  // Found means invertible
  std::vector<PrimeCheck> primes;
  std::string reason;
};
// F_p M is permutation over Syl_p for every p, plus equal fixed ranks at p = 2.
InvertibilityResult is_invertible(const GLattice& m, size_t budget = 512);

}  // namespace tori
