#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tori/exactarith.hpp"

namespace tori {

using Elt = uint32_t;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OrderCapExceeded : Error {
  using Error::Error;
};
struct NotUnimodular : Error {
  using Error::Error;
};
struct GroupMismatch : Error {
  using Error::Error;
};

class FiniteMatrixGroup;
struct SubgroupClassification;
using GroupPtr = std::shared_ptr<const FiniteMatrixGroup>;

// A finite subgroup of GL_r(Z) with its full element list and Cayley table.
// Element 0 is the identity. Action is on row vectors: v -> v * g.
class FiniteMatrixGroup {
 public:
  static GroupPtr closure(const std::vector<IntMat>& generators, size_t order_cap = 100000);
  // Group with given elements (identity first) and a precomputed table.
  static GroupPtr from_table(std::vector<IntMat> elements, std::vector<Elt> table,
                             std::vector<Elt> generators);

  size_t rank() const { return rank_; }
  size_t order() const { return elements_.size(); }
  const IntMat& element(Elt i) const { return elements_[i]; }
  const std::vector<IntMat>& elements() const { return elements_; }
  Elt mul(Elt a, Elt b) const { return table_[static_cast<size_t>(a) * elements_.size() + b]; }
  Elt inv(Elt a) const { return inverse_[a]; }
  // g x g^-1
  Elt conj(Elt g, Elt x) const { return mul(mul(g, x), inverse_[g]); }
  Elt pow(Elt a, long long e) const;
  const std::vector<Elt>& generators() const { return generators_; }
  std::vector<IntMat> generator_matrices() const;
  std::optional<Elt> find(const IntMat& m) const;
  size_t element_order(Elt a) const { return orders_[a]; }
  const std::vector<Elt>& table() const { return table_; }
  bool same_as(const FiniteMatrixGroup& o) const;
  // Index of an element of a word in the generators, letters a, b, c, ...
  // with optional "^k" exponents and "*" separators, e.g. "a*b^-1".
  Elt evaluate_word(const std::string& word) const;
  // Subgroup conjugacy classes, computed once on first use.
  const SubgroupClassification& subgroup_classes() const;
  // Class representatives of the non-trivial p-subgroups, over all primes.
  std::vector<size_t> p_subgroup_class_indices() const;
  // marks[i][j]: fixed points of class rep i on the cosets of class rep j.
  const std::vector<std::vector<size_t>>& table_of_marks() const;

 private:
  void finish();

  size_t rank_ = 0;
  std::vector<IntMat> elements_;
  std::vector<Elt> table_;
  std::vector<Elt> inverse_;
  std::vector<Elt> generators_;
  std::vector<size_t> orders_;
  std::unordered_map<IntMat, Elt> index_;
  mutable std::once_flag classes_once_;
  mutable std::shared_ptr<SubgroupClassification> classes_;
  mutable std::once_flag marks_once_;
  mutable std::vector<std::vector<size_t>> marks_;
};

struct Subgroup {
  GroupPtr parent;
  std::vector<Elt> members;  // sorted, contains 0

  size_t order() const { return members.size(); }
  bool contains(Elt e) const;
  std::vector<uint64_t> bits() const;
  // Small generating set, greedily chosen in index order.
  std::vector<Elt> generators() const;
  // The subgroup as a matrix group; element k corresponds to members[k].
  GroupPtr as_group() const;
  bool operator==(const Subgroup& o) const { return members == o.members; }
  bool operator<(const Subgroup& o) const;
  bool is_whole() const { return members.size() == parent->order(); }
};

Subgroup whole_group(const GroupPtr& g);
Subgroup trivial_subgroup(const GroupPtr& g);
Subgroup generated_subgroup(const GroupPtr& g, const std::vector<Elt>& gens);
// Smallest subgroup containing h and x.
Subgroup join(const Subgroup& h, Elt x);
Subgroup conjugate(const Subgroup& h, Elt g);  // g h g^-1
Subgroup normalizer(const Subgroup& h);
Subgroup centralizer(const GroupPtr& g, const std::vector<Elt>& elts);
Subgroup intersect(const Subgroup& a, const Subgroup& b);
bool is_normal(const Subgroup& h);
bool is_subset(const Subgroup& a, const Subgroup& b);
// Right cosets H t, ordered by their least element; reps are the least element.
std::vector<Elt> right_coset_reps(const Subgroup& h);
// For each element, the index of its right coset in right_coset_reps order.
std::vector<size_t> right_coset_index(const Subgroup& h, const std::vector<Elt>& reps);

struct SubgroupClass {
  Subgroup representative;             // lexicographically least member set
  std::vector<Subgroup> conjugates;    // full conjugacy orbit, sorted
};

struct SubgroupClassification {
  std::vector<SubgroupClass> classes;  // ordered by (order, representative)
  size_t total() const;
  // Index of the class containing h.
  size_t class_of(const Subgroup& h) const;
};

SubgroupClassification all_subgroups(const GroupPtr& g, size_t cap = 5000);
// Class representative of a Sylow p-subgroup (trivial if p does not divide |g|).
Subgroup sylow(const GroupPtr& g, unsigned p);
// Lexicographically least conjugate.
Subgroup canonical_conjugate(const Subgroup& h);

struct DoubleCoset {
  Elt representative;
  Subgroup intersection;  // A cap x B x^-1
  size_t size = 0;
};
std::vector<DoubleCoset> double_cosets(const GroupPtr& g, const Subgroup& a, const Subgroup& b);

struct StructureProbe {
  size_t order = 0;
  bool is_cyclic = false;
  bool is_abelian = false;
  bool sylows_all_cyclic = false;
  Subgroup center;
  std::vector<Subgroup> normal_subgroups;
};
StructureProbe structure_probe(const GroupPtr& g);

std::vector<unsigned> prime_divisors(size_t n);

// Quotient G/N acting by permutation matrices on the right cosets of N.
// image[i] is the quotient element of element i.
struct Quotient {
  GroupPtr group;
  std::vector<Elt> image;
};
Quotient quotient_group(const Subgroup& n);

// Z-class comparison: X with X * g1 * X^-1 = g2 (as sets).
enum class ZClassVerdict { Conjugate, ProvablyDistinct, BudgetExhausted };
struct ZClassResult {
  ZClassVerdict verdict = ZClassVerdict::BudgetExhausted;
  std::optional<IntMat> conjugator;
  std::string reason;
};
ZClassResult glz_conjugate(const GroupPtr& g1, const GroupPtr& g2, size_t budget = 20000);

// Invariant used to bucket groups before conjugacy testing; equal
// invariants are necessary for GL_r(Z)-conjugacy.
std::string zclass_invariant(const GroupPtr& g);

}  // namespace tori
