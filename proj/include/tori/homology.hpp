#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tori/lattices.hpp"

namespace tori {

// 0 -> left --inj--> mid --surj--> right -> 0
struct ExactSequenceCert {
  GLattice left, mid, right;
  EquivariantMap inj, surj;
};

struct ExactnessReport {
  bool ok = false;
  std::string failure;  // first failing condition, empty when ok
};
ExactnessReport check_exact(const ExactSequenceCert& c);
bool verify_exact(const ExactSequenceCert& c);

// Builds the certificate from the two matrices.
ExactSequenceCert make_sequence(const GLattice& left, const GLattice& mid, const GLattice& right, const IntMat& inj,
                                const IntMat& surj);
ExactSequenceCert dual_sequence(const ExactSequenceCert& c);

// One transitive summand Z[G/H_k] of a permutation lattice mapping the
// coset H_k t to vector * t.
struct PermSummand {
  size_t subgroup_class = 0;
  IntMat vector;  // 1 x rank, fixed by the class representative
};

struct CoflasqueResolution {
  ExactSequenceCert cert;  // 0 -> C -> P -> M -> 0
  std::vector<PermSummand> summands;
};
CoflasqueResolution coflasque_resolution(const GLattice& m);

struct SubgroupCheck {
  size_t subgroup_class = 0;
  AbelianInvariants value;
};

struct FlasqueResolution {
  ExactSequenceCert cert;                // 0 -> M -> P -> F -> 0
  std::vector<size_t> perm_classes;      // subgroup class of each summand of P
  std::vector<SubgroupCheck> flasque_check;  // H^-1(H, F) per p-subgroup class
  bool verify() const;
};
// Dual of the coflasque resolution of M*.
FlasqueResolution flasque_resolution(const GLattice& m);

// An exact sequence with a section s: right -> mid, surj o s = degree.
struct SplitSequence {
  ExactSequenceCert seq;
  IntMat section;  // right.rank x mid.rank
  Integer degree = 1;
  bool verify() const;
};
struct SectionInvalid : Error {
  using Error::Error;
};
struct DegreesNotCoprime : Error {
  using Error::Error;
};

// 0 -> Z -> Z[X] -> J_X -> 0 with s(pi(x)) = n x - sum(X).
SplitSequence j_sequence(const GSet& x);
// 0 -> I_X -> Z[X] -> Z -> 0 with s(1) = sum(X).
SplitSequence augmentation_sequence(const GSet& x);
// D (x) seq, with section id (x) s.
SplitSequence tensor_sequence(const GLattice& d, const SplitSequence& s);

// A3 = A1 (x) A2, B3 = (B1 (x) B2) + (C1 (x) C2), C3 = (C1 (x) B2) + (B1 (x) C2),
// with a section of degree d1 d2.
SplitSequence florence_combine(const SplitSequence& s1, const SplitSequence& s2);

// For a sign-permutation lattice S with signed basis rows b:
// 0 -> (+) Z[G/G_v^+-] -> (+) Z[G/G_v] -> S -> 0, one pair per orbit of +-b.
struct SignPermResolution {
  ExactSequenceCert cert;
  std::vector<size_t> left_classes, mid_classes;
};
SignPermResolution sign_permutation_resolution(const GLattice& s, const IntMat& basis);

// Pullback E of bottom: 0 -> A -> B -> D -> 0 and rightcol: 0 -> K -> P -> D' -> 0
// (D' iso D). When both induced sequences split, B + K iso A + P.
struct PullbackSplit {
  GLattice pullback;
  IntMat pullback_basis;       // rows in B + P coordinates
  ExactSequenceCert via_left;  // 0 -> A -> E -> P -> 0
  ExactSequenceCert via_top;   // 0 -> K -> E -> B -> 0
  EquivariantMap iso;          // direct_sum(B, K) -> direct_sum(A, P)
};
std::optional<PullbackSplit> pullback_split(const ExactSequenceCert& bottom, const ExactSequenceCert& rightcol,
                                            size_t budget = 20000);
// Retraction r: mid -> left with inj * r = id, if one exists.
std::optional<IntMat> find_retraction(const EquivariantMap& inj);

// Integer system on x_d = b_d - a_d (one unknown per subgroup class), from
// F + (+)a_d Z[G/H_d] iso (+)b_d Z[G/H_d]. Row (k, 0) compares fixed ranks
// over class k; row (k, q) compares the number of cyclic factors of H^0 of
// order divisible by q.
struct ObstructionWitness {
  std::vector<size_t> test_subgroups;
  std::vector<size_t> unknowns;
  IntMat equations;
  std::vector<Integer> rhs;
  std::vector<std::pair<size_t, Integer>> row_labels;
  // (1/denominator) * combination * equations is integral while
  // (1/denominator) * combination * rhs is not.
  IntMat combination;
  Integer denominator = 1;

  bool certificate_holds() const;
  // Rebuilds the system from f and checks the certificate.
  bool verify(const GLattice& f) const;
};
ObstructionWitness obstruction_system(const GLattice& f);
std::optional<ObstructionWitness> stably_permutation_obstruction(const GLattice& f);

enum class Tri { Yes, No, Unknown };
std::string to_string(Tri t);

struct QuasiPermResult {
  Tri verdict = Tri::Unknown;
  std::optional<FlasqueResolution> resolution;
  // On yes: F + (+)Z[G/H_k], k in padding, iso (+)Z[G/H_k], k in target.
  std::vector<size_t> padding, target;
  std::optional<EquivariantMap> iso;  // target lattice -> F + padding
  std::optional<ObstructionWitness> witness;
  // quasi_permutation_check on yes: 0 -> M -> P + padding -> target -> 0.
  std::optional<ExactSequenceCert> closing;
  std::string reason;
};
// rank_budget bounds the padding rank; 0 means 3 * rank F.
QuasiPermResult quasi_permutation_check(const GLattice& m, size_t rank_budget = 0, size_t iso_budget = 20000);
// The same search for F itself being stably permutation.
QuasiPermResult stably_permutation_check(const GLattice& f, size_t rank_budget = 0, size_t iso_budget = 20000);

// When enabled, every resolution built by coflasque_resolution,
// flasque_resolution and sign_permutation_resolution is re-verified on the
// spot and counted. Off by default.
struct ResolutionAudit {
  size_t produced = 0;
  size_t passed = 0;
};
void set_resolution_audit(bool on);
ResolutionAudit resolution_audit();

// (+) Z[G/H_k] over the listed class indices.
GLattice permutation_lattice_of(const GroupPtr& g, const std::vector<size_t>& classes);

}  // namespace tori
