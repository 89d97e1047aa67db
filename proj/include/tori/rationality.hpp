#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tori/homology.hpp"
#include "tori/modular.hpp"

namespace tori {

// Strongest first. NotRetractRational and Unknown sit outside the chain.
enum class Level { HereditarilyRational, Rational, StablyRational, RetractRational, NotRetractRational, Unknown };
std::string to_string(Level l);
// have implies want along HereditarilyRational > Rational > StablyRational > RetractRational.
bool at_least(Level have, Level want);

// One re-checkable step of a certificate chain.
struct Evidence {
  std::string kind;
  std::string detail;
  std::optional<EquivariantMap> map;          // isomorphism onto the lattice under test
  std::optional<GLattice> lattice;            // lattice the step is about
  std::optional<IntMat> basis;                // sign-permutation basis
  std::optional<ExactSequenceCert> sequence;  // extension or closing sequence
  std::optional<ObstructionWitness> witness;
  std::vector<Evidence> parts;                // evidence for summands or sub-lattices
  std::function<bool()> recheck;              // structural steps
  bool verify() const;
};

struct RationalityVerdict {
  Level level = Level::Unknown;
  Tri stable = Tri::Unknown;  // stably permutation flasque class, when decided
  std::vector<Evidence> certificate;
  std::string notes;
  bool verify() const;
};

struct ClassifyOptions {
  size_t iso_budget = 20000;
  size_t padding_rank = 0;  // 0: rank of the flasque term
  bool stable_search = true;
  size_t detector_depth = 2;
};

// Hereditary detectors only, cheapest first.
std::optional<Evidence> detect_hereditary(const GLattice& m, const ClassifyOptions& opt = {});
RationalityVerdict classify(const GLattice& m, const ClassifyOptions& opt = {});

// Character lattice J_{G/H}.
struct NormOneSpec {
  GroupPtr g;
  Subgroup h;
};
struct UnrecognizedShape : Error {
  using Error::Error;
};
// Decision table on the structure of the faithful quotient acting on G/H.
// Shapes outside the table fall back to classify(J_{G/H}).
RationalityVerdict norm_one_classify(const NormOneSpec& spec, const ClassifyOptions& opt = {});
// Table lookup only; throws UnrecognizedShape.
RationalityVerdict norm_one_structural(const NormOneSpec& spec, const ClassifyOptions& opt = {});

struct HereditaryReport {
  std::vector<std::pair<size_t, RationalityVerdict>> per_class;  // subgroup class index, verdict
  bool hereditary = false;
};
HereditaryReport hereditary_closure(const GLattice& m, const ClassifyOptions& opt = {});

// Group predicates used by the decision table.
bool is_cyclic_group(const GroupPtr& g);
bool sylows_cyclic(const GroupPtr& g);
bool is_nilpotent(const GroupPtr& g);
// C_m, or C_n x <s, t | s^k = t^(2^d) = 1, t s t^-1 = s^-1> with n, k odd, k >= 3, d >= 1, gcd(n, k) = 1.
bool galois_stable_shape(const GroupPtr& g);
// G = C_m x D_2n, n odd, gcd(m, n) = 1, with h of order 2 inside the D_2n factor.
bool dihedral_stable_shape(const GroupPtr& g, const Subgroup& h);

}  // namespace tori
