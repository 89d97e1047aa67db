#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tori/lattices.hpp"

namespace tori {

struct CatalogEntry {
  std::string name;
  std::optional<std::array<int, 4>> gap_id;  // claimed label, not verified
  size_t rank = 0;
  std::vector<IntMat> generators;
  std::optional<std::string> expected_lattice;  // lattice expression
  std::optional<std::string> expected_verdict;
  std::string provenance;

  GroupPtr group() const;
  std::string gap_id_string() const;  // "[4,33,2,1]" or ""
};

struct CatalogError : Error {
  using Error::Error;
};

const std::vector<CatalogEntry>& builtin_catalog();
// Lookup by name ("Dade(4,9)"), by GAP label ("[4,33,2,1]" or "4-33-2-1"),
// or by the lower-case dashed form of the name ("dade-4-9").
const CatalogEntry& catalog_entry(const std::string& key);
std::optional<CatalogEntry> find_catalog_entry(const std::string& key);

// Permutation of {1..degree} from cycle notation such as "(1,3,2)(45)".
// Result is 0-based: p[i] is the image of i.
std::vector<uint32_t> parse_cycles(const std::string& cycles, size_t degree);

// Matrices of the builders on the standard bases. sigma is 0-based.
IntMat rho_matrix(const std::vector<uint32_t>& sigma);          // J_{X_{n+1}}, n = degree - 1
IntMat rho_dual_matrix(const std::vector<uint32_t>& sigma);     // I_{X_{n+1}}
IntMat eta_matrix(const std::vector<uint32_t>& sigma, const std::vector<int>& signs);  // tau sigma
IntMat companion_matrix(const std::vector<long long>& monic);   // coefficients a_0..a_{d-1}
std::vector<long long> cyclotomic_polynomial(size_t m);           // a_0..a_d

struct UnknownBuilder : Error {
  using Error::Error;
};
// builder in {rho, rho_dual, rho_sign, rho_sign_dual, eta_B,
// cyclotomic_companion, weight_A, root_A}; the standard lattice of the image group.
GLattice named_lattice(const std::string& builder, size_t n);
std::vector<std::string> named_builders();

// JSON catalog files.
std::string catalog_to_json(const std::vector<CatalogEntry>& entries);
std::vector<CatalogEntry> catalog_from_json(const std::string& text);
// Problems found in a catalog file; empty when valid.
std::vector<std::string> validate_catalog(const std::string& text);

enum class CheckOutcome { Pass, Fail, Unknown };
std::string to_string(CheckOutcome c);

struct IdentificationCheck {
  std::string name;
  std::string expression;
  CheckOutcome outcome = CheckOutcome::Unknown;
  std::string detail;
};
std::vector<IdentificationCheck> verify_identifications(size_t budget = 20000);

struct CensusMember {
  size_t root = 0;      // index into roots
  size_t subgroup = 0;  // subgroup class index in that root
};
struct CensusClass {
  std::string label;
  GroupPtr representative;
  std::vector<CensusMember> members;
  std::vector<size_t> origins;  // sorted root indices
};
struct CensusReport {
  std::vector<std::string> roots;
  std::vector<CensusClass> classes;
  size_t count = 0;
  std::vector<std::pair<std::string, std::string>> undecided_pairs;
};
struct UndecidedPairs : Error {
  using Error::Error;
};
// Merges the subgroup classes of every root into GL_r(Z)-conjugacy classes.
// Undecided pairs are listed in the report; callers reject such a census.
CensusReport census(const std::vector<CatalogEntry>& roots, size_t budget = 20000, size_t jobs = 1);
// Census of groups already given as matrix groups.
CensusReport census_groups(const std::vector<std::pair<std::string, GroupPtr>>& roots, size_t budget = 20000,
                           size_t jobs = 1);
// Index of the census class conjugate to g, if any.
std::optional<size_t> census_lookup(const CensusReport& report, const GroupPtr& g, size_t budget = 20000);

// Root lists used by the census command.
std::vector<CatalogEntry> dade_roots(size_t dim);
std::vector<CatalogEntry> hereditary_roots(size_t dim);
// Expected class counts.
inline constexpr size_t kClassesDim2 = 13;
inline constexpr size_t kClassesDim3 = 73;
inline constexpr size_t kRationalDim3 = 58;
inline constexpr size_t kHereditaryDim4 = 477;
inline constexpr size_t kStablyRationalDim4 = 487;
inline constexpr size_t kClassesDim4 = 710;

}  // namespace tori
