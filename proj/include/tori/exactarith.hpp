#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tori/intmat.hpp"

namespace tori {

struct SmithForm {
  std::vector<Integer> d;  // diagonal, non-negative, divisibility chain, zeros last
  IntMat u, v;             // u * a * v = diag(d) (rectangular)
  IntMat vinv;             // inverse of v when requested
};

struct HermiteForm {
  IntMat h;  // row-style HNF; zero rows at the bottom
  IntMat u;  // unimodular, u * a = h
  size_t rank = 0;
};

// A finite abelian group plus a free part: Z^free_rank + (+)_i Z/factors[i].
struct AbelianInvariants {
  std::vector<Integer> factors;
  size_t free_rank = 0;

  bool is_zero() const { return factors.empty() && free_rank == 0; }
  Integer order() const;  // product of the factors (torsion part)
  std::string str() const;
  bool operator==(const AbelianInvariants& o) const = default;
  // Number of cyclic factors of order divisible by q.
  size_t count_divisible(const Integer& q) const;
};

struct SnfOptions {
  bool want_u = true;
  bool want_v = true;
  bool want_vinv = false;
};

SmithForm snf(const IntMat& a, SnfOptions opt = {});
HermiteForm hnf(const IntMat& a, bool want_u = true);
// Rows spanning the same lattice as the rows of a, in HNF, zero rows removed.
IntMat row_basis(const IntMat& a);
// Z-basis of {x : x * a = 0}, rows, saturated, in HNF.
IntMat kernel_basis(const IntMat& a);
// Z-basis of (Q-span of rows) intersected with Z^cols.
IntMat saturate(const IntMat& rows);
// Rows c such that (rows; c) is unimodular; rows must be primitive.
IntMat complete_to_basis(const IntMat& rows);
AbelianInvariants cokernel_invariants(const IntMat& sub, size_t amb_rank);
// Integer solution x of x * a = b (b a single row), if any.
std::optional<IntMat> solve_left(const IntMat& a, const IntMat& b);
// Express each row of b in terms of the rows of a (a has independent rows).
std::optional<IntMat> coordinates_in(const IntMat& basis, const IntMat& b);
bool in_row_lattice(const IntMat& a, const IntMat& v);

// Non-negative integer solutions x of a x = b, where every entry of a is
// non-negative; at most limit solutions, in decreasing lexicographic order.
std::vector<std::vector<long long>> nonnegative_solutions(const std::vector<std::vector<long long>>& a,
                                                          const std::vector<long long>& b, size_t limit);

// LLL reduction of independent row vectors (delta = 0.99); returns the
// reduced rows, and the transform t with t * rows = reduced when requested.
IntMat lll(const IntMat& rows, IntMat* transform = nullptr);

struct UnimodularSearch {
  std::optional<IntMat> found;
  std::vector<Integer> coefficients;  // with respect to the input basis
  size_t evaluations = 0;
  bool exhausted = false;  // budget ran out; "unknown", not "no"
  bool impossible = false; // decided: no element has det +-1
};

// Search the Z-span of square matrices for one of determinant +-1.
UnimodularSearch unimodular_in_lattice(const std::vector<IntMat>& basis, size_t budget);

}  // namespace tori
