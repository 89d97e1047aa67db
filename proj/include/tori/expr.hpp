#pragma once

#include <string>
#include <vector>

#include "tori/lattices.hpp"

namespace tori {

// Lattice expressions:
//   expr := ident | ident "(" arg ("," arg)* ")"
//   arg  := expr | "[" word ("," word)* "]" | integer
// Subgroup arguments are either a bracketed generator-word list or a label
// (G, 1, or Hk for the k-th subgroup class).
struct LatticeExpr {
  enum class Kind { Call, Words, Number };
  Kind kind = Kind::Call;
  std::string head;                // identifier or number text
  std::vector<std::string> words;  // for Kind::Words
  std::vector<LatticeExpr> args;
  size_t offset = 0;               // byte offset in the source text

  bool operator==(const LatticeExpr& o) const {
    return kind == o.kind && head == o.head && words == o.words && args == o.args;
  }
};

struct ParseError : Error {
  size_t offset;
  ParseError(const std::string& msg, size_t off)
      : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

LatticeExpr parse_lattice_expr(const std::string& text);
std::string to_string(const LatticeExpr& e);

// Subgroup from a label or "gens:[...]" / "[...]" word list.
Subgroup resolve_subgroup(const GroupPtr& g, const std::string& spec);
Subgroup resolve_subgroup(const GroupPtr& g, const LatticeExpr& arg);

// Evaluates over the ambient group g. Ambient-free forms (named, blocks,
// catalog) ignore g, which may then be null.
GLattice evaluate(const LatticeExpr& e, const GroupPtr& g);
GLattice evaluate(const std::string& text, const GroupPtr& g);

// Block-diagonal sum over the direct product of the two image groups.
GLattice external_sum(const GLattice& a, const GLattice& b);
// The group of matrices of m, with its standard lattice.
GroupPtr image_group(const GLattice& m);

}  // namespace tori
