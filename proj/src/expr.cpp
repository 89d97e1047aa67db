#include "tori/expr.hpp"

#include <algorithm>
#include <cctype>

#include "tori/catalog.hpp"

namespace tori {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  LatticeExpr parse_all(bool lattice_only = true) {
    LatticeExpr e = parse_arg();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    if (lattice_only && e.kind != LatticeExpr::Kind::Call) throw ParseError("expected a lattice expression", e.offset);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "', got end of input", pos_);
    if (s_[pos_] != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }
  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  LatticeExpr parse_arg() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("expected an expression, got end of input", pos_);
    LatticeExpr e;
    e.offset = pos_;
    char c = s_[pos_];
    if (c == '[') {
      ++pos_;
      e.kind = LatticeExpr::Kind::Words;
      skip();
      if (peek(']')) {
        ++pos_;
        return e;
      }
      for (;;) {
        skip();
        size_t start = pos_;
        std::string w;
        while (pos_ < s_.size() && (ident_char(s_[pos_]) || s_[pos_] == '*' || s_[pos_] == '^' ||
                                    s_[pos_] == '-' || std::isspace(static_cast<unsigned char>(s_[pos_])))) {
          if (!std::isspace(static_cast<unsigned char>(s_[pos_]))) w += s_[pos_];
          ++pos_;
        }
        if (w.empty()) throw ParseError("expected a generator word", start);
        e.words.push_back(w);
        if (peek(',')) {
          ++pos_;
          continue;
        }
        expect(']');
        return e;
      }
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      e.kind = LatticeExpr::Kind::Number;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) e.head += s_[pos_++];
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_') throw ParseError("expected an identifier", pos_);
    while (pos_ < s_.size() && ident_char(s_[pos_])) e.head += s_[pos_++];
    if (peek('(')) {
      ++pos_;
      for (;;) {
        e.args.push_back(parse_arg());
        if (peek(',')) {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    return e;
  }

  const std::string& s_;
  size_t pos_ = 0;
};

void need_args(const LatticeExpr& e, size_t n) {
  if (e.args.size() != n)
    throw ParseError(e.head + " takes " + std::to_string(n) + " argument(s), got " + std::to_string(e.args.size()),
                     e.offset);
}

void need_group(const LatticeExpr& e, const GroupPtr& g) {
  if (!g) throw ParseError(e.head + " needs an ambient group", e.offset);
}

}  // namespace

LatticeExpr parse_lattice_expr(const std::string& text) { return Parser(text).parse_all(); }

std::string to_string(const LatticeExpr& e) {
  switch (e.kind) {
    case LatticeExpr::Kind::Number:
      return e.head;
    case LatticeExpr::Kind::Words: {
      std::string s = "[";
      for (size_t i = 0; i < e.words.size(); ++i) s += (i ? "," : "") + e.words[i];
      return s + "]";
    }
    case LatticeExpr::Kind::Call:
      break;
  }
  if (e.args.empty()) return e.head;
  std::string s = e.head + "(";
  for (size_t i = 0; i < e.args.size(); ++i) s += (i ? "," : "") + to_string(e.args[i]);
  return s + ")";
}

Subgroup resolve_subgroup(const GroupPtr& g, const std::string& spec) {
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.rfind("gens:", 0) == 0) s = s.substr(5);
  if (!s.empty() && s[0] == '[') return resolve_subgroup(g, Parser(s).parse_all(false));
  LatticeExpr e;
  e.head = s;
  return resolve_subgroup(g, e);
}

Subgroup resolve_subgroup(const GroupPtr& g, const LatticeExpr& arg) {
  if (!g) throw ParseError("subgroup needs an ambient group", arg.offset);
  if (arg.kind == LatticeExpr::Kind::Words) {
    std::vector<Elt> gens;
    for (const auto& w : arg.words) {
      try {
        gens.push_back(g->evaluate_word(w));
      } catch (const Error& ex) {
        throw ParseError(std::string("bad generator word '") + w + "': " + ex.what(), arg.offset);
      }
    }
    return generated_subgroup(g, gens);
  }
  if (arg.kind == LatticeExpr::Kind::Number && arg.head == "1") return trivial_subgroup(g);
  if (arg.kind != LatticeExpr::Kind::Call || !arg.args.empty())
    throw ParseError("expected a subgroup", arg.offset);
  const std::string& h = arg.head;
  if (h == "G") return whole_group(g);
  if (h == "1") return trivial_subgroup(g);
  if (h.size() > 1 && h[0] == 'H' && std::all_of(h.begin() + 1, h.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    size_t k = std::stoul(h.substr(1));
    const auto& cls = g->subgroup_classes().classes;
    if (k >= cls.size()) throw ParseError("subgroup class " + h + " out of range", arg.offset);
    return cls[k].representative;
  }
  throw ParseError("unknown subgroup label '" + h + "'", arg.offset);
}

GroupPtr image_group(const GLattice& m) { return FiniteMatrixGroup::closure(m.generator_images()); }

GLattice external_sum(const GLattice& a, const GLattice& b) {
  std::vector<IntMat> gens;
  IntMat ia = IntMat::identity(a.rank), ib = IntMat::identity(b.rank);
  for (const auto& x : a.generator_images()) gens.push_back(x.block_diag(ib));
  for (const auto& y : b.generator_images()) gens.push_back(ia.block_diag(y));
  if (gens.empty()) gens.push_back(IntMat::identity(a.rank + b.rank));
  return std_lattice(FiniteMatrixGroup::closure(gens));
}

GLattice evaluate(const LatticeExpr& e, const GroupPtr& g) {
  if (e.kind != LatticeExpr::Kind::Call) throw ParseError("expected a lattice expression", e.offset);
  const std::string& h = e.head;
  auto number = [&](const LatticeExpr& a) -> size_t {
    if (a.kind != LatticeExpr::Kind::Number) throw ParseError("expected a number", a.offset);
    return std::stoul(a.head);
  };
  if (h == "std") {
    need_args(e, 0);
    need_group(e, g);
    return std_lattice(g);
  }
  if (h == "Z") {
    need_args(e, 0);
    need_group(e, g);
    return trivial_lattice(g);
  }
  if (h == "sign" || h == "perm" || h == "I" || h == "J") {
    need_args(e, 1);
    need_group(e, g);
    Subgroup sub = resolve_subgroup(g, e.args[0]);
    if (h == "sign") {
      try {
        return sign_lattice(g, sub);
      } catch (const NotIndexTwoNormal&) {
        throw ParseError("sign needs a normal subgroup of index 2", e.args[0].offset);
      }
    }
    if (h == "perm") return coset_lattice(sub);
    if (h == "I") return aug_ideal(coset_gset(sub));
    return j_lattice(coset_gset(sub));
  }
  if (h == "dual") {
    need_args(e, 1);
    return dual(evaluate(e.args[0], g));
  }
  if (h == "sum" || h == "tensor") {
    need_args(e, 2);
    GLattice a = evaluate(e.args[0], g), b = evaluate(e.args[1], g);
    if (!same_group(a, b)) throw ParseError(h + " needs lattices over the same group", e.offset);
    return h == "sum" ? direct_sum(a, b) : tensor(a, b);
  }
  if (h == "ind") {
    need_args(e, 2);
    need_group(e, g);
    Subgroup sub = resolve_subgroup(g, e.args[0]);
    return induce(sub, evaluate(e.args[1], sub.as_group()));
  }
  if (h == "res") {
    need_args(e, 2);
    need_group(e, g);
    Subgroup sub = resolve_subgroup(g, e.args[0]);
    return restrict(evaluate(e.args[1], g), sub);
  }
  if (h == "inflate") {
    need_args(e, 2);
    need_group(e, g);
    Subgroup n = resolve_subgroup(g, e.args[0]);
    if (!is_normal(n)) throw ParseError("inflate needs a normal subgroup", e.args[0].offset);
    return inflate(n, evaluate(e.args[1], quotient_group(n).group));
  }
  if (h == "named") {
    need_args(e, 2);
    if (e.args[0].kind != LatticeExpr::Kind::Call || !e.args[0].args.empty())
      throw ParseError("expected a builder name", e.args[0].offset);
    try {
      return named_lattice(e.args[0].head, number(e.args[1]));
    } catch (const UnknownBuilder& ex) {
      throw ParseError(ex.what(), e.args[0].offset);
    }
  }
  if (h == "blocks") {
    need_args(e, 2);
    return external_sum(evaluate(e.args[0], g), evaluate(e.args[1], g));
  }
  if (h == "catalog") {
    need_args(e, 1);
    auto entry = find_catalog_entry(to_string(e.args[0]));
    if (!entry) throw ParseError("no catalog entry '" + to_string(e.args[0]) + "'", e.args[0].offset);
    return std_lattice(entry->group());
  }
  throw ParseError("unknown constructor '" + h + "'", e.offset);
}

GLattice evaluate(const std::string& text, const GroupPtr& g) { return evaluate(parse_lattice_expr(text), g); }

}  // namespace tori
