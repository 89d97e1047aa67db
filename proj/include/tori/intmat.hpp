#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "tori/integer.hpp"

namespace tori {

// Dense row-major integer matrix.
class IntMat {
 public:
  IntMat() = default;
  IntMat(size_t rows, size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  IntMat(std::initializer_list<std::initializer_list<long long>> rows);
  static IntMat from_rows(const std::vector<std::vector<long long>>& rows, size_t cols = 0);
  static IntMat identity(size_t n);
  static IntMat zero(size_t rows, size_t cols) { return IntMat(rows, cols); }
  static IntMat scalar(size_t n, const Integer& s);
  static IntMat diag(const std::vector<Integer>& d);

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  bool empty() const { return r_ == 0 || c_ == 0; }
  bool is_square() const { return r_ == c_; }

  Integer& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
  const Integer& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }
  Integer* row_ptr(size_t i) { return a_.data() + i * c_; }
  const Integer* row_ptr(size_t i) const { return a_.data() + i * c_; }
  const std::vector<Integer>& data() const { return a_; }

  IntMat operator*(const IntMat& b) const;
  IntMat operator+(const IntMat& b) const;
  IntMat operator-(const IntMat& b) const;
  IntMat operator-() const;
  IntMat scaled(const Integer& s) const;
  bool operator==(const IntMat& b) const { return r_ == b.r_ && c_ == b.c_ && a_ == b.a_; }
  bool operator!=(const IntMat& b) const { return !(*this == b); }
  // Lexicographic on (rows, cols, entries).
  bool operator<(const IntMat& b) const;

  IntMat transpose() const;
  IntMat row(size_t i) const { return submatrix(i, 1, 0, c_); }
  IntMat submatrix(size_t r0, size_t nr, size_t c0, size_t nc) const;
  IntMat select_rows(const std::vector<size_t>& idx) const;
  IntMat vstack(const IntMat& b) const;
  IntMat hstack(const IntMat& b) const;
  IntMat kron(const IntMat& b) const;
  IntMat block_diag(const IntMat& b) const;
  // Row-major flattening to a 1 x (rows*cols) matrix and back.
  IntMat flatten() const;
  static IntMat unflatten(const IntMat& v, size_t rows, size_t cols);

  void swap_rows(size_t i, size_t j);
  void swap_cols(size_t i, size_t j);
  // row_i += q * row_j (and the column analogue).
  void add_row(size_t i, size_t j, const Integer& q);
  void add_col(size_t i, size_t j, const Integer& q);
  void negate_row(size_t i);
  void negate_col(size_t j);
  void append_row(const std::vector<Integer>& v);

  bool is_zero() const;
  bool is_identity() const;
  bool row_is_zero(size_t i) const;
  Integer det() const;
  size_t rank() const;
  uint64_t det_mod(uint64_t p) const;
  size_t rank_mod(uint64_t p) const;
  // Inverse of a unimodular matrix; throws if det is not +-1.
  IntMat inverse_unimodular() const;
  Integer max_abs() const;

  std::string str() const;
  size_t hash() const;

 private:
  size_t r_ = 0, c_ = 0;
  std::vector<Integer> a_;
};

std::ostream& operator<<(std::ostream& os, const IntMat& m);

// Modular arithmetic helpers for primes below 2^62.
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t p);
uint64_t invmod(uint64_t a, uint64_t p);

}  // namespace tori

template <>
struct std::hash<tori::IntMat> {
  size_t operator()(const tori::IntMat& m) const { return m.hash(); }
};
