#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>

namespace tori {

// Arbitrary-precision integer with an inline int64 fast path.
// The heap value is only present when the number does not fit in int64.
class Integer {
 public:
  Integer() = default;
  Integer(int v) : s_(v) {}
  Integer(long v) : s_(v) {}
  Integer(long long v) : s_(v) {}
  explicit Integer(const mpz_class& z) { assign(z); }
  explicit Integer(const std::string& text);

  Integer(const Integer& o) : s_(o.s_), big_(o.big_ ? new mpz_class(*o.big_) : nullptr) {}
  Integer(Integer&& o) noexcept : s_(o.s_), big_(o.big_) {
    o.big_ = nullptr;
    o.s_ = 0;
  }
  Integer& operator=(const Integer& o) {
    if (this == &o) return *this;
    if (o.big_) {
      if (big_) *big_ = *o.big_;
      else big_ = new mpz_class(*o.big_);
    } else {
      delete big_;
      big_ = nullptr;
      s_ = o.s_;
    }
    return *this;
  }
  Integer& operator=(Integer&& o) noexcept {
    std::swap(s_, o.s_);
    std::swap(big_, o.big_);
    return *this;
  }
  Integer& operator=(long long v) {
    delete big_;
    big_ = nullptr;
    s_ = v;
    return *this;
  }
  ~Integer() { delete big_; }

  bool is_small() const { return big_ == nullptr; }
  int64_t small() const { return s_; }
  bool fits_int64() const { return big_ == nullptr; }
  int64_t to_int64() const;
  mpz_class to_mpz() const { return big_ ? *big_ : mpz_class(static_cast<long>(s_)); }
  double to_double() const { return big_ ? big_->get_d() : static_cast<double>(s_); }
  std::string to_string() const;

  int sign() const {
    if (big_) return sgn(*big_);
    return (s_ > 0) - (s_ < 0);
  }
  bool is_zero() const { return !big_ && s_ == 0; }
  bool is_one() const { return !big_ && s_ == 1; }
  bool is_unit() const { return !big_ && (s_ == 1 || s_ == -1); }

  Integer operator-() const;
  Integer& operator+=(const Integer& b);
  Integer& operator-=(const Integer& b);
  Integer& operator*=(const Integer& b);
  Integer& operator/=(const Integer& b) { return *this = *this / b; }
  Integer& operator%=(const Integer& b) { return *this = *this % b; }

  // this += a * b, the inner loop of every elimination.
  void addmul(const Integer& a, const Integer& b);
  void submul(const Integer& a, const Integer& b);

  friend Integer operator+(const Integer& a, const Integer& b);
  friend Integer operator-(const Integer& a, const Integer& b);
  friend Integer operator*(const Integer& a, const Integer& b);
  // Truncating division and remainder, as for C++ built-in integers.
  friend Integer operator/(const Integer& a, const Integer& b);
  friend Integer operator%(const Integer& a, const Integer& b);

  friend bool operator==(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.s_ == b.s_;
    if (a.big_ && b.big_) return *a.big_ == *b.big_;
    return false;
  }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.s_ <=> b.s_;
    int c = cmp(a.to_mpz(), b.to_mpz());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  size_t hash() const;

 private:
  void assign(const mpz_class& z);
  static Integer from_mpz(const mpz_class& z) {
    Integer r;
    r.assign(z);
    return r;
  }

  int64_t s_ = 0;
  mpz_class* big_ = nullptr;
};

Integer abs(const Integer& a);
Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
// Floor division and the matching non-negative remainder (for b > 0).
Integer floor_div(const Integer& a, const Integer& b);
Integer mod(const Integer& a, const Integer& b);
// Nearest-integer quotient, ties toward zero.
Integer round_div(const Integer& a, const Integer& b);
// g = gcd(a, b) >= 0 with g = x*a + y*b.
void xgcd(const Integer& a, const Integer& b, Integer& g, Integer& x, Integer& y);
// a mod p for a prime p < 2^62, in [0, p).
uint64_t residue(const Integer& a, uint64_t p);

std::ostream& operator<<(std::ostream& os, const Integer& a);

}  // namespace tori

template <>
struct std::hash<tori::Integer> {
  size_t operator()(const tori::Integer& a) const { return a.hash(); }
};
