#include "tori/integer.hpp"

#include <limits>
#include <stdexcept>

namespace tori {

namespace {

bool mpz_fits_int64(const mpz_class& z) {
  static const mpz_class lo(std::to_string(std::numeric_limits<int64_t>::min()));
  static const mpz_class hi(std::to_string(std::numeric_limits<int64_t>::max()));
  return z >= lo && z <= hi;
}

int64_t mpz_to_int64(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  // long is 64-bit on the supported platforms; this branch is only reached
  // on platforms with 32-bit long.
  mpz_class hi = z >> 32;
  mpz_class lo = z - (hi << 32);
  return (static_cast<int64_t>(hi.get_si()) << 32) + static_cast<int64_t>(lo.get_ui());
}

}  // namespace

Integer::Integer(const std::string& text) {
  mpz_class z;
  if (z.set_str(text, 10) != 0) throw std::invalid_argument("bad integer: " + text);
  assign(z);
}

void Integer::assign(const mpz_class& z) {
  if (mpz_fits_int64(z)) {
    delete big_;
    big_ = nullptr;
    s_ = mpz_to_int64(z);
  } else {
    if (big_) *big_ = z;
    else big_ = new mpz_class(z);
    s_ = 0;
  }
}

int64_t Integer::to_int64() const {
  if (big_) throw std::overflow_error("Integer does not fit in int64");
  return s_;
}

std::string Integer::to_string() const { return big_ ? big_->get_str() : std::to_string(s_); }

size_t Integer::hash() const {
  if (!big_) return std::hash<int64_t>()(s_);
  return std::hash<std::string>()(big_->get_str(16));
}

Integer Integer::operator-() const {
  if (!big_ && s_ != std::numeric_limits<int64_t>::min()) return Integer(static_cast<long long>(-s_));
  return from_mpz(-to_mpz());
}

Integer operator+(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    long long r;
    if (!__builtin_add_overflow(a.s_, b.s_, &r)) return Integer(r);
  }
  return Integer::from_mpz(a.to_mpz() + b.to_mpz());
}

Integer operator-(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    long long r;
    if (!__builtin_sub_overflow(a.s_, b.s_, &r)) return Integer(r);
  }
  return Integer::from_mpz(a.to_mpz() - b.to_mpz());
}

Integer operator*(const Integer& a, const Integer& b) {
  if (!a.big_ && !b.big_) {
    long long r;
    if (!__builtin_mul_overflow(a.s_, b.s_, &r)) return Integer(r);
  }
  return Integer::from_mpz(a.to_mpz() * b.to_mpz());
}

Integer operator/(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_) {
    if (!(a.s_ == std::numeric_limits<int64_t>::min() && b.s_ == -1))
      return Integer(static_cast<long long>(a.s_ / b.s_));
  }
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer::from_mpz(q);
}

Integer operator%(const Integer& a, const Integer& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  if (!a.big_ && !b.big_) {
    if (b.s_ == -1) return Integer(0);
    return Integer(static_cast<long long>(a.s_ % b.s_));
  }
  mpz_class r;
  mpz_tdiv_r(r.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer::from_mpz(r);
}

Integer& Integer::operator+=(const Integer& b) {
  if (!big_ && !b.big_) {
    long long r;
    if (!__builtin_add_overflow(s_, b.s_, &r)) {
      s_ = r;
      return *this;
    }
  }
  return *this = *this + b;
}

Integer& Integer::operator-=(const Integer& b) {
  if (!big_ && !b.big_) {
    long long r;
    if (!__builtin_sub_overflow(s_, b.s_, &r)) {
      s_ = r;
      return *this;
    }
  }
  return *this = *this - b;
}

Integer& Integer::operator*=(const Integer& b) {
  if (!big_ && !b.big_) {
    long long r;
    if (!__builtin_mul_overflow(s_, b.s_, &r)) {
      s_ = r;
      return *this;
    }
  }
  return *this = *this * b;
}

void Integer::addmul(const Integer& a, const Integer& b) {
  if (!big_ && !a.big_ && !b.big_) {
    long long p, r;
    if (!__builtin_mul_overflow(a.s_, b.s_, &p) && !__builtin_add_overflow(s_, p, &r)) {
      s_ = r;
      return;
    }
  }
  mpz_class z = to_mpz();
  mpz_addmul(z.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  assign(z);
}

void Integer::submul(const Integer& a, const Integer& b) {
  if (!big_ && !a.big_ && !b.big_) {
    long long p, r;
    if (!__builtin_mul_overflow(a.s_, b.s_, &p) && !__builtin_sub_overflow(s_, p, &r)) {
      s_ = r;
      return;
    }
  }
  mpz_class z = to_mpz();
  mpz_submul(z.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  assign(z);
}

Integer abs(const Integer& a) { return a.sign() < 0 ? -a : a; }

Integer gcd(const Integer& a, const Integer& b) {
  if (a.is_small() && b.is_small() && a.small() != std::numeric_limits<int64_t>::min() &&
      b.small() != std::numeric_limits<int64_t>::min()) {
    uint64_t x = a.small() < 0 ? -a.small() : a.small();
    uint64_t y = b.small() < 0 ? -b.small() : b.small();
    while (y) {
      uint64_t t = x % y;
      x = y;
      y = t;
    }
    return Integer(static_cast<long long>(x));
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.to_mpz().get_mpz_t(), b.to_mpz().get_mpz_t());
  return Integer(g);
}

Integer lcm(const Integer& a, const Integer& b) {
  if (a.is_zero() || b.is_zero()) return Integer(0);
  return abs(a / gcd(a, b) * b);
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  Integer r = a - q * b;
  if (!r.is_zero() && ((r.sign() < 0) != (b.sign() < 0))) q -= Integer(1);
  return q;
}

Integer mod(const Integer& a, const Integer& b) {
  Integer r = a % b;
  if (r.sign() < 0) r += abs(b);
  return r;
}

Integer round_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  Integer r = a - q * b;
  // |r| < |b|; move q one step if 2|r| > |b|.
  Integer twice = abs(r) + abs(r);
  if (twice > abs(b)) {
    if ((r.sign() < 0) == (b.sign() < 0)) q += Integer(1);
    else q -= Integer(1);
  }
  return q;
}

void xgcd(const Integer& a, const Integer& b, Integer& g, Integer& x, Integer& y) {
  if (a.is_small() && b.is_small() && abs(a) < Integer(1LL << 62) && abs(b) < Integer(1LL << 62)) {
    long long r0 = a.small(), r1 = b.small(), s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
      long long q = r0 / r1;
      long long t;
      t = r0 - q * r1; r0 = r1; r1 = t;
      t = s0 - q * s1; s0 = s1; s1 = t;
      t = t0 - q * t1; t0 = t1; t1 = t;
    }
    if (r0 < 0) {
      r0 = -r0;
      s0 = -s0;
      t0 = -t0;
    }
    g = Integer(r0);
    x = Integer(s0);
    y = Integer(t0);
    return;
  }
  mpz_class gg, xx, yy;
  mpz_gcdext(gg.get_mpz_t(), xx.get_mpz_t(), yy.get_mpz_t(), a.to_mpz().get_mpz_t(),
             b.to_mpz().get_mpz_t());
  g = Integer(gg);
  x = Integer(xx);
  y = Integer(yy);
}

uint64_t residue(const Integer& a, uint64_t p) {
  if (a.is_small()) {
    int64_t r = a.small() % static_cast<int64_t>(p);
    return r < 0 ? static_cast<uint64_t>(r + static_cast<int64_t>(p)) : static_cast<uint64_t>(r);
  }
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.to_mpz().get_mpz_t(), p);
  return r.get_ui();
}

std::ostream& operator<<(std::ostream& os, const Integer& a) { return os << a.to_string(); }

}  // namespace tori
