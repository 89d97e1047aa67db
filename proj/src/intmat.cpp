#include "tori/intmat.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace tori {

IntMat::IntMat(std::initializer_list<std::initializer_list<long long>> rows) {
  r_ = rows.size();
  c_ = r_ ? rows.begin()->size() : 0;
  a_.reserve(r_ * c_);
  for (const auto& row : rows) {
    if (row.size() != c_) throw std::invalid_argument("ragged matrix literal");
    for (long long v : row) a_.emplace_back(v);
  }
}

IntMat IntMat::from_rows(const std::vector<std::vector<long long>>& rows, size_t cols) {
  IntMat m(rows.size(), rows.empty() ? cols : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.c_) throw std::invalid_argument("ragged matrix");
    for (size_t j = 0; j < m.c_; ++j) m(i, j) = Integer(rows[i][j]);
  }
  return m;
}

IntMat IntMat::identity(size_t n) { return scalar(n, Integer(1)); }

IntMat IntMat::scalar(size_t n, const Integer& s) {
  IntMat m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = s;
  return m;
}

IntMat IntMat::diag(const std::vector<Integer>& d) {
  IntMat m(d.size(), d.size());
  for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

IntMat IntMat::operator*(const IntMat& b) const {
  if (c_ != b.r_) throw std::invalid_argument("matrix product shape mismatch");
  IntMat out(r_, b.c_);
  for (size_t i = 0; i < r_; ++i) {
    const Integer* ai = row_ptr(i);
    Integer* oi = out.row_ptr(i);
    for (size_t k = 0; k < c_; ++k) {
      if (ai[k].is_zero()) continue;
      const Integer* bk = b.row_ptr(k);
      for (size_t j = 0; j < b.c_; ++j)
        if (!bk[j].is_zero()) oi[j].addmul(ai[k], bk[j]);
    }
  }
  return out;
}

IntMat IntMat::operator+(const IntMat& b) const {
  if (r_ != b.r_ || c_ != b.c_) throw std::invalid_argument("matrix sum shape mismatch");
  IntMat out = *this;
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] += b.a_[i];
  return out;
}

IntMat IntMat::operator-(const IntMat& b) const {
  if (r_ != b.r_ || c_ != b.c_) throw std::invalid_argument("matrix difference shape mismatch");
  IntMat out = *this;
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] -= b.a_[i];
  return out;
}

IntMat IntMat::operator-() const {
  IntMat out = *this;
  for (auto& x : out.a_) x = -x;
  return out;
}

IntMat IntMat::scaled(const Integer& s) const {
  IntMat out = *this;
  for (auto& x : out.a_) x *= s;
  return out;
}

bool IntMat::operator<(const IntMat& b) const {
  if (r_ != b.r_) return r_ < b.r_;
  if (c_ != b.c_) return c_ < b.c_;
  return std::lexicographical_compare(a_.begin(), a_.end(), b.a_.begin(), b.a_.end());
}

IntMat IntMat::transpose() const {
  IntMat out(c_, r_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

IntMat IntMat::submatrix(size_t r0, size_t nr, size_t c0, size_t nc) const {
  IntMat out(nr, nc);
  for (size_t i = 0; i < nr; ++i)
    for (size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

IntMat IntMat::select_rows(const std::vector<size_t>& idx) const {
  IntMat out(idx.size(), c_);
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < c_; ++j) out(i, j) = (*this)(idx[i], j);
  return out;
}

IntMat IntMat::vstack(const IntMat& b) const {
  if (r_ == 0 && c_ == 0) return b;
  if (b.r_ == 0 && b.c_ == 0) return *this;
  if (c_ != b.c_) throw std::invalid_argument("vstack width mismatch");
  IntMat out = *this;
  out.r_ += b.r_;
  out.a_.insert(out.a_.end(), b.a_.begin(), b.a_.end());
  return out;
}

IntMat IntMat::hstack(const IntMat& b) const {
  if (r_ != b.r_) throw std::invalid_argument("hstack height mismatch");
  IntMat out(r_, c_ + b.c_);
  for (size_t i = 0; i < r_; ++i) {
    for (size_t j = 0; j < c_; ++j) out(i, j) = (*this)(i, j);
    for (size_t j = 0; j < b.c_; ++j) out(i, c_ + j) = b(i, j);
  }
  return out;
}

IntMat IntMat::kron(const IntMat& b) const {
  IntMat out(r_ * b.r_, c_ * b.c_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) {
      const Integer& x = (*this)(i, j);
      if (x.is_zero()) continue;
      for (size_t k = 0; k < b.r_; ++k)
        for (size_t l = 0; l < b.c_; ++l) out(i * b.r_ + k, j * b.c_ + l) = x * b(k, l);
    }
  return out;
}

IntMat IntMat::block_diag(const IntMat& b) const {
  IntMat out(r_ + b.r_, c_ + b.c_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) out(i, j) = (*this)(i, j);
  for (size_t i = 0; i < b.r_; ++i)
    for (size_t j = 0; j < b.c_; ++j) out(r_ + i, c_ + j) = b(i, j);
  return out;
}

IntMat IntMat::flatten() const {
  IntMat out(1, r_ * c_);
  out.a_ = a_;
  return out;
}

IntMat IntMat::unflatten(const IntMat& v, size_t rows, size_t cols) {
  if (v.a_.size() != rows * cols) throw std::invalid_argument("unflatten size mismatch");
  IntMat out(rows, cols);
  out.a_ = v.a_;
  return out;
}

void IntMat::swap_rows(size_t i, size_t j) {
  if (i == j) return;
  for (size_t k = 0; k < c_; ++k) std::swap(a_[i * c_ + k], a_[j * c_ + k]);
}

void IntMat::swap_cols(size_t i, size_t j) {
  if (i == j) return;
  for (size_t k = 0; k < r_; ++k) std::swap(a_[k * c_ + i], a_[k * c_ + j]);
}

void IntMat::add_row(size_t i, size_t j, const Integer& q) {
  if (q.is_zero()) return;
  Integer* ri = row_ptr(i);
  const Integer* rj = row_ptr(j);
  for (size_t k = 0; k < c_; ++k)
    if (!rj[k].is_zero()) ri[k].addmul(q, rj[k]);
}

void IntMat::add_col(size_t i, size_t j, const Integer& q) {
  if (q.is_zero()) return;
  for (size_t k = 0; k < r_; ++k) {
    const Integer& x = a_[k * c_ + j];
    if (!x.is_zero()) a_[k * c_ + i].addmul(q, x);
  }
}

void IntMat::negate_row(size_t i) {
  Integer* ri = row_ptr(i);
  for (size_t k = 0; k < c_; ++k) ri[k] = -ri[k];
}

void IntMat::negate_col(size_t j) {
  for (size_t k = 0; k < r_; ++k) a_[k * c_ + j] = -a_[k * c_ + j];
}

void IntMat::append_row(const std::vector<Integer>& v) {
  if (r_ == 0 && c_ == 0) c_ = v.size();
  if (v.size() != c_) throw std::invalid_argument("append_row width mismatch");
  a_.insert(a_.end(), v.begin(), v.end());
  ++r_;
}

bool IntMat::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Integer& x) { return x.is_zero(); });
}

bool IntMat::is_identity() const {
  if (r_ != c_) return false;
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j)
      if ((*this)(i, j) != Integer(i == j ? 1 : 0)) return false;
  return true;
}

bool IntMat::row_is_zero(size_t i) const {
  const Integer* ri = row_ptr(i);
  for (size_t k = 0; k < c_; ++k)
    if (!ri[k].is_zero()) return false;
  return true;
}

Integer IntMat::det() const {
  if (r_ != c_) throw std::invalid_argument("det of non-square matrix");
  size_t n = r_;
  if (n == 0) return Integer(1);
  // Bareiss fraction-free elimination.
  IntMat m = *this;
  Integer prev(1);
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k).is_zero()) {
      size_t p = k + 1;
      while (p < n && m(p, k).is_zero()) ++p;
      if (p == n) return Integer(0);
      m.swap_rows(k, p);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        Integer t = m(i, j) * m(k, k);
        t.submul(m(i, k), m(k, j));
        m(i, j) = t / prev;
      }
    prev = m(k, k);
  }
  return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

size_t IntMat::rank() const {
  IntMat m = *this;
  size_t rk = 0;
  Integer prev(1);
  for (size_t col = 0; col < c_ && rk < r_; ++col) {
    size_t p = rk;
    while (p < r_ && m(p, col).is_zero()) ++p;
    if (p == r_) continue;
    m.swap_rows(rk, p);
    for (size_t i = rk + 1; i < r_; ++i) {
      for (size_t j = col + 1; j < c_; ++j) {
        Integer t = m(i, j) * m(rk, col);
        t.submul(m(i, col), m(rk, j));
        m(i, j) = t / prev;
      }
      m(i, col) = Integer(0);
    }
    prev = m(rk, col);
    ++rk;
  }
  return rk;
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

uint64_t invmod(uint64_t a, uint64_t p) { return powmod(a, p - 2, p); }

uint64_t IntMat::det_mod(uint64_t p) const {
  if (r_ != c_) throw std::invalid_argument("det of non-square matrix");
  size_t n = r_;
  std::vector<uint64_t> m(n * n);
  for (size_t i = 0; i < n * n; ++i) m[i] = residue(a_[i], p);
  uint64_t det = 1;
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    while (piv < n && m[piv * n + k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      for (size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      det = (p - det) % p;
    }
    det = mulmod(det, m[k * n + k], p);
    uint64_t inv = invmod(m[k * n + k], p);
    for (size_t i = k + 1; i < n; ++i) {
      uint64_t f = mulmod(m[i * n + k], inv, p);
      if (!f) continue;
      for (size_t j = k; j < n; ++j) m[i * n + j] = (m[i * n + j] + p - mulmod(f, m[k * n + j], p)) % p;
    }
  }
  return det;
}

size_t IntMat::rank_mod(uint64_t p) const {
  std::vector<uint64_t> m(r_ * c_);
  for (size_t i = 0; i < r_ * c_; ++i) m[i] = residue(a_[i], p);
  size_t rk = 0;
  for (size_t col = 0; col < c_ && rk < r_; ++col) {
    size_t piv = rk;
    while (piv < r_ && m[piv * c_ + col] == 0) ++piv;
    if (piv == r_) continue;
    for (size_t j = 0; j < c_; ++j) std::swap(m[rk * c_ + j], m[piv * c_ + j]);
    uint64_t inv = invmod(m[rk * c_ + col], p);
    for (size_t i = rk + 1; i < r_; ++i) {
      uint64_t f = mulmod(m[i * c_ + col], inv, p);
      if (!f) continue;
      for (size_t j = col; j < c_; ++j) m[i * c_ + j] = (m[i * c_ + j] + p - mulmod(f, m[rk * c_ + j], p)) % p;
    }
    ++rk;
  }
  return rk;
}

IntMat IntMat::inverse_unimodular() const {
  if (r_ != c_) throw std::invalid_argument("inverse of non-square matrix");
  size_t n = r_;
  IntMat m = *this;
  IntMat inv = identity(n);
  // Integral Gauss-Jordan with gcd row operations.
  for (size_t col = 0; col < n; ++col) {
    for (;;) {
      size_t best = n;
      for (size_t i = col; i < n; ++i)
        if (!m(i, col).is_zero() && (best == n || abs(m(i, col)) < abs(m(best, col)))) best = i;
      if (best == n) throw std::domain_error("matrix is not unimodular");
      m.swap_rows(col, best);
      inv.swap_rows(col, best);
      bool done = true;
      for (size_t i = col + 1; i < n; ++i) {
        if (m(i, col).is_zero()) continue;
        Integer q = -floor_div(m(i, col), m(col, col));
        m.add_row(i, col, q);
        inv.add_row(i, col, q);
        if (!m(i, col).is_zero()) done = false;
      }
      if (done) break;
    }
    if (!m(col, col).is_unit()) throw std::domain_error("matrix is not unimodular");
    if (m(col, col).sign() < 0) {
      m.negate_row(col);
      inv.negate_row(col);
    }
  }
  for (size_t col = n; col-- > 0;)
    for (size_t i = 0; i < col; ++i) {
      if (m(i, col).is_zero()) continue;
      Integer q = -m(i, col);
      m.add_row(i, col, q);
      inv.add_row(i, col, q);
    }
  return inv;
}

Integer IntMat::max_abs() const {
  Integer best(0);
  for (const auto& x : a_)
    if (abs(x) > best) best = abs(x);
  return best;
}

std::string IntMat::str() const {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < r_; ++i) {
    if (i) os << ",";
    os << "[";
    for (size_t j = 0; j < c_; ++j) {
      if (j) os << ",";
      os << (*this)(i, j);
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

size_t IntMat::hash() const {
  size_t h = r_ * 1000003u + c_;
  for (const auto& x : a_) h = h * 1099511628211ull + x.hash();
  return h;
}

std::ostream& operator<<(std::ostream& os, const IntMat& m) { return os << m.str(); }

}  // namespace tori
