#include "tori/exactarith.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tori {

Integer AbelianInvariants::order() const {
  Integer o(1);
  for (const auto& f : factors) o *= f;
  return o;
}

std::string AbelianInvariants::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& f : factors) {
    if (!first) os << " + ";
    os << "Z/" << f;
    first = false;
  }
  if (free_rank) {
    if (!first) os << " + ";
    os << "Z";
    if (free_rank > 1) os << "^" << free_rank;
  }
  return os.str();
}

size_t AbelianInvariants::count_divisible(const Integer& q) const {
  size_t n = 0;
  for (const auto& f : factors)
    if ((f % q).is_zero()) ++n;
  return n;
}

SmithForm snf(const IntMat& a, SnfOptions opt) {
  const size_t R = a.rows(), C = a.cols();
  IntMat m = a;
  SmithForm out;
  if (opt.want_u) out.u = IntMat::identity(R);
  if (opt.want_v) out.v = IntMat::identity(C);
  if (opt.want_vinv) out.vinv = IntMat::identity(C);

  auto swap_r = [&](size_t i, size_t j) {
    m.swap_rows(i, j);
    if (opt.want_u) out.u.swap_rows(i, j);
  };
  auto swap_c = [&](size_t i, size_t j) {
    m.swap_cols(i, j);
    if (opt.want_v) out.v.swap_cols(i, j);
    if (opt.want_vinv) out.vinv.swap_rows(i, j);
  };
  // row_i += q row_j
  auto addr = [&](size_t i, size_t j, const Integer& q) {
    m.add_row(i, j, q);
    if (opt.want_u) out.u.add_row(i, j, q);
  };
  // col_i += q col_j
  auto addc = [&](size_t i, size_t j, const Integer& q) {
    m.add_col(i, j, q);
    if (opt.want_v) out.v.add_col(i, j, q);
    if (opt.want_vinv) out.vinv.add_row(j, i, -q);
  };

  const size_t T = std::min(R, C);
  size_t t = 0;
  for (; t < T; ++t) {
    size_t pi = R, pj = C;
    for (size_t i = t; i < R; ++i)
      for (size_t j = t; j < C; ++j) {
        const Integer& x = m(i, j);
        if (x.is_zero()) continue;
        if (pi == R || abs(x) < abs(m(pi, pj))) {
          pi = i;
          pj = j;
        }
      }
    if (pi == R) break;
    swap_r(t, pi);
    swap_c(t, pj);
    for (;;) {
      for (size_t i = t + 1; i < R; ++i)
        if (!m(i, t).is_zero()) addr(i, t, -round_div(m(i, t), m(t, t)));
      for (size_t j = t + 1; j < C; ++j)
        if (!m(t, j).is_zero()) addc(j, t, -round_div(m(t, j), m(t, t)));
      size_t bi = R, bj = C;
      for (size_t i = t + 1; i < R; ++i)
        if (!m(i, t).is_zero() && (bi == R || abs(m(i, t)) < abs(m(bi, t)))) bi = i;
      for (size_t j = t + 1; j < C; ++j)
        if (!m(t, j).is_zero() && (bj == C || abs(m(t, j)) < abs(m(t, bj)))) bj = j;
      if (bi != R || bj != C) {
        bool use_row = bi != R && (bj == C || abs(m(bi, t)) <= abs(m(t, bj)));
        if (use_row) swap_r(t, bi);
        else swap_c(t, bj);
        continue;
      }
      size_t fi = R;
      for (size_t i = t + 1; i < R && fi == R; ++i)
        for (size_t j = t + 1; j < C; ++j)
          if (!(m(i, j) % m(t, t)).is_zero()) {
            fi = i;
            break;
          }
      if (fi == R) break;
      addr(t, fi, Integer(1));
    }
    if (m(t, t).sign() < 0) {
      m.negate_row(t);
      if (opt.want_u) out.u.negate_row(t);
    }
  }
  out.d.resize(T);
  for (size_t i = 0; i < T; ++i) out.d[i] = m(i, i);
  return out;
}

HermiteForm hnf(const IntMat& a, bool want_u) {
  const size_t R = a.rows(), C = a.cols();
  HermiteForm out;
  out.h = a;
  IntMat& m = out.h;
  if (want_u) out.u = IntMat::identity(R);
  size_t r = 0;
  for (size_t j = 0; j < C && r < R; ++j) {
    for (;;) {
      size_t best = R;
      for (size_t i = r; i < R; ++i)
        if (!m(i, j).is_zero() && (best == R || abs(m(i, j)) < abs(m(best, j)))) best = i;
      if (best == R) break;
      if (best != r) {
        m.swap_rows(r, best);
        if (want_u) out.u.swap_rows(r, best);
      }
      bool clean = true;
      for (size_t i = r + 1; i < R; ++i) {
        if (m(i, j).is_zero()) continue;
        Integer q = -floor_div(m(i, j), m(r, j));
        m.add_row(i, r, q);
        if (want_u) out.u.add_row(i, r, q);
        if (!m(i, j).is_zero()) clean = false;
      }
      if (clean) break;
    }
    if (m(r, j).is_zero()) continue;
    if (m(r, j).sign() < 0) {
      m.negate_row(r);
      if (want_u) out.u.negate_row(r);
    }
    for (size_t i = 0; i < r; ++i) {
      if (m(i, j).is_zero()) continue;
      Integer q = -floor_div(m(i, j), m(r, j));
      m.add_row(i, r, q);
      if (want_u) out.u.add_row(i, r, q);
    }
    ++r;
  }
  out.rank = r;
  return out;
}

IntMat row_basis(const IntMat& a) {
  HermiteForm h = hnf(a, false);
  return h.h.submatrix(0, h.rank, 0, a.cols());
}

IntMat kernel_basis(const IntMat& a) {
  const size_t R = a.rows();
  if (a.cols() == 0) return IntMat::identity(R);
  HermiteForm h = hnf(a, true);
  IntMat k = h.u.submatrix(h.rank, R - h.rank, 0, R);
  if (k.rows() == 0 || R > 160) return k;
  return row_basis(k);
}

namespace {

// Column-style HNF of rows, tracking the inverse transform. With
// u * rows^T = h, the columns of u^-1 form a unimodular matrix whose first
// rank columns span the same Q-space as the rows.
std::pair<IntMat, size_t> column_hnf_inverse(const IntMat& rows) {
  const size_t n = rows.cols();
  IntMat m = rows.transpose();
  IntMat uinv = IntMat::identity(n);
  const size_t C = m.cols();
  size_t r = 0;
  for (size_t j = 0; j < C && r < n; ++j) {
    for (;;) {
      size_t best = n;
      for (size_t i = r; i < n; ++i)
        if (!m(i, j).is_zero() && (best == n || abs(m(i, j)) < abs(m(best, j)))) best = i;
      if (best == n) break;
      if (best != r) {
        m.swap_rows(r, best);
        uinv.swap_cols(r, best);
      }
      bool clean = true;
      for (size_t i = r + 1; i < n; ++i) {
        if (m(i, j).is_zero()) continue;
        Integer q = -floor_div(m(i, j), m(r, j));
        m.add_row(i, r, q);
        uinv.add_col(r, i, -q);
        if (!m(i, j).is_zero()) clean = false;
      }
      if (clean) break;
    }
    if (!m(r, j).is_zero()) ++r;
  }
  return {uinv.transpose(), r};
}

}  // namespace

IntMat saturate(const IntMat& rows) {
  const size_t n = rows.cols();
  if (rows.rows() == 0) return IntMat(0, n);
  auto [w, r] = column_hnf_inverse(rows);
  IntMat s = w.submatrix(0, r, 0, n);
  return s.rows() <= 40 ? lll(s) : s;
}

IntMat complete_to_basis(const IntMat& rows) {
  const size_t n = rows.cols();
  if (rows.rows() == 0) return IntMat::identity(n);
  auto [w, r] = column_hnf_inverse(rows);
  return w.submatrix(r, n - r, 0, n);
}

AbelianInvariants cokernel_invariants(const IntMat& sub, size_t amb_rank) {
  AbelianInvariants out;
  if (sub.rows() == 0) {
    out.free_rank = amb_rank;
    return out;
  }
  if (sub.cols() != amb_rank) throw std::invalid_argument("cokernel_invariants: width mismatch");
  SmithForm s = snf(sub, {false, false, false});
  size_t rk = 0;
  for (const auto& x : s.d) {
    if (x.is_zero()) continue;
    ++rk;
    if (!x.is_one()) out.factors.push_back(x);
  }
  out.free_rank = amb_rank - rk;
  return out;
}

namespace {

// Solve y * h = b for y, with h in row HNF of the given rank.
std::optional<std::vector<Integer>> echelon_solve(const IntMat& h, size_t rank, const Integer* b) {
  const size_t C = h.cols();
  std::vector<Integer> res(b, b + C);
  std::vector<Integer> y(rank);
  size_t col = 0;
  for (size_t i = 0; i < rank; ++i) {
    while (col < C && h(i, col).is_zero()) {
      if (!res[col].is_zero()) return std::nullopt;
      ++col;
    }
    const Integer& piv = h(i, col);
    if (!(res[col] % piv).is_zero()) return std::nullopt;
    y[i] = res[col] / piv;
    if (!y[i].is_zero())
      for (size_t j = col; j < C; ++j)
        if (!h(i, j).is_zero()) res[j].submul(y[i], h(i, j));
    ++col;
  }
  for (size_t j = 0; j < C; ++j)
    if (!res[j].is_zero()) return std::nullopt;
  return y;
}

}  // namespace

std::optional<IntMat> solve_left(const IntMat& a, const IntMat& b) {
  if (b.rows() != 1 || b.cols() != a.cols()) throw std::invalid_argument("solve_left shape");
  HermiteForm h = hnf(a, true);
  auto y = echelon_solve(h.h, h.rank, b.row_ptr(0));
  if (!y) return std::nullopt;
  IntMat x(1, a.rows());
  for (size_t i = 0; i < h.rank; ++i)
    if (!(*y)[i].is_zero())
      for (size_t j = 0; j < a.rows(); ++j) x(0, j).addmul((*y)[i], h.u(i, j));
  return x;
}

std::optional<IntMat> coordinates_in(const IntMat& basis, const IntMat& b) {
  HermiteForm h = hnf(basis, true);
  IntMat out(b.rows(), basis.rows());
  for (size_t r = 0; r < b.rows(); ++r) {
    auto y = echelon_solve(h.h, h.rank, b.row_ptr(r));
    if (!y) return std::nullopt;
    for (size_t i = 0; i < h.rank; ++i)
      if (!(*y)[i].is_zero())
        for (size_t j = 0; j < basis.rows(); ++j) out(r, j).addmul((*y)[i], h.u(i, j));
  }
  return out;
}

bool in_row_lattice(const IntMat& a, const IntMat& v) {
  HermiteForm h = hnf(a, false);
  for (size_t r = 0; r < v.rows(); ++r)
    if (!echelon_solve(h.h, h.rank, v.row_ptr(r))) return false;
  return true;
}

IntMat lll(const IntMat& rows_in, IntMat* transform) {
  IntMat b = rows_in;
  const size_t k = b.rows(), n = b.cols();
  if (transform) *transform = IntMat::identity(k);
  if (k <= 1) return b;
  using LD = long double;
  std::vector<std::vector<LD>> bs(k, std::vector<LD>(n));
  std::vector<std::vector<LD>> mu(k, std::vector<LD>(k, 0));
  std::vector<LD> B(k);
  auto gs_row = [&](size_t i) {
    for (size_t c = 0; c < n; ++c) bs[i][c] = static_cast<LD>(b(i, c).to_double());
    for (size_t j = 0; j < i; ++j) {
      LD dot = 0;
      for (size_t c = 0; c < n; ++c) dot += static_cast<LD>(b(i, c).to_double()) * bs[j][c];
      mu[i][j] = B[j] > 0 ? dot / B[j] : 0;
      for (size_t c = 0; c < n; ++c) bs[i][c] -= mu[i][j] * bs[j][c];
    }
    LD s = 0;
    for (size_t c = 0; c < n; ++c) s += bs[i][c] * bs[i][c];
    B[i] = s;
  };
  for (size_t i = 0; i < k; ++i) gs_row(i);
  const LD delta = 0.99L;
  size_t i = 1;
  size_t guard = 0;
  while (i < k && guard++ < 200000) {
    for (size_t j = i; j-- > 0;) {
      LD r = std::round(mu[i][j]);
      if (r == 0) continue;
      Integer q(static_cast<long long>(r));
      b.add_row(i, j, -q);
      if (transform) transform->add_row(i, j, -q);
      for (size_t l = 0; l < j; ++l) mu[i][l] -= r * mu[j][l];
      mu[i][j] -= r;
    }
    if (B[i] < (delta - mu[i][i - 1] * mu[i][i - 1]) * B[i - 1]) {
      b.swap_rows(i, i - 1);
      if (transform) transform->swap_rows(i, i - 1);
      gs_row(i - 1);
      gs_row(i);
      for (size_t l = i + 1; l < k; ++l) gs_row(l);
      i = std::max<size_t>(i - 1, 1);
    } else {
      ++i;
    }
  }
  return b;
}

namespace {

constexpr uint64_t kDetPrime = 2305843009213693951ull;  // 2^61 - 1

uint64_t det_mod_raw(std::vector<uint64_t>& m, size_t n, uint64_t p) {
  uint64_t det = 1;
  for (size_t k = 0; k < n; ++k) {
    size_t piv = k;
    while (piv < n && m[piv * n + k] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      for (size_t j = k; j < n; ++j) std::swap(m[k * n + j], m[piv * n + j]);
      det = (p - det) % p;
    }
    det = mulmod(det, m[k * n + k], p);
    uint64_t inv = invmod(m[k * n + k], p);
    for (size_t i = k + 1; i < n; ++i) {
      uint64_t f = mulmod(m[i * n + k], inv, p);
      if (!f) continue;
      for (size_t j = k + 1; j < n; ++j) {
        uint64_t t = mulmod(f, m[k * n + j], p);
        m[i * n + j] = m[i * n + j] >= t ? m[i * n + j] - t : m[i * n + j] + p - t;
      }
    }
  }
  return det;
}

// True if no element of the span (given residues mod p) is invertible mod p.
bool span_all_singular_mod(const std::vector<std::vector<uint64_t>>& res, size_t n, uint64_t p) {
  const size_t k = res.size();
  std::vector<uint64_t> c(k, 0);
  std::vector<uint64_t> m(n * n);
  for (;;) {
    size_t pos = k;
    while (pos-- > 0) {
      if (++c[pos] < p) break;
      c[pos] = 0;
    }
    if (pos == static_cast<size_t>(-1)) return true;
    std::fill(m.begin(), m.end(), 0);
    for (size_t i = 0; i < k; ++i)
      if (c[i])
        for (size_t e = 0; e < n * n; ++e) m[e] = (m[e] + c[i] * res[i][e]) % p;
    if (det_mod_raw(m, n, p) != 0) return false;
  }
}

}  // namespace

UnimodularSearch unimodular_in_lattice(const std::vector<IntMat>& basis, size_t budget) {
  UnimodularSearch out;
  if (basis.empty()) {
    out.impossible = true;
    return out;
  }
  const size_t n = basis[0].rows();
  for (const auto& b : basis)
    if (b.rows() != n || b.cols() != n) throw std::invalid_argument("unimodular_in_lattice: shape");
  IntMat flat(0, n * n);
  for (const auto& b : basis) flat = flat.vstack(b.flatten());
  bool independent = flat.rank() == flat.rows();
  IntMat red = independent ? lll(flat) : lll(row_basis(flat));
  const size_t k = red.rows();
  if (k == 0) {
    out.impossible = true;
    return out;
  }
  std::vector<IntMat> mats;
  for (size_t i = 0; i < k; ++i) mats.push_back(IntMat::unflatten(red.row(i), n, n));

  auto finish = [&](const IntMat& x) {
    out.found = x;
    if (independent) {
      auto c = coordinates_in(flat, x.flatten());
      if (c)
        for (size_t j = 0; j < c->cols(); ++j) out.coefficients.push_back((*c)(0, j));
    }
  };

  if (k == 1) {
    ++out.evaluations;
    Integer d = mats[0].det();
    if (d.is_unit()) finish(mats[0]);
    else out.impossible = true;
    return out;
  }
  // Cheap proofs of impossibility: every element singular mod a small prime.
  for (uint64_t p : {2ull, 3ull}) {
    size_t limit = p == 2 ? 14 : 8;
    if (k > limit) continue;
    std::vector<std::vector<uint64_t>> res(k, std::vector<uint64_t>(n * n));
    for (size_t i = 0; i < k; ++i)
      for (size_t e = 0; e < n * n; ++e) res[i][e] = residue(mats[i].data()[e], p);
    if (span_all_singular_mod(res, n, p)) {
      out.impossible = true;
      return out;
    }
  }

  std::vector<std::vector<uint64_t>> res(k, std::vector<uint64_t>(n * n));
  for (size_t i = 0; i < k; ++i)
    for (size_t e = 0; e < n * n; ++e) res[i][e] = residue(mats[i].data()[e], kDetPrime);
  const uint64_t P = kDetPrime;
  std::vector<uint64_t> m(n * n);

  auto try_coeffs = [&](const std::vector<size_t>& support, const std::vector<long long>& vals) -> bool {
    ++out.evaluations;
    std::fill(m.begin(), m.end(), 0);
    for (size_t t = 0; t < support.size(); ++t) {
      long long v = vals[t];
      uint64_t cv = v >= 0 ? static_cast<uint64_t>(v) : P - static_cast<uint64_t>(-v);
      const auto& r = res[support[t]];
      for (size_t e = 0; e < n * n; ++e) {
        if (!r[e]) continue;
        uint64_t add = mulmod(cv, r[e], P);
        m[e] = m[e] + add >= P ? m[e] + add - P : m[e] + add;
      }
    }
    uint64_t d = det_mod_raw(m, n, P);
    if (d != 1 && d != P - 1) return false;
    IntMat x(n, n);
    for (size_t t = 0; t < support.size(); ++t) x = x + mats[support[t]].scaled(Integer(vals[t]));
    if (!x.det().is_unit()) return false;
    finish(x);
    return true;
  };

  for (long long R = 1;; ++R) {
    // values ordered 1, -1, 2, -2, ..., R, -R
    std::vector<long long> order;
    for (long long v = 1; v <= R; ++v) {
      order.push_back(v);
      order.push_back(-v);
    }
    for (size_t s = 1; s <= k; ++s) {
      std::vector<size_t> support(s);
      for (size_t i = 0; i < s; ++i) support[i] = i;
      for (;;) {
        std::vector<size_t> idx(s, 0);
        for (;;) {
          bool ok = order[idx[0]] > 0;
          long long mx = 0;
          for (size_t t = 0; t < s; ++t) mx = std::max(mx, std::llabs(order[idx[t]]));
          if (ok && mx == R) {
            std::vector<long long> vals(s);
            for (size_t t = 0; t < s; ++t) vals[t] = order[idx[t]];
            if (try_coeffs(support, vals)) return out;
            if (out.evaluations >= budget) {
              out.exhausted = true;
              return out;
            }
          }
          size_t pos = s;
          while (pos-- > 0) {
            if (++idx[pos] < order.size()) break;
            idx[pos] = 0;
          }
          if (pos == static_cast<size_t>(-1)) break;
        }
        size_t pos = s;
        while (pos-- > 0)
          if (support[pos] < k - s + pos) break;
        if (pos == static_cast<size_t>(-1)) break;
        ++support[pos];
        for (size_t t = pos + 1; t < s; ++t) support[t] = support[t - 1] + 1;
      }
    }
  }
}

std::vector<std::vector<long long>> nonnegative_solutions(const std::vector<std::vector<long long>>& a,
                                                          const std::vector<long long>& b, size_t limit) {
  std::vector<std::vector<long long>> sols;
  const size_t m = a.size(), n = m ? a[0].size() : 0;
  std::vector<long long> rem(b), x(n, 0);
  auto rec = [&](auto&& self, size_t pos) -> void {
    if (sols.size() >= limit) return;
    if (pos == n) {
      for (long long v : rem)
        if (v) return;
      sols.push_back(x);
      return;
    }
    long long maxv = -1;
    for (size_t i = 0; i < m; ++i)
      if (a[i][pos] > 0) {
        long long q = rem[i] / a[i][pos];
        if (maxv < 0 || q < maxv) maxv = q;
      }
    if (maxv < 0) maxv = 0;  // unconstrained column: only x = 0 is meaningful
    for (long long v = maxv; v >= 0; --v) {
      for (size_t i = 0; i < m; ++i) rem[i] -= v * a[i][pos];
      x[pos] = v;
      self(self, pos + 1);
      for (size_t i = 0; i < m; ++i) rem[i] += v * a[i][pos];
    }
    x[pos] = 0;
  };
  rec(rec, 0);
  return sols;
}

}  // namespace tori
