#pragma once

// Dense integer matrices and Smith normal form.
//
// The reduction follows Kannan-Bachem: alternate row and column Hermite
// normal forms until the matrix is diagonal up to permutation, then repair
// the divisibility chain with gcd/lcm steps on pairs of diagonal entries.
// Everything is exact.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "svbench/numeric.hpp"

namespace svbench {

template <class Int>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Int(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i)
      std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += f * row[src]
  void add_row(std::size_t dst, std::size_t src, const Int& f,
               std::size_t from = 0) {
    for (std::size_t j = from; j < cols_; ++j) {
      const Int& s = (*this)(src, j);
      if (s != 0) (*this)(dst, j) += f * s;
    }
  }
  void add_col(std::size_t dst, std::size_t src, const Int& f,
               std::size_t from = 0) {
    for (std::size_t i = from; i < rows_; ++i) {
      const Int& s = (*this)(i, src);
      if (s != 0) (*this)(i, dst) += f * s;
    }
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Int& x = a(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += x * b(k, j);
      }
    return out;
  }
  friend bool operator==(const Matrix&, const Matrix&) = default;

  template <class Other>
  Matrix<Other> convert() const {
    Matrix<Other> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = Other((*this)(i, j));
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Int> data_;
};

using IntegerMatrix = Matrix<BigInt>;

struct SmithForm {
  std::vector<BigInt> diagonal;  // d_1 | d_2 | ... | d_r, all positive
  std::size_t rank = 0;
  // U * A * V == diag(d_1..d_r, 0, ...), present when requested.
  std::optional<IntegerMatrix> left;
  std::optional<IntegerMatrix> right;

  std::vector<BigInt> elementary_divisors() const {
    std::vector<BigInt> out;
    for (const auto& d : diagonal)
      if (d > 1) out.push_back(d);
    return out;
  }
};

namespace detail {

inline BigInt big_of(const BigInt& x) { return x; }
inline BigInt big_of(CheckedInt64 x) { return BigInt(x.value()); }

template <class Int>
Int floor_div(const Int& x, const Int& p) {  // p > 0
  Int q = x / p;
  if (x % p < 0) q = q - Int(1);
  return q;
}

// g = gcd(a, b) > 0 with s*a + t*b = g; a, b not both zero.
template <class Int>
void extended_gcd(const Int& a, const Int& b, Int& g, Int& s, Int& t) {
  Int r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    Int q = r0 / r1;
    Int r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    Int s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
    Int t2 = t0 - q * t1;
    t0 = t1;
    t1 = t2;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  g = r0;
  s = s0;
  t = t0;
}

// A matrix row together with the row of the accumulated transform.
template <class Int>
struct TrackedRow {
  std::vector<Int> a;
  std::vector<Int> u;

  // this += f * other, from column `from` on
  void axpy(const Int& f, const TrackedRow& o, std::size_t from = 0) {
    for (std::size_t j = from; j < a.size(); ++j)
      if (o.a[j] != 0) a[j] += f * o.a[j];
    for (std::size_t j = 0; j < u.size(); ++j)
      if (o.u[j] != 0) u[j] += f * o.u[j];
  }
  // (x, y) <- (s x + t y, -b x + a y) for rows x = *this, y = o
  void combine(TrackedRow& o, const Int& s, const Int& t, const Int& b, const Int& a_) {
    auto mix = [&](std::vector<Int>& x, std::vector<Int>& y) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0 && y[j] == 0) continue;
        Int nx = s * x[j] + t * y[j];
        y[j] = a_ * y[j] - b * x[j];
        x[j] = nx;
      }
    };
    mix(a, o.a);
    mix(u, o.u);
  }
  void negate() {
    for (auto& x : a) x = -x;
    for (auto& x : u) x = -x;
  }
};

// Row Hermite form.  Returns the pivot rows (increasing pivot columns,
// positive pivots, entries above a pivot reduced into [0, pivot)) followed
// by the zero rows.  Each step is unimodular, so the stacked transform rows
// are again a unimodular matrix.  Reducing against every new pivot keeps the
// entries bounded by the pivots, which is what prevents coefficient growth.
template <class Int>
std::vector<TrackedRow<Int>> hermite_rows(std::vector<TrackedRow<Int>> input,
                                          std::size_t& rank) {
  std::vector<TrackedRow<Int>> h;
  std::vector<std::size_t> piv;
  std::vector<TrackedRow<Int>> zeros;
  auto reduce_above = [&](std::size_t row, std::size_t below) {
    // reduce h[row] at the pivot columns of rows below it
    for (std::size_t k = below; k < h.size(); ++k) {
      const Int& x = h[row].a[piv[k]];
      if (x == 0) continue;
      const Int& p = h[k].a[piv[k]];
      if (x >= 0 && x < p) continue;
      h[row].axpy(Int(-floor_div(x, p)), h[k], piv[k]);
    }
  };
  for (auto& r : input) {
    std::size_t k = 0;
    std::size_t scan = 0;  // r vanishes on the columns before scan
    for (; k < h.size(); ++k) {
      const std::size_t c = piv[k];
      while (scan < c && r.a[scan] == 0) ++scan;
      if (scan < c) break;  // r leads before this pivot: it becomes a pivot row
      scan = c + 1;
      if (r.a[c] == 0) continue;
      const Int p = h[k].a[c];
      if (r.a[c] % p == 0) {
        r.axpy(Int(-(r.a[c] / p)), h[k], c);
        continue;
      }
      Int g, s, t;
      extended_gcd(p, r.a[c], g, s, t);
      h[k].combine(r, s, t, Int(r.a[c] / g), Int(p / g));
      reduce_above(k, k + 1);
      for (std::size_t i = 0; i < k; ++i) {
        const Int& x = h[i].a[c];
        if (x != 0 && !(x >= 0 && x < g)) h[i].axpy(Int(-floor_div(x, g)), h[k], c);
      }
    }
    std::size_t lead = scan;
    while (lead < r.a.size() && r.a[lead] == 0) ++lead;
    if (lead == r.a.size()) {
      zeros.push_back(std::move(r));
      continue;
    }
    if (r.a[lead] < 0) r.negate();
    const std::size_t pos = k;
    h.insert(h.begin() + static_cast<std::ptrdiff_t>(pos), std::move(r));
    piv.insert(piv.begin() + static_cast<std::ptrdiff_t>(pos), lead);
    reduce_above(pos, pos + 1);
    const Int p = h[pos].a[lead];
    for (std::size_t i = 0; i < pos; ++i) {
      const Int& x = h[i].a[lead];
      if (x != 0 && !(x >= 0 && x < p)) h[i].axpy(Int(-floor_div(x, p)), h[pos], lead);
    }
  }
  rank = h.size();
  for (auto& z : zeros) h.push_back(std::move(z));
  return h;
}

template <class Int>
std::vector<TrackedRow<Int>> rows_of(const Matrix<Int>& a, bool track) {
  std::vector<TrackedRow<Int>> rows(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    rows[i].a.resize(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) rows[i].a[j] = a(i, j);
    if (track) {
      rows[i].u.assign(a.rows(), Int(0));
      rows[i].u[i] = 1;
    }
  }
  return rows;
}

template <class Int>
bool at_most_one_per_line(const Matrix<Int>& a) {
  std::vector<int> in_col(a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    int in_row = 0;
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0 && (++in_row > 1 || ++in_col[j] > 1)) return false;
  }
  return true;
}

// One Hermite pass on the rows of `a`; `u` (if any) absorbs the transform.
template <class Int>
void hermite_pass(Matrix<Int>& a, std::optional<Matrix<Int>>& u) {
  std::size_t rank = 0;
  auto rows = hermite_rows(rows_of(a, u.has_value()), rank);
  Matrix<Int> t(a.rows(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = rows[i].a[j];
    if (u)
      for (std::size_t j = 0; j < a.rows(); ++j) t(i, j) = rows[i].u[j];
  }
  if (u) *u = t * *u;
}

template <class Int>
Matrix<Int> transpose(const Matrix<Int>& a) {
  Matrix<Int> t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

template <class Int>
SmithForm smith_reduce(Matrix<Int> a, bool with_transforms) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::optional<Matrix<Int>> u, vt;  // U A V^T... with vt = V^T
  if (with_transforms) {
    u = Matrix<Int>::identity(m);
    vt = Matrix<Int>::identity(n);
  }
  // Alternate row and column Hermite passes until every row and column
  // holds at most one nonzero entry.
  for (bool rows = true; !at_most_one_per_line(a); rows = !rows) {
    if (rows) {
      hermite_pass(a, u);
    } else {
      auto t = transpose(a);
      hermite_pass(t, vt);
      a = transpose(t);
    }
  }
  // Move the nonzero entry of row i to column i.  Pivot rows come first after
  // a row pass; after a column pass the nonzero columns come first, so sort
  // both ways.
  std::size_t r = 0;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = 0;
    while (j < n && a(i, j) == 0) ++j;
    if (j == n) continue;
    if (i != r) {
      a.swap_rows(i, r);
      if (u) u->swap_rows(i, r);
    }
    if (j != r) {
      a.swap_cols(j, r);
      if (vt) vt->swap_rows(j, r);
    }
    if (a(r, r) < 0) {
      a.negate_row(r);
      if (u) u->negate_row(r);
    }
    ++r;
  }
  // divisibility chain through gcd/lcm steps on pairs
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      const Int x = a(i, i), y = a(j, j);
      if (y % x == 0) continue;
      Int g, s, t;
      extended_gcd(x, y, g, s, t);
      // rows (i, j) <- [[s, t], [-y/g, x/g]]; columns (i, j) <- [[1, -t y/g], [1, s x/g]]
      const Int yg = y / g, xg = x / g;
      a(i, i) = g;
      a(j, j) = x * yg;
      if (u)
        for (std::size_t c = 0; c < m; ++c) {
          Int ri = (*u)(i, c), rj = (*u)(j, c);
          (*u)(i, c) = s * ri + t * rj;
          (*u)(j, c) = xg * rj - yg * ri;
        }
      if (vt)
        for (std::size_t c = 0; c < n; ++c) {
          // V columns i, j <- (V_i + V_j, -t yg V_i + s xg V_j); vt holds rows
          Int ci = (*vt)(i, c), cj = (*vt)(j, c);
          (*vt)(i, c) = ci + cj;
          (*vt)(j, c) = Int(-(t * yg)) * ci + s * xg * cj;
        }
    }

  SmithForm out;
  for (std::size_t i = 0; i < r; ++i) out.diagonal.push_back(big_of(a(i, i)));
  out.rank = r;
  if (with_transforms) {
    auto to_big_matrix = [](const Matrix<Int>& x) {
      IntegerMatrix y(x.rows(), x.cols());
      for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) y(i, j) = big_of(x(i, j));
      return y;
    };
    out.left = to_big_matrix(*u);
    out.right = to_big_matrix(transpose(*vt));
  }
  return out;
}

}  // namespace detail

// Smith normal form over the integers.  Tries checked 64-bit arithmetic
// first and redoes the reduction with big integers on overflow.
template <class Int>
SmithForm smith_normal_form(const Matrix<Int>& a, bool with_transforms = false) {
  if constexpr (!std::is_same_v<Int, BigInt>) {
    try {
      return detail::smith_reduce(a.template convert<CheckedInt64>(),
                                  with_transforms);
    } catch (const std::overflow_error&) {
    }
    return detail::smith_reduce(a.template convert<BigInt>(), with_transforms);
  } else {
    // small-entry matrices still take the fast path
    bool small = true;
    for (std::size_t i = 0; i < a.rows() && small; ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (abs(a(i, j)) > BigInt(1) << 30) {
          small = false;
          break;
        }
    if (small) {
      try {
        Matrix<CheckedInt64> c(a.rows(), a.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
          for (std::size_t j = 0; j < a.cols(); ++j)
            c(i, j) = CheckedInt64(static_cast<std::int64_t>(a(i, j)));
        return detail::smith_reduce(std::move(c), with_transforms);
      } catch (const std::overflow_error&) {
      }
    }
    return detail::smith_reduce(a, with_transforms);
  }
}

inline IntegerMatrix smith_diagonal_matrix(const SmithForm& s, std::size_t rows,
                                           std::size_t cols) {
  IntegerMatrix d(rows, cols);
  for (std::size_t i = 0; i < s.rank; ++i) d(i, i) = s.diagonal[i];
  return d;
}

inline BigInt determinant(IntegerMatrix a) {
  // Bareiss fraction-free elimination.
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      a.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

}  // namespace svbench
