#pragma once

// Linear algebra over Q and F_p: rank and null space by row reduction.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "svbench/error.hpp"
#include "svbench/numeric.hpp"

namespace svbench {

struct RationalField {
  using Value = Rational;
  Value from(std::int64_t x) const { return Value(x); }
  Value from(const BigInt& x) const { return Value(x); }
  bool is_zero(const Value& x) const { return x == 0; }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value sub(const Value& a, const Value& b) const { return a - b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value inv(const Value& a) const { return Value(1) / a; }
  std::string name() const { return "Q"; }
};

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

struct PrimeField {
  using Value = std::uint64_t;
  std::uint64_t p;

  explicit PrimeField(std::uint64_t prime) : p(prime) {
    if (!is_prime(prime) || prime >= (1ull << 32))
      throw PreconditionError("field characteristic must be a prime below 2^32, got " +
                              std::to_string(prime));
  }
  Value from(std::int64_t x) const {
    auto r = x % static_cast<std::int64_t>(p);
    return static_cast<Value>(r < 0 ? r + static_cast<std::int64_t>(p) : r);
  }
  Value from(const BigInt& x) const {
    BigInt r = x % p;
    if (r < 0) r += p;
    return static_cast<Value>(r);
  }
  bool is_zero(Value x) const { return x == 0; }
  Value add(Value a, Value b) const { return (a + b) % p; }
  Value sub(Value a, Value b) const { return (a + p - b) % p; }
  Value mul(Value a, Value b) const { return (a * b) % p; }
  Value inv(Value a) const {
    Value result = 1, base = a, e = p - 2;
    while (e) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }
  std::string name() const { return "F" + std::to_string(p); }
};

template <class F>
using FieldMatrix = std::vector<std::vector<typename F::Value>>;

// Reduced row echelon form in place; returns the pivot columns.
template <class F>
std::vector<std::size_t> row_reduce(const F& field, FieldMatrix<F>& a,
                                    std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && field.is_zero(a[p][c])) ++p;
    if (p == a.size()) continue;
    std::swap(a[r], a[p]);
    const auto scale = field.inv(a[r][c]);
    for (std::size_t j = c; j < cols; ++j) a[r][j] = field.mul(a[r][j], scale);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || field.is_zero(a[i][c])) continue;
      const auto f = a[i][c];
      for (std::size_t j = c; j < cols; ++j)
        if (!field.is_zero(a[r][j]))
          a[i][j] = field.sub(a[i][j], field.mul(f, a[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Rank by forward elimination only.
template <class F>
std::size_t rank(const F& field, FieldMatrix<F> a, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && field.is_zero(a[p][c])) ++p;
    if (p == a.size()) continue;
    std::swap(a[r], a[p]);
    const auto scale = field.inv(a[r][c]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      if (field.is_zero(a[i][c])) continue;
      const auto f = field.mul(a[i][c], scale);
      for (std::size_t j = c; j < cols; ++j)
        if (!field.is_zero(a[r][j]))
          a[i][j] = field.sub(a[i][j], field.mul(f, a[r][j]));
    }
    ++r;
  }
  return r;
}

// Basis of {x : A x = 0}.
template <class F>
FieldMatrix<F> nullspace(const F& field, FieldMatrix<F> a, std::size_t cols) {
  auto pivots = row_reduce(field, a, cols);
  std::vector<int> pivot_row(cols, -1);
  for (std::size_t r = 0; r < pivots.size(); ++r)
    pivot_row[pivots[r]] = static_cast<int>(r);
  FieldMatrix<F> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (pivot_row[free] >= 0) continue;
    std::vector<typename F::Value> x(cols, field.from(std::int64_t{0}));
    x[free] = field.from(std::int64_t{1});
    for (std::size_t c : pivots)
      x[c] = field.sub(field.from(std::int64_t{0}), a[pivot_row[c]][free]);
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace svbench
