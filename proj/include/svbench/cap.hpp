#pragma once

// Cap product with a fundamental cycle, and the rank of the induced map
// H^{n-k} -> H_k.

#include <optional>

#include "svbench/dcomplex.hpp"
#include "svbench/error.hpp"
#include "svbench/field.hpp"
#include "svbench/homology.hpp"

namespace svbench {

// Integer cochain: a sparse function on the simplices of one degree.  Shares
// the chain representation.
using Cochain = ChainVector;

inline Cochain coboundary(const DeltaComplex& K, const Cochain& f) {
  const int m = f.degree();
  if (m < 0 || m > K.dimension())
    throw PreconditionError("coboundary: cochain degree out of range");
  Cochain out(m + 1);
  if (m == K.dimension() || f.is_zero()) return out;
  for (SimplexId t = 0; t < K.count(m + 1); ++t) {
    auto faces = K.faces(m + 1, t);
    Coefficient v = 0;
    for (int j = 0; j <= m + 1; ++j)
      v += (j % 2 == 0 ? 1 : -1) * f[faces[j]];
    out.add(t, v);
  }
  return out;
}

inline int cap_sign(int n, int k) { return (k * (n - k)) % 2 == 0 ? 1 : -1; }

// (-1)^{k(n-k)} sum_sigma z(sigma) f(front_{n-k} sigma) back_k sigma.
inline ChainVector cap_with_fundamental_cycle(const DeltaComplex& K,
                                              const ChainVector& z,
                                              const Cochain& f) {
  const int n = K.dimension();
  if (z.degree() != n)
    throw PreconditionError("cap: cycle degree " + std::to_string(z.degree()) +
                            " differs from the dimension " + std::to_string(n));
  const int m = f.degree();
  if (m < 0 || m > n) throw PreconditionError("cap: cochain degree out of range");
  const int k = n - m;
  const int sign = cap_sign(n, k);
  ChainVector out(k);
  for (auto [sigma, a] : z.terms()) {
    Coefficient v = f[K.front_face(n, sigma, m)];
    if (v != 0) out.add(K.back_face(n, sigma, k), sign * a * v);
  }
  return out;
}

template <class F>
std::size_t pd_surjectivity_rank(const F& field, const DeltaComplex& K,
                                 const ChainVector& z, int k) {
  const int n = K.dimension();
  if (z.degree() != n) throw PreconditionError("pd rank: z must have top degree");
  if (!boundary(K, z).is_zero())
    throw PreconditionError("pd rank: z is not a cycle");
  if (k < 0 || k > n) throw PreconditionError("pd rank: degree out of range");
  const int m = n - k;
  const auto zero = field.from(std::int64_t{0});

  // cocycles: kernel of the transpose of d_{m+1}
  auto d_up = boundary_matrix(K, m + 1);  // count(m) x count(m+1)
  FieldMatrix<F> delta(d_up.cols(), std::vector<typename F::Value>(d_up.rows(), zero));
  for (std::size_t i = 0; i < d_up.rows(); ++i)
    for (std::size_t j = 0; j < d_up.cols(); ++j)
      if (d_up(i, j) != 0) delta[j][i] = field.from(d_up(i, j));
  auto cocycles = nullspace(field, std::move(delta), K.count(m));

  // boundaries B_k: columns of d_{k+1}
  auto d_k1 = boundary_matrix(K, k + 1);  // count(k) x count(k+1)
  FieldMatrix<F> rows;
  for (std::size_t j = 0; j < d_k1.cols(); ++j) {
    std::vector<typename F::Value> col(K.count(k), zero);
    for (std::size_t i = 0; i < d_k1.rows(); ++i)
      if (d_k1(i, j) != 0) col[i] = field.from(d_k1(i, j));
    rows.push_back(std::move(col));
  }
  const std::size_t rank_b = rank(field, rows, K.count(k));

  const auto sign = field.from(std::int64_t{cap_sign(n, k)});
  for (const auto& x : cocycles) {
    std::vector<typename F::Value> image(K.count(k), zero);
    for (auto [sigma, a] : z.terms()) {
      const auto& v = x[K.front_face(n, sigma, m)];
      if (field.is_zero(v)) continue;
      auto& slot = image[K.back_face(n, sigma, k)];
      slot = field.add(slot, field.mul(field.mul(sign, field.from(a)), v));
    }
    rows.push_back(std::move(image));
  }
  return rank(field, std::move(rows), K.count(k)) - rank_b;
}

// Over Q when `prime` is empty, else over F_p.
inline std::size_t pd_surjectivity_rank(const DeltaComplex& K, const ChainVector& z,
                                        int k, std::optional<unsigned> prime = {}) {
  if (prime) return pd_surjectivity_rank(PrimeField(*prime), K, z, k);
  return pd_surjectivity_rank(RationalField{}, K, z, k);
}

}  // namespace svbench
