#pragma once

// Integral homology of Delta-complexes via Smith normal form of the boundary
// matrices, with mod-p ranks alongside.

#include <map>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "svbench/dcomplex.hpp"
#include "svbench/field.hpp"
#include "svbench/integer_matrix.hpp"
#include "svbench/numeric.hpp"

namespace svbench {

// Matrix of the boundary map C_k -> C_{k-1}: rows are (k-1)-simplices,
// columns k-simplices.
inline IntegerMatrix boundary_matrix(const DeltaComplex& K, int k) {
  IntegerMatrix d(K.count(k - 1), K.count(k));
  if (k < 1 || k > K.dimension()) return d;
  for (SimplexId s = 0; s < K.count(k); ++s) {
    auto f = K.faces(k, s);
    for (int j = 0; j <= k; ++j) d(f[j], s) += (j % 2 == 0 ? 1 : -1);
  }
  return d;
}

template <class F>
FieldMatrix<F> to_field(const F& field, const IntegerMatrix& a) {
  FieldMatrix<F> out(a.rows(),
                     std::vector<typename F::Value>(a.cols(), field.from(std::int64_t{0})));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != 0) out[i][j] = field.from(a(i, j));
  return out;
}

struct DegreeHomology {
  int k = 0;
  std::size_t betti_q = 0;
  std::map<unsigned, std::size_t> ranks_mod_p;
  std::vector<BigInt> divisors;  // elementary divisors > 1
  BigInt tors_size = 1;
  Real log_tors = 0;
};

struct HomologyProfile {
  int dimension = 0;
  std::vector<DegreeHomology> degrees;

  const DegreeHomology& at(int k) const { return degrees.at(k); }
  std::vector<std::size_t> betti() const {
    std::vector<std::size_t> out;
    for (const auto& d : degrees) out.push_back(d.betti_q);
    return out;
  }
};

// Exact comparison; log_tors is a function of the divisors and is skipped.
inline bool same_homology(const HomologyProfile& a, const HomologyProfile& b) {
  if (a.degrees.size() != b.degrees.size()) return false;
  for (std::size_t k = 0; k < a.degrees.size(); ++k) {
    const auto& x = a.degrees[k];
    const auto& y = b.degrees[k];
    if (x.betti_q != y.betti_q || x.divisors != y.divisors ||
        x.ranks_mod_p != y.ranks_mod_p)
      return false;
  }
  return true;
}

inline HomologyProfile homology_profile(const DeltaComplex& K,
                                        const std::vector<unsigned>& primes = {2, 3, 5},
                                        unsigned digits = kDefaultDigits) {
  PrecisionScope scope(digits + 10);
  const int n = K.dimension();
  HomologyProfile profile;
  profile.dimension = n;
  // rank and divisors of d_k for k = 1..n, plus d_0 = d_{n+1} = 0
  std::vector<std::size_t> rank_q(n + 2, 0);
  std::vector<std::vector<BigInt>> divisors(n + 2);
  std::map<unsigned, std::vector<std::size_t>> rank_p;
  for (unsigned p : primes) rank_p[p].assign(n + 2, 0);
  for (int k = 1; k <= n; ++k) {
    auto d = boundary_matrix(K, k);
    auto snf = smith_normal_form(d);
    rank_q[k] = snf.rank;
    divisors[k] = snf.elementary_divisors();
    for (unsigned p : primes) {
      PrimeField field(p);
      rank_p[p][k] = rank(field, to_field(field, d), d.cols());
    }
  }
  std::int64_t alternating = 0;
  for (int k = 0; k <= n; ++k) {
    DegreeHomology h;
    h.k = k;
    h.betti_q = K.count(k) - rank_q[k] - rank_q[k + 1];
    for (unsigned p : primes)
      h.ranks_mod_p[p] = K.count(k) - rank_p[p][k] - rank_p[p][k + 1];
    h.divisors = divisors[k + 1];
    for (const auto& d : h.divisors) {
      h.tors_size *= d;
      h.log_tors += log(Real(d));
    }
    alternating += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(h.betti_q);
    profile.degrees.push_back(std::move(h));
  }
  if (alternating != euler_characteristic(K))
    throw std::logic_error("homology_profile: Euler characteristic cross-check failed");
  return profile;
}

inline nlohmann::json to_json(const HomologyProfile& h, unsigned digits = kDefaultDigits) {
  auto degrees = nlohmann::json::array();
  for (const auto& d : h.degrees) {
    nlohmann::json ranks = nlohmann::json::object();
    for (auto [p, r] : d.ranks_mod_p) ranks[std::to_string(p)] = r;
    auto divs = nlohmann::json::array();
    for (const auto& x : d.divisors) divs.push_back(x.str());
    degrees.push_back({{"k", d.k},
                       {"betti_Q", d.betti_q},
                       {"ranks", ranks},
                       {"divisors", divs},
                       {"tors_size", d.tors_size.str()},
                       {"log_tors", to_string(d.log_tors, digits)}});
  }
  return {{"dimension", h.dimension}, {"degrees", degrees}};
}

}  // namespace svbench
