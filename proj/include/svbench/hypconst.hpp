#pragma once

// Constants of regular ideal hyperbolic simplices.  eps, a, delta and eta
// are inputs only: no numeric values for them are known.

#include <optional>
#include <string>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <json.hpp>

#include "svbench/error.hpp"
#include "svbench/numeric.hpp"

namespace svbench {

inline constexpr unsigned kGuardDigits = 15;

inline Real pi_real() { return boost::math::constants::pi<Real>(); }

// Dihedral angle of the regular ideal n-simplex, arccos(1/(n-1)).
inline Real dihedral_angle(int n, unsigned digits = kDefaultDigits) {
  if (n < 3) throw PreconditionError("dihedral_angle: n must be at least 3");
  PrecisionScope scope(digits + kGuardDigits);
  return acos(Real(1) / Real(n - 1));
}

// k_n with k_n * alpha_n < 2 pi < (k_n + 1) * alpha_n.  For n = 3 the
// quotient 2 pi / alpha_3 = 6 is an integer and there is no such k.
inline unsigned k_overlap(int n, unsigned digits = kDefaultDigits) {
  if (n < 3) throw PreconditionError("k_overlap: n must be at least 3");
  if (n == 3) throw PreconditionError("k_overlap: 2 pi / alpha_3 is an integer");
  PrecisionScope scope(digits + kGuardDigits);
  const Real alpha = dihedral_angle(n, digits);
  const Real q = 2 * pi_real() / alpha;
  const Real k = floor(q);
  if (!(k * alpha < 2 * pi_real() && 2 * pi_real() < (k + 1) * alpha))
    throw std::logic_error("k_overlap: strict inequality fails at working precision");
  return k.convert_to<unsigned>();
}

namespace detail {

// B_0..B_{2m} as exact rationals (B_1 = -1/2 convention).
inline const std::vector<Rational>& bernoulli(std::size_t m) {
  static std::vector<Rational> b{Rational(1)};
  while (b.size() <= 2 * m) {
    const std::size_t n = b.size();
    // sum_{j<n} C(n+1, j) B_j = -(n+1) B_n
    Rational s = 0;
    BigInt binom = 1;  // C(n+1, j)
    for (std::size_t j = 0; j < n; ++j) {
      s += Rational(binom) * b[j];
      binom = binom * (n + 1 - j) / (j + 1);
    }
    b.push_back(-s / Rational(n + 1));
  }
  return b;
}

// Clausen function Cl_2 on [-pi, pi]:
//   Cl_2(x) = x - x log|x| + sum_k |B_2k| x^(2k+1) / (2k (2k+1) (2k)!)
// whose terms shrink at least by (x / 2 pi)^2 <= 1/4.
inline Real clausen_reduced(const Real& x, unsigned digits) {
  if (x == 0) return Real(0);
  const Real eps = pow(Real(10), -static_cast<int>(digits + 5));
  Real sum = x - x * log(abs(x));
  const Real x2 = x * x;
  Real power = x * x2;   // x^(2k+1)
  Real fact = 2;         // (2k)!
  for (std::size_t k = 1;; ++k) {
    const Rational& b = bernoulli(k)[2 * k];
    const Real term = to_real(abs(b)) * power / (Real(2 * k) * Real(2 * k + 1) * fact);
    sum += term;
    if (abs(term) < eps) break;
    power *= x2;
    fact *= Real((2 * k + 1) * (2 * k + 2));
  }
  return sum;
}

}  // namespace detail

// Lobachevsky function, Lambda(t) = (1/2) sum_k sin(2kt)/k^2 = Cl_2(2t)/2.
inline Real lobachevsky(const Real& theta, unsigned digits = kDefaultDigits) {
  PrecisionScope scope(digits + kGuardDigits);
  const Real two_pi = 2 * pi_real();
  // reduce 2 theta into [-pi, pi]
  Real x = Real(2 * theta);
  x -= two_pi * floor((x + pi_real()) / two_pi);
  return detail::clausen_reduced(x, digits) / 2;
}

// Volume of the regular ideal n-simplex for n = 2, 3.
inline Real regular_ideal_volume(int n, unsigned digits = kDefaultDigits) {
  if (n != 2 && n != 3)
    throw PreconditionError("regular_ideal_volume: only n = 2, 3 are supported");
  PrecisionScope scope(digits + kGuardDigits);
  if (n == 2) return pi_real();
  return 3 * lobachevsky(pi_real() / 3, digits);
}

inline Real gromov_thurston_sv(const Real& vol, int n, unsigned digits = kDefaultDigits) {
  if (!(vol > 0)) throw PreconditionError("gromov_thurston_sv: volume must be positive");
  PrecisionScope scope(digits + kGuardDigits);
  return vol / regular_ideal_volume(n, digits);
}

struct HypParams {
  int n = 3;
  std::optional<Real> eps, a, delta, eta;
  unsigned digits = kDefaultDigits;
};

struct CConst {
  Real value;
  std::vector<Real> branches;  // 1 - eps/12, 1 - eta/(3v), 1 - a eta/(2v)
};

// C_n = max of the three branches; each is below 1 for positive inputs.
inline CConst c_const(const HypParams& p, const Real& v) {
  if (!p.eps || !p.a || !p.eta) throw PreconditionError("c_const: eps, a and eta are required");
  if (!(*p.eps > 0 && *p.a > 0 && *p.eta > 0 && v > 0))
    throw PreconditionError("c_const: parameters must be positive");
  PrecisionScope scope(p.digits + kGuardDigits);
  CConst c;
  c.branches = {1 - *p.eps / 12, 1 - *p.eta / (3 * v), 1 - *p.a * *p.eta / (2 * v)};
  c.value = c.branches[0];
  for (const auto& b : c.branches)
    if (c.value < b) c.value = b;
  return c;
}

struct AngleWindow {
  Real lo, hi;
  bool inside = false;          // the queried angle
  bool regular_inside = false;  // alpha_n itself
};

// 2 pi/(k_n+1) (1+a) < alpha < 2 pi/k_n (1-a)
inline AngleWindow angle_window_check(int n, const Real& a, const Real& alpha,
                                      unsigned digits = kDefaultDigits) {
  if (n < 4) throw PreconditionError("angle_window_check: n must be at least 4");
  if (!(a > 0)) throw PreconditionError("angle_window_check: a must be positive");
  PrecisionScope scope(digits + kGuardDigits);
  const unsigned k = k_overlap(n, digits);
  AngleWindow w;
  w.lo = 2 * pi_real() / (k + 1) * (1 + a);
  w.hi = 2 * pi_real() / k * (1 - a);
  w.inside = w.lo < alpha && alpha < w.hi;
  const Real reg = dihedral_angle(n, digits);
  w.regular_inside = w.lo < reg && reg < w.hi;
  return w;
}

struct HypReport {
  int n = 3;
  Real alpha;
  std::optional<unsigned> k;
  bool quotient_is_integer = false;  // 2 pi / alpha_n
  std::optional<Real> volume;
  std::optional<CConst> c;
  std::optional<AngleWindow> window;
};

inline HypReport hyp_report(const HypParams& p) {
  HypReport r;
  r.n = p.n;
  r.alpha = dihedral_angle(p.n, p.digits);
  r.quotient_is_integer = p.n == 3;
  if (p.n >= 4) r.k = k_overlap(p.n, p.digits);
  if (p.n <= 3) r.volume = regular_ideal_volume(p.n, p.digits);
  if (p.eps && p.a && p.eta && r.volume) r.c = c_const(p, *r.volume);
  if (p.a && p.n >= 4) r.window = angle_window_check(p.n, *p.a, r.alpha, p.digits);
  return r;
}

inline nlohmann::json to_json(const HypReport& r, unsigned digits = kDefaultDigits) {
  nlohmann::json out = {{"n", r.n},
                        {"alpha", to_string(r.alpha, digits)},
                        {"two_pi_over_alpha_is_integer", r.quotient_is_integer}};
  if (r.k) out["k"] = *r.k;
  if (r.volume) out["v"] = to_string(*r.volume, digits);
  else out["v"] = "unsupported for n >= 4";
  if (r.c) {
    auto branches = nlohmann::json::array();
    for (const auto& b : r.c->branches) branches.push_back(to_string(b, digits));
    out["C"] = {{"value", to_string(r.c->value, digits)}, {"branches", branches}};
  }
  if (r.window)
    out["window"] = {{"lo", to_string(r.window->lo, digits)},
                     {"hi", to_string(r.window->hi, digits)},
                     {"regular_inside", r.window->regular_inside}};
  return out;
}

}  // namespace svbench
