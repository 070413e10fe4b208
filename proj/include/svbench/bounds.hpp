#pragma once

// Provenance-tagged bounds on the simplicial volume, its integral version and
// its stable integral version; stable ratios over chains of covers; and the
// finite-stage growth inequalities for homology.

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "svbench/covers.hpp"
#include "svbench/dcomplex.hpp"
#include "svbench/error.hpp"
#include "svbench/homology.hpp"
#include "svbench/io.hpp"
#include "svbench/numeric.hpp"
#include "svbench/simplify.hpp"

namespace svbench {

enum class Invariant { sv, isv, stisv };
enum class Side { lower, upper };
enum class Provenance { betti, torsion, sv_sandwich, triangulation, transfer, stable_ratio, user_input };

inline std::string to_string(Invariant i) {
  switch (i) {
    case Invariant::sv: return "sv";
    case Invariant::isv: return "isv";
    case Invariant::stisv: return "stisv";
  }
  return "?";
}

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::betti: return "betti";
    case Provenance::torsion: return "torsion";
    case Provenance::sv_sandwich: return "sv_sandwich";
    case Provenance::triangulation: return "triangulation";
    case Provenance::transfer: return "transfer";
    case Provenance::stable_ratio: return "stable_ratio";
    case Provenance::user_input: return "user_input";
  }
  return "?";
}

// Exact rational, or a real where logarithms force one.
class BoundValue {
 public:
  BoundValue(Rational q) : value_(std::move(q)) {}
  BoundValue(long long q) : value_(Rational(q)) {}
  BoundValue(Real x) : value_(std::move(x)) {}

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const { return std::get<Rational>(value_); }
  Real approx() const { return is_exact() ? to_real(exact()) : std::get<Real>(value_); }
  std::string str(unsigned digits = kDefaultDigits) const {
    return is_exact() ? to_string(exact()) : to_string(std::get<Real>(value_), digits);
  }

  friend bool operator<(const BoundValue& a, const BoundValue& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() < b.exact();
    return a.approx() < b.approx();
  }
  friend bool operator==(const BoundValue& a, const BoundValue& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
    return a.approx() == b.approx();
  }

 private:
  std::variant<Rational, Real> value_;
};

struct BoundEntry {
  Side side = Side::lower;
  BoundValue value{0};
  Provenance provenance = Provenance::user_input;
  nlohmann::json certificate = nlohmann::json::object();
};

class BoundLedger {
 public:
  explicit BoundLedger(Invariant target) : target_(target) {}

  Invariant target() const { return target_; }
  const std::vector<BoundEntry>& entries() const { return entries_; }

  // Throws LedgerInconsistency if the entry contradicts an existing bound.
  void insert(BoundEntry e) {
    if (e.value < BoundValue(0))
      throw PreconditionError(to_string(target_) + ": negative bound " + e.value.str());
    for (const auto& other : entries_) {
      const bool bad = e.side == Side::lower ? (other.side == Side::upper && other.value < e.value)
                                             : (other.side == Side::lower && e.value < other.value);
      if (bad)
        throw LedgerInconsistency(to_string(target_) + ": " + to_string(e.provenance) + " " +
                                  (e.side == Side::lower ? "lower " : "upper ") + e.value.str() +
                                  " contradicts " + to_string(other.provenance) + " bound " +
                                  other.value.str());
    }
    entries_.push_back(std::move(e));
  }

  // Largest lower / smallest upper entry, first one on ties.
  const BoundEntry* best(Side side) const {
    const BoundEntry* out = nullptr;
    for (const auto& e : entries_) {
      if (e.side != side) continue;
      if (!out || (side == Side::lower ? out->value < e.value : e.value < out->value)) out = &e;
    }
    return out;
  }

 private:
  Invariant target_;
  std::vector<BoundEntry> entries_;
};

struct Ledgers {
  BoundLedger sv{Invariant::sv};
  BoundLedger isv{Invariant::isv};
  BoundLedger stisv{Invariant::stisv};
};

// rank H_k over Q and F_p bounds the integral simplicial volume from below.
inline BoundEntry lower_bound_betti(const HomologyProfile& h) {
  std::size_t best = 0;
  int at_k = 0;
  std::string ring = "Q";
  for (const auto& d : h.degrees) {
    if (d.betti_q > best) {
      best = d.betti_q;
      at_k = d.k;
      ring = "Q";
    }
    for (auto [p, r] : d.ranks_mod_p)
      if (r > best) {
        best = r;
        at_k = d.k;
        ring = "F_" + std::to_string(p);
      }
  }
  return {Side::lower, BoundValue(static_cast<long long>(best)), Provenance::betti,
          {{"k", at_k}, {"ring", ring}, {"rank", best}}};
}

// log|tors H_k| / (log(n+1) * C(n+1, k+1)).
inline Real torsion_bound_value(const Real& log_tors, int n, int k) {
  PrecisionScope scope(kDefaultDigits + 10);
  BigInt binom = 1;
  for (int i = 0; i < k + 1; ++i) binom = binom * (n + 1 - i) / (i + 1);
  return log_tors / (log(Real(n + 1)) * Real(binom));
}

// Integrality turns a positive real bound into its ceiling; no torsion, no entry.
inline std::optional<BoundEntry> lower_bound_torsion(const HomologyProfile& h, int n) {
  PrecisionScope scope(kDefaultDigits + 10);
  std::optional<Real> best;
  int at_k = 0;
  for (const auto& d : h.degrees) {
    if (d.tors_size <= 1 || d.k > n) continue;
    Real v = torsion_bound_value(d.log_tors, n, d.k);
    if (!best || *best < v) {
      best = v;
      at_k = d.k;
    }
  }
  if (!best || *best <= 0) return std::nullopt;
  const BigInt ceiled = ceil_to_int(*best);
  return BoundEntry{Side::lower, BoundValue(Rational(ceiled)), Provenance::torsion,
                    {{"k", at_k},
                     {"tors_size", h.at(at_k).tors_size.str()},
                     {"real_bound", to_string(*best)},
                     {"ceiling", ceiled.str()}}};
}

// The coherently oriented sum of top simplices is an integral fundamental cycle.
inline BoundEntry upper_bound_triangulation(const DeltaComplex& K) {
  const ChainVector z = fundamental_cycle(K);
  if (!boundary(K, z).is_zero()) throw std::logic_error("fundamental cycle has boundary");
  return {Side::upper, BoundValue(static_cast<long long>(K.top_count())),
          Provenance::triangulation, {{"fundamental_cycle", to_json(z)}}};
}

enum class SvSource { user_input, gromov_thurston };

namespace detail {

inline void post_sv(Ledgers& l, const BoundValue& v, const BoundValue& isv_lower,
                    const nlohmann::json& cert) {
  l.sv.insert({Side::lower, v, Provenance::user_input, cert});
  l.sv.insert({Side::upper, v, Provenance::user_input, cert});
  l.isv.insert({Side::lower, isv_lower, Provenance::sv_sandwich, cert});
  l.stisv.insert({Side::lower, v, Provenance::sv_sandwich, cert});
}

inline nlohmann::json sv_cert(SvSource s, const std::string& value) {
  return {{"source", s == SvSource::user_input ? "user_input" : "gromov_thurston"},
          {"sv", value}};
}

}  // namespace detail

// A known simplicial volume gives ceil(sv) <= isv and sv <= stisv.
inline void register_sv(Ledgers& l, const Rational& value, SvSource source) {
  if (value < 0) throw PreconditionError("register_sv: negative value");
  if (value == 0) return;
  BigInt c = boost::multiprecision::numerator(value) / boost::multiprecision::denominator(value);
  if (Rational(c) < value) ++c;
  detail::post_sv(l, BoundValue(value), BoundValue(Rational(c)),
                  detail::sv_cert(source, to_string(value)));
}

// Real input: within 1e-40 of an integer it is taken to be that integer, so
// that quotients such as vol / v_3 do not ceil past a whole number.
inline void register_sv(Ledgers& l, const Real& value, SvSource source) {
  if (value < 0) throw PreconditionError("register_sv: negative value");
  if (value == 0) return;
  const Real nearest = round(value);
  if (abs(value - nearest) < Real("1e-40")) {
    register_sv(l, Rational(nearest.convert_to<BigInt>()), source);
    return;
  }
  detail::post_sv(l, BoundValue(value), BoundValue(Rational(ceil_to_int(value))),
                  detail::sv_cert(source, to_string(value)));
}

struct Certificate {
  Rational value;
  BoundEntry lower, upper;
};

// A value is certified only when both witnesses can be rechecked: a rank by
// Smith normal form, a fundamental cycle by its zero boundary.
inline std::optional<Certificate> certify(const BoundLedger& l) {
  const BoundEntry* lo = l.best(Side::lower);
  const BoundEntry* hi = l.best(Side::upper);
  if (!lo || !hi || !lo->value.is_exact() || !hi->value.is_exact()) return std::nullopt;
  if (lo->value.exact() != hi->value.exact()) return std::nullopt;
  auto recheckable_lower = [](const BoundEntry& e) {
    return e.side == Side::lower &&
           (e.provenance == Provenance::betti || e.provenance == Provenance::torsion);
  };
  auto recheckable_upper = [](const BoundEntry& e) {
    return e.side == Side::upper && e.provenance == Provenance::triangulation;
  };
  const BoundEntry* a = nullptr;
  const BoundEntry* b = nullptr;
  for (const auto& e : l.entries()) {
    if (!e.value.is_exact() || e.value.exact() != lo->value.exact()) continue;
    if (!a && recheckable_lower(e)) a = &e;
    if (!b && recheckable_upper(e)) b = &e;
  }
  if (!a || !b) return std::nullopt;
  return Certificate{lo->value.exact(), *a, *b};
}

inline nlohmann::json to_json(const BoundEntry& e, unsigned digits = kDefaultDigits) {
  return {{"side", e.side == Side::lower ? "lower" : "upper"},
          {"value", e.value.str(digits)},
          {"exact", e.value.is_exact()},
          {"provenance", to_string(e.provenance)},
          {"certificate", e.certificate}};
}

inline nlohmann::json to_json(const BoundLedger& l, unsigned digits = kDefaultDigits) {
  auto entries = nlohmann::json::array();
  for (const auto& e : l.entries()) entries.push_back(to_json(e, digits));
  nlohmann::json out = {{"target", to_string(l.target())}, {"entries", entries}};
  const BoundEntry* lo = l.best(Side::lower);
  const BoundEntry* hi = l.best(Side::upper);
  out["lower"] = lo ? nlohmann::json(lo->value.str(digits)) : nlohmann::json(nullptr);
  out["upper"] = hi ? nlohmann::json(hi->value.str(digits)) : nlohmann::json(nullptr);
  if (auto c = certify(l))
    out["certified"] = to_string(c->value);
  return out;
}

// Ledgers for a closed oriented manifold complex from its own data.
inline Ledgers manifold_bounds(const DeltaComplex& K, const HomologyProfile& h) {
  Ledgers l;
  l.isv.insert(lower_bound_betti(h));
  if (auto t = lower_bound_torsion(h, K.dimension())) l.isv.insert(*t);
  auto up = upper_bound_triangulation(K);
  l.isv.insert(up);
  // sv <= isv and stisv <= isv
  l.sv.insert({Side::upper, up.value, Provenance::triangulation, {{"via", "isv"}}});
  l.stisv.insert({Side::upper, up.value, Provenance::triangulation, {{"via", "isv"}}});
  return l;
}

struct StableLevel {
  unsigned index = 1;
  std::size_t cover_size = 0;  // top simplices of the cover as built
  Rational upper;              // U_i
  Provenance source = Provenance::triangulation;
  Rational ratio;              // U_i / d_i
};

struct StableSequence {
  std::vector<StableLevel> levels;
  Rational best_ratio;
  std::size_t best_level = 0;
  SubgroupChain chain;
};

// Size reached by simplification; callers may substitute a cached search.
using Simplifier = std::function<std::size_t(const DeltaComplex&, const SearchConfig&)>;

// U_i is the smaller of the simplified cover and the transfer bound d_i*U_0.
inline StableSequence stable_sequence(const DeltaComplex& K, const SubgroupChain& chain,
                                      const SearchConfig& cfg = {},
                                      const Simplifier& simplifier = {}) {
  if (chain.levels.empty()) throw PreconditionError("stable_sequence: empty chain");
  const Presentation p = presentation(K);
  StableSequence out;
  out.chain = chain;
  Rational u0;
  for (std::size_t i = 0; i < chain.levels.size(); ++i) {
    const auto& rec = chain.levels[i].record;
    auto cover = build_cover(K, p, rec).complex;
    StableLevel level;
    level.index = rec.index;
    level.cover_size = cover.top_count();
    level.upper = Rational(simplifier ? simplifier(cover, cfg) : simplify(cover, cfg).best_size);
    if (i == 0) {
      u0 = level.upper;
    } else if (u0 * rec.index < level.upper) {
      level.upper = u0 * rec.index;
      level.source = Provenance::transfer;
    }
    if (u0 * rec.index < level.upper) throw std::logic_error("stable_sequence: transfer violated");
    level.ratio = level.upper / rec.index;
    if (i == 0 || level.ratio < out.best_ratio) {
      out.best_ratio = level.ratio;
      out.best_level = i;
    }
    out.levels.push_back(level);
  }
  return out;
}

inline void post_stable(Ledgers& l, const StableSequence& s) {
  l.stisv.insert({Side::upper, BoundValue(s.best_ratio), Provenance::stable_ratio,
                  {{"level", s.best_level},
                   {"index", s.levels[s.best_level].index},
                   {"U", to_string(s.levels[s.best_level].upper)}}});
}

inline nlohmann::json to_json(const StableSequence& s) {
  auto levels = nlohmann::json::array();
  for (const auto& l : s.levels)
    levels.push_back({{"d", l.index},
                      {"cover_size", l.cover_size},
                      {"U", to_string(l.upper)},
                      {"source", to_string(l.source)},
                      {"ratio", to_string(l.ratio)}});
  return {{"levels", levels},
          {"best_ratio", to_string(s.best_ratio)},
          {"best_ratio_label", "upper bound on stisv"},
          {"best_level", s.best_level},
          {"chain", to_json(s.chain)}};
}

struct GrowthRow {
  std::size_t level = 0;
  unsigned index = 1;
  int k = 0;
  std::string ring;  // "Q", "F_p", or "tors"
  BoundValue value{0};
  BoundValue bound{0};
  bool ok = true;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  std::size_t violations = 0;
};

// At level i, rank_R H_k(M_i)/d_i <= ||M_i||_Z/d_i <= U_j/d_j for every
// j <= i (transfer along the chain), so each row is compared with the best
// ratio over levels 0..i.  Torsion rows use log(n+1) * 2^(n+1) times it.
inline GrowthReport homology_growth_report(const DeltaComplex& K, const StableSequence& s,
                                           const std::vector<unsigned>& primes = {2, 3, 5}) {
  PrecisionScope scope(kDefaultDigits + 10);
  const Presentation p = presentation(K);
  const int n = K.dimension();
  GrowthReport out;
  Rational running;
  for (std::size_t i = 0; i < s.levels.size(); ++i) {
    const auto& level = s.levels[i];
    running = i == 0 ? level.ratio : std::min(running, level.ratio);
    auto cover = build_cover(K, p, s.chain.levels[i].record).complex;
    const auto h = homology_profile(cover, primes);
    const Real tors_bound = log(Real(n + 1)) * Real(BigInt(1) << (n + 1)) * to_real(running);
    for (const auto& d : h.degrees) {
      auto row = [&](std::string ring, BoundValue v, BoundValue b) {
        GrowthRow r{i, level.index, d.k, std::move(ring), std::move(v), std::move(b), true};
        r.ok = !(r.bound < r.value);
        if (!r.ok) ++out.violations;
        out.rows.push_back(std::move(r));
      };
      row("Q", BoundValue(Rational(d.betti_q, level.index)), BoundValue(running));
      for (auto [q, r] : d.ranks_mod_p)
        row("F_" + std::to_string(q), BoundValue(Rational(r, level.index)), BoundValue(running));
      row("tors", BoundValue(Real(d.log_tors / level.index)), BoundValue(tors_bound));
    }
  }
  return out;
}

inline nlohmann::json to_json(const GrowthReport& g, unsigned digits = 20) {
  auto rows = nlohmann::json::array();
  for (const auto& r : g.rows)
    rows.push_back({{"level", r.level},
                    {"d", r.index},
                    {"k", r.k},
                    {"ring", r.ring},
                    {"value", r.value.str(digits)},
                    {"bound", r.bound.str(digits)},
                    {"ok", r.ok}});
  return {{"rows", rows}, {"violations", g.violations}};
}

}  // namespace svbench
