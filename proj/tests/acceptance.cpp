// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <boost/math/constants/constants.hpp>

#include "svbench/bounds.hpp"
#include "svbench/cap.hpp"
#include "svbench/cli.hpp"
#include "svbench/corpus.hpp"
#include "svbench/covers.hpp"
#include "svbench/filling.hpp"
#include "svbench/homology.hpp"
#include "svbench/hypconst.hpp"
#include "svbench/simplify.hpp"
#include "test_support.hpp"

using namespace svbench;
using svbench::testing::load;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed expectations; the first few go into the detail line.
struct Tally {
  std::size_t checks = 0, failures = 0;
  std::string first;
  void expect(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ < 3) first += (first.empty() ? "" : "; ") + what;
  }
  Outcome outcome(const std::string& summary) const {
    if (failures == 0) return {true, summary + " (" + std::to_string(checks) + " checks)"};
    return {false, std::to_string(failures) + "/" + std::to_string(checks) + " failed: " + first};
  }
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string data(const std::string& name) { return std::string(SVBENCH_DATA_DIR) + "/" + name; }

nlohmann::json cli_result(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  if (int status = cli::run(args, out, err); status != 0)
    throw std::runtime_error("cli exit " + std::to_string(status) + ": " + err.str());
  return nlohmann::json::parse(out.str())["result"];
}

const nlohmann::json* entry(const nlohmann::json& ledger, const std::string& side,
                            const std::string& provenance) {
  for (const auto& e : ledger["entries"])
    if (e["side"] == side && e["provenance"] == provenance) return &e;
  return nullptr;
}

// 1
Outcome torus_certification() {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  auto r = cli_result({"bounds", data("torus.json")});
  const double secs = seconds_since(start);
  t.expect(secs < 1.0, "runtime " + std::to_string(secs) + " s");
  const auto& isv = r["ledgers"]["isv"];
  t.expect(isv["certified"] == "2", "isv not certified 2");
  auto lo = entry(isv, "lower", "betti");
  auto hi = entry(isv, "upper", "triangulation");
  t.expect(lo && (*lo)["value"] == "2", "betti lower bound is not 2");
  t.expect(hi && (*hi)["value"] == "2", "triangulation upper bound is not 2");
  return t.outcome("isv = 2 certified in " + std::to_string(secs).substr(0, 5) + " s");
}

// 2
Outcome stable_torus() {
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  auto r = cli_result({"stable", data("torus.json"), "--depth", "3"});
  const double secs = seconds_since(start);
  std::vector<unsigned> d;
  std::vector<std::string> ratios;
  for (const auto& row : r["stable"]) {
    d.push_back(row["d"]);
    ratios.push_back(row["ratio"]);
  }
  t.expect(d == std::vector<unsigned>{1, 2, 4, 8}, "indices are not 1, 2, 4, 8");
  t.expect(ratios == std::vector<std::string>{"2", "1", "1/2", "1/4"}, "ratios differ");
  t.expect(secs < 30, "runtime " + std::to_string(secs) + " s");
  return t.outcome("ratios 2, 1, 1/2, 1/4 in " + std::to_string(secs).substr(0, 5) + " s");
}

// 3
Outcome genus2_interval() {
  Tally t;
  auto plain = cli_result({"bounds", data("genus2.json")});
  const auto& isv = plain["ledgers"]["isv"];
  t.expect(isv["lower"] == "4" && isv["upper"] == "6", "isv interval is not [4, 6]");
  auto lo = entry(isv, "lower", "betti");
  auto hi = entry(isv, "upper", "triangulation");
  t.expect(lo && (*lo)["value"] == "4", "betti lower bound is not 4");
  t.expect(hi && (*hi)["value"] == "6", "triangulation upper bound is not 6");
  auto known = cli_result({"bounds", data("genus2.json"), "--sv", "4"});
  const auto& isv2 = known["ledgers"]["isv"];
  auto sw = entry(isv2, "lower", "sv_sandwich");
  t.expect(sw && (*sw)["value"] == "4" && (*sw)["exact"] == true, "sandwich lower bound is not 4");
  t.expect(isv2["lower"] == "4" && isv2["upper"] == "6", "interval moved with sv = 4");
  return t.outcome("isv in [4, 6]; sandwich path gives 4");
}

// 4
Outcome growth() {
  Tally t;
  std::size_t rows = 0;
  for (const char* name : {"torus.json", "genus2.json"}) {
    auto K = load(name);
    for (int depth = 0; depth <= 3; ++depth) {
      auto s = stable_sequence(K, subgroup_chain(K, depth));
      auto g = homology_growth_report(K, s);
      t.expect(g.violations == 0, std::string(name) + ": growth violations");
      for (const auto& row : g.rows) {
        ++rows;
        t.expect(row.ok, std::string(name) + ": row above its bound");
        if (row.ring == "tors")
          t.expect(!(BoundValue(0) < row.value), std::string(name) + ": nonzero torsion ratio");
      }
    }
  }
  return t.outcome(std::to_string(rows) + " rows, no violations, torsion ratios 0");
}

// -integral_0^theta log|2 sin t| dt, singular parts in closed form, the rest by Simpson.
double lobachevsky_integral(double theta) {
  const double pi = std::acos(-1.0);
  auto smooth = [&](double s) {
    if (s < 1e-9 || pi - s < 1e-9) return std::log(1 / pi);
    return std::log(std::sin(s) / (s * (pi - s)));
  };
  const int n = 4000;
  const double h = theta / n;
  double sum = smooth(0) + smooth(theta);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4 : 2) * smooth(i * h);
  const double r = pi - theta;
  const double log_t = theta * std::log(2 * theta) - theta;
  const double log_pi_t = (r > 0 ? -r * std::log(r) : 0) + r + pi * std::log(pi) - pi;
  return -(log_t + log_pi_t + sum * h / 3);
}

// 5
Outcome hyperbolic_constants() {
  Tally t;
  PrecisionScope scope(kDefaultDigits + kGuardDigits);
  const Real pi = boost::math::constants::pi<Real>();
  t.expect(abs(dihedral_angle(3) - pi / 3) < Real("1e-45"), "alpha_3 != pi/3");
  t.expect(k_overlap(4) == 5, "k_4 != 5");
  for (int n = 5; n <= 50; ++n) t.expect(k_overlap(n) == 4, "k_" + std::to_string(n) + " != 4");
  for (int n = 4; n <= 50; ++n) {
    const Real a = dihedral_angle(n);
    const Real k = k_overlap(n);
    t.expect(k * a < 2 * pi && 2 * pi < (k + 1) * a, "window fails at n = " + std::to_string(n));
    const Real q = 2 * pi / a;
    t.expect(abs(q - round(q)) > Real("1e-10"), "2 pi / alpha near an integer at n = " + std::to_string(n));
  }
  const double v3 = regular_ideal_volume(3).convert_to<double>();
  const double oracle = 3 * lobachevsky_integral(std::acos(-1.0) / 3);
  t.expect(std::abs(v3 - oracle) < 1e-6, "v_3 off the integral oracle");
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> pos(1e-6, 50);
  for (int i = 0; i < 1000; ++i) {
    HypParams p;
    p.eps = Real(pos(rng));
    p.a = Real(pos(rng));
    p.eta = Real(pos(rng));
    t.expect(c_const(p, Real(pos(rng))).value < 1, "C_n >= 1");
  }
  return t.outcome("alpha, k_n, window, v_3 = " + std::to_string(v3).substr(0, 8) + ", C_n < 1");
}

VertexTuple random_tuple(const DeltaComplex& K, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<SimplexId> top(0, K.top_count() - 1);
  auto v = K.vertices(K.dimension(), top(rng));
  std::uniform_int_distribution<std::size_t> slot(0, v.size() - 1);
  VertexTuple out;
  for (int i = 0; i <= k; ++i) out.push_back(v[slot(rng)]);
  return out;
}

OrderedChain random_ordered_chain(const DeltaComplex& K, int k, std::mt19937_64& rng, int terms) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  OrderedChain c(k);
  for (int i = 0; i < terms; ++i) c.add(random_tuple(K, k, rng), coeff(rng));
  return c;
}

// 6
Outcome filling() {
  Tally t;
  std::mt19937_64 rng(61);
  const std::vector<DeltaComplex> bases = {barycentric_subdivision(load("torus.json")),
                                           load("tetrahedron_boundary.json"),
                                           load("s3_boundary.json")};
  std::size_t cycles = 0, prisms = 0;
  for (const auto& B : bases) {
    auto H = cone(B);
    for (int degree = 1; degree <= 2; ++degree) {
      if (degree + 1 > B.dimension()) continue;
      for (int trial = 0; trial < 60; ++trial) {
        auto z = ordered_boundary(random_ordered_chain(B, degree + 1, rng, 5));
        if (z.is_zero()) continue;
        auto b = efficient_fill(H, z);
        const int n = degree + 1;
        t.expect(ordered_boundary(b) == z, "boundary of the fill differs");
        t.expect(b.l1() <= (n + 1) * z.l1(), "fill norm above (n+1) l1(z)");
        ++cycles;
      }
    }
    for (int k = 0; k <= B.dimension(); ++k)
      for (int trial = 0; trial < 25; ++trial) {
        auto c = random_ordered_chain(B, k, rng, 7);
        auto h = prism_homotopy(H, c);
        auto lhs = ordered_boundary(h);
        if (k > 0) lhs += prism_homotopy(H, ordered_boundary(c));
        t.expect(lhs == c - collapse_to_apex(H, c), "prism relation fails");
        t.expect(h.l1() <= (k + 1) * c.l1(), "prism norm above (k+1) l1");
        ++prisms;
      }
  }
  t.expect(cycles >= 200, "only " + std::to_string(cycles) + " cycles");
  t.expect(prisms >= 200, "only " + std::to_string(prisms) + " prism chains");
  return t.outcome(std::to_string(cycles) + " fills, " + std::to_string(prisms) + " prism chains");
}

// 7
Outcome cap_duality() {
  Tally t;
  for (const char* name : {"torus.json", "genus2.json", "tetrahedron_boundary.json"}) {
    auto K = load(name);
    auto z = fundamental_cycle(K);
    auto h = homology_profile(K);
    for (int k = 0; k <= K.dimension(); ++k)
      t.expect(pd_surjectivity_rank(K, z, k) == h.at(k).betti_q,
               std::string(name) + " degree " + std::to_string(k));
  }
  return t.outcome("cap rank = betti over Q");
}

BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

// Index-n subgroup counts from h_n = |Hom(G, S_n)|:
// a_n = h_n/(n-1)! - sum_{k<n} h_{n-k}/(n-k)! a_k
std::vector<BigInt> subgroup_counts(const std::function<BigInt(unsigned)>& hom, unsigned up_to) {
  std::vector<Rational> a(up_to + 1, 0);
  std::vector<BigInt> out(up_to + 1, 0);
  for (unsigned n = 1; n <= up_to; ++n) {
    a[n] = Rational(hom(n), factorial(n - 1));
    for (unsigned k = 1; k < n; ++k) a[n] -= Rational(hom(n - k), factorial(n - k)) * a[k];
    if (denominator(a[n]) != 1) throw std::logic_error("subgroup count is not an integer");
    out[n] = numerator(a[n]);
  }
  return out;
}

void partitions(unsigned n, unsigned max_part, std::vector<unsigned>& cur,
                std::vector<std::vector<unsigned>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (unsigned p = std::min(n, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions(n - p, p, cur, out);
    cur.pop_back();
  }
}

// Irreducible character degrees of S_n by the hook length formula.
std::vector<BigInt> character_degrees(unsigned n) {
  std::vector<std::vector<unsigned>> parts;
  std::vector<unsigned> cur;
  partitions(n, n, cur, parts);
  std::vector<BigInt> out;
  for (const auto& lambda : parts) {
    BigInt hooks = 1;
    for (std::size_t i = 0; i < lambda.size(); ++i)
      for (unsigned j = 0; j < lambda[i]; ++j) {
        unsigned below = 0;
        for (std::size_t r = i + 1; r < lambda.size() && lambda[r] > j; ++r) ++below;
        hooks *= lambda[i] - j + below;
      }
    out.push_back(factorial(n) / hooks);
  }
  return out;
}

// |Hom(surface group of genus g, S_n)| = n! sum_chi (n!/chi(1))^(2g-2)
BigInt surface_hom(unsigned g, unsigned n) {
  BigInt s = 0;
  for (const auto& d : character_degrees(n)) s += pow(BigInt(factorial(n) / d), 2 * g - 2);
  return factorial(n) * s;
}

BigInt involutions(unsigned n) {
  std::vector<BigInt> t{1, 1};
  for (unsigned k = 2; k <= n; ++k) t.push_back(t[k - 1] + (k - 1) * t[k - 2]);
  return t[n];
}

std::size_t enumerate_count(const Presentation& p, unsigned d) {
  std::size_t c = 0;
  for_each_subgroup(p, d, [&](const SubgroupRecord&) {
    ++c;
    return true;
  });
  return c;
}

// 8
Outcome cover_algebra() {
  Tally t;
  std::size_t covers = 0;
  auto check_cover = [&](const std::string& name, const DeltaComplex& K, const Presentation& p,
                         const SubgroupRecord& r, bool genus2) {
    auto cover = build_cover(K, p, r);
    const auto& C = cover.complex;
    const std::int64_t d = r.index;
    t.expect(euler_characteristic(C) == d * euler_characteristic(K), name + ": chi not multiplicative");
    if (auto orientation = validate(K).orientation) {
      auto z = lift_chain(cover, fundamental_cycle(K));
      t.expect(boundary(C, z).is_zero(), name + ": lifted cycle has a boundary");
      t.expect(z.l1() == d * static_cast<Coefficient>(K.top_count()), name + ": lifted norm");
    }
    if (genus2)
      t.expect(homology_profile(C, std::vector<unsigned>{}).at(1).betti_q == static_cast<std::size_t>(2 * (d + 1)),
               name + ": betti_1 != 2(d+1)");
    ++covers;
  };
  // every cover up to index 6, except genus 2 past index 4 where the first
  // 200 in enumeration order are taken
  struct Case {
    const char* name;
    unsigned full, sampled;
  };
  for (auto [name, full, sampled] :
       {Case{"torus.json", 6, 6}, Case{"rp2.json", 6, 6}, Case{"genus2.json", 4, 6}}) {
    auto K = load(name);
    auto p = presentation(K);
    const bool g2 = std::string(name) == "genus2.json";
    for (unsigned d = 1; d <= sampled; ++d) {
      const std::size_t limit = d <= full ? SIZE_MAX : 200;
      for (const auto& r : low_index_subgroups(p, d, kDefaultIndexCeiling, limit))
        check_cover(std::string(name) + " d=" + std::to_string(d), K, p, r, g2);
    }
  }
  // counts against oracles
  auto torus = presentation(load("torus.json"));
  auto z2 = subgroup_counts([](unsigned n) { return factorial(n) * BigInt(character_degrees(n).size()); }, 6);
  for (unsigned d = 1; d <= 6; ++d)
    t.expect(BigInt(enumerate_count(torus, d)) == z2[d], "Z^2 count at " + std::to_string(d));
  t.expect(z2[2] == 3, "Z^2 index 2 oracle != 3");
  auto rp2 = presentation(load("rp2.json"));
  auto z_2 = subgroup_counts(involutions, 6);
  for (unsigned d = 1; d <= 6; ++d)
    t.expect(BigInt(enumerate_count(rp2, d)) == z_2[d], "Z/2 count at " + std::to_string(d));
  auto genus2 = presentation(load("genus2.json"));
  auto g2 = subgroup_counts([](unsigned n) { return surface_hom(2, n); }, 4);
  for (unsigned d = 1; d <= 4; ++d)
    t.expect(BigInt(enumerate_count(genus2, d)) == g2[d], "genus-2 count at " + std::to_string(d));
  auto free2 = subgroup_counts([](unsigned n) { return pow(factorial(n), 2); }, 5);
  t.expect(free2[2] == 3 && free2[3] == 13, "Hall values");
  auto wedge = presentation(load("wedge2.json"));
  for (unsigned d = 1; d <= 5; ++d)
    t.expect(BigInt(enumerate_count(wedge, d)) == free2[d], "F_2 count at " + std::to_string(d));
  return t.outcome(std::to_string(covers) + " covers");
}

// 9
Outcome move_soundness() {
  Tally t;
  const std::vector<DeltaComplex> corpus_list = {
      load("torus.json"),        load("genus2.json"),   load("rp2.json"),
      load("tetrahedron_boundary.json"), load("s3_boundary.json"), load("rp3.json"),
      load("lens_3_1.json"),     barycentric_subdivision(load("torus.json"))};
  std::mt19937_64 rng(9);
  const std::size_t target = 10000;
  std::size_t applied = 0;
  while (applied < target) {
    for (const auto& base : corpus_list) {
      const auto chi = euler_characteristic(base);
      const auto h = homology_profile(base);
      DeltaComplex K = base;
      for (int step = 0; step < 50 && applied < target; ++step) {
        auto moves = applicable_moves(K).moves;
        if (moves.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
        const Move m = moves[pick(rng)];
        DeltaComplex next = apply_move(K, m);
        if (next.top_count() > 3 * base.top_count() + 8) continue;  // keep the walk small
        K = std::move(next);
        ++applied;
        t.expect(euler_characteristic(K) == chi, "chi changed");
        t.expect(same_homology(homology_profile(K), h), "homology changed");
      }
    }
  }
  // identical seeds, identical logs
  for (const auto& K : {load("s3_boundary.json"), barycentric_subdivision(load("torus.json"))}) {
    SearchConfig cfg;
    cfg.seed = 77;
    cfg.max_steps = 3000;
    auto a = simplify(K, cfg), b = simplify(K, cfg);
    t.expect(a.log == b.log && a.trace == b.trace, "logs differ for one seed");
  }
  return t.outcome(std::to_string(applied) + " moves");
}

// 10
Outcome ledger_tripwire() {
  Tally t;
  std::size_t ledgers = 0;
  auto audit = [&](const std::string& name, const Ledgers& l) {
    for (const BoundLedger* b : {&l.sv, &l.isv, &l.stisv}) {
      const BoundEntry* lo = b->best(Side::lower);
      const BoundEntry* hi = b->best(Side::upper);
      t.expect(!(lo && hi && hi->value < lo->value), name + ": lower above upper");
      ++ledgers;
    }
  };
  struct Case {
    std::string name;
    DeltaComplex K;
    std::optional<Rational> sv;
  };
  std::vector<Case> cases = {{"torus", load("torus.json"), Rational(0)},
                             {"genus2", load("genus2.json"), Rational(4)},
                             {"genus3", corpus::surface_fan(3), Rational(8)},
                             {"sphere", load("tetrahedron_boundary.json"), Rational(0)},
                             {"s3", load("s3_boundary.json"), Rational(0)},
                             {"rp3", load("rp3.json"), Rational(0)},
                             {"lens", load("lens_3_1.json"), Rational(0)},
                             {"t3", corpus::torus(3), Rational(0)}};
  for (auto& c : cases) {
    try {
      auto h = homology_profile(c.K);
      auto l = manifold_bounds(c.K, h);
      if (c.sv) register_sv(l, *c.sv, SvSource::user_input);
      const int depth = c.K.dimension() == 2 ? 2 : 1;
      post_stable(l, stable_sequence(c.K, subgroup_chain(c.K, depth)));
      audit(c.name, l);
      // every cover of index <= 3
      auto p = presentation(c.K);
      for (unsigned d = 2; d <= 3; ++d)
        for (const auto& r : low_index_subgroups(p, d, kDefaultIndexCeiling, 20)) {
          auto C = build_cover(c.K, p, r).complex;
          auto lc = manifold_bounds(C, homology_profile(C));
          if (c.sv) register_sv(lc, *c.sv * d, SvSource::user_input);
          audit(c.name + " cover", lc);
        }
    } catch (const LedgerInconsistency& e) {
      t.expect(false, c.name + ": " + e.what());
    }
  }
  return t.outcome(std::to_string(ledgers) + " ledgers consistent");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"torus certification", torus_certification},
      {"stable torus ratios", stable_torus},
      {"genus-2 interval", genus2_interval},
      {"homology growth report", growth},
      {"hyperbolic constants", hyperbolic_constants},
      {"filling norm law", filling},
      {"cap and duality ranks", cap_duality},
      {"cover algebra", cover_algebra},
      {"move soundness", move_soundness},
      {"ledger tripwire", ledger_tripwire}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", seconds_since(start));
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first
              << " - " << o.detail << " [" << secs << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
