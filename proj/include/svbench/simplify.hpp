#pragma once

// Local moves on closed 2- and 3-manifold Delta-complexes, and a seeded
// annealing search for small triangulations.
//
// Bistellar moves share one engine.  A move is named by an a-simplex A of an
// n-complex.  Its star must be an embedded copy of the star of A in the
// boundary of an (n+1)-simplex with vertex labels A u B, |B| = n+1-a:
// the n+1-a tops {A u B - b}.  It is replaced by the a+1 tops
// {B u A - a'} glued along the same boundary.  Faces containing A are
// interior and must be distinct and untouched from outside; boundary faces
// may be identified with each other.  In dimension 2, a = 0, 1, 2 are the
// 3-1, 2-2 and 1-3 moves; in dimension 3 the four Pachner moves.

#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "svbench/dcomplex.hpp"
#include "svbench/error.hpp"
#include "svbench/homology.hpp"
#include "svbench/manifold.hpp"

namespace svbench {

enum class MoveKind { Bistellar, Contraction };

struct Move {
  MoveKind kind = MoveKind::Bistellar;
  int a = 0;             // dimension of A; 1 for a contraction
  SimplexId target = 0;  // id of A, or of the contracted edge
  unsigned choice = 0;   // which vertex order for the new simplices
  friend auto operator<=>(const Move&, const Move&) = default;
};

inline std::string move_name(int n, const Move& m) {
  if (m.kind == MoveKind::Contraction) return "contract";
  return std::to_string(n + 1 - m.a) + "-" + std::to_string(m.a + 1);
}

inline nlohmann::json to_json(int n, const Move& m) {
  return {{"move", move_name(n, m)}, {"a", m.a}, {"target", m.target}, {"choice", m.choice}};
}

namespace detail {

struct StarPlan {
  int n = 0, a = 0;
  std::map<unsigned, SimplexId> face_id;  // label mask -> id, faces of old tops
  std::vector<std::vector<int>> orders;   // admissible label orders
};

inline unsigned low_bits(int k) { return (1u << k) - 1; }

// First top simplex containing the a-simplex `target`, with its positions.
inline std::optional<std::pair<SimplexId, unsigned>> first_occurrence(const DeltaComplex& K,
                                                                      int a, SimplexId target) {
  const int n = K.dimension();
  for (SimplexId t = 0; t < K.top_count(); ++t)
    for (unsigned P = 1; P <= low_bits(n + 1); ++P) {
      if (std::popcount(P) != a + 1) continue;
      std::vector<int> pos;
      for (int p = 0; p <= n; ++p)
        if (P >> p & 1) pos.push_back(p);
      if (K.subface(n, t, pos) == target) return std::make_pair(t, P);
    }
  return std::nullopt;
}

inline std::optional<StarPlan> plan_bistellar(const DeltaComplex& K, int a, SimplexId target) {
  const int n = K.dimension();
  if (n < 1 || a < 0 || a > n || target >= K.count(a)) return std::nullopt;
  auto occ = first_occurrence(K, a, target);
  if (!occ) return std::nullopt;
  const auto [t0, P] = *occ;
  const int missing = n + 1;

  // labels per position of each star top
  std::vector<SimplexId> tops{t0};
  std::vector<std::vector<int>> labels(1, std::vector<int>(n + 1));
  {
    int next_a = 0, next_b = a + 1;
    for (int p = 0; p <= n; ++p) labels[0][p] = (P >> p & 1) ? next_a++ : next_b++;
  }
  if (a < n) {
    auto slots = facet_slots(K);
    for (int q = 0; q <= n; ++q) {
      if (P >> q & 1) continue;
      const SimplexId f = K.face(n, t0, q);
      if (slots[f].size() != 2) return std::nullopt;
      auto other = slots[f][0] == std::make_pair(t0, q) ? slots[f][1] : slots[f][0];
      if (other.first == t0) return std::nullopt;
      std::vector<int> l(n + 1);
      for (int k = 0; k < n; ++k) l[k < other.second ? k : k + 1] = labels[0][k < q ? k : k + 1];
      l[other.second] = missing;
      tops.push_back(other.first);
      labels.push_back(std::move(l));
    }
    std::set<SimplexId> distinct(tops.begin(), tops.end());
    if (distinct.size() != tops.size()) return std::nullopt;
  }

  StarPlan plan;
  plan.n = n;
  plan.a = a;
  for (std::size_t i = 0; i < tops.size(); ++i)
    for (unsigned Q = 1; Q <= low_bits(n + 1); ++Q) {
      std::vector<int> pos;
      unsigned mask = 0;
      for (int p = 0; p <= n; ++p)
        if (Q >> p & 1) {
          pos.push_back(p);
          mask |= 1u << labels[i][p];
        }
      const SimplexId id = K.subface(n, tops[i], pos);
      auto [it, fresh] = plan.face_id.try_emplace(mask, id);
      if (!fresh && it->second != id) return std::nullopt;
    }

  // interior faces contain A: distinct ids, never shared with the boundary
  const unsigned A = low_bits(a + 1);
  std::vector<std::map<SimplexId, unsigned>> owner(n + 1);
  std::vector<std::set<SimplexId>> interior(n + 1), star(n + 1);
  for (auto [mask, id] : plan.face_id) {
    const int k = std::popcount(mask) - 1;
    star[k].insert(id);
    auto [it, fresh] = owner[k].try_emplace(id, mask);
    const bool inner = (mask & A) == A;
    if (inner) interior[k].insert(id);
    if (!fresh && (inner || (it->second & A) == A)) return std::nullopt;
  }
  // nothing outside the star may use an interior face
  for (int k = 0; k < n; ++k) {
    if (interior[k].empty()) continue;
    for (SimplexId x = 0; x < K.count(k + 1); ++x) {
      if (star[k + 1].count(x)) continue;
      for (auto f : K.faces(k + 1, x))
        if (interior[k].count(f)) return std::nullopt;
    }
  }

  // vertex orders consistent with every boundary facet of the old tops
  std::vector<std::pair<int, int>> before;
  for (const auto& l : labels)
    for (int i = 0; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        const unsigned pair = (1u << l[i]) | (1u << l[j]);
        if (std::popcount(A & ~pair) >= 1) before.emplace_back(l[i], l[j]);
      }
  std::vector<int> perm(n + 2);
  std::iota(perm.begin(), perm.end(), 0);
  std::set<std::vector<std::vector<int>>> seen;
  const unsigned B = low_bits(n + 2) & ~A;
  do {
    std::vector<int> rank(n + 2);
    for (int i = 0; i < n + 2; ++i) rank[perm[i]] = i;
    bool ok = true;
    for (auto [x, y] : before)
      if (rank[x] > rank[y]) {
        ok = false;
        break;
      }
    if (!ok) continue;
    std::vector<std::vector<int>> key;
    for (int drop = 0; drop <= a; ++drop) {
      std::vector<int> seq;
      for (int lab : perm)
        if (((B | (A & ~(1u << drop))) >> lab) & 1) seq.push_back(lab);
      key.push_back(std::move(seq));
    }
    if (seen.insert(key).second) plan.orders.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (plan.orders.empty()) return std::nullopt;
  return plan;
}

inline DeltaComplex realize(const DeltaComplex& K, const StarPlan& plan, unsigned choice) {
  const int n = plan.n;
  const unsigned A = low_bits(plan.a + 1);
  const unsigned B = low_bits(n + 2) & ~A;
  const auto& perm = plan.orders.at(choice);

  std::vector<std::vector<bool>> removed(n + 1);
  for (int k = 0; k <= n; ++k) removed[k].assign(K.count(k), false);
  for (auto [mask, id] : plan.face_id)
    if ((mask & A) == A) removed[std::popcount(mask) - 1][id] = true;
  // kept ids compact, new simplices follow
  std::vector<std::vector<SimplexId>> remap(n + 1);
  std::vector<SimplexId> kept(n + 1, 0);
  for (int k = 0; k <= n; ++k) {
    remap[k].assign(K.count(k), UINT32_MAX);
    for (SimplexId x = 0; x < K.count(k); ++x)
      if (!removed[k][x]) remap[k][x] = kept[k]++;
  }
  std::vector<std::vector<unsigned>> fresh(n + 1);
  std::map<unsigned, SimplexId> fresh_id;
  for (unsigned M = 1; M <= low_bits(n + 2); ++M)
    if ((M & B) == B && (M & A) != A) {
      const int k = std::popcount(M) - 1;
      fresh_id[M] = kept[k] + fresh[k].size();
      fresh[k].push_back(M);
    }
  auto id_of = [&](unsigned mask) -> SimplexId {
    if (auto it = fresh_id.find(mask); it != fresh_id.end()) return it->second;
    return remap[std::popcount(mask) - 1][plan.face_id.at(mask)];
  };

  std::vector<std::vector<std::vector<SimplexId>>> faces(n);
  for (int k = 1; k <= n; ++k) {
    auto& out = faces[k - 1];
    for (SimplexId x = 0; x < K.count(k); ++x) {
      if (removed[k][x]) continue;
      std::vector<SimplexId> f;
      for (auto g : K.faces(k, x)) f.push_back(remap[k - 1][g]);
      out.push_back(std::move(f));
    }
    for (unsigned M : fresh[k]) {
      std::vector<int> seq;
      for (int lab : perm)
        if (M >> lab & 1) seq.push_back(lab);
      std::vector<SimplexId> f;
      for (int lab : seq) f.push_back(id_of(M & ~(1u << lab)));
      out.push_back(std::move(f));
    }
  }
  return DeltaComplex(n, kept[0] + fresh[0].size(), faces);
}

// Contract edge e: every simplex through e collapses, its two faces on
// either side of e are identified.  Requires distinct endpoints, e at
// consecutive positions wherever it occurs, and no identification of
// faces that are already identified.
inline std::optional<DeltaComplex> contract(const DeltaComplex& K, SimplexId e) {
  const int n = K.dimension();
  if (n < 1 || e >= K.count(1) || K.tail(e) == K.head(e)) return std::nullopt;
  std::vector<std::vector<std::pair<SimplexId, int>>> through(n + 1);
  through[1].emplace_back(e, 0);
  for (int k = 2; k <= n; ++k)
    for (SimplexId x = 0; x < K.count(k); ++x) {
      int hits = 0, at = -1;
      bool adjacent = true;
      for (int p = 0; p <= k; ++p)
        for (int q = p + 1; q <= k; ++q) {
          const int pos[2] = {p, q};
          if (K.subface(k, x, pos) == e) {
            ++hits;
            at = p;
            adjacent = adjacent && q == p + 1;
          }
        }
      if (hits == 0) continue;
      if (hits > 1 || !adjacent) return std::nullopt;
      through[k].emplace_back(x, at);
    }
  std::vector<UnionFind> classes;
  for (int k = 0; k < n; ++k) classes.emplace_back(K.count(k));
  std::vector<std::vector<bool>> removed(n + 1);
  for (int k = 0; k <= n; ++k) removed[k].assign(K.count(k), false);
  for (int k = 1; k <= n; ++k)
    for (auto [x, p] : through[k]) {
      removed[k][x] = true;
      if (!classes[k - 1].unite(K.face(k, x, p), K.face(k, x, p + 1))) return std::nullopt;
    }
  std::vector<std::vector<SimplexId>> remap(n + 1);
  std::vector<SimplexId> kept(n + 1, 0);
  for (int k = 0; k <= n; ++k) {
    remap[k].assign(K.count(k), UINT32_MAX);
    for (SimplexId x = 0; x < K.count(k); ++x) {
      if (removed[k][x]) continue;
      if (k < n && classes[k].find(x) != x) continue;
      remap[k][x] = kept[k]++;
    }
  }
  std::vector<std::vector<std::vector<SimplexId>>> faces(n);
  for (int k = 1; k <= n; ++k)
    for (SimplexId x = 0; x < K.count(k); ++x) {
      if (remap[k][x] == UINT32_MAX) continue;
      std::vector<SimplexId> f;
      for (auto g : K.faces(k, x)) f.push_back(remap[k - 1][classes[k - 1].find(g)]);
      faces[k - 1].push_back(std::move(f));
    }
  try {
    DeltaComplex out(n, kept[0], faces);
    // link condition on the result
    if (!is_closed_manifold(out)) return std::nullopt;
    return out;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace detail

// Result of a move, or nothing when it is not admissible.
inline std::optional<DeltaComplex> try_move(const DeltaComplex& K, const Move& m) {
  if (m.kind == MoveKind::Contraction) {
    if (m.choice != 0 || m.a != 1) return std::nullopt;
    return detail::contract(K, m.target);
  }
  auto plan = detail::plan_bistellar(K, m.a, m.target);
  if (!plan || m.choice >= plan->orders.size()) return std::nullopt;
  return detail::realize(K, *plan, m.choice);
}

inline DeltaComplex apply_move(const DeltaComplex& K, const Move& m) {
  auto out = try_move(K, m);
  if (!out)
    throw PreconditionError("apply_move: " + move_name(K.dimension(), m) + " on simplex " +
                            std::to_string(m.target) + " is not admissible");
  return std::move(*out);
}

struct MoveSet {
  std::vector<Move> moves;
  std::string warning;
};

// All admissible moves in a fixed order: bistellar by a then target then
// choice, contractions last.  Only dimensions 2 and 3 are supported.
inline MoveSet applicable_moves(const DeltaComplex& K) {
  MoveSet out;
  const int n = K.dimension();
  if (n != 2 && n != 3) {
    out.warning = "moves are implemented in dimensions 2 and 3 only";
    return out;
  }
  for (int a = 0; a <= n; ++a)
    for (SimplexId x = 0; x < K.count(a); ++x)
      if (auto plan = detail::plan_bistellar(K, a, x))
        for (unsigned c = 0; c < plan->orders.size(); ++c)
          out.moves.push_back({MoveKind::Bistellar, a, x, c});
  if (is_closed_manifold(K))
    for (SimplexId e = 0; e < K.count(1); ++e)
      if (detail::contract(K, e)) out.moves.push_back({MoveKind::Contraction, 1, e, 0});
  return out;
}

enum class CheckMode { Full, Sampled };

struct SearchConfig {
  std::uint64_t seed = 0;
  std::size_t max_steps = 20000;
  double t0 = 2.0;
  double cooling = 0.995;
  double neutral_accept_floor = 0.1;
  CheckMode check = CheckMode::Sampled;
  std::size_t sample_every = 64;  // accepted moves between homology checks
};

inline nlohmann::json to_json(const SearchConfig& c) {
  return {{"seed", c.seed},
          {"max_steps", c.max_steps},
          {"t0", c.t0},
          {"cooling", c.cooling},
          {"neutral_accept_floor", c.neutral_accept_floor},
          {"check", c.check == CheckMode::Full ? "full" : "sampled"},
          {"sample_every", c.sample_every}};
}

struct MoveRecord {
  std::size_t step = 0;
  Move move;
  std::size_t size_after = 0;
  friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

struct SimplifyResult {
  DeltaComplex best;
  std::size_t initial_size = 0;
  std::size_t best_size = 0;
  std::vector<std::size_t> trace;  // top count after each accepted move
  std::vector<MoveRecord> log;
  SearchConfig config;
  std::size_t homology_checks = 0;
  std::string note;
};

namespace detail {

// Invariant tripwire after an accepted move.
inline void check_move(const DeltaComplex& K, std::int64_t chi, const HomologyProfile* profile) {
  auto report = validate(K);
  if (!report.is_pseudomanifold || !report.is_connected)
    throw std::logic_error("simplify: move broke the pseudomanifold structure");
  if (euler_characteristic(K) != chi) throw std::logic_error("simplify: move changed chi");
  if (profile && !same_homology(*profile, homology_profile(K)))
    throw std::logic_error("simplify: move changed homology");
}

}  // namespace detail

// Annealing over random proposals, then greedy descent from the best
// complex seen.  Size is the number of top simplices.
inline SimplifyResult simplify(const DeltaComplex& K, const SearchConfig& config = {}) {
  SimplifyResult res;
  res.config = config;
  res.best = K;
  res.initial_size = res.best_size = K.top_count();
  const int n = K.dimension();
  if (n != 2 && n != 3) {
    res.note = "moves are implemented in dimensions 2 and 3 only";
    return res;
  }
  if (!is_closed_manifold(K)) {
    res.note = "input is not a closed manifold; left unchanged";
    return res;
  }
  const auto profile = homology_profile(K);
  const auto chi = euler_characteristic(K);
  std::size_t accepted = 0;
  auto accept = [&](DeltaComplex&& next, DeltaComplex& cur, const Move& m, std::size_t step) {
    ++accepted;
    const bool full = config.check == CheckMode::Full ||
                      (config.sample_every > 0 && accepted % config.sample_every == 0);
    detail::check_move(next, chi, full ? &profile : nullptr);
    if (full) ++res.homology_checks;
    cur = std::move(next);
    res.trace.push_back(cur.top_count());
    res.log.push_back({step, m, cur.top_count()});
    if (cur.top_count() < res.best_size) {
      res.best_size = cur.top_count();
      res.best = cur;
    }
  };

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DeltaComplex cur = K;
  double temperature = config.t0;
  for (std::size_t step = 0; step < config.max_steps; ++step, temperature *= config.cooling) {
    const int kind = std::uniform_int_distribution<int>(0, n + 1)(rng);
    Move m;
    std::optional<DeltaComplex> next;
    if (kind <= n) {
      m.a = kind;
      if (cur.count(kind) == 0) continue;
      m.target = std::uniform_int_distribution<SimplexId>(0, cur.count(kind) - 1)(rng);
      auto plan = detail::plan_bistellar(cur, m.a, m.target);
      if (!plan) continue;
      m.choice = std::uniform_int_distribution<unsigned>(0, plan->orders.size() - 1)(rng);
      next = detail::realize(cur, *plan, m.choice);
    } else {
      m = {MoveKind::Contraction, 1, 0, 0};
      m.target = std::uniform_int_distribution<SimplexId>(0, cur.count(1) - 1)(rng);
      next = detail::contract(cur, m.target);
      if (!next) continue;
    }
    const double delta =
        static_cast<double>(next->top_count()) - static_cast<double>(cur.top_count());
    bool take = delta < 0;
    if (!take) {
      const double p = delta == 0
                           ? std::max(config.neutral_accept_floor, std::exp(-1.0 / temperature))
                           : std::exp(-delta / temperature);
      take = unit(rng) < p;
    }
    if (take) accept(std::move(*next), cur, m, step);
  }

  // greedy descent from the best complex
  cur = res.best;
  for (std::size_t step = config.max_steps;; ++step) {
    auto moves = applicable_moves(cur).moves;
    bool moved = false;
    for (const auto& m : moves) {
      if (m.kind == MoveKind::Bistellar && 2 * m.a >= n) continue;
      auto next = try_move(cur, m);
      if (next && next->top_count() < cur.top_count()) {
        accept(std::move(*next), cur, m, step);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  detail::check_move(res.best, chi, &profile);
  ++res.homology_checks;
  return res;
}

inline nlohmann::json to_json(const SimplifyResult& r) {
  auto log = nlohmann::json::array();
  const int n = r.best.dimension();
  for (const auto& rec : r.log) {
    auto j = to_json(n, rec.move);
    j["step"] = rec.step;
    j["size_after"] = rec.size_after;
    log.push_back(std::move(j));
  }
  nlohmann::json out = {{"initial_size", r.initial_size},
                        {"best_size", r.best_size},
                        {"trace", r.trace},
                        {"moves", log},
                        {"config", to_json(r.config)},
                        {"homology_checks", r.homology_checks}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

}  // namespace svbench
