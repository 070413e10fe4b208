#pragma once

// Finite covers from permutation representations, and chains of nested
// covers built greedily level by level.

#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "svbench/dcomplex.hpp"
#include "svbench/error.hpp"
#include "svbench/pi1.hpp"

namespace svbench {

// Cover simplex (sigma, s) has id sigma*d + s in every dimension; s is the
// sheet of its first vertex.
struct CoverResult {
  DeltaComplex complex;
  unsigned degree = 1;

  std::pair<SimplexId, std::uint32_t> sheet_of(SimplexId id) const {
    return {id / degree, id % degree};
  }
  SimplexId lift(SimplexId base, std::uint32_t sheet) const {
    return base * degree + sheet;
  }
};

inline CoverResult build_cover(const DeltaComplex& K, const Presentation& p,
                               const SubgroupRecord& r) {
  if (auto problem = check_record(p, r); !problem.empty())
    throw PreconditionError("build_cover: inconsistent record: " + problem);
  if (p.edge_generator.size() != K.count(1))
    throw PreconditionError("build_cover: presentation does not match the complex");
  const unsigned d = r.index;
  const int n = K.dimension();
  // sheet transport across each edge, tail to head
  auto cross = [&](SimplexId e, std::uint32_t s) -> std::uint32_t {
    int g = p.edge_generator[e];
    return g < 0 ? s : r.images[g][s];
  };
  std::vector<std::vector<std::vector<SimplexId>>> faces(n);
  for (int k = 1; k <= n; ++k) {
    auto& out = faces[k - 1];
    out.reserve(K.count(k) * d);
    for (SimplexId sigma = 0; sigma < K.count(k); ++sigma) {
      auto f = K.faces(k, sigma);
      const SimplexId front = K.front_face(k, sigma, 1);
      for (std::uint32_t s = 0; s < d; ++s) {
        std::vector<SimplexId> lifted(k + 1);
        lifted[0] = f[0] * d + cross(front, s);
        for (int j = 1; j <= k; ++j) lifted[j] = f[j] * d + s;
        out.push_back(std::move(lifted));
      }
    }
  }
  return {DeltaComplex(n, K.vertex_count() * d, faces), d};
}

inline CoverResult build_cover(const DeltaComplex& K, const SubgroupRecord& r) {
  return build_cover(K, presentation(K), r);
}

// Transfer: the sum of all lifts of a chain.
inline ChainVector lift_chain(const CoverResult& cover, const ChainVector& c) {
  ChainVector out(c.degree());
  for (auto [sigma, a] : c.terms())
    for (std::uint32_t s = 0; s < cover.degree; ++s) out.add(cover.lift(sigma, s), a);
  return out;
}

struct ChainLevel {
  SubgroupRecord record;               // action on the sheets over the base
  std::vector<std::uint32_t> factor;  // sheet -> sheet of the previous level
};

struct SubgroupChain {
  std::vector<ChainLevel> levels;
  bool truncated = false;
  std::string note;

  std::vector<unsigned> indices() const {
    std::vector<unsigned> out;
    for (const auto& l : levels) out.push_back(l.record.index);
    return out;
  }
};

struct ChainStrategy {
  // Empty: smallest index first, first record in canonical order.
  // Otherwise level i+1 uses pins[i] = (index, position in canonical order).
  std::vector<std::pair<unsigned, std::size_t>> pins;
  unsigned index_ceiling = kDefaultIndexCeiling;
};

inline constexpr int kDefaultDepthCeiling = 6;

namespace detail {

// Relabel the sheets of an iterated cover so that spanning-tree edges of
// the base act trivially.  `cover` covers K with degree D; vertex v*D + x
// over base vertex 0 keeps label x.
inline SubgroupRecord record_over_base(const DeltaComplex& K, const Presentation& p,
                                       const CoverResult& cover) {
  const unsigned D = cover.degree;
  const DeltaComplex& C = cover.complex;
  constexpr std::uint32_t none = UINT32_MAX;
  std::vector<std::uint32_t> label(C.vertex_count(), none);
  for (std::uint32_t x = 0; x < D; ++x) label[x] = x;
  // walk the base tree outward from vertex 0
  std::vector<std::vector<SimplexId>> tree_edges(K.vertex_count());
  for (SimplexId e = 0; e < K.count(1); ++e)
    if (p.edge_generator[e] < 0) {
      tree_edges[K.tail(e)].push_back(e);
      tree_edges[K.head(e)].push_back(e);
    }
  std::vector<bool> done(K.vertex_count(), false);
  std::deque<SimplexId> queue{0};
  done[0] = true;
  while (!queue.empty()) {
    SimplexId v = queue.front();
    queue.pop_front();
    for (SimplexId e : tree_edges[v]) {
      SimplexId w = K.tail(e) == v ? K.head(e) : K.tail(e);
      if (done[w]) continue;
      done[w] = true;
      for (std::uint32_t s = 0; s < D; ++s) {
        SimplexId lift = cover.lift(e, s);
        SimplexId a = C.tail(lift), b = C.head(lift);
        if (K.tail(e) == v) {
          label[b] = label[a];
        } else {
          label[a] = label[b];
        }
      }
      queue.push_back(w);
    }
  }
  SubgroupRecord r;
  r.index = D;
  r.images.assign(p.generator_count, std::vector<std::uint32_t>(D, none));
  for (SimplexId e = 0; e < K.count(1); ++e) {
    int g = p.edge_generator[e];
    if (g < 0) continue;
    for (std::uint32_t s = 0; s < D; ++s) {
      SimplexId lift = cover.lift(e, s);
      r.images[g][label[C.tail(lift)]] = label[C.head(lift)];
    }
  }
  return r;
}

}  // namespace detail

// Checks that factor maps a level's action onto the previous one.
inline bool is_equivariant(const SubgroupRecord& fine, const SubgroupRecord& coarse,
                           const std::vector<std::uint32_t>& factor) {
  if (factor.size() != fine.index || fine.images.size() != coarse.images.size()) return false;
  for (std::size_t g = 0; g < fine.images.size(); ++g)
    for (std::uint32_t s = 0; s < fine.index; ++s)
      if (factor[fine.images[g][s]] != coarse.images[g][factor[s]]) return false;
  return true;
}

// Nested chain of `depth` refinements of the trivial level.  Each level is
// chosen among the subgroups of the previous cover's own fundamental group.
inline SubgroupChain subgroup_chain(const DeltaComplex& K, int depth,
                                    const ChainStrategy& strategy = {}) {
  if (depth < 0 || depth > kDefaultDepthCeiling)
    throw PreconditionError("subgroup_chain: depth " + std::to_string(depth) +
                            " outside [0, " + std::to_string(kDefaultDepthCeiling) + "]");
  const Presentation p = presentation(K);
  SubgroupChain chain;
  chain.levels.push_back({trivial_record(p.generator_count), {}});
  CoverResult current{K, 1};
  for (int level = 1; level <= depth; ++level) {
    const Presentation q = presentation(current.complex);
    std::optional<SubgroupRecord> pick;
    if (!strategy.pins.empty()) {
      if (strategy.pins.size() < static_cast<std::size_t>(level)) break;
      auto [m, position] = strategy.pins[level - 1];
      auto found = low_index_subgroups(q, m, strategy.index_ceiling, position + 1);
      if (found.size() > position) pick = found[position];
    } else {
      for (unsigned m = 2; m <= strategy.index_ceiling && !pick; ++m) {
        auto found = low_index_subgroups(q, m, strategy.index_ceiling, 1);
        if (!found.empty()) pick = found.front();
      }
    }
    if (!pick) {
      chain.truncated = true;
      chain.note = "no proper subgroup within the index ceiling at level " + std::to_string(level);
      break;
    }
    const unsigned m = pick->index;
    auto next = build_cover(current.complex, q, *pick);
    // next covers K with degree D*m; vertex ids compose as (v*D + x)*m + y
    CoverResult over_base{next.complex, current.degree * m};
    auto record = detail::record_over_base(K, p, over_base);
    std::vector<std::uint32_t> factor(record.index);
    for (std::uint32_t s = 0; s < record.index; ++s) factor[s] = s / m;
    if (!is_equivariant(record, chain.levels.back().record, factor))
      throw std::logic_error("subgroup_chain: factor map is not equivariant");
    current = build_cover(K, p, record);
    chain.levels.push_back({std::move(record), std::move(factor)});
  }
  return chain;
}

inline nlohmann::json to_json(const SubgroupChain& c) {
  auto levels = nlohmann::json::array();
  for (const auto& l : c.levels)
    levels.push_back({{"record", to_json(l.record)}, {"factor", l.factor}});
  nlohmann::json out = {{"levels", levels}, {"truncated", c.truncated}};
  if (!c.note.empty()) out["note"] = c.note;
  return out;
}

}  // namespace svbench
