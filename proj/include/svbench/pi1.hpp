#pragma once

// Edge-path presentations of the fundamental group and enumeration of
// finite-index subgroups as transitive permutation representations.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <json.hpp>

#include "svbench/dcomplex.hpp"
#include "svbench/error.hpp"
#include "svbench/homology.hpp"

namespace svbench {

// A letter +i is generator i-1, -i its inverse.
using Word = std::vector<int>;

struct Presentation {
  std::size_t generator_count = 0;
  std::vector<Word> relators;
  // Generator of each edge, -1 for spanning-tree edges.
  std::vector<int> edge_generator;
};

inline Presentation presentation(const DeltaComplex& K) {
  if (!is_connected(K)) throw PreconditionError("presentation: complex is disconnected");
  Presentation p;
  const std::size_t V = K.vertex_count(), E = K.count(1);
  p.edge_generator.assign(E, -1);
  if (E == 0) return p;
  std::vector<std::vector<SimplexId>> incident(V);
  for (SimplexId e = 0; e < E; ++e) {
    incident[K.tail(e)].push_back(e);
    if (K.head(e) != K.tail(e)) incident[K.head(e)].push_back(e);
  }
  std::vector<bool> seen(V, false), tree(E, false);
  std::deque<SimplexId> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    SimplexId v = queue.front();
    queue.pop_front();
    for (SimplexId e : incident[v]) {
      SimplexId w = K.tail(e) == v ? K.head(e) : K.tail(e);
      if (seen[w]) continue;
      seen[w] = true;
      tree[e] = true;
      queue.push_back(w);
    }
  }
  for (SimplexId e = 0; e < E; ++e)
    if (!tree[e]) p.edge_generator[e] = static_cast<int>(p.generator_count++);
  if (K.dimension() >= 2) {
    for (SimplexId t = 0; t < K.count(2); ++t) {
      auto f = K.faces(2, t);
      // boundary loop v0 -> v1 -> v2 -> v0
      Word w;
      auto push = [&](SimplexId e, int sign) {
        int g = p.edge_generator[e];
        if (g >= 0) w.push_back(sign * (g + 1));
      };
      push(f[2], 1);
      push(f[0], 1);
      push(f[1], -1);
      if (!w.empty()) p.relators.push_back(std::move(w));
    }
  }
  return p;
}

// Free presentation on r generators.
inline Presentation free_presentation(std::size_t r) {
  Presentation p;
  p.generator_count = r;
  return p;
}

struct AbelianGroup {
  std::size_t free_rank = 0;
  std::vector<BigInt> torsion;  // elementary divisors > 1
  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;
};

inline AbelianGroup abelianization(const Presentation& p) {
  IntegerMatrix m(p.relators.size(), p.generator_count);
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    for (int letter : p.relators[i]) m(i, std::abs(letter) - 1) += letter > 0 ? 1 : -1;
  auto snf = smith_normal_form(m);
  return {p.generator_count - snf.rank, snf.elementary_divisors()};
}

inline nlohmann::json to_json(const Presentation& p) {
  return {{"generators", p.generator_count},
          {"relators", p.relators},
          {"edge_generator", p.edge_generator}};
}

inline nlohmann::json to_json(const AbelianGroup& a) {
  auto t = nlohmann::json::array();
  for (const auto& d : a.torsion) t.push_back(d.str());
  return {{"free_rank", a.free_rank}, {"torsion", t}};
}

// Transitive action of the generators on sheets {0..d-1}; image[g][s] is
// the sheet reached from s by crossing generator g forwards.
struct SubgroupRecord {
  unsigned index = 1;
  std::vector<std::vector<std::uint32_t>> images;
  friend bool operator==(const SubgroupRecord&, const SubgroupRecord&) = default;
  friend auto operator<=>(const SubgroupRecord&, const SubgroupRecord&) = default;
};

inline SubgroupRecord trivial_record(std::size_t generators) {
  SubgroupRecord r;
  r.index = 1;
  r.images.assign(generators, std::vector<std::uint32_t>{0});
  return r;
}

// Sheet reached from s along a word.
inline std::uint32_t act(const SubgroupRecord& r, const Word& w, std::uint32_t s) {
  for (int letter : w) {
    const auto& img = r.images[std::abs(letter) - 1];
    if (letter > 0) {
      s = img[s];
    } else {
      s = static_cast<std::uint32_t>(std::find(img.begin(), img.end(), s) - img.begin());
    }
  }
  return s;
}

// Empty string when the record is a transitive representation satisfying
// every relator, else the first problem found.
inline std::string check_record(const Presentation& p, const SubgroupRecord& r) {
  if (r.index == 0) return "index must be positive";
  if (r.images.size() != p.generator_count) return "wrong number of generator images";
  for (const auto& img : r.images) {
    if (img.size() != r.index) return "image has wrong length";
    std::vector<bool> hit(r.index, false);
    for (auto s : img) {
      if (s >= r.index || hit[s]) return "image is not a permutation";
      hit[s] = true;
    }
  }
  for (std::size_t i = 0; i < p.relators.size(); ++i)
    for (std::uint32_t s = 0; s < r.index; ++s)
      if (act(r, p.relators[i], s) != s)
        return "relator " + std::to_string(i) + " fails at sheet " + std::to_string(s);
  // orbit of sheet 0; forward images suffice since each generator has
  // finite order on a finite set
  std::vector<bool> reached(r.index, false);
  std::vector<std::uint32_t> stack{0};
  reached[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (const auto& img : r.images)
      if (!reached[img[s]]) {
        reached[img[s]] = true;
        ++count;
        stack.push_back(img[s]);
      }
  }
  if (count != r.index) return "action is not transitive";
  return {};
}

// Relabel sheets in order of first appearance when scanning from sheet 0,
// columns g_1, g_1^-1, g_2, ...  Two records describe the same subgroup iff
// their canonical forms agree.
inline SubgroupRecord canonical_form(const SubgroupRecord& r) {
  const std::size_t g = r.images.size();
  std::vector<std::vector<std::uint32_t>> inverse(g, std::vector<std::uint32_t>(r.index));
  for (std::size_t i = 0; i < g; ++i)
    for (std::uint32_t s = 0; s < r.index; ++s) inverse[i][r.images[i][s]] = s;
  constexpr std::uint32_t none = UINT32_MAX;
  std::vector<std::uint32_t> label(r.index, none), order;
  label[0] = 0;
  order.push_back(0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    auto s = order[head];
    for (std::size_t i = 0; i < g; ++i)
      for (auto t : {r.images[i][s], inverse[i][s]})
        if (label[t] == none) {
          label[t] = static_cast<std::uint32_t>(order.size());
          order.push_back(t);
        }
  }
  if (order.size() != r.index) throw PreconditionError("canonical_form: action is not transitive");
  SubgroupRecord out;
  out.index = r.index;
  out.images.assign(g, std::vector<std::uint32_t>(r.index));
  for (std::size_t i = 0; i < g; ++i)
    for (std::uint32_t s = 0; s < r.index; ++s) out.images[i][label[s]] = label[r.images[i][s]];
  return out;
}

inline constexpr unsigned kDefaultIndexCeiling = 12;

namespace detail {

// Partial coset table with columns (g_1, g_1^-1, g_2, ...).
class CosetSearch {
 public:
  static constexpr int kUndef = -1;

  CosetSearch(const Presentation& p, unsigned d) : p_(p), d_(d), cols_(2 * p.generator_count) {
    table_.assign(d, std::vector<int>(cols_, kUndef));
    for (const auto& w : p.relators) {
      std::vector<int> cols;
      for (int letter : w) cols.push_back(column(letter));
      relators_.push_back(std::move(cols));
    }
  }

  // Calls visit on each complete table; stops when visit returns false.
  void run(const std::function<bool(const SubgroupRecord&)>& visit) {
    visit_ = &visit;
    stopped_ = false;
    used_ = 1;
    if (cols_ == 0) {
      if (d_ == 1) (*visit_)(record());
      return;
    }
    search();
  }

 private:
  static int column(int letter) { return 2 * (std::abs(letter) - 1) + (letter > 0 ? 0 : 1); }
  static int inverse_column(int c) { return c ^ 1; }

  struct Saved {
    std::vector<std::vector<int>> table;
    unsigned used;
  };

  bool define(int coset, int col, int target) {
    int& slot = table_[coset][col];
    int& back = table_[target][inverse_column(col)];
    if (slot != kUndef) return slot == target;
    if (back != kUndef) return false;
    slot = target;
    back = coset;
    return true;
  }

  // Scan every relator from every coset; fill single gaps.  False on a
  // contradiction.
  bool close() {
    for (bool changed = true; changed;) {
      changed = false;
      for (unsigned c = 0; c < used_; ++c)
        for (const auto& rel : relators_) {
          const int n = static_cast<int>(rel.size());
          int f = static_cast<int>(c), i = 0;
          while (i < n && table_[f][rel[i]] != kUndef) f = table_[f][rel[i++]];
          if (i == n) {
            if (f != static_cast<int>(c)) return false;
            continue;
          }
          int b = static_cast<int>(c), j = n - 1;
          while (j >= i && table_[b][inverse_column(rel[j])] != kUndef)
            b = table_[b][inverse_column(rel[j--])];
          if (j < i) {
            if (f != b) return false;
          } else if (j == i) {
            if (!define(f, rel[i], b)) return false;
            changed = true;
          }
        }
    }
    return true;
  }

  SubgroupRecord record() const {
    SubgroupRecord r;
    r.index = d_;
    r.images.assign(p_.generator_count, std::vector<std::uint32_t>(d_));
    for (std::size_t g = 0; g < p_.generator_count; ++g)
      for (unsigned s = 0; s < d_; ++s) r.images[g][s] = static_cast<std::uint32_t>(table_[s][2 * g]);
    return r;
  }

  void search() {
    if (stopped_) return;
    // first undefined entry in row-major order
    int coset = -1, col = -1;
    for (unsigned c = 0; c < used_ && coset < 0; ++c)
      for (int x = 0; x < cols_; ++x)
        if (table_[c][x] == kUndef) {
          coset = static_cast<int>(c);
          col = x;
          break;
        }
    if (coset < 0) {
      if (used_ == d_ && !(*visit_)(record())) stopped_ = true;
      return;
    }
    const unsigned limit = std::min(used_ + 1, d_);
    for (unsigned target = 0; target < limit && !stopped_; ++target) {
      if (table_[target][inverse_column(col)] != kUndef) continue;
      Saved saved{table_, used_};
      if (target == used_) ++used_;
      if (define(coset, col, static_cast<int>(target)) && close()) search();
      table_ = std::move(saved.table);
      used_ = saved.used;
    }
  }

  const Presentation& p_;
  unsigned d_;
  int cols_;
  std::vector<std::vector<int>> relators_;
  std::vector<std::vector<int>> table_;
  unsigned used_ = 1;
  const std::function<bool(const SubgroupRecord&)>* visit_ = nullptr;
  bool stopped_ = false;
};

}  // namespace detail

// Visits every index-d subgroup once (as its canonical record), in a fixed
// order.  The visitor returns false to stop early.
inline void for_each_subgroup(const Presentation& p, unsigned d,
                              const std::function<bool(const SubgroupRecord&)>& visit,
                              unsigned ceiling = kDefaultIndexCeiling) {
  if (d == 0) throw PreconditionError("low_index_subgroups: index must be positive");
  if (d > ceiling)
    throw PreconditionError("low_index_subgroups: index " + std::to_string(d) +
                            " exceeds the ceiling " + std::to_string(ceiling));
  detail::CosetSearch(p, d).run(visit);
}

inline std::vector<SubgroupRecord> low_index_subgroups(const Presentation& p, unsigned d,
                                                       unsigned ceiling = kDefaultIndexCeiling,
                                                       std::size_t max_count = SIZE_MAX) {
  std::vector<SubgroupRecord> out;
  if (max_count == 0) return out;
  for_each_subgroup(
      p, d,
      [&](const SubgroupRecord& r) {
        out.push_back(r);
        return out.size() < max_count;
      },
      ceiling);
  return out;
}

inline nlohmann::json to_json(const SubgroupRecord& r) {
  return {{"index", r.index}, {"images", r.images}};
}

inline SubgroupRecord record_from_json(const nlohmann::json& j) {
  SubgroupRecord r;
  r.index = j.at("index").get<unsigned>();
  r.images = j.at("images").get<std::vector<std::vector<std::uint32_t>>>();
  return r;
}

}  // namespace svbench
