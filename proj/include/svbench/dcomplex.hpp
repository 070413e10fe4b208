#pragma once

// Delta-complexes (semi-simplicial sets) given by explicit face maps.
//
// A k-simplex (k >= 1) stores the ids of its k+1 faces, face j omitting
// vertex j.  Vertices are a count only; an edge stores (head, tail) because
// face 0 omits the tail.  All objects here are immutable once built.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "svbench/error.hpp"

namespace svbench {

using SimplexId = std::uint32_t;
using Coefficient = std::int64_t;

class DeltaComplex {
 public:
  DeltaComplex() = default;

  // faces[k-1][s] lists the k+1 face ids of k-simplex s, for k = 1..dimension.
  DeltaComplex(int dimension, std::size_t vertex_count,
               const std::vector<std::vector<std::vector<SimplexId>>>& faces)
      : dimension_(dimension), vertex_count_(vertex_count) {
    if (dimension < 0) throw PreconditionError("negative dimension");
    if (faces.size() != static_cast<std::size_t>(dimension))
      throw PreconditionError("expected face lists for dimensions 1.." +
                              std::to_string(dimension));
    face_table_.resize(dimension);
    counts_.assign(dimension + 1, 0);
    counts_[0] = vertex_count;
    for (int k = 1; k <= dimension; ++k) {
      const auto& list = faces[k - 1];
      counts_[k] = list.size();
      auto& flat = face_table_[k - 1];
      flat.reserve(list.size() * (k + 1));
      for (std::size_t s = 0; s < list.size(); ++s) {
        if (list[s].size() != static_cast<std::size_t>(k + 1))
          throw PreconditionError(std::to_string(k) + "-simplex " +
                                  std::to_string(s) + " needs " +
                                  std::to_string(k + 1) + " faces");
        for (SimplexId f : list[s]) {
          if (f >= counts_[k - 1])
            throw DanglingFaceError(std::to_string(k) + "-simplex " +
                                    std::to_string(s) + " references missing " +
                                    std::to_string(k - 1) + "-simplex " +
                                    std::to_string(f));
          flat.push_back(f);
        }
      }
    }
    check_identities();
    build_vertex_table();
  }

  int dimension() const noexcept { return dimension_; }
  std::size_t vertex_count() const noexcept { return vertex_count_; }

  std::size_t count(int k) const noexcept {
    if (k < 0 || k > dimension_) return 0;
    return counts_.empty() ? (k == 0 ? vertex_count_ : 0) : counts_[k];
  }
  std::size_t top_count() const noexcept { return count(dimension_); }

  std::span<const SimplexId> faces(int k, SimplexId s) const {
    return {face_table_[k - 1].data() + std::size_t(s) * (k + 1),
            std::size_t(k + 1)};
  }
  SimplexId face(int k, SimplexId s, int j) const {
    return face_table_[k - 1][std::size_t(s) * (k + 1) + j];
  }

  // Ordered vertices v_0..v_k of a k-simplex (k = 0 returns {s}).
  std::span<const SimplexId> vertices(int k, SimplexId s) const {
    if (k == 0) return {vertex_ids_.data() + s, 1};
    return {vertex_table_[k - 1].data() + std::size_t(s) * (k + 1),
            std::size_t(k + 1)};
  }

  SimplexId tail(SimplexId edge) const { return face(1, edge, 1); }
  SimplexId head(SimplexId edge) const { return face(1, edge, 0); }

  // Id of the sub-simplex of k-simplex s spanned by the given increasing
  // vertex positions.  A single position yields a vertex id.
  SimplexId subface(int k, SimplexId s, std::span<const int> positions) const {
    if (positions.size() == 1) return vertices(k, s)[positions[0]];
    int dim = k;
    SimplexId cur = s;
    // Remove omitted positions from the highest down, so lower indices stay put.
    for (int p = k; p >= 0 && dim + 1 > static_cast<int>(positions.size());
         --p) {
      if (std::find(positions.begin(), positions.end(), p) != positions.end())
        continue;
      cur = face(dim, cur, p);
      --dim;
    }
    return cur;
  }

  // Face spanned by vertices 0..m (front) or k-m..k (back) of a k-simplex.
  SimplexId front_face(int k, SimplexId s, int m) const {
    if (m == 0) return vertices(k, s)[0];
    SimplexId cur = s;
    for (int d = k; d > m; --d) cur = face(d, cur, d);
    return cur;
  }
  SimplexId back_face(int k, SimplexId s, int m) const {
    if (m == 0) return vertices(k, s)[k];
    SimplexId cur = s;
    for (int d = k; d > m; --d) cur = face(d, cur, 0);
    return cur;
  }

  friend bool operator==(const DeltaComplex& a, const DeltaComplex& b) {
    return a.dimension_ == b.dimension_ && a.vertex_count_ == b.vertex_count_ &&
           a.face_table_ == b.face_table_;
  }

 private:
  void check_identities() const {
    for (int k = 2; k <= dimension_; ++k) {
      for (SimplexId s = 0; s < counts_[k]; ++s) {
        for (int j = 1; j <= k; ++j) {
          for (int i = 0; i < j; ++i) {
            SimplexId lhs = face(k - 1, face(k, s, j), i);
            SimplexId rhs = face(k - 1, face(k, s, i), j - 1);
            if (lhs != rhs)
              throw SimplicialIdentityError(
                  std::to_string(k) + "-simplex " + std::to_string(s) +
                  ": d_" + std::to_string(i) + " d_" + std::to_string(j) +
                  " != d_" + std::to_string(j - 1) + " d_" +
                  std::to_string(i));
          }
        }
      }
    }
  }

  void build_vertex_table() {
    vertex_ids_.resize(vertex_count_);
    std::iota(vertex_ids_.begin(), vertex_ids_.end(), SimplexId{0});
    vertex_table_.resize(dimension_);
    for (int k = 1; k <= dimension_; ++k) {
      auto& out = vertex_table_[k - 1];
      out.resize(counts_[k] * (k + 1));
      for (SimplexId s = 0; s < counts_[k]; ++s) {
        SimplexId* v = out.data() + std::size_t(s) * (k + 1);
        if (k == 1) {
          v[0] = tail(s);
          v[1] = head(s);
        } else {
          auto front = vertices(k - 1, face(k, s, k));
          std::copy(front.begin(), front.end(), v);
          v[k] = vertices(k - 1, face(k, s, 0))[k - 1];
        }
      }
    }
  }

  int dimension_ = 0;
  std::size_t vertex_count_ = 0;
  std::vector<std::size_t> counts_{0};
  std::vector<std::vector<SimplexId>> face_table_;
  std::vector<std::vector<SimplexId>> vertex_table_;
  std::vector<SimplexId> vertex_ids_;
};

// Sparse integer chain over the simplices of one degree.  Zero coefficients
// are never stored.
class ChainVector {
 public:
  ChainVector() = default;
  explicit ChainVector(int degree) : degree_(degree) {}
  ChainVector(int degree, std::map<SimplexId, Coefficient> terms)
      : degree_(degree) {
    for (auto [id, c] : terms) add(id, c);
  }

  int degree() const noexcept { return degree_; }
  const std::map<SimplexId, Coefficient>& terms() const noexcept {
    return terms_;
  }
  bool is_zero() const noexcept { return terms_.empty(); }

  Coefficient operator[](SimplexId id) const {
    auto it = terms_.find(id);
    return it == terms_.end() ? 0 : it->second;
  }

  void add(SimplexId id, Coefficient c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(id, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Coefficient l1() const {
    Coefficient sum = 0;
    for (const auto& [id, c] : terms_) sum += c < 0 ? -c : c;
    return sum;
  }

  ChainVector& operator+=(const ChainVector& other) {
    for (auto [id, c] : other.terms_) add(id, c);
    return *this;
  }
  ChainVector& operator*=(Coefficient f) {
    if (f == 0) {
      terms_.clear();
    } else {
      for (auto& [id, c] : terms_) c *= f;
    }
    return *this;
  }
  friend ChainVector operator+(ChainVector a, const ChainVector& b) {
    return a += b;
  }
  friend ChainVector operator-(ChainVector a, const ChainVector& b) {
    for (auto [id, c] : b.terms_) a.add(id, -c);
    return a;
  }
  friend ChainVector operator*(Coefficient f, ChainVector a) { return a *= f; }
  friend bool operator==(const ChainVector&, const ChainVector&) = default;

 private:
  int degree_ = 0;
  std::map<SimplexId, Coefficient> terms_;
};

// Sign per top simplex.
struct Orientation {
  std::vector<int> signs;
  friend bool operator==(const Orientation&, const Orientation&) = default;
};

struct ValidationReport {
  bool is_pseudomanifold = false;
  bool is_connected = false;
  std::optional<Orientation> orientation;
  std::vector<std::string> diagnostics;
};

inline std::int64_t euler_characteristic(const DeltaComplex& K) {
  std::int64_t chi = 0;
  for (int k = 0; k <= K.dimension(); ++k)
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(K.count(k));
  return chi;
}

inline ChainVector boundary(const DeltaComplex& K, const ChainVector& c) {
  const int k = c.degree();
  if (k < 1 || k > K.dimension())
    throw PreconditionError("boundary: degree " + std::to_string(k) +
                            " outside 1.." + std::to_string(K.dimension()));
  ChainVector out(k - 1);
  for (auto [s, coeff] : c.terms()) {
    if (s >= K.count(k))
      throw PreconditionError("boundary: chain references missing simplex");
    for (int j = 0; j <= k; ++j)
      out.add(K.face(k, s, j), (j % 2 == 0 ? coeff : -coeff));
  }
  return out;
}

// Top-simplex facet slots: for each (n-1)-simplex, the (top, face index)
// pairs that reference it.
inline std::vector<std::vector<std::pair<SimplexId, int>>> facet_slots(
    const DeltaComplex& K) {
  const int n = K.dimension();
  std::vector<std::vector<std::pair<SimplexId, int>>> slots(K.count(n - 1));
  if (n < 1) return slots;
  for (SimplexId t = 0; t < K.count(n); ++t)
    for (int j = 0; j <= n; ++j) slots[K.face(n, t, j)].emplace_back(t, j);
  return slots;
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // Returns false when a and b were already joined.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

inline bool is_connected(const DeltaComplex& K) {
  if (K.vertex_count() == 0) return false;
  detail::UnionFind uf(K.vertex_count());
  std::size_t components = K.vertex_count();
  for (SimplexId e = 0; e < K.count(1); ++e)
    if (uf.unite(K.tail(e), K.head(e))) --components;
  return components == 1;
}

inline ValidationReport validate(const DeltaComplex& K) {
  ValidationReport report;
  const int n = K.dimension();
  report.is_connected = is_connected(K);
  if (!report.is_connected) report.diagnostics.push_back("1-skeleton is not connected");
  if (n < 1 || K.top_count() == 0) {
    report.diagnostics.push_back("no top simplices of positive dimension");
    return report;
  }

  auto slots = facet_slots(K);
  report.is_pseudomanifold = true;
  for (SimplexId f = 0; f < slots.size(); ++f) {
    if (slots[f].size() != 2) {
      report.is_pseudomanifold = false;
      report.diagnostics.push_back(std::to_string(n - 1) + "-simplex " +
                                   std::to_string(f) + " occurs in " +
                                   std::to_string(slots[f].size()) +
                                   " top face slots");
    }
  }
  if (!report.is_pseudomanifold) return report;

  // Sign propagation: the two slots of a facet must induce opposite signs.
  std::vector<int> sign(K.top_count(), 0);
  std::vector<std::vector<std::pair<SimplexId, int>>> adjacent(K.top_count());
  for (const auto& s : slots) {
    const auto [t1, j1] = s[0];
    const auto [t2, j2] = s[1];
    // sign(t2) = -sign(t1) * (-1)^(j1 + j2)
    int rel = ((j1 + j2) % 2 == 0) ? -1 : 1;
    adjacent[t1].emplace_back(t2, rel);
    adjacent[t2].emplace_back(t1, rel);
  }
  bool coherent = true;
  for (SimplexId root = 0; root < K.top_count() && coherent; ++root) {
    if (sign[root] != 0) continue;
    sign[root] = 1;
    std::queue<SimplexId> queue;
    queue.push(root);
    while (!queue.empty() && coherent) {
      SimplexId t = queue.front();
      queue.pop();
      for (auto [u, rel] : adjacent[t]) {
        int want = sign[t] * rel;
        if (sign[u] == 0) {
          sign[u] = want;
          queue.push(u);
        } else if (sign[u] != want) {
          coherent = false;
          report.diagnostics.push_back("orientation conflict at top simplex " +
                                       std::to_string(u));
          break;
        }
      }
    }
  }
  if (coherent) report.orientation = Orientation{std::move(sign)};
  return report;
}

inline ChainVector fundamental_cycle(const DeltaComplex& K,
                                     const Orientation& o) {
  const int n = K.dimension();
  if (o.signs.size() != K.top_count())
    throw PreconditionError("orientation size does not match top simplices");
  ChainVector z(n);
  for (SimplexId t = 0; t < K.top_count(); ++t) {
    if (o.signs[t] != 1 && o.signs[t] != -1)
      throw PreconditionError("orientation signs must be +1 or -1");
    z.add(t, o.signs[t]);
  }
  if (n < 1 || !boundary(K, z).is_zero())
    throw PreconditionError("orientation is not coherent");
  return z;
}

inline ChainVector fundamental_cycle(const DeltaComplex& K) {
  auto report = validate(K);
  if (!report.is_pseudomanifold)
    throw PreconditionError("fundamental cycle: not a pseudomanifold");
  if (!report.orientation)
    throw PreconditionError("fundamental cycle: complex is not orientable");
  return fundamental_cycle(K, *report.orientation);
}

// True when every simplex has pairwise distinct vertices.
inline bool has_distinct_vertices(const DeltaComplex& K) {
  for (int k = 1; k <= K.dimension(); ++k) {
    for (SimplexId s = 0; s < K.count(k); ++s) {
      auto v = K.vertices(k, s);
      std::vector<SimplexId> sorted(v.begin(), v.end());
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        return false;
    }
  }
  return true;
}

// A genuine simplicial complex: distinct vertices per simplex and no two
// simplices with the same vertex set.
inline bool is_simplicial(const DeltaComplex& K) {
  if (!has_distinct_vertices(K)) return false;
  for (int k = 1; k <= K.dimension(); ++k) {
    std::vector<std::vector<SimplexId>> sets;
    sets.reserve(K.count(k));
    for (SimplexId s = 0; s < K.count(k); ++s) {
      auto v = K.vertices(k, s);
      sets.emplace_back(v.begin(), v.end());
      std::sort(sets.back().begin(), sets.back().end());
    }
    std::sort(sets.begin(), sets.end());
    if (std::adjacent_find(sets.begin(), sets.end()) != sets.end()) return false;
  }
  return true;
}

// Barycentric subdivision.  A simplex of the subdivision is a strictly
// increasing flag of faces of some simplex tau whose last member is tau
// itself; its vertices are the barycenters of the flag members in order.
inline DeltaComplex barycentric_subdivision(const DeltaComplex& K) {
  const int n = K.dimension();
  using Key = std::vector<std::uint32_t>;  // {k, tau, mask_0, ..., mask_m}
  std::vector<std::size_t> vertex_offset(n + 2, 0);
  for (int k = 0; k <= n; ++k)
    vertex_offset[k + 1] = vertex_offset[k] + K.count(k);

  auto positions_of = [](std::uint32_t mask) {
    std::vector<int> pos;
    for (int p = 0; mask; ++p, mask >>= 1)
      if (mask & 1u) pos.push_back(p);
    return pos;
  };
  auto reindex = [](std::uint32_t mask, std::uint32_t within) {
    std::uint32_t out = 0;
    int rank = 0;
    for (int p = 0; within >> p; ++p) {
      if (!((within >> p) & 1u)) continue;
      if ((mask >> p) & 1u) out |= 1u << rank;
      ++rank;
    }
    return out;
  };
  // Rewrite a flag whose last member is a proper face of tau in terms of
  // that face.
  auto canonical = [&](int k, SimplexId tau, std::vector<std::uint32_t> flag) {
    std::uint32_t last = flag.back();
    auto pos = positions_of(last);
    int dim = static_cast<int>(pos.size()) - 1;
    if (dim != k) {
      tau = K.subface(k, tau, pos);
      for (auto& m : flag) m = reindex(m, last);
    }
    Key key{static_cast<std::uint32_t>(dim), tau};
    key.insert(key.end(), flag.begin(), flag.end());
    return key;
  };

  std::vector<std::map<Key, SimplexId>> ids(n + 1);
  std::vector<std::vector<Key>> order(n + 1);
  // Enumerate flags ending at the full simplex, in a deterministic order.
  for (int k = 0; k <= n; ++k) {
    const std::uint32_t full = (1u << (k + 1)) - 1;
    for (SimplexId tau = 0; tau < K.count(k); ++tau) {
      std::vector<std::vector<std::uint32_t>> stack{{full}};
      std::vector<std::vector<std::uint32_t>> flags;
      while (!stack.empty()) {
        auto flag = std::move(stack.back());
        stack.pop_back();
        flags.push_back(flag);
        std::uint32_t smallest = flag.front();
        // proper nonempty subsets of `smallest`
        for (std::uint32_t sub = (smallest - 1) & smallest; sub;
             sub = (sub - 1) & smallest) {
          auto next = flag;
          next.insert(next.begin(), sub);
          stack.push_back(std::move(next));
        }
      }
      std::sort(flags.begin(), flags.end());
      for (auto& flag : flags) {
        int m = static_cast<int>(flag.size()) - 1;
        Key key{static_cast<std::uint32_t>(k), tau};
        key.insert(key.end(), flag.begin(), flag.end());
        if (m == 0) continue;  // vertices are implicit
        ids[m].emplace(key, static_cast<SimplexId>(order[m].size()));
        order[m].push_back(std::move(key));
      }
    }
  }

  auto lookup = [&](const Key& key) -> SimplexId {
    int m = static_cast<int>(key.size()) - 3;
    if (m == 0) return static_cast<SimplexId>(vertex_offset[key[0]] + key[1]);
    return ids[m].at(key);
  };

  std::vector<std::vector<std::vector<SimplexId>>> faces(n);
  for (int m = 1; m <= n; ++m) {
    faces[m - 1].reserve(order[m].size());
    for (const Key& key : order[m]) {
      int k = static_cast<int>(key[0]);
      SimplexId tau = key[1];
      std::vector<std::uint32_t> flag(key.begin() + 2, key.end());
      std::vector<SimplexId> f(m + 1);
      for (int j = 0; j <= m; ++j) {
        auto sub = flag;
        sub.erase(sub.begin() + j);
        f[j] = lookup(canonical(k, tau, std::move(sub)));
      }
      faces[m - 1].push_back(std::move(f));
    }
  }
  return DeltaComplex(n, vertex_offset[n + 1], faces);
}

struct ConeComplex {
  DeltaComplex complex;
  SimplexId apex = 0;
};

// Cone with apex appended as the last vertex.  The cone over a k-simplex
// (v_0..v_k) is (v_0..v_k, apex); it is stored after the original
// (k+1)-simplices.
inline ConeComplex cone(const DeltaComplex& K) {
  if (!has_distinct_vertices(K))
    throw PreconditionError(
        "cone: input is not simplicial (repeated vertices in a simplex); "
        "subdivide first");
  const int n = K.vertex_count() == 0 ? -1 : K.dimension();
  const SimplexId apex = static_cast<SimplexId>(K.vertex_count());
  std::vector<std::vector<std::vector<SimplexId>>> faces(n + 1);
  for (int k = 1; k <= n; ++k)
    for (SimplexId s = 0; s < K.count(k); ++s) {
      auto f = K.faces(k, s);
      faces[k - 1].emplace_back(f.begin(), f.end());
    }
  for (int k = 0; k <= n; ++k) {
    const std::size_t lower_shift = K.count(k);
    for (SimplexId s = 0; s < K.count(k); ++s) {
      std::vector<SimplexId> f(k + 2);
      if (k == 0) {
        f[0] = apex;  // head
        f[1] = s;     // tail
      } else {
        for (int j = 0; j <= k; ++j)
          f[j] = static_cast<SimplexId>(lower_shift + K.face(k, s, j));
        f[k + 1] = s;
      }
      faces[k].push_back(std::move(f));
    }
  }
  return {DeltaComplex(n + 1, K.vertex_count() + 1, faces), apex};
}

}  // namespace svbench
