#pragma once

// Link checks for closed 2- and 3-manifolds, and an isomorphism-invariant
// encoding of Delta-complexes.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svbench/dcomplex.hpp"

namespace svbench {

// Every vertex link of a closed surface is one circle; for a closed
// 3-manifold, edge links are circles and vertex links 2-spheres.  Assumes a
// pseudomanifold and dimension 2 or 3; other dimensions return false.
inline bool links_are_spheres(const DeltaComplex& K) {
  const int n = K.dimension();
  if (n == 2) {
    // link of v: nodes are edge-ends at v, one link edge per triangle corner
    const std::size_t E = K.count(1);
    detail::UnionFind uf(2 * E);
    std::vector<std::size_t> components(K.vertex_count(), 0);
    for (SimplexId t = 0; t < K.count(2); ++t) {
      auto f = K.faces(2, t);
      // corner at vertex position p joins the two edges through it; end 0 is
      // the tail (edge position 0)
      // v0: edges f2 (tail) and f1 (tail); v1: f2 (head) and f0 (tail);
      // v2: f1 (head) and f0 (head)
      const std::size_t corners[3][2] = {{2 * f[2], 2 * f[1]},
                                         {2 * f[2] + 1, 2 * f[0]},
                                         {2 * f[1] + 1, 2 * f[0] + 1}};
      for (const auto& c : corners) uf.unite(c[0], c[1]);
    }
    // every node has degree 2, so the link is a circle iff it is connected
    for (SimplexId e = 0; e < E; ++e)
      for (int end = 0; end < 2; ++end) {
        std::size_t node = 2 * e + end;
        SimplexId v = end == 0 ? K.tail(e) : K.head(e);
        if (uf.find(node) == node) ++components[v];
      }
    for (SimplexId v = 0; v < K.vertex_count(); ++v)
      if (components[v] != 1) return false;
    return true;
  }
  if (n == 3) {
    // edge links: tetrahedron edge-slots glued across triangle edge-slots
    static constexpr int edge_pos[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    static constexpr int tri_edge_pos[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    auto tri_edge = [&](SimplexId tri, int slot) {
      const int pos[2] = {tri_edge_pos[slot][0], tri_edge_pos[slot][1]};
      return K.subface(2, tri, pos);
    };
    // node = (triangle, edge slot) ; link edge = (tet, edge slot) joining the
    // two tetrahedron faces that contain the edge
    const std::size_t F = K.count(2);
    detail::UnionFind edge_uf(3 * F);
    auto slot_in_face = [](int face_omit, int p, int q) {
      // positions p<q of the tet, both != face_omit, as an edge slot of the face
      auto shift = [&](int x) { return x > face_omit ? x - 1 : x; };
      int a = shift(p), b = shift(q);
      for (int s = 0; s < 3; ++s)
        if (tri_edge_pos[s][0] == a && tri_edge_pos[s][1] == b) return s;
      return -1;
    };
    for (SimplexId t = 0; t < K.count(3); ++t) {
      auto f = K.faces(3, t);
      for (const auto& ep : edge_pos) {
        int others[2], c = 0;
        for (int x = 0; x < 4; ++x)
          if (x != ep[0] && x != ep[1]) others[c++] = x;
        // the two faces containing the edge omit the other two vertices
        std::size_t n0 = 3 * f[others[0]] + slot_in_face(others[0], ep[0], ep[1]);
        std::size_t n1 = 3 * f[others[1]] + slot_in_face(others[1], ep[0], ep[1]);
        edge_uf.unite(n0, n1);
      }
    }
    std::vector<std::size_t> edge_components(K.count(1), 0);
    for (SimplexId tri = 0; tri < F; ++tri)
      for (int s = 0; s < 3; ++s)
        if (edge_uf.find(3 * tri + s) == 3 * tri + s) ++edge_components[tri_edge(tri, s)];
    for (auto c : edge_components)
      if (c != 1) return false;

    // vertex links: triangles = tet corners, edges = triangle corners,
    // vertices = edge ends
    const std::size_t T = K.count(3);
    detail::UnionFind vert_uf(4 * T);
    std::vector<std::int64_t> chi(K.vertex_count(), 0);
    for (SimplexId e = 0; e < K.count(1); ++e) {
      ++chi[K.head(e)];
      ++chi[K.tail(e)];
    }
    for (SimplexId tri = 0; tri < F; ++tri)
      for (auto v : K.vertices(2, tri)) --chi[v];
    // tet corner (t, p) and triangle corner: face j of t holds corner p as
    // face position p - (p > j)
    std::map<std::pair<SimplexId, int>, std::size_t> first_corner;
    for (SimplexId t = 0; t < T; ++t) {
      auto v = K.vertices(3, t);
      for (int p = 0; p < 4; ++p) ++chi[v[p]];
      for (int j = 0; j < 4; ++j) {
        SimplexId tri = K.face(3, t, j);
        for (int p = 0; p < 4; ++p) {
          if (p == j) continue;
          auto key = std::make_pair(tri, p - (p > j ? 1 : 0));
          auto [it, fresh] = first_corner.try_emplace(key, 4 * t + p);
          if (!fresh) vert_uf.unite(it->second, 4 * t + p);
        }
      }
    }
    std::vector<std::size_t> vert_components(K.vertex_count(), 0);
    for (SimplexId t = 0; t < T; ++t) {
      auto v = K.vertices(3, t);
      for (int p = 0; p < 4; ++p)
        if (vert_uf.find(4 * t + p) == 4 * t + p) ++vert_components[v[p]];
    }
    for (SimplexId v = 0; v < K.vertex_count(); ++v)
      if (vert_components[v] != 1 || chi[v] != 2) return false;
    return true;
  }
  return false;
}

inline bool is_closed_manifold(const DeltaComplex& K) {
  auto report = validate(K);
  return report.is_pseudomanifold && report.is_connected && links_are_spheres(K);
}

// Relabeling of a connected pure complex that is equal for isomorphic
// inputs: the least, over starting top simplices, of a breadth-first
// relabeling across shared facets, compared by face tables.  Non-pure or
// disconnected complexes are returned unchanged.
inline DeltaComplex canonical_relabeling(const DeltaComplex& K) {
  using Tables = std::vector<std::vector<std::vector<SimplexId>>>;
  const int n = K.dimension();
  if (n < 1 || K.top_count() == 0) return K;
  // every face must lie in a top simplex
  std::vector<std::vector<bool>> covered(n + 1);
  for (int k = 0; k <= n; ++k) covered[k].assign(K.count(k), false);
  for (SimplexId t = 0; t < K.top_count(); ++t) covered[n][t] = true;
  for (int k = n; k >= 1; --k)
    for (SimplexId x = 0; x < K.count(k); ++x)
      if (covered[k][x])
        for (auto f : K.faces(k, x)) covered[k - 1][f] = true;
  for (int k = 0; k <= n; ++k)
    if (std::find(covered[k].begin(), covered[k].end(), false) != covered[k].end()) return K;

  auto slots = facet_slots(K);
  std::optional<Tables> best;
  for (SimplexId start = 0; start < K.top_count(); ++start) {
    std::vector<std::vector<SimplexId>> label(n + 1);
    std::vector<SimplexId> next(n + 1, 0);
    constexpr SimplexId none = UINT32_MAX;
    for (int k = 0; k <= n; ++k) label[k].assign(K.count(k), none);
    // label a face and, recursively, its faces in face order
    std::function<void(int, SimplexId)> name = [&](int k, SimplexId x) {
      if (label[k][x] != none) return;
      label[k][x] = next[k]++;
      if (k >= 1)
        for (auto f : K.faces(k, x)) name(k - 1, f);
    };
    std::deque<SimplexId> queue{start};
    name(n, start);
    std::vector<bool> queued(K.top_count(), false);
    queued[start] = true;
    std::size_t visited = 0;
    while (!queue.empty()) {
      SimplexId t = queue.front();
      queue.pop_front();
      ++visited;
      for (int j = 0; j <= n; ++j)
        for (auto [other, slot] : slots[K.face(n, t, j)])
          if (!queued[other]) {
            queued[other] = true;
            name(n, other);
            queue.push_back(other);
          }
    }
    if (visited != K.top_count()) return K;  // disconnected
    Tables tables(n);
    for (int k = 1; k <= n; ++k) {
      tables[k - 1].resize(K.count(k));
      for (SimplexId x = 0; x < K.count(k); ++x) {
        std::vector<SimplexId> f;
        for (auto g : K.faces(k, x)) f.push_back(label[k - 1][g]);
        tables[k - 1][label[k][x]] = std::move(f);
      }
    }
    if (!best || tables < *best) best = std::move(tables);
  }
  return DeltaComplex(n, K.vertex_count(), *best);
}

// Equal for isomorphic inputs (see canonical_relabeling).
inline std::string canonical_encoding(const DeltaComplex& K) {
  const DeltaComplex C = canonical_relabeling(K);
  std::string s = std::to_string(C.dimension()) + ":" + std::to_string(C.vertex_count());
  for (int k = 1; k <= C.dimension(); ++k) {
    s += ";";
    for (SimplexId x = 0; x < C.count(k); ++x)
      for (auto f : C.faces(k, x)) s += "," + std::to_string(f);
  }
  return s;
}

}  // namespace svbench
