#pragma once

// Standard small triangulations used by the tests, the CLI and data/.

#include <bit>
#include <map>
#include <vector>

#include "svbench/dcomplex.hpp"
#include "svbench/io.hpp"

namespace svbench::corpus {

// One-vertex n-torus.  A k-simplex is a sequence (S_1, ..., S_k) of disjoint
// nonempty subsets of the coordinate directions: the vertex path
// 0, e_{S_1}, e_{S_1}+e_{S_2}, ... in the unit cube.  Top simplices are the
// n! coordinate orderings.  n = 2 gives the classical 2-triangle torus.
inline DeltaComplex torus(int n) {
  using Seq = std::vector<std::uint32_t>;
  const std::uint32_t all = (1u << n) - 1;
  std::vector<std::vector<Seq>> simplices(n + 1);
  // grow sequences by appending a subset disjoint from the used directions
  std::vector<Seq> frontier{Seq{}};
  for (int k = 1; k <= n; ++k) {
    std::vector<Seq> next;
    for (const Seq& s : frontier) {
      std::uint32_t used = 0;
      for (auto m : s) used |= m;
      const std::uint32_t free = all & ~used;
      for (std::uint32_t sub = 1; sub <= all; ++sub)
        if ((sub & free) == sub) {
          Seq t = s;
          t.push_back(sub);
          next.push_back(std::move(t));
        }
    }
    std::sort(next.begin(), next.end());
    simplices[k] = next;
    frontier = std::move(next);
  }
  std::vector<std::map<Seq, SimplexId>> ids(n + 1);
  for (int k = 1; k <= n; ++k)
    for (SimplexId i = 0; i < simplices[k].size(); ++i)
      ids[k].emplace(simplices[k][i], i);

  std::vector<std::vector<std::vector<SimplexId>>> faces(n);
  for (int k = 1; k <= n; ++k) {
    for (const Seq& s : simplices[k]) {
      std::vector<SimplexId> f(k + 1);
      if (k == 1) {
        f = {0, 0};
      } else {
        for (int j = 0; j <= k; ++j) {
          Seq t;
          if (j == 0) {
            t.assign(s.begin() + 1, s.end());
          } else if (j == k) {
            t.assign(s.begin(), s.end() - 1);
          } else {
            t.assign(s.begin(), s.begin() + (j - 1));
            t.push_back(s[j - 1] | s[j]);
            t.insert(t.end(), s.begin() + (j + 1), s.end());
          }
          f[j] = ids[k - 1].at(t);
        }
      }
      faces[k - 1].push_back(std::move(f));
    }
  }
  return DeltaComplex(n, 1, faces);
}

// Boundary of the (n+1)-simplex: a simplicial n-sphere.
inline DeltaComplex simplex_boundary(int n) {
  std::vector<std::vector<SimplexId>> facets;
  for (int omit = 0; omit <= n + 1; ++omit) {
    std::vector<SimplexId> f;
    for (int v = 0; v <= n + 1; ++v)
      if (v != omit) f.push_back(static_cast<SimplexId>(v));
    facets.push_back(std::move(f));
  }
  return detail::from_facets(facets, n + 2);
}

// One-vertex closed orientable surface of genus g >= 1: the 4g-gon with
// word a1 b1 a1^-1 b1^-1 ... triangulated as a fan from one corner
// (4g - 2 triangles, 6g - 3 edges).
inline DeltaComplex surface_fan(int genus) {
  const int sides = 4 * genus;
  // Edge ids: a_b = 2b, b_b = 2b + 1, diagonal P0-Pi (2 <= i <= sides-2) =
  // 2g + i - 2.  Every edge is a loop at the single vertex.
  const SimplexId edge_count = static_cast<SimplexId>(2 * genus + sides - 3);
  std::vector<std::vector<std::vector<SimplexId>>> faces(2);
  faces[0].assign(edge_count, {0, 0});
  auto boundary_edge = [&](int i) { return static_cast<SimplexId>(2 * (i / 4) + (i % 4) % 2); };
  auto forward = [](int i) { return i % 4 < 2; };
  auto spoke = [&](int i) -> SimplexId {  // edge from P0 to Pi
    if (i == 1) return 0;
    if (i == sides - 1) return boundary_edge(sides - 1);
    return static_cast<SimplexId>(2 * genus + i - 2);
  };
  for (int i = 1; i <= sides - 2; ++i) {
    SimplexId outer = boundary_edge(i);
    if (forward(i))
      faces[1].push_back({outer, spoke(i + 1), spoke(i)});
    else
      faces[1].push_back({outer, spoke(i), spoke(i + 1)});
  }
  return DeltaComplex(2, 1, faces);
}

// Wedge of r circles: a one-vertex graph whose fundamental group is free of
// rank r.
inline DeltaComplex wedge_of_circles(int r) {
  std::vector<std::vector<std::vector<SimplexId>>> faces(1);
  faces[0].assign(r, {0, 0});
  return DeltaComplex(1, 1, faces);
}

// Two-triangle real projective plane.
inline DeltaComplex projective_plane() {
  return parse_complex(R"({"dimension": 2, "vertex_count": 2,
    "edges": [[0, 0], [0, 1], [0, 0]],
    "simplices_2": [[1, 1, 0], [2, 0, 2]]})");
}

// One-vertex two-tetrahedron real projective 3-space.
inline DeltaComplex projective_3space() {
  return parse_complex(R"({"dimension": 3, "vertex_count": 1,
    "edges": [[0, 0], [0, 0], [0, 0]],
    "simplices_2": [[0, 1, 0], [1, 0, 0], [0, 0, 1], [0, 2, 0]],
    "simplices_3": [[0, 2, 1, 0], [2, 3, 3, 1]]})");
}

// One-vertex two-tetrahedron lens space L(3,1).
inline DeltaComplex lens_space_3_1() {
  return parse_complex(R"({"dimension": 3, "vertex_count": 1,
    "edges": [[0, 0], [0, 0], [0, 0]],
    "simplices_2": [[0, 1, 0], [1, 2, 0], [0, 2, 1], [1, 0, 1]],
    "simplices_3": [[0, 2, 1, 0], [3, 1, 2, 3]]})");
}

}  // namespace svbench::corpus
