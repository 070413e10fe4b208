#pragma once

// Delta-complex documents (JSON).
//
// Face-map form:
//   {"dimension": n, "vertex_count": V, "edges": [[tail, head], ...],
//    "simplices_2": [[f0, f1, f2], ...], ..., "simplices_n": [...]}
// Facet-list shorthand for simplicial complexes:
//   {"facets": [[v0, v1, ...], ...]}

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "svbench/dcomplex.hpp"

namespace svbench {

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& doc,
                                     const std::string& key) {
  auto it = doc.find(key);
  if (it == doc.end())
    throw ParseError("missing field '" + key + "'", 0);
  return *it;
}

inline std::vector<SimplexId> id_tuple(const nlohmann::json& j,
                                       const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list of ids", 0);
  std::vector<SimplexId> out;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<long long>() < 0)
      throw ParseError(where + ": ids must be non-negative integers", 0);
    out.push_back(static_cast<SimplexId>(x.get<long long>()));
  }
  return out;
}

// Down-close a list of vertex sets and emit face maps with vertex-ordered
// faces.
inline DeltaComplex from_facets(const std::vector<std::vector<SimplexId>>& facets,
                                std::size_t vertex_count) {
  int n = 0;
  std::vector<std::set<std::vector<SimplexId>>> by_dim;
  for (auto f : facets) {
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end())
      throw ParseError("facet with repeated vertex", 0);
    if (f.empty()) continue;
    n = std::max(n, static_cast<int>(f.size()) - 1);
    if (by_dim.size() < f.size()) by_dim.resize(f.size());
    // all nonempty subsets of size >= 2
    const std::uint32_t full = (1u << f.size()) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      std::vector<SimplexId> sub;
      for (std::size_t p = 0; p < f.size(); ++p)
        if ((mask >> p) & 1u) sub.push_back(f[p]);
      if (sub.size() >= 2) by_dim[sub.size() - 1].insert(sub);
    }
  }
  by_dim.resize(n + 1);
  std::vector<std::map<std::vector<SimplexId>, SimplexId>> ids(n + 1);
  for (int k = 1; k <= n; ++k) {
    SimplexId next = 0;
    for (const auto& s : by_dim[k]) ids[k].emplace(s, next++);
  }
  std::vector<std::vector<std::vector<SimplexId>>> faces(n);
  for (int k = 1; k <= n; ++k) {
    for (const auto& s : by_dim[k]) {
      std::vector<SimplexId> f(k + 1);
      for (int j = 0; j <= k; ++j) {
        std::vector<SimplexId> sub = s;
        sub.erase(sub.begin() + j);
        f[j] = k == 1 ? sub[0] : ids[k - 1].at(sub);
      }
      faces[k - 1].push_back(std::move(f));
    }
  }
  return DeltaComplex(n, vertex_count, faces);
}

}  // namespace detail

inline DeltaComplex complex_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ParseError("document must be an object", 0);
  if (doc.contains("facets")) {
    std::vector<std::vector<SimplexId>> facets;
    SimplexId max_id = 0;
    bool any = false;
    for (const auto& f : detail::require(doc, "facets")) {
      facets.push_back(detail::id_tuple(f, "facets"));
      for (auto v : facets.back()) {
        max_id = std::max(max_id, v);
        any = true;
      }
    }
    std::size_t vertex_count = any ? max_id + 1 : 0;
    if (doc.contains("vertex_count")) {
      auto declared = doc["vertex_count"].get<std::size_t>();
      if (declared < vertex_count)
        throw DanglingFaceError("facet references vertex beyond vertex_count");
      vertex_count = declared;
    }
    return detail::from_facets(facets, vertex_count);
  }

  const auto& dim_field = detail::require(doc, "dimension");
  const auto& vc_field = detail::require(doc, "vertex_count");
  if (!dim_field.is_number_integer() || dim_field.get<long long>() < 0)
    throw ParseError("'dimension' must be a non-negative integer", 0);
  if (!vc_field.is_number_integer() || vc_field.get<long long>() < 0)
    throw ParseError("'vertex_count' must be a non-negative integer", 0);
  const int n = dim_field.get<int>();
  const std::size_t vertex_count = vc_field.get<std::size_t>();

  std::vector<std::vector<std::vector<SimplexId>>> faces(n);
  if (n >= 1) {
    for (const auto& e : detail::require(doc, "edges")) {
      auto pair = detail::id_tuple(e, "edges");
      if (pair.size() != 2) throw ParseError("edges: expected [tail, head]", 0);
      faces[0].push_back(std::vector<SimplexId>{pair[1], pair[0]});
    }
  }
  for (int k = 2; k <= n; ++k) {
    const std::string key = "simplices_" + std::to_string(k);
    for (const auto& s : detail::require(doc, key)) {
      auto tuple = detail::id_tuple(s, key);
      if (tuple.size() != static_cast<std::size_t>(k + 1))
        throw ParseError(key + ": expected " + std::to_string(k + 1) +
                             " face ids per simplex",
                         0);
      faces[k - 1].push_back(std::move(tuple));
    }
  }
  return DeltaComplex(n, vertex_count, faces);
}

inline DeltaComplex parse_complex(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what(), e.byte);
  }
  return complex_from_json(doc);
}

inline nlohmann::json to_json(const DeltaComplex& K) {
  nlohmann::json doc;
  doc["dimension"] = K.dimension();
  doc["vertex_count"] = K.vertex_count();
  if (K.dimension() >= 1) {
    auto edges = nlohmann::json::array();
    for (SimplexId e = 0; e < K.count(1); ++e)
      edges.push_back({K.tail(e), K.head(e)});
    doc["edges"] = std::move(edges);
  }
  for (int k = 2; k <= K.dimension(); ++k) {
    auto list = nlohmann::json::array();
    for (SimplexId s = 0; s < K.count(k); ++s) {
      auto f = K.faces(k, s);
      list.push_back(std::vector<SimplexId>(f.begin(), f.end()));
    }
    doc["simplices_" + std::to_string(k)] = std::move(list);
  }
  return doc;
}

inline std::string serialize_complex(const DeltaComplex& K) {
  return to_json(K).dump();
}

inline nlohmann::json to_json(const ChainVector& c) {
  auto terms = nlohmann::json::array();
  for (auto [id, coeff] : c.terms()) terms.push_back({id, coeff});
  return {{"degree", c.degree()}, {"terms", terms}};
}

}  // namespace svbench
