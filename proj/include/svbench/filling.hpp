#pragma once

// Ordered (singular-style) chains on a simplicial host, the straight-line
// prism homotopy to the cone apex, and fillings of cycles in a cone.

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <json.hpp>

#include "svbench/dcomplex.hpp"
#include "svbench/error.hpp"

namespace svbench {

using VertexTuple = std::vector<SimplexId>;

// Integer combination of ordered vertex tuples (v_0..v_k), repeats allowed.
// Degenerate tuples are kept and counted by l1.
class OrderedChain {
 public:
  OrderedChain() = default;
  explicit OrderedChain(int degree) : degree_(degree) {}

  int degree() const noexcept { return degree_; }
  const std::map<VertexTuple, Coefficient>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add(const VertexTuple& t, Coefficient c) {
    if (static_cast<int>(t.size()) != degree_ + 1)
      throw PreconditionError("ordered chain: tuple length does not match degree");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(t, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  Coefficient operator[](const VertexTuple& t) const {
    auto it = terms_.find(t);
    return it == terms_.end() ? 0 : it->second;
  }
  Coefficient l1() const {
    Coefficient s = 0;
    for (const auto& [t, c] : terms_) s += c < 0 ? -c : c;
    return s;
  }
  Coefficient coefficient_sum() const {
    Coefficient s = 0;
    for (const auto& [t, c] : terms_) s += c;
    return s;
  }

  OrderedChain& operator+=(const OrderedChain& o) {
    for (const auto& [t, c] : o.terms_) add(t, c);
    return *this;
  }
  friend OrderedChain operator+(OrderedChain a, const OrderedChain& b) { return a += b; }
  friend OrderedChain operator-(OrderedChain a, const OrderedChain& b) {
    for (const auto& [t, c] : b.terms_) a.add(t, -c);
    return a;
  }
  friend bool operator==(const OrderedChain&, const OrderedChain&) = default;

 private:
  int degree_ = 0;
  std::map<VertexTuple, Coefficient> terms_;
};

inline OrderedChain ordered_boundary(const OrderedChain& c) {
  if (c.degree() == 0) return OrderedChain(-1);
  OrderedChain out(c.degree() - 1);
  for (const auto& [t, coeff] : c.terms())
    for (std::size_t j = 0; j < t.size(); ++j) {
      VertexTuple f = t;
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(j));
      out.add(f, j % 2 == 0 ? coeff : -coeff);
    }
  return out;
}

// Vertex sets of all simplices of a complex, for support checks.
class SimplexLookup {
 public:
  explicit SimplexLookup(const DeltaComplex& K) {
    for (int k = 0; k <= K.dimension(); ++k)
      for (SimplexId s = 0; s < K.count(k); ++s) {
        auto v = K.vertices(k, s);
        std::set<SimplexId> set(v.begin(), v.end());
        sets_.insert(VertexTuple(set.begin(), set.end()));
      }
  }
  bool spans(const VertexTuple& t) const {
    std::set<SimplexId> set(t.begin(), t.end());
    return sets_.count(VertexTuple(set.begin(), set.end())) > 0;
  }

 private:
  std::set<VertexTuple> sets_;
};

// h(v_0..v_k) = sum_i (-1)^{i+1} (v_0..v_i, p, ..., p), so that
// dh + hd = id - p_#.  At most k+1 pieces per tuple.
inline OrderedChain prism_homotopy(const ConeComplex& host, const OrderedChain& c) {
  const SimplexId p = host.apex;
  const SimplexLookup lookup(host.complex);
  OrderedChain out(c.degree() + 1);
  for (const auto& [t, coeff] : c.terms()) {
    VertexTuple with_apex = t;
    with_apex.push_back(p);
    if (std::find(t.begin(), t.end(), p) != t.end() || !lookup.spans(with_apex))
      throw PreconditionError("prism homotopy: chain not supported on the cone base");
    const int k = c.degree();
    for (int i = 0; i <= k; ++i) {
      VertexTuple piece(t.begin(), t.begin() + i + 1);
      piece.resize(k + 2, p);
      out.add(piece, i % 2 == 0 ? -coeff : coeff);
    }
  }
  return out;
}

// p_#: every tuple collapses to the constant apex tuple.
inline OrderedChain collapse_to_apex(const ConeComplex& host, const OrderedChain& c) {
  OrderedChain out(c.degree());
  out.add(VertexTuple(c.degree() + 1, host.apex), c.coefficient_sum());
  return out;
}

// A chain b of degree n with boundary z and l1(b) <= (n+1) l1(z), for a
// cycle z of degree n-1 >= 1 on the cone base.
inline OrderedChain efficient_fill(const ConeComplex& host, const OrderedChain& z) {
  const int n = z.degree() + 1;
  if (n < 2) throw PreconditionError("efficient_fill: needs a cycle of degree >= 1");
  if (!ordered_boundary(z).is_zero())
    throw PreconditionError("efficient_fill: input is not a cycle");
  OrderedChain fill = prism_homotopy(host, z);
  // dh(z) = z - p_#(z); p_#(z) = m (p..p) with n entries.  For n even the
  // constant n-simplex bounds it; for n odd z being a cycle forces m = 0.
  const Coefficient m = z.coefficient_sum();
  if (n % 2 == 0) {
    fill.add(VertexTuple(n + 1, host.apex), m);
  } else if (m != 0) {
    throw std::logic_error("efficient_fill: collapsed cycle is not zero");
  }
  return fill;
}

inline nlohmann::json to_json(const OrderedChain& c) {
  auto terms = nlohmann::json::array();
  for (const auto& [t, coeff] : c.terms()) terms.push_back({{"tuple", t}, {"coeff", coeff}});
  return {{"degree", c.degree()}, {"terms", terms}};
}

}  // namespace svbench
