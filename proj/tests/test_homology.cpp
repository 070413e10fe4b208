#include <catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "svbench/cap.hpp"
#include "svbench/corpus.hpp"
#include "svbench/filling.hpp"
#include "svbench/homology.hpp"
#include "test_support.hpp"

using namespace svbench;
using svbench::testing::load;

namespace {

IntegerMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c,
                            int range) {
  std::uniform_int_distribution<int> d(-range, range);
  IntegerMatrix a(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) a(i, j) = d(rng);
  return a;
}

void check_smith(const IntegerMatrix& a) {
  auto s = smith_normal_form(a, true);
  REQUIRE(s.left);
  REQUIRE(s.right);
  CHECK(*s.left * a * *s.right == smith_diagonal_matrix(s, a.rows(), a.cols()));
  CHECK(abs(determinant(*s.left)) == 1);
  CHECK(abs(determinant(*s.right)) == 1);
  for (std::size_t i = 0; i < s.rank; ++i) {
    CHECK(s.diagonal[i] > 0);
    if (i + 1 < s.rank) CHECK(s.diagonal[i + 1] % s.diagonal[i] == 0);
  }
}

std::vector<std::size_t> betti(const DeltaComplex& K) {
  return homology_profile(K).betti();
}

std::vector<BigInt> torsion(const DeltaComplex& K, int k) {
  return homology_profile(K).at(k).divisors;
}

// Random ordered tuple inside a random top simplex of K (repeats allowed).
VertexTuple random_tuple(const DeltaComplex& K, int k, std::mt19937_64& rng) {
  std::uniform_int_distribution<SimplexId> top(0, K.top_count() - 1);
  auto v = K.vertices(K.dimension(), top(rng));
  std::uniform_int_distribution<std::size_t> slot(0, v.size() - 1);
  VertexTuple t;
  for (int i = 0; i <= k; ++i) t.push_back(v[slot(rng)]);
  return t;
}

OrderedChain random_ordered_chain(const DeltaComplex& K, int k, std::mt19937_64& rng,
                                  int terms) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  OrderedChain c(k);
  for (int i = 0; i < terms; ++i) c.add(random_tuple(K, k, rng), coeff(rng));
  return c;
}

}  // namespace

TEST_CASE("smith normal form: hand examples", "[homology][snf]") {
  IntegerMatrix d(2, 2);
  d(0, 0) = 2;
  d(1, 1) = 3;
  auto s = smith_normal_form(d, true);
  CHECK(s.diagonal == std::vector<BigInt>{1, 6});
  check_smith(d);

  auto zero = smith_normal_form(IntegerMatrix(3, 4));
  CHECK(zero.rank == 0);
  CHECK(zero.elementary_divisors().empty());

  auto id = smith_normal_form(IntegerMatrix::identity(3));
  CHECK(id.diagonal == std::vector<BigInt>{1, 1, 1});

  // [[2, 4], [6, 8]]: gcd 2, det -8 -> (2, 4)
  IntegerMatrix b(2, 2);
  b(0, 0) = 2; b(0, 1) = 4; b(1, 0) = 6; b(1, 1) = 8;
  CHECK(smith_normal_form(b).diagonal == std::vector<BigInt>{2, 4});
}

TEST_CASE("smith normal form: reconstruction on random matrices", "[homology][snf][property]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 12; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 40);
    check_smith(random_matrix(rng, dim(rng), dim(rng), 50));
  }
  // sparse, rank-deficient
  for (int trial = 0; trial < 12; ++trial) {
    auto a = random_matrix(rng, 15, 20, 2);
    for (std::size_t j = 0; j < a.cols(); j += 3)
      for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) = a(i, (j + 1) % a.cols()) * 2;
    check_smith(a);
  }
}

TEST_CASE("smith normal form: determinant and gcd oracles", "[homology][snf][property]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    auto a = random_matrix(rng, 6, 6, 9);
    BigInt det = determinant(a);
    if (det == 0) continue;
    auto s = smith_normal_form(a);
    BigInt product = 1;
    for (const auto& d : s.diagonal) product *= d;
    CHECK(product == abs(det));
    BigInt g = 0;
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) g = gcd(g, a(i, j));
    CHECK(s.diagonal.front() == g);
  }
  // rank against rational elimination on small sparse matrices
  RationalField q;
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    auto a = random_matrix(rng, dim(rng), dim(rng), 3);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        if ((i * 7 + j * 3 + trial) % 3 == 0) a(i, j) = 0;
    auto s = smith_normal_form(a, true);
    CHECK(s.rank == rank(q, to_field(q, a), a.cols()));
    CHECK(*s.left * a * *s.right == smith_diagonal_matrix(s, a.rows(), a.cols()));
  }
}

TEST_CASE("smith normal form: big-integer fallback", "[homology][snf]") {
  std::mt19937_64 rng(3);
  auto a = random_matrix(rng, 8, 8, 50);
  const BigInt big = BigInt(1) << 70;
  for (std::size_t i = 0; i < 8; ++i) a(i, i) *= big;
  check_smith(a);
  // entries inside int64 whose products overflow mid-reduction
  IntegerMatrix b(3, 3);
  const BigInt large = (BigInt(1) << 29) + 7;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) b(i, j) = large * (i + 1) + (j * j + 1) * 1000003;
  check_smith(b);
  auto s = smith_normal_form(b);
  BigInt product = 1;
  for (const auto& d : s.diagonal) product *= d;
  if (s.rank == 3) CHECK(product == abs(determinant(b)));
}

TEST_CASE("homology of the corpus", "[homology][profile]") {
  CHECK(betti(load("torus.json")) == std::vector<std::size_t>{1, 2, 1});
  CHECK(torsion(load("torus.json"), 1).empty());
  CHECK(betti(load("tetrahedron_boundary.json")) == std::vector<std::size_t>{1, 0, 1});
  CHECK(betti(load("genus2.json")) == std::vector<std::size_t>{1, 4, 1});
  CHECK(betti(corpus::surface_fan(3)) == std::vector<std::size_t>{1, 6, 1});
  CHECK(betti(corpus::torus(3)) == std::vector<std::size_t>{1, 3, 3, 1});
  CHECK(betti(load("s3_boundary.json")) == std::vector<std::size_t>{1, 0, 0, 1});
  CHECK(betti(load("wedge2.json")) == std::vector<std::size_t>{1, 2});

  SECTION("projective plane") {
    PrecisionScope scope(60);
    auto h = homology_profile(load("rp2.json"));
    CHECK(h.betti() == std::vector<std::size_t>{1, 0, 0});
    CHECK(h.at(1).divisors == std::vector<BigInt>{2});
    CHECK(h.at(1).tors_size == 2);
    CHECK(h.at(1).ranks_mod_p.at(2) == 1);
    CHECK(h.at(2).ranks_mod_p.at(2) == 1);
    CHECK(h.at(1).ranks_mod_p.at(3) == 0);
    CHECK(abs(h.at(1).log_tors - log(Real(2))) < Real("1e-40"));
    CHECK(h.at(0).tors_size == 1);
  }
  SECTION("three-dimensional projective space and a lens space") {
    auto rp3 = homology_profile(load("rp3.json"));
    CHECK(rp3.betti() == std::vector<std::size_t>{1, 0, 0, 1});
    CHECK(rp3.at(1).divisors == std::vector<BigInt>{2});
    CHECK(rp3.at(2).divisors.empty());
    auto lens = homology_profile(load("lens_3_1.json"));
    CHECK(lens.betti() == std::vector<std::size_t>{1, 0, 0, 1});
    CHECK(lens.at(1).divisors == std::vector<BigInt>{3});
    CHECK(lens.at(1).ranks_mod_p.at(3) == 1);
    CHECK(lens.at(1).ranks_mod_p.at(2) == 0);
  }
}

TEST_CASE("homology profile invariants", "[homology][profile][property]") {
  std::vector<DeltaComplex> corpus = {
      load("torus.json"), load("tetrahedron_boundary.json"), load("genus2.json"),
      load("rp2.json"),   load("rp3.json"),                  load("lens_3_1.json"),
      load("s3_boundary.json"), corpus::torus(3)};
  for (const auto& K : corpus) {
    auto h = homology_profile(K, {2, 3, 5, 7});
    std::int64_t alt = 0;
    for (const auto& d : h.degrees) {
      alt += (d.k % 2 == 0 ? 1 : -1) * static_cast<std::int64_t>(d.betti_q);
      CHECK((d.tors_size == 1) == d.divisors.empty());
      for (auto [p, r] : d.ranks_mod_p) CHECK(r >= d.betti_q);
    }
    CHECK(alt == euler_characteristic(K));
    CHECK(same_homology(h, homology_profile(barycentric_subdivision(K), {2, 3, 5, 7})));
  }
}

TEST_CASE("cap product", "[homology][cap]") {
  auto torus = load("torus.json");
  auto z = fundamental_cycle(torus);

  SECTION("unit 0-cochain caps to the cycle itself") {
    Cochain one(0, {{0, 1}});
    CHECK(cap_with_fundamental_cycle(torus, z, one) == z);
    auto tetra = load("tetrahedron_boundary.json");
    auto zt = fundamental_cycle(tetra);
    Cochain ones(0);
    for (SimplexId v = 0; v < tetra.vertex_count(); ++v) ones.add(v, 1);
    CHECK(cap_with_fundamental_cycle(tetra, zt, ones) == zt);
  }
  SECTION("sign exponent k(n-k)") {
    CHECK(cap_sign(2, 1) == -1);
    CHECK(cap_sign(2, 2) == 1);
    CHECK(cap_sign(3, 1) == 1);
    CHECK(cap_sign(3, 2) == 1);
    CHECK(cap_sign(4, 2) == 1);
    CHECK(cap_sign(4, 1) == -1);
  }
  SECTION("degree mismatch") {
    CHECK_THROWS_AS(cap_with_fundamental_cycle(torus, ChainVector(1), Cochain(0)),
                    PreconditionError);
    CHECK_THROWS_AS(cap_with_fundamental_cycle(torus, z, Cochain(3)), PreconditionError);
  }
  SECTION("Leibniz rule and cocycles on random cochains") {
    std::mt19937_64 rng(17);
    std::vector<DeltaComplex> spaces = {torus, load("genus2.json"),
                                        load("tetrahedron_boundary.json"),
                                        load("s3_boundary.json"), corpus::torus(3),
                                        barycentric_subdivision(torus)};
    for (const auto& K : spaces) {
      auto zk = fundamental_cycle(K);
      const int n = K.dimension();
      for (int m = 0; m < n; ++m)
        for (int trial = 0; trial < 10; ++trial) {
          auto f = svbench::testing::random_chain(K, m, rng);
          const int k = n - m;
          auto lhs = boundary(K, cap_with_fundamental_cycle(K, zk, f));
          auto rhs = cap_with_fundamental_cycle(K, zk, coboundary(K, f));
          CHECK(lhs == (k % 2 == 0 ? 1 : -1) * rhs);
          // coboundaries are cocycles; their caps are cycles
          if (m >= 1) {
            auto g = coboundary(K, svbench::testing::random_chain(K, m - 1, rng));
            CHECK(coboundary(K, g).is_zero());
            CHECK(boundary(K, cap_with_fundamental_cycle(K, zk, g)).is_zero());
          }
        }
    }
  }
}

TEST_CASE("cap-induced map has full rank on closed oriented manifolds", "[homology][cap]") {
  auto torus = load("torus.json");
  auto z = fundamental_cycle(torus);
  CHECK(pd_surjectivity_rank(torus, z, 1) == 2);
  CHECK(pd_surjectivity_rank(torus, z, 2) == 1);
  CHECK(pd_surjectivity_rank(torus, z, 0) == 1);
  auto tetra = load("tetrahedron_boundary.json");
  CHECK(pd_surjectivity_rank(tetra, fundamental_cycle(tetra), 0) == 1);
  CHECK(pd_surjectivity_rank(tetra, fundamental_cycle(tetra), 1) == 0);

  std::vector<DeltaComplex> spaces = {torus, tetra, load("genus2.json"),
                                      load("s3_boundary.json"), load("rp3.json"),
                                      load("lens_3_1.json"), corpus::torus(3)};
  for (const auto& K : spaces) {
    auto zk = fundamental_cycle(K);
    auto h = homology_profile(K, {2, 3});
    for (int k = 0; k <= K.dimension(); ++k) {
      CHECK(pd_surjectivity_rank(K, zk, k) == h.at(k).betti_q);
      for (unsigned p : {2u, 3u})
        CHECK(pd_surjectivity_rank(K, zk, k, p) == h.at(k).ranks_mod_p.at(p));
    }
  }
}

TEST_CASE("prism homotopy", "[homology][prism]") {
  auto base = parse_complex(R"({"facets": [[0, 1]]})");
  auto host = cone(base);
  REQUIRE(host.apex == 2);

  SECTION("single ordered edge") {
    OrderedChain c(1);
    c.add({0, 1}, 1);
    auto h = prism_homotopy(host, c);
    OrderedChain expected(2);
    expected.add({0, 2, 2}, -1);
    expected.add({0, 1, 2}, 1);
    CHECK(h == expected);
    CHECK(h.terms().size() == 2);
    CHECK(h.l1() == 2);
  }
  SECTION("zero chain") {
    CHECK(prism_homotopy(host, OrderedChain(1)).is_zero());
  }
  SECTION("support outside the base") {
    OrderedChain bad(1);
    bad.add({0, 2}, 1);
    CHECK_THROWS_AS(prism_homotopy(host, bad), PreconditionError);
    auto square = cone(parse_complex(R"({"facets": [[0, 1], [1, 2]]})"));
    OrderedChain far(1);
    far.add({0, 2}, 1);
    CHECK_THROWS_AS(prism_homotopy(square, far), PreconditionError);
  }
  SECTION("chain homotopy identity and norm bound on random chains") {
    std::mt19937_64 rng(23);
    std::vector<DeltaComplex> bases = {barycentric_subdivision(load("torus.json")),
                                       load("tetrahedron_boundary.json"),
                                       load("s3_boundary.json")};
    for (const auto& B : bases) {
      auto H = cone(B);
      for (int k = 0; k <= B.dimension(); ++k)
        for (int trial = 0; trial < 25; ++trial) {
          auto c = random_ordered_chain(B, k, rng, 7);
          auto h = prism_homotopy(H, c);
          CHECK(h.l1() <= (k + 1) * c.l1());
          auto lhs = ordered_boundary(h);
          if (k > 0) lhs += prism_homotopy(H, ordered_boundary(c));
          CHECK(lhs == c - collapse_to_apex(H, c));
        }
    }
  }
}

TEST_CASE("efficient fill", "[homology][fill]") {
  SECTION("boundary of one ordered triangle") {
    auto base = parse_complex(R"({"facets": [[0, 1, 2]]})");
    auto host = cone(base);
    OrderedChain sigma(2);
    sigma.add({0, 1, 2}, 1);
    auto z = ordered_boundary(sigma);
    CHECK(z.l1() == 3);
    auto b = efficient_fill(host, z);
    CHECK(ordered_boundary(b) == z);
    CHECK(b.l1() <= 9);
  }
  SECTION("zero cycle") {
    auto host = cone(load("tetrahedron_boundary.json"));
    CHECK(efficient_fill(host, OrderedChain(1)).is_zero());
  }
  SECTION("errors") {
    auto host = cone(load("tetrahedron_boundary.json"));
    OrderedChain open(1);
    open.add({0, 1}, 1);
    CHECK_THROWS_AS(efficient_fill(host, open), PreconditionError);
    OrderedChain points(0);
    CHECK_THROWS_AS(efficient_fill(host, points), PreconditionError);
  }
  SECTION("random null-homologous cycles") {
    std::mt19937_64 rng(29);
    struct Case {
      DeltaComplex base;
      int trials;
    };
    std::vector<Case> cases = {{barycentric_subdivision(load("torus.json")), 50},
                               {load("s3_boundary.json"), 25}};
    int fills = 0;
    for (const auto& [B, trials] : cases) {
      auto H = cone(B);
      const int n = B.dimension();
      for (int trial = 0; trial < trials; ++trial) {
        auto z = ordered_boundary(random_ordered_chain(B, n, rng, 5));
        auto b = efficient_fill(H, z);
        CHECK(ordered_boundary(b) == z);
        CHECK(b.l1() <= (n + 1) * z.l1());
        ++fills;
      }
      // an odd degree cycle whose collapse is nonzero: n = 2 here
      if (n == 2) {
        OrderedChain loop(1);
        auto v = B.vertices(2, 0);
        loop.add({v[0], v[0]}, 1);
        auto fill = efficient_fill(H, loop);
        CHECK(ordered_boundary(fill) == loop);
        CHECK(fill.l1() <= 3 * loop.l1());
      }
    }
    CHECK(fills == 75);
  }
}
