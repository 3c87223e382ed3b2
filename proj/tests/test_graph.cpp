// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "gi/graph.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace gi;
using namespace testing_helpers;

TEST_SUITE_BEGIN("graph");

TEST_CASE("graph6 parses the complete graph on three vertices") {
  const Graph g = parse_graph6("Bw");
  REQUIRE(g.size() == 3);
  CHECK(g == complete_graph(3));
  // Cross-check against the independent encoder.
  CHECK(oracle::encode_graph6(complete_graph(3).adjacency()) == "Bw");
}

TEST_CASE("graph6 parses the empty two-vertex graph") {
  const Graph g = parse_graph6("A?");
  REQUIRE(g.size() == 2);
  CHECK(g.directed_edge_count() == 0);
}

TEST_CASE("graph6 writer emits the single-vertex header only") {
  CHECK(write_graph6(Graph(1)) == "@");
}

TEST_CASE("graph6 round trip on a five-vertex payload") {
  const Graph g = parse_graph6("D?{");
  REQUIRE(g.size() == 5);
  CHECK(parse_graph6(write_graph6(g)) == g);
  CHECK(write_graph6(g) == oracle::encode_graph6(g.adjacency()));
}

TEST_CASE("graph6 round trips random graphs across the header split") {
  for (int n : {1, 2, 5, 13, 30, 62, 63, 100, 500}) {
    const Graph g = random_gnp(n, 0.31, 1000 + static_cast<std::uint64_t>(n));
    const std::string text = write_graph6(g);
    CHECK(text == oracle::encode_graph6(g.adjacency()));
    CHECK(parse_graph6(text) == g);
  }
}

TEST_CASE("graph6 rejects malformed input") {
  CHECK_THROWS_AS(parse_graph6(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_graph6("B"), std::invalid_argument);       // short payload
  CHECK_THROWS_AS(parse_graph6("Bw!"), std::invalid_argument);     // char < 63
  CHECK_THROWS_AS(parse_graph6("~~????"), std::invalid_argument);  // 8-byte header
  CHECK_THROWS_AS(parse_graph6("Bww"), std::invalid_argument);     // extra payload
}

TEST_CASE("edge list parser handles the documented forms") {
  CHECK(parse_edge_list("3 3\n0 1\n0 2\n1 2") == complete_graph(3));
  const Graph empty2 = parse_edge_list("2 0");
  CHECK(empty2.size() == 2);
  CHECK(empty2.directed_edge_count() == 0);
  const Graph p3 = parse_edge_list("3 2\n0 1\n1 2");
  CHECK(degree_sequence(p3) == std::vector<int>{1, 1, 2});
  CHECK_THROWS_AS(parse_edge_list("2 1\n0 2"), std::invalid_argument);  // range
  CHECK_THROWS_AS(parse_edge_list("2 1\n1 1"), std::invalid_argument);  // loop
  CHECK_THROWS_AS(parse_edge_list("2 1\n0 x"), std::invalid_argument);  // token
}

TEST_CASE("apply_permutation relabels edges") {
  const Graph p3 = path_graph(3);
  SUBCASE("identity is a no-op") {
    CHECK(apply_permutation(p3, Permutation::identity(3)) == p3);
  }
  SUBCASE("complete graphs are invariant") {
    CHECK(apply_permutation(complete_graph(3), Permutation({2, 0, 1})) ==
          complete_graph(3));
  }
  SUBCASE("rotating the path moves the middle vertex") {
    // Path 0-1-2 under (0->1, 1->2, 2->0) becomes 1-2-0: vertex 2 is now the
    // middle with degree 2.
    const Graph rotated = apply_permutation(p3, Permutation({1, 2, 0}));
    CHECK(rotated.has_edge(1, 2));
    CHECK(rotated.has_edge(2, 0));
    CHECK_FALSE(rotated.has_edge(0, 1));
    CHECK(rotated.degree(2) == 2);
  }
}

TEST_CASE("apply_permutation preserves invariants") {
  const Graph g = random_gnp(9, 0.4, 77);
  const Permutation p = random_permutation(9, 4);
  const Graph h = apply_permutation(g, p);
  CHECK(degree_sequence(h) == degree_sequence(g));
  CHECK(h.directed_edge_count() == g.directed_edge_count());
  CHECK(is_isomorphism(g, h, p));
}

TEST_CASE("flip_edges toggles exactly the requested number of pairs") {
  SUBCASE("a single flip can turn K3 into a path") {
    const Graph flipped = flip_edges(complete_graph(3), 1, 0);
    CHECK(flipped.directed_edge_count() == 4);  // one edge removed
    CHECK(oracle::isomorphic(flipped, path_graph(3)));
  }
  SUBCASE("zero flips is the identity") {
    const Graph g = random_gnp(7, 0.5, 5);
    CHECK(flip_edges(g, 0, 99) == g);
  }
  SUBCASE("flipping twice with one seed is an involution") {
    const Graph g = random_gnp(8, 0.5, 6);
    for (int count : {1, 2, 5}) {
      CHECK(flip_edges(flip_edges(g, count, 123), count, 123) == g);
    }
  }
  SUBCASE("the adjacency differs in exactly 2*count entries") {
    const Graph g = random_gnp(8, 0.5, 7);
    for (int count : {1, 3, 6}) {
      const Graph h = flip_edges(g, count, 321);
      int diff = 0;
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
          diff += g.adjacency()(i, j) != h.adjacency()(i, j) ? 1 : 0;
        }
      }
      CHECK(diff == 2 * count);
    }
  }
}

TEST_CASE("degree sequences of the named graphs") {
  CHECK(degree_sequence(complete_graph(3)) == std::vector<int>{2, 2, 2});
  CHECK(degree_sequence(path_graph(3)) == std::vector<int>{1, 1, 2});
  CHECK(degree_sequence(petersen()) == std::vector<int>(10, 3));
}

TEST_CASE("random regular graphs have the requested degree") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const Graph g = random_regular_graph(12, 3, seed);
    CHECK(degree_sequence(g) == std::vector<int>(12, 3));
  }
}

TEST_CASE("random permutations are seeded bijections") {
  const Permutation p = random_permutation(20, 9);
  CHECK(p == random_permutation(20, 9));
  CHECK_FALSE(p == random_permutation(20, 10));
  std::set<int> hit(p.images().begin(), p.images().end());
  CHECK(hit.size() == 20);
  const Permutation q = p.inverse();
  for (int i = 0; i < 20; ++i) CHECK(q(p(i)) == i);
}

TEST_CASE("hamming distance counts adjacency disagreements exactly") {
  const Graph a = complete_graph(3);
  const Graph b = path_graph(3);
  // Best alignment of K3 onto P3 misses one edge: two matrix entries.
  long long best = 1 << 20;
  std::vector<int> p{0, 1, 2};
  do {
    best = std::min(best, oracle::alignment_mismatch(a, b, p));
  } while (std::next_permutation(p.begin(), p.end()));
  CHECK(best == 2);
  CHECK(hamming_distance(a, b, Permutation({0, 1, 2})) ==
        oracle::alignment_mismatch(b, a, {0, 1, 2}));
}

TEST_SUITE_END();
