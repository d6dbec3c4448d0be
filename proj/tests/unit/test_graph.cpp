#include <sstream>

#include "doctest.h"
#include "motifsp/error.hpp"
#include "motifsp/graph.hpp"
#include "support.hpp"

using namespace motifsp;
using testsupport::gnp;

TEST_SUITE("graph") {
  TEST_CASE("from_edge_list canonicalizes") {
    std::vector<Edge> tri{{0, 1}, {1, 2}, {2, 0}};
    auto b = from_edge_list(tri);
    CHECK(b.graph.num_nodes() == 3);
    CHECK(b.graph.num_edges() == 3);
    CHECK(b.dropped == 0);

    std::vector<Edge> messy{{0, 1}, {1, 0}, {0, 0}};
    b = from_edge_list(messy);
    CHECK(b.graph.num_nodes() == 2);
    CHECK(b.graph.num_edges() == 1);
    CHECK(b.dropped == 2);

    std::vector<Edge> c4{{0, 1}, {1, 2}, {2, 3}, {3, 0}};
    CHECK(from_edge_list(c4).graph.num_edges() == 4);
  }

  TEST_CASE("declared node count") {
    std::vector<Edge> e{{0, 1}};
    CHECK(from_edge_list(e, 5).graph.num_nodes() == 5);
    CHECK_THROWS_AS(from_edge_list(e, 1), std::invalid_argument);
    CHECK(from_edge_list({}, std::nullopt).graph.num_nodes() == 0);
  }

  TEST_CASE("from_simple_edges rejects non-simple input") {
    std::vector<Edge> loop{{1, 1}};
    std::vector<Edge> dup{{0, 1}, {1, 0}};
    std::vector<Edge> range{{0, 3}};
    CHECK_THROWS_AS(Graph::from_simple_edges(2, loop), std::invalid_argument);
    CHECK_THROWS_AS(Graph::from_simple_edges(2, dup), std::invalid_argument);
    CHECK_THROWS_AS(Graph::from_simple_edges(3, range), std::invalid_argument);
  }

  TEST_CASE("degree sequences") {
    CHECK(degree_sequence(testsupport::complete(4)) == DegreeSequence{3, 3, 3, 3});
    CHECK(degree_sequence(testsupport::star(3)) == DegreeSequence{3, 1, 1, 1});
    CHECK(degree_sequence(testsupport::make(5, {})) == DegreeSequence{0, 0, 0, 0, 0});
  }

  TEST_CASE("structural invariants on random graphs") {
    for (std::uint64_t s = 0; s < 50; ++s) {
      Graph g = gnp(5 + s % 30, 0.05 + 0.01 * static_cast<double>(s % 20), s);
      CHECK(validate(g).empty());
      std::uint64_t sum = 0;
      for (auto d : degree_sequence(g)) sum += d;
      CHECK(sum == 2 * g.num_edges());
      for (NodeId v = 0; v < g.num_nodes(); ++v)
        for (NodeId u : g.neighbors(v)) CHECK(g.has_edge(u, v));
    }
  }

  TEST_CASE("edge-list text format") {
    CHECK(to_edge_list_string(testsupport::complete(3)) == "0 1\n0 2\n1 2\n");
    std::istringstream in("0 1\n1 2\n");
    Graph p = read_edge_list(in);
    CHECK(p == testsupport::path(3));
  }

  TEST_CASE("edge-list round trip") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      Graph g = gnp(20, 0.15, 100 + s);
      std::istringstream in(to_edge_list_string(g));
      CHECK(read_edge_list(in) == g);
    }
    Graph isolated = testsupport::make(6, {{0, 1}});
    std::istringstream in(to_edge_list_string(isolated));
    CHECK(read_edge_list(in) == isolated);
  }

  TEST_CASE("malformed edge lists") {
    for (const char* bad : {"0\n", "a b\n", "0  1\n", "0 1 2\n", "-1 2\n", "0 1x\n", " 0 1\n"}) {
      std::istringstream in(bad);
      CHECK_THROWS_AS(read_edge_list(in), DataError);
    }
    std::istringstream comments("# hello\n\n0 1\n");
    CHECK(read_edge_list(comments).num_edges() == 1);
  }

  TEST_CASE("relabel and disjoint union") {
    Graph g = gnp(15, 0.3, 7);
    auto perm = testsupport::random_perm(g.num_nodes(), 3);
    Graph h = relabel(g, perm);
    CHECK(h.num_edges() == g.num_edges());
    for (const auto& e : g.edges()) CHECK(h.has_edge(perm[e.u], perm[e.v]));
    Graph u = disjoint_union(g, h);
    CHECK(u.num_nodes() == 30);
    CHECK(u.num_edges() == 2 * g.num_edges());
    CHECK(validate(u).empty());
  }

  TEST_CASE("rewire_fraction") {
    Graph c4 = testsupport::cycle(4);
    CHECK(rewire_fraction(c4, 0.0, 1).graph == c4);

    for (std::uint64_t s = 0; s < 30; ++s) {
      auto r = rewire_fraction(c4, 1.0, s);
      CHECK(r.steps == 4);
      CHECK(r.graph.num_edges() <= 4);
      CHECK(r.graph.num_edges() == 4 - r.lost_edges);
      CHECK(validate(r.graph).empty());
    }

    Graph g = gnp(40, 0.2, 11);
    // trim to exactly 100 edges
    auto edges = g.edges();
    REQUIRE(edges.size() >= 100);
    edges.resize(100);
    Graph h = Graph::from_simple_edges(40, edges);
    auto r = rewire_fraction(h, 0.25, 5);
    CHECK(r.steps == 25);
    CHECK(r.graph.num_edges() <= 100);
    CHECK(r.graph.num_nodes() == 40);
    CHECK(rewire_fraction(h, 0.25, 5).graph == r.graph);

    CHECK_THROWS_AS(rewire_fraction(h, 1.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(rewire_fraction(testsupport::path(2), 1.0, 0), std::invalid_argument);
  }
}
