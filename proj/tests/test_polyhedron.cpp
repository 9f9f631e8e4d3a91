#include <catch2/catch_amalgamated.hpp>

#include "polypack/midsphere.hpp"
#include "polypack/polyhedron.hpp"

using namespace polypack;

namespace {

PolyhedronGraph tetrahedron_graph() {
  PolyhedronGraph g;
  g.name = "tetrahedron";
  g.vertex_count = 4;
  g.faces = {{0, 1, 2}, {0, 3, 1}, {1, 3, 2}, {2, 3, 0}};
  return g;
}

}  // namespace

TEST_CASE("tetrahedron graph validates") {
  auto g = tetrahedron_graph();
  auto rep = validate_graph(g);
  REQUIRE(rep.ok());
  REQUIRE(g.edge_count() == 6);
  REQUIRE(g.face_count() == 4);
}

TEST_CASE("all builtin graphs validate and satisfy Euler's formula") {
  for (const auto& name : builtin_names()) {
    auto g = canonical_realization(name).graph;
    auto rep = validate_graph(g);
    INFO(name);
    for (const auto& e : rep.errors) INFO(e);
    REQUIRE(rep.ok());
    REQUIRE(g.vertex_count - g.edge_count() + g.face_count() == 2);
  }
}

TEST_CASE("missing face breaks the two-sided edge condition") {
  auto g = tetrahedron_graph();
  g.faces.pop_back();
  auto rep = validate_graph(g);
  REQUIRE(!rep.ok());
}

TEST_CASE("duplicated face is rejected") {
  auto g = tetrahedron_graph();
  g.faces.push_back(g.faces[0]);
  REQUIRE(!validate_graph(g).ok());
}

TEST_CASE("reversed face orientation is rejected") {
  auto g = tetrahedron_graph();
  std::reverse(g.faces[2].begin(), g.faces[2].end());
  auto rep = validate_graph(g);
  REQUIRE(!rep.ok());
  bool mentions_direction = false;
  for (const auto& e : rep.errors)
    if (e.find("direction") != std::string::npos) mentions_direction = true;
  REQUIRE(mentions_direction);
}

TEST_CASE("graph with a 2-cut is rejected") {
  // Two tetrahedra glued along an edge shared by both: vertices 0,1 form a
  // 2-cut separating 2,3 from 4,5.
  PolyhedronGraph g;
  g.vertex_count = 6;
  g.faces = {{0, 1, 2}, {0, 2, 3}, {0, 3, 1},  // left book
             {1, 4, 0}, {0, 4, 5}, {0, 5, 1},  // right book
             {1, 3, 2}, {1, 5, 4}};
  // This gluing is not planar-consistent; whatever fails first, it must fail.
  REQUIRE(!validate_graph(g).ok());
}

TEST_CASE("dual of the tetrahedron is a tetrahedron") {
  auto d = dual_graph(tetrahedron_graph());
  REQUIRE(d.vertex_count == 4);
  REQUIRE(d.face_count() == 4);
  REQUIRE(validate_graph(d).ok());
}

TEST_CASE("dual of the octahedron is cube-combinatorial") {
  auto oct = canonical_realization("octahedron").graph;
  auto d = dual_graph(oct);
  REQUIRE(d.vertex_count == 8);
  REQUIRE(d.face_count() == 6);
  REQUIRE(validate_graph(d).ok());
  for (const auto& f : d.faces) REQUIRE(f.size() == 4);
}

TEST_CASE("double dual returns the original combinatorics") {
  for (const auto& name : builtin_names()) {
    auto g = canonical_realization(name).graph;
    auto dd = dual_graph(dual_graph(g));
    INFO(name);
    REQUIRE(same_combinatorics(g, dd));
  }
}
