#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "polypack/midsphere.hpp"

using namespace polypack;

TEST_CASE("canonical solids touch the unit midsphere along every edge") {
  for (const auto& name : builtin_names()) {
    auto r = canonical_realization(name);
    INFO(name);
    REQUIRE(std::abs(max_edge_residual(r)) < 1e-12);
    for (const auto& v : r.vertices) REQUIRE(v.norm() > 1.0);
    for (int f = 0; f < r.graph.face_count(); ++f) {
      auto [n, delta] = face_plane(r, f);
      REQUIRE(delta > 0);
      REQUIRE(delta < 1.0);
      for (int v : r.graph.faces[f])
        REQUIRE(std::abs(n.dot(r.vertices[v]) - delta) < 1e-12);
    }
  }
}

TEST_CASE("octahedron vertex circles match hand values") {
  auto r = canonical_realization("octahedron");
  // Vertex at (0,0,sqrt(2)): projection of its tangency cap is the circle of
  // radius sqrt(2)+1 about the origin, oriented outward; the antipodal vertex
  // gives the inward circle of radius sqrt(2)-1.
  int top = -1, bottom = -1;
  for (int i = 0; i < 6; ++i) {
    if ((r.vertices[i] - Vec3(0, 0, std::sqrt(2.0))).norm() < 1e-9) top = i;
    if ((r.vertices[i] - Vec3(0, 0, -std::sqrt(2.0))).norm() < 1e-9) bottom = i;
  }
  REQUIRE(top >= 0);
  REQUIRE(bottom >= 0);
  OrientedCircle ct = vertex_circle(r, top);
  OrientedCircle cb = vertex_circle(r, bottom);
  REQUIRE(ct.curvature() < 0);
  REQUIRE(ct.radius() == Catch::Approx(std::sqrt(2.0) + 1.0));
  REQUIRE(cb.curvature() > 0);
  REQUIRE(cb.radius() == Catch::Approx(std::sqrt(2.0) - 1.0));
  REQUIRE(pairing(ct, cb) == Catch::Approx(-3.0));
}

TEST_CASE("vertex circles of adjacent vertices are tangent") {
  for (const auto& name : builtin_names()) {
    auto r = canonical_realization(name);
    INFO(name);
    for (const auto& [i, j] : r.graph.edge_set()) {
      double p = pairing(vertex_circle(r, i), vertex_circle(r, j));
      REQUIRE(p == Catch::Approx(-1.0).margin(1e-9));
    }
  }
}

TEST_CASE("face circles are orthogonal to their vertex circles") {
  for (const auto& name : builtin_names()) {
    auto r = canonical_realization(name);
    INFO(name);
    for (int f = 0; f < r.graph.face_count(); ++f) {
      OrientedCircle fc = face_circle(r, f);
      REQUIRE(pairing(fc, fc) == Catch::Approx(1.0).margin(1e-9));
      for (int v : r.graph.faces[f])
        REQUIRE(std::abs(pairing(fc, vertex_circle(r, v))) < 1e-9);
    }
  }
}

TEST_CASE("projected cap interior matches the spherical cap") {
  // The cap {x . n > delta} around n = (0,0,1) with delta = 1/2 contains the
  // projection pole, so its image is the exterior of the disc of radius
  // sqrt(3): an outward circle.
  OrientedCircle c = projected_cap(Vec3(0, 0, 1), 0.5);
  REQUIRE(c.curvature() < 0);
  REQUIRE(c.radius() == Catch::Approx(std::sqrt(3.0)));
  REQUIRE(!point_in_interior(Vec2(0, 0), c));
  REQUIRE(point_in_interior(Vec2(2, 0), c));
  // The opposite cap projects to the interior of the disc of radius 1/sqrt(3).
  OrientedCircle d = projected_cap(Vec3(0, 0, -1), 0.5);
  REQUIRE(d.curvature() > 0);
  REQUIRE(d.radius() == Catch::Approx(1.0 / std::sqrt(3.0)));
  REQUIRE(point_in_interior(Vec2(0, 0), d));
}

TEST_CASE("tangency points sit on the unit sphere at the right spot") {
  auto r = canonical_realization("cube");
  for (const auto& [i, j] : r.graph.edge_set()) {
    Vec3 t = tangency_point(r.vertices[i], r.vertices[j]);
    REQUIRE(t.norm() == Catch::Approx(1.0).margin(1e-12));
    // Tangency point is on the segment.
    Vec3 u = r.vertices[j] - r.vertices[i];
    double s = (t - r.vertices[i]).dot(u) / u.squaredNorm();
    REQUIRE(s > 0.0);
    REQUIRE(s < 1.0);
  }
}

TEST_CASE("midsphere solver recovers the tetrahedron") {
  auto g = canonical_realization("tetrahedron").graph;
  MidsphereSolveStats stats;
  auto r = solve_midsphere(g, 1e-10, 400, &stats);
  REQUIRE(std::abs(max_edge_residual(r)) < 1e-8);
  // Gauge: all tangency points sum to (roughly) zero keeps it centered.
  for (const auto& v : r.vertices) REQUIRE(v.norm() > 1.0);
}

TEST_CASE("midsphere solver handles every builtin graph") {
  for (const auto& name : builtin_names()) {
    auto g = canonical_realization(name).graph;
    INFO(name);
    auto r = solve_midsphere(g);
    REQUIRE(std::abs(max_edge_residual(r)) < 1e-8);
  }
}

TEST_CASE("solved realizations reproduce canonical pairing tables") {
  for (const auto& name : {"tetrahedron", "octahedron", "cube"}) {
    auto canon = canonical_realization(name);
    auto solved = solve_midsphere(canon.graph);
    INFO(name);
    int m = canon.graph.vertex_count;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double a = pairing(vertex_circle(canon, i), vertex_circle(canon, j));
        double b = pairing(vertex_circle(solved, i), vertex_circle(solved, j));
        REQUIRE(a == Catch::Approx(b).margin(1e-6));
      }
  }
}
