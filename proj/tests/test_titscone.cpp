#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "polypack/packing.hpp"
#include "polypack/rootsys.hpp"
#include "polypack/titscone.hpp"

using namespace polypack;

namespace {

RootSystem builtin_system(const std::string& name) {
  return build_root_system(build_configuration(canonical_realization(name)));
}

VectorXd unit_weight(int m, int i) {
  VectorXd e = VectorXd::Zero(m);
  e[i] = 1.0;
  return e;
}

}  // namespace

TEST_CASE("chart transform carries the dual form to the Minkowski form") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (const auto& name : {"tetrahedron", "octahedron", "cube"}) {
    INFO(name);
    auto rs = builtin_system(name);
    Mat4 T = chart_transform(rs);
    Mat4 form = Mat4::Zero();
    form.diagonal() << 1, 1, 1, -1;
    // pulled back through the chart, the Minkowski form is the circle pairing
    REQUIRE((T.transpose() * form * T - form_P()).cwiseAbs().maxCoeff() < 1e-12);
    for (int trial = 0; trial < 10; ++trial) {
      VectorXd s(rs.m());
      for (int i = 0; i < rs.m(); ++i) s[i] = gauss(rng);
      auto p = project_rp3(rs, s);
      Vec4 x = rs.C * s;
      REQUIRE(p.form_value() ==
              Catch::Approx(x.dot(form_P() * x)).margin(1e-9 * x.squaredNorm()));
    }
  }
}

TEST_CASE("fundamental weights project to the polyhedron vertices") {
  for (const auto& name : {"tetrahedron", "octahedron", "cube", "icosahedron"}) {
    INFO(name);
    auto r = canonical_realization(name);
    auto rs = build_root_system(build_configuration(r));
    for (int i = 0; i < rs.m(); ++i) {
      auto p = project_rp3(rs, unit_weight(rs.m(), i));
      REQUIRE(classify_causal(p) == CausalType::Spacelike);
      REQUIRE((p.affine() - r.vertices[i]).norm() < 1e-9);
    }
  }
}

TEST_CASE("polyhedron edges touch the lightlike sphere at their midpoints") {
  auto r = canonical_realization("octahedron");
  auto rs = build_root_system(build_configuration(r));
  auto adj = rs.graph.vertex_adjacency();
  for (int i = 0; i < rs.m(); ++i)
    for (int j = i + 1; j < rs.m(); ++j) {
      auto mid = project_rp3(rs, 0.5 * (unit_weight(rs.m(), i) + unit_weight(rs.m(), j)));
      if (adj[i][j]) {
        REQUIRE(classify_causal(mid) == CausalType::Lightlike);
        REQUIRE(mid.affine().norm() == Catch::Approx(1.0).margin(1e-9));
      } else {
        REQUIRE(classify_causal(mid) == CausalType::Timelike);
      }
    }
}

TEST_CASE("curvature tuples transported by the dual form are lightlike") {
  auto cfg = normalize_bounded(build_configuration(canonical_realization("octahedron"))).first;
  auto rs = build_root_system(cfg);
  for (const auto& node : enumerate_orbit(cfg, 2)) {
    auto p = project_rp3(rs, rs.G_tilde * node.curvatures());
    REQUIRE(classify_causal(p, 1e-6) == CausalType::Lightlike);
  }
}

TEST_CASE("partial sums of the generating series start at the base term") {
  for (const auto& name : {"tetrahedron", "octahedron"}) {
    INFO(name);
    auto cfg = normalize_bounded(build_configuration(canonical_realization(name))).first;
    auto rs = build_root_system(cfg);
    auto base = descend_to_base(rs, orbit_root(cfg).curvatures()).base;
    int mult = classify_multiplicity(rs, base).multiplicity;
    VectorXd s = VectorXd::Ones(rs.m());
    auto z0 = z_partial(rs, base, s, 0);
    REQUIRE(z0.terms == 1);
    REQUIRE(z0.value == Catch::Approx(mult * std::exp(-base.dot(s))).epsilon(1e-12));
  }
}

TEST_CASE("partial sums saturate instead of overflowing") {
  auto cfg = normalize_bounded(build_configuration(canonical_realization("tetrahedron"))).first;
  auto rs = build_root_system(cfg);
  auto base = descend_to_base(rs, orbit_root(cfg).curvatures()).base;
  auto z = z_partial(rs, base, -1000.0 * VectorXd::Ones(4), 3);
  REQUIRE(z.saturated);
  REQUIRE(std::isinf(z.value));
}

TEST_CASE("interior points have geometrically bounded series tails") {
  auto cfg = normalize_bounded(build_configuration(canonical_realization("tetrahedron"))).first;
  auto rs = build_root_system(cfg);
  auto base = descend_to_base(rs, orbit_root(cfg).curvatures()).base;
  VectorXd s = VectorXd::Ones(4);  // all root pairings strictly positive
  VectorXd root_dots = rs.roots.transpose() * s;
  REQUIRE(root_dots.minCoeff() > 0.1);

  double mu = growth_lower_bound_check(rs, base, {}).mu;
  double nu = root_dots.minCoeff();
  int n = rs.n();
  auto tail_bound = [&](int depth) {
    double t = 0;
    for (int k = depth + 1; k < depth + 200; ++k)
      t += n * std::pow(n - 1.0, k - 1) * std::exp(-mu * nu * k * (k - 2.0) / 4.0);
    return std::exp(-base.dot(s)) * t;
  };
  auto z6 = z_partial(rs, base, s, 6);
  auto z8 = z_partial(rs, base, s, 8);
  REQUIRE_FALSE(z8.saturated);
  REQUIRE(z8.value >= z6.value);
  REQUIRE(z8.value - z6.value <= tail_bound(6) + 1e-12);
}

TEST_CASE("the series value is symmetric under transposed generators") {
  auto cfg = normalize_bounded(build_configuration(canonical_realization("tetrahedron"))).first;
  auto rs = build_root_system(cfg);
  auto base = descend_to_base(rs, orbit_root(cfg).curvatures()).base;
  VectorXd s = 2.0 * VectorXd::Ones(4);  // deep interior: tails far below tolerance
  for (int j = 0; j < rs.n(); ++j) {
    VectorXd sj = s - 2.0 * (rs.G_tilde * rs.roots.col(j)) * rs.roots.col(j).dot(s);
    auto za = z_partial(rs, base, s, 8);
    auto zb = z_partial(rs, base, sj, 8);
    REQUIRE(za.value == Catch::Approx(zb.value).epsilon(1e-9));
  }
}

TEST_CASE("membership trichotomy on the canonical examples") {
  auto rs = builtin_system("octahedron");
  VectorXd ones = VectorXd::Ones(rs.m());

  auto conv = membership(rs, ones);
  REQUIRE(conv.verdict == MembershipVerdict::Converges);
  REQUIRE(conv.word.empty());

  auto div = membership(rs, -ones);
  REQUIRE(div.verdict == MembershipVerdict::Diverges);
  REQUIRE(div.iterations == 0);

  // fundamental weights: the roots of the four incident faces pair to zero
  for (int i = 0; i < rs.m(); ++i) {
    auto res = membership(rs, unit_weight(rs.m(), i));
    REQUIRE(res.verdict == MembershipVerdict::Diverges);
    int zeros = 0;
    for (int j = 0; j < rs.n(); ++j)
      if (std::abs(res.final_pairings[j]) <= 1e-9) ++zeros;
    REQUIRE(zeros >= 2);
  }
}

TEST_CASE("membership verdicts are invariant under the transposed action") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  auto rs = builtin_system("tetrahedron");
  int determined = 0;
  for (int trial = 0; trial < 50; ++trial) {
    VectorXd s(rs.m());
    for (int i = 0; i < rs.m(); ++i) s[i] = gauss(rng);
    auto res = membership(rs, s);
    if (res.verdict == MembershipVerdict::Undetermined) continue;
    ++determined;
    for (int j = 0; j < rs.n(); ++j) {
      VectorXd sj = s - 2.0 * (rs.G_tilde * rs.roots.col(j)) * rs.roots.col(j).dot(s);
      REQUIRE(membership(rs, sj).verdict == res.verdict);
    }
  }
  REQUIRE(determined > 10);
}

TEST_CASE("the convergence domain is convex on sampled verdicts") {
  std::mt19937_64 rng(29);
  std::normal_distribution<double> gauss;
  auto rs = builtin_system("octahedron");
  std::vector<VectorXd> inside;
  while (inside.size() < 12) {
    VectorXd s = VectorXd::Ones(rs.m());
    for (int i = 0; i < rs.m(); ++i) s[i] += 0.8 * gauss(rng);
    if (membership(rs, s).verdict == MembershipVerdict::Converges) inside.push_back(s);
  }
  for (size_t a = 0; a < inside.size(); ++a)
    for (size_t b = a + 1; b < inside.size(); ++b)
      REQUIRE(membership(rs, 0.5 * (inside[a] + inside[b])).verdict ==
              MembershipVerdict::Converges);
}

TEST_CASE("weight cloud starts at the fundamental weights and stays spacelike") {
  auto rs = builtin_system("octahedron");
  auto cloud0 = weight_cloud(rs, 0);
  REQUIRE(static_cast<int>(cloud0.size()) == rs.m());
  for (const auto& wp : cloud0) REQUIRE(wp.word.empty());

  auto cloud2 = weight_cloud(rs, 2);
  REQUIRE(cloud2.size() > cloud0.size());
  for (const auto& wp : cloud2) {
    REQUIRE(classify_causal(wp.point) == CausalType::Spacelike);
    REQUIRE(wp.point.affine().norm() > 1.0);
  }
}

TEST_CASE("tangent cones follow the polar-plane formula") {
  ProjectivePoint p;
  p.y = Vec4(0, 0, std::numbers::sqrt2, 1);
  auto cone = tangent_cone(p);
  REQUIRE((cone.base_center - Vec3(0, 0, 1.0 / std::numbers::sqrt2)).norm() < 1e-12);
  REQUIRE(cone.base_radius == Catch::Approx(1.0 / std::numbers::sqrt2));

  // base circle lies on the unit sphere and the cone edge meets it tangentially
  double rim = (cone.base_center + cone.base_radius * Vec3(1, 0, 0)).norm();
  REQUIRE(rim == Catch::Approx(1.0));

  ProjectivePoint timelike;
  timelike.y = Vec4(0.1, 0, 0, 1);
  REQUIRE_THROWS(tangent_cone(timelike));
}

TEST_CASE("depth-zero cones reproduce the initial packing on the sphere") {
  auto rs = builtin_system("octahedron");
  auto cloud = weight_cloud(rs, 0);
  std::vector<TangentCone> cones;
  for (const auto& wp : cloud) cones.push_back(tangent_cone(wp.point));
  auto adj = rs.graph.vertex_adjacency();
  for (int i = 0; i < rs.m(); ++i)
    for (int j = i + 1; j < rs.m(); ++j) {
      // adjacent apexes: connecting segment tangent to the sphere, so the base
      // circles of the two cones touch
      Vec3 a = cones[i].apex, b = cones[j].apex;
      Vec3 d = b - a;
      double t = -a.dot(d) / d.squaredNorm();
      double dist = (a + t * d).norm();
      if (adj[i][j])
        REQUIRE(dist == Catch::Approx(1.0).margin(1e-9));
      else
        REQUIRE(dist < 1.0 - 1e-6);
    }
}

TEST_CASE("transposed reflections act as classical sphere inversions") {
  for (const auto& name : {"tetrahedron", "octahedron", "cube"}) {
    INFO(name);
    auto rs = builtin_system(name);
    for (int j = 0; j < rs.n(); ++j) {
      auto report = verify_inversion_action(rs, j, 200);
      REQUIRE(report.samples_used == 200);
      REQUIRE(report.max_deviation < 1e-8);
    }
  }
}

TEST_CASE("weight cloud accumulates toward the residual set") {
  auto rs = builtin_system("tetrahedron");
  // deep cloud points with tiny base circles sit close to the residual set
  auto deep = weight_cloud(rs, 7);
  std::vector<Vec3> targets;
  for (const auto& wp : deep) {
    auto cone = tangent_cone(wp.point);
    if (cone.base_radius < 0.03) targets.push_back(cone.base_center.normalized());
  }
  REQUIRE(targets.size() > 10);
  auto eps = [&](int depth) {
    auto cloud = weight_cloud(rs, depth);
    double worst = 0;
    for (const auto& q : targets) {
      double best = 1e300;
      for (const auto& wp : cloud) best = std::min(best, (wp.point.affine() - q).norm());
      worst = std::max(worst, best);
    }
    return worst;
  };
  double e4 = eps(4), e6 = eps(6);
  REQUIRE(e6 < e4);
}

TEST_CASE("cone mesh export carries the sphere, polyhedron, and cones") {
  auto rs = builtin_system("octahedron");
  auto mesh = export_cone_mesh(rs, 1);
  REQUIRE(mesh.contains("sphere"));
  REQUIRE(mesh["sphere"]["radius"] == 1.0);
  REQUIRE(mesh["polyhedron"]["vertices"].size() == 6);
  REQUIRE(mesh["polyhedron"]["faces"].size() == 8);
  // 6 initial apexes plus the distinct depth-1 images
  auto mesh0 = export_cone_mesh(rs, 0);
  REQUIRE(mesh0["cones"].size() == 6);
  REQUIRE(mesh["cones"].size() > mesh0["cones"].size());
  for (const auto& cone : mesh["cones"]) {
    REQUIRE(cone.contains("apex"));
    REQUIRE(cone.contains("base_center"));
    REQUIRE(cone["base_radius"].get<double>() > 0.0);
    REQUIRE(cone.contains("word"));
  }
}
