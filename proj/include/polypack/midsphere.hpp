#pragma once

// Edge-tangent (midsphere) realizations of polyhedra: canonical coordinates
// for built-in solids, a least-squares midsphere solver for arbitrary
// 3-connected planar graphs, and the vertex/face circles on the sphere
// projected stereographically to the plane.

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "polypack/inversive.hpp"
#include "polypack/polyhedron.hpp"

namespace polypack {

struct MidsphereRealization {
  PolyhedronGraph graph;
  std::vector<Vec3> vertices;  // all strictly outside the unit midsphere
};

// Closest point to the origin on the line through a and b.
inline Vec3 tangency_point(const Vec3& a, const Vec3& b) {
  Vec3 u = b - a;
  return a - (a.dot(u) / u.squaredNorm()) * u;
}

inline double edge_tangency_residual(const Vec3& a, const Vec3& b) {
  return (a.cross(b)).norm() / (a - b).norm() - 1.0;
}

inline double max_edge_residual(const MidsphereRealization& r) {
  double worst = 0.0;
  for (const auto& [i, j] : r.graph.edge_set())
    worst = std::max(worst, std::abs(edge_tangency_residual(r.vertices[i], r.vertices[j])));
  return worst;
}

// Plane n.x = delta (|n| = 1, delta > 0) through the vertices of a face.
inline std::pair<Vec3, double> face_plane(const MidsphereRealization& r, int face) {
  const auto& f = r.graph.faces[face];
  Vec3 centroid = Vec3::Zero();
  for (int v : f) centroid += r.vertices[v];
  centroid /= static_cast<double>(f.size());
  Eigen::MatrixXd pts(f.size(), 3);
  for (size_t i = 0; i < f.size(); ++i) pts.row(i) = (r.vertices[f[i]] - centroid).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pts, Eigen::ComputeFullV);
  Vec3 n = svd.matrixV().col(2);
  double delta = n.dot(centroid);
  if (delta < 0) {
    n = -n;
    delta = -delta;
  }
  return {n, delta};
}

// Stereographic projection from (0,0,1) onto z = 0 of the circle cut from the
// unit sphere by the plane n.x = delta; the returned orientation makes the
// interior the image of the cap {x : n.x > delta}. Requires |delta| < 1.
inline OrientedCircle projected_cap(const Vec3& n, double delta) {
  double s = std::sqrt(1.0 - delta * delta);
  return OrientedCircle((n[2] + delta) / s, -(n[2] - delta) / s, n[0] / s, n[1] / s);
}

// Circle in which the cone tangent to the sphere with apex at the vertex
// touches the sphere, projected to the plane. Interior = image of the
// spherical cap facing the vertex.
inline OrientedCircle vertex_circle(const MidsphereRealization& r, int vertex) {
  Vec3 v = r.vertices[vertex];
  double d = v.norm();
  if (d <= 1.0 + 1e-12)
    throw std::domain_error("vertex_circle: vertex " + std::to_string(vertex) +
                            " is not outside the midsphere");
  return projected_cap(v / d, 1.0 / d);
}

// Circle in which the face plane cuts the sphere, projected to the plane.
// Interior = image of the cap beyond the face plane.
inline OrientedCircle face_circle(const MidsphereRealization& r, int face) {
  auto [n, delta] = face_plane(r, face);
  if (delta >= 1.0 - 1e-12)
    throw std::domain_error("face_circle: face plane does not cut the sphere");
  return projected_cap(n, delta);
}

namespace detail {

// Triangle faces from mutual adjacency at the minimum nonzero vertex distance,
// oriented outward. Works for the triangle-faced Platonic solids.
inline std::vector<std::vector<int>> triangle_faces(const std::vector<Vec3>& verts) {
  int m = static_cast<int>(verts.size());
  double edge = 1e300;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) edge = std::min(edge, (verts[i] - verts[j]).norm());
  auto adjacent = [&](int i, int j) {
    return i != j && (verts[i] - verts[j]).norm() < edge * 1.0001;
  };
  std::vector<std::vector<int>> faces;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        if (!(adjacent(i, j) && adjacent(j, k) && adjacent(i, k))) continue;
        Vec3 normal = (verts[j] - verts[i]).cross(verts[k] - verts[i]);
        Vec3 centroid = (verts[i] + verts[j] + verts[k]) / 3.0;
        if (normal.dot(centroid) > 0)
          faces.push_back({i, j, k});
        else
          faces.push_back({i, k, j});
      }
  return faces;
}

inline Vec3 newell_normal(const std::vector<Vec3>& pts) {
  Vec3 n = Vec3::Zero();
  for (size_t i = 0; i < pts.size(); ++i) {
    const Vec3& a = pts[i];
    const Vec3& b = pts[(i + 1) % pts.size()];
    n += a.cross(b);
  }
  return n;
}

}  // namespace detail

// Polar dual realization: dual vertex for face f is the pole n/delta of its
// plane. Shares the midsphere and the edge tangency points with the input.
inline MidsphereRealization canonical_dual(const MidsphereRealization& r,
                                           const std::string& name = "") {
  MidsphereRealization d;
  d.graph = dual_graph(r.graph);
  if (!name.empty()) d.graph.name = name;
  for (int f = 0; f < r.graph.face_count(); ++f) {
    auto [n, delta] = face_plane(r, f);
    d.vertices.push_back(n / delta);
  }
  // dual_graph fixes a consistent rotational orientation; flip globally if it
  // came out inward.
  std::vector<Vec3> first;
  for (int v : d.graph.faces[0]) first.push_back(d.vertices[v]);
  Vec3 centroid = Vec3::Zero();
  for (const auto& p : first) centroid += p;
  centroid /= static_cast<double>(first.size());
  if (detail::newell_normal(first).dot(centroid) < 0)
    for (auto& f : d.graph.faces) std::reverse(f.begin(), f.end());
  return d;
}

inline MidsphereRealization prism_realization(int n) {
  if (n < 3) throw std::invalid_argument("prism_realization: need n >= 3");
  MidsphereRealization r;
  r.graph.name = std::to_string(n) + "-prism";
  r.graph.vertex_count = 2 * n;
  double h = std::sin(std::numbers::pi / n);
  for (int k = 0; k < n; ++k) {
    double t = 2.0 * std::numbers::pi * k / n;
    r.vertices.emplace_back(std::cos(t), std::sin(t), h);
  }
  for (int k = 0; k < n; ++k) {
    double t = 2.0 * std::numbers::pi * k / n;
    r.vertices.emplace_back(std::cos(t), std::sin(t), -h);
  }
  std::vector<int> top, bottom;
  for (int k = 0; k < n; ++k) top.push_back(k);
  bottom.push_back(n);
  for (int k = n - 1; k >= 1; --k) bottom.push_back(n + k);
  r.graph.faces.push_back(top);
  r.graph.faces.push_back(bottom);
  for (int k = 0; k < n; ++k) {
    int k1 = (k + 1) % n;
    r.graph.faces.push_back({k1, k, n + k, n + k1});
  }
  return r;
}

inline std::vector<std::string> builtin_names() {
  return {"tetrahedron", "octahedron",       "cube",
          "icosahedron", "dodecahedron",     "triangular_prism",
          "pentagonal_prism"};
}

inline MidsphereRealization canonical_realization(const std::string& name) {
  if (name == "tetrahedron") {
    MidsphereRealization r;
    r.graph.name = name;
    r.graph.vertex_count = 4;
    r.vertices = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    r.graph.faces = detail::triangle_faces(r.vertices);
    return r;
  }
  if (name == "octahedron") {
    MidsphereRealization r;
    r.graph.name = name;
    r.graph.vertex_count = 6;
    double s = std::numbers::sqrt2;
    r.vertices = {{s, 0, 0}, {-s, 0, 0}, {0, s, 0}, {0, -s, 0}, {0, 0, s}, {0, 0, -s}};
    r.graph.faces = detail::triangle_faces(r.vertices);
    return r;
  }
  if (name == "icosahedron") {
    MidsphereRealization r;
    r.graph.name = name;
    r.graph.vertex_count = 12;
    double phi = std::numbers::phi;
    for (double a : {-1.0, 1.0})
      for (double b : {-phi, phi}) {
        r.vertices.emplace_back(0, a, b);
        r.vertices.emplace_back(a, b, 0);
        r.vertices.emplace_back(b, 0, a);
      }
    for (auto& v : r.vertices) v /= phi;  // midradius of the raw coordinates is phi
    r.graph.faces = detail::triangle_faces(r.vertices);
    return r;
  }
  if (name == "cube") return canonical_dual(canonical_realization("octahedron"), "cube");
  if (name == "dodecahedron")
    return canonical_dual(canonical_realization("icosahedron"), "dodecahedron");
  if (name == "triangular_prism") return prism_realization(3);
  if (name == "pentagonal_prism") return prism_realization(5);
  throw std::invalid_argument("canonical_realization: unknown name '" + name + "'");
}

namespace detail {

// Tutte barycentric embedding with the first face pinned to the unit circle.
inline std::vector<Vec2> tutte_embedding(const PolyhedronGraph& g) {
  int m = g.vertex_count;
  const auto& outer = g.faces[0];
  std::vector<int> pin(m, -1);
  for (size_t i = 0; i < outer.size(); ++i) pin[outer[i]] = static_cast<int>(i);
  auto adj = g.vertex_adjacency();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, 2);
  for (int i = 0; i < m; ++i) {
    if (pin[i] >= 0) {
      L(i, i) = 1.0;
      double t = 2.0 * std::numbers::pi * pin[i] / outer.size();
      rhs(i, 0) = std::cos(t);
      rhs(i, 1) = std::sin(t);
    } else {
      int deg = 0;
      for (int j = 0; j < m; ++j)
        if (adj[i][j]) {
          L(i, j) = -1.0;
          ++deg;
        }
      L(i, i) = deg;
    }
  }
  Eigen::MatrixXd sol = L.fullPivLu().solve(rhs);
  std::vector<Vec2> out(m);
  for (int i = 0; i < m; ++i) out[i] = Vec2(sol(i, 0), sol(i, 1));
  return out;
}

inline Vec3 inverse_stereographic(const Vec2& u) {
  double q = u.squaredNorm();
  return Vec3(2 * u[0], 2 * u[1], q - 1) / (q + 1);
}

}  // namespace detail

struct MidsphereSolveStats {
  int iterations = 0;
  double residual = 0.0;
};

// Levenberg-Marquardt on free vertex positions, minimizing squared
// edge-tangency residuals plus the gauge condition that the tangency points
// sum to zero. Seeded from a Tutte embedding lifted to the sphere.
inline MidsphereRealization solve_midsphere(const PolyhedronGraph& g, double tol = 1e-10,
                                            int max_iter = 400,
                                            MidsphereSolveStats* stats = nullptr) {
  auto rep = validate_graph(g);
  if (!rep.ok())
    throw std::invalid_argument("solve_midsphere: invalid graph: " + rep.errors.front());
  if (!(tol > 0)) throw std::invalid_argument("solve_midsphere: tol must be positive");

  int m = g.vertex_count;
  auto edge_pairs = g.edge_set();
  std::vector<std::pair<int, int>> edges(edge_pairs.begin(), edge_pairs.end());
  int ne = static_cast<int>(edges.size());

  // Seed: Tutte plane, scale chosen to roughly balance the lift, lift to the
  // sphere, push radially outward.
  auto plane = detail::tutte_embedding(g);
  double best_scale = 1.0, best_norm = 1e300;
  for (double ls = -2.0; ls <= 2.0; ls += 0.05) {
    double s = std::pow(10.0, ls);
    Vec3 centroid = Vec3::Zero();
    for (const auto& u : plane) centroid += detail::inverse_stereographic(s * u);
    if (centroid.norm() < best_norm) {
      best_norm = centroid.norm();
      best_scale = s;
    }
  }
  Eigen::VectorXd x(3 * m);
  for (int i = 0; i < m; ++i)
    x.segment<3>(3 * i) = 1.4 * detail::inverse_stereographic(best_scale * plane[i]);

  int nr = ne + 3;
  auto eval = [&](const Eigen::VectorXd& y, Eigen::VectorXd& r) {
    Vec3 tsum = Vec3::Zero();
    for (int e = 0; e < ne; ++e) {
      Vec3 a = y.segment<3>(3 * edges[e].first);
      Vec3 b = y.segment<3>(3 * edges[e].second);
      r[e] = edge_tangency_residual(a, b);
      tsum += tangency_point(a, b);
    }
    r.segment<3>(ne) = 0.25 * tsum;
  };

  Eigen::VectorXd r(nr), rtrial(nr);
  eval(x, r);
  double lambda = 1e-3;
  int it = 0;
  for (; it < max_iter; ++it) {
    double edge_res = r.head(ne).cwiseAbs().maxCoeff();
    if (edge_res <= tol && r.tail(3).cwiseAbs().maxCoeff() <= 1e-7) break;

    Eigen::MatrixXd J(nr, 3 * m);
    Eigen::VectorXd xp = x, rp(nr), rm(nr);
    for (int k = 0; k < 3 * m; ++k) {
      double h = 1e-6 * std::max(1.0, std::abs(x[k]));
      xp[k] = x[k] + h;
      eval(xp, rp);
      xp[k] = x[k] - h;
      eval(xp, rm);
      xp[k] = x[k];
      J.col(k) = (rp - rm) / (2 * h);
    }
    Eigen::MatrixXd JtJ = J.transpose() * J;
    Eigen::VectorXd Jtr = J.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      Eigen::MatrixXd A = JtJ + lambda * Eigen::MatrixXd::Identity(3 * m, 3 * m);
      Eigen::VectorXd step = A.ldlt().solve(-Jtr);
      Eigen::VectorXd xtrial = x + step;
      eval(xtrial, rtrial);
      if (rtrial.squaredNorm() < r.squaredNorm()) {
        x = xtrial;
        r = rtrial;
        lambda = std::max(lambda * 0.3, 1e-14);
        accepted = true;
      } else {
        lambda *= 10.0;
      }
    }
    if (!accepted) break;
  }

  MidsphereRealization out;
  out.graph = g;
  out.vertices.resize(m);
  for (int i = 0; i < m; ++i) out.vertices[i] = x.segment<3>(3 * i);

  // Rotational gauge: vertex 0 on the positive z-axis, vertex 1 in the
  // xz-halfplane x > 0.
  Vec3 z = out.vertices[0].normalized();
  Vec3 seed = out.vertices[1];
  Vec3 xaxis = (seed - seed.dot(z) * z);
  if (xaxis.norm() < 1e-9) xaxis = z.unitOrthogonal();
  xaxis.normalize();
  Vec3 yaxis = z.cross(xaxis);
  for (auto& v : out.vertices) v = Vec3(v.dot(xaxis), v.dot(yaxis), v.dot(z));

  double res = max_edge_residual(out);
  if (stats) {
    stats->iterations = it;
    stats->residual = res;
  }
  if (res > tol)
    throw std::runtime_error("solve_midsphere: no convergence after " + std::to_string(it) +
                             " iterations, residual " + std::to_string(res));
  for (const auto& v : out.vertices)
    if (v.norm() <= 1.0)
      throw std::runtime_error("solve_midsphere: a vertex ended up inside the midsphere");
  return out;
}

}  // namespace polypack
