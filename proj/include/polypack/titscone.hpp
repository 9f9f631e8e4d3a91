#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "polypack/rootsys.hpp"

namespace polypack {

// ---------------------------------------------------------------------------
// Projective model.  A weight vector s maps to x = C s in circle space, and
// the linear change of frame
//   y = (x3, x4, (x1 - x2)/2, (x1 + x2)/2)
// turns the bilinear form into y1^2 + y2^2 + y3^2 - y4^2.  The affine chart
// (y1, y2, y3) / y4 places fundamental weights of a canonical (midsphere)
// configuration exactly at the polyhedron's vertices.

struct ProjectivePoint {
  Vec4 y = Vec4::Zero();  // homogeneous chart coordinates, last entry = t

  double form_value() const {
    return y[0] * y[0] + y[1] * y[1] + y[2] * y[2] - y[3] * y[3];
  }
  bool at_infinity(double tol = 1e-12) const {
    return std::abs(y[3]) <= tol * y.norm();
  }
  Vec3 affine() const {
    if (at_infinity())
      throw std::runtime_error("projective point lies at infinity of the chart");
    return Vec3(y[0] / y[3], y[1] / y[3], y[2] / y[3]);
  }
};

enum class CausalType { Timelike, Lightlike, Spacelike };

inline CausalType classify_causal(const ProjectivePoint& p, double tol = 1e-9) {
  double q = p.form_value();
  double scale = p.y.squaredNorm();
  if (std::abs(q) <= tol * scale) return CausalType::Lightlike;
  return q < 0 ? CausalType::Timelike : CausalType::Spacelike;
}

inline Mat4 chart_frame() {
  Mat4 T = Mat4::Zero();
  T(0, 2) = 1.0;
  T(1, 3) = 1.0;
  T(2, 0) = 0.5;
  T(2, 1) = -0.5;
  T(3, 0) = 0.5;
  T(3, 1) = 0.5;
  return T;
}

inline Mat4 chart_frame_inverse() {
  Mat4 S = Mat4::Zero();
  S(0, 2) = 1.0;
  S(0, 3) = 1.0;
  S(1, 2) = -1.0;
  S(1, 3) = 1.0;
  S(2, 0) = 1.0;
  S(3, 1) = 1.0;
  return S;
}

// Frame with signs fixed so the first fundamental weight lands at positive t
// (and, when possible, positive first coordinate).  For canonical midsphere
// configurations this is the identity adjustment.
inline Mat4 chart_transform(const RootSystem& rs) {
  Mat4 T = chart_frame();
  Vec4 y0 = T * Vec4(rs.C.col(0));
  Vec4 signs = Vec4::Ones();
  if (y0[3] < 0) signs[3] = -1.0;
  if (y0[0] * signs[3] < 0) signs[0] = -1.0;
  return signs.asDiagonal() * T;
}

inline ProjectivePoint project_rp3(const RootSystem& rs,
                                   const Eigen::VectorXd& s) {
  Vec4 x = rs.C * s;
  if (x.norm() <= 1e-12 * (1.0 + s.norm()))
    throw std::runtime_error("weight vector lies in the kernel; no projective image");
  ProjectivePoint p;
  p.y = chart_transform(rs) * x;
  return p;
}

// ---------------------------------------------------------------------------
// Weight orbit cloud: images of the fundamental weights under transposed
// group elements, i.e. the apex points of the packing's tangency cones.

struct WeightPoint {
  ProjectivePoint point;
  std::vector<int> word;  // transposed-generator word producing it
  int weight_index = 0;   // which fundamental weight
};

inline std::vector<WeightPoint> weight_cloud(const RootSystem& rs, int depth,
                                             double dedup_tol = 1e-9) {
  int m = rs.G.rows();
  int n = static_cast<int>(rs.reflections.size());
  std::vector<WeightPoint> out;
  std::map<std::array<std::int64_t, 4>, bool> seen;
  Mat4 T = chart_transform(rs);

  auto emit = [&](const Eigen::MatrixXd& A, const std::vector<int>& word) {
    for (int i = 0; i < m; ++i) {
      ProjectivePoint p;
      p.y = T * Vec4(rs.C * A.col(i));
      Vec4 key4 = p.y / p.y.norm();
      if (key4[3] < 0 || (key4[3] == 0 && key4[0] < 0)) key4 = -key4;
      std::array<std::int64_t, 4> key;
      for (int k = 0; k < 4; ++k)
        key[k] = static_cast<std::int64_t>(std::llround(key4[k] / dedup_tol));
      if (seen.emplace(key, true).second)
        out.push_back(WeightPoint{p, word, i});
    }
  };

  struct Node {
    Eigen::MatrixXd A;
    std::vector<int> word;
  };
  std::vector<Node> layer{{Eigen::MatrixXd::Identity(m, m), {}}};
  emit(layer[0].A, layer[0].word);
  for (int d = 1; d <= depth; ++d) {
    std::vector<Node> next;
    for (const auto& node : layer) {
      for (int j = 0; j < n; ++j) {
        if (!node.word.empty() && node.word.back() == j) continue;
        Node child;
        child.A = node.A * rs.reflections[j].transpose();
        child.word = node.word;
        child.word.push_back(j);
        emit(child.A, child.word);
        next.push_back(std::move(child));
      }
    }
    layer = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tangency cones.  A spacelike chart point outside the unit sphere is the
// apex of the cone tangent to the sphere along the polar circle x . a = 1.

struct TangentCone {
  Vec3 apex = Vec3::Zero();
  Vec3 base_center = Vec3::Zero();
  double base_radius = 0.0;
};

inline TangentCone tangent_cone(const ProjectivePoint& p) {
  if (classify_causal(p) != CausalType::Spacelike)
    throw std::runtime_error("tangent cone requires a spacelike point");
  Vec3 a = p.affine();
  double n2 = a.squaredNorm();
  if (n2 <= 1.0)
    throw std::runtime_error("tangent cone apex must lie outside the unit sphere");
  TangentCone cone;
  cone.apex = a;
  cone.base_center = a / n2;
  cone.base_radius = std::sqrt(n2 - 1.0) / std::sqrt(n2);
  return cone;
}

// ---------------------------------------------------------------------------
// The transposed reflection acts on the chart's unit sphere as the classical
// inversion through the sphere centered at the mirror circle's cone apex.
// Verified by sampling: lift random sphere points to weight space, push them
// through the reflection, and compare against the elementary inversion.

struct InversionActionReport {
  double max_deviation = 0.0;
  int samples_used = 0;
};

inline InversionActionReport verify_inversion_action(const RootSystem& rs,
                                                     int generator,
                                                     int samples = 200,
                                                     std::uint64_t seed = 7) {
  int m = rs.G.rows();
  Mat4 T = chart_transform(rs);
  Mat4 Tinv = T.inverse();

  // Mirror plane alpha_j . s = 0 expressed in homogeneous chart coordinates.
  Eigen::VectorXd alpha = rs.roots.col(generator);
  Vec4 g = Tinv.transpose() * (rs.C_pinv.transpose() * alpha);
  Vec3 nvec(g[0], g[1], g[2]);
  double nn = nvec.norm();
  if (nn <= 1e-12)
    throw std::runtime_error("degenerate mirror plane for generator");
  Vec3 nunit = nvec / nn;
  double delta = -g[3] / nn;

  auto classical = [&](const Vec3& u) -> Vec3 {
    if (std::abs(delta) < 1e-12) return u - 2.0 * nunit.dot(u) * nunit;
    Vec3 a = nunit / delta;
    double r2 = a.squaredNorm() - 1.0;
    Vec3 d = u - a;
    return a + r2 * d / d.squaredNorm();
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  InversionActionReport report;
  while (report.samples_used < samples) {
    Vec3 u(gauss(rng), gauss(rng), gauss(rng));
    if (u.norm() < 1e-6) continue;
    u.normalize();
    if (std::abs(nunit.dot(u) - delta) < 1e-6) continue;  // on the mirror

    Vec4 yh(u[0], u[1], u[2], 1.0);
    Eigen::VectorXd s = rs.C_pinv * (Tinv * yh);
    Eigen::VectorXd s2 = s - 2.0 * (rs.G_tilde * alpha) * alpha.dot(s);
    (void)m;
    ProjectivePoint image;
    image.y = T * Vec4(rs.C * s2);
    if (image.at_infinity()) continue;
    double dev = (image.affine() - classical(u)).norm();
    report.max_deviation = std::max(report.max_deviation, dev);
    ++report.samples_used;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Partial sums of the generating series Z(s) = sum over the packing's
// curvature tuples (with multiplicity) of exp(-b . s).  Distinct tuples are
// enumerated through reduced words with deduplication, then scaled by the
// packing's multiplicity.

struct ZPartial {
  double value = 0.0;
  bool saturated = false;  // an exponent exceeded the floating-point range
  std::int64_t terms = 0;  // distinct tuples included
};

inline ZPartial z_partial(const RootSystem& rs, const Eigen::VectorXd& base,
                          const Eigen::VectorXd& s, int depth,
                          double dedup_tol = 1e-9) {
  int n = static_cast<int>(rs.reflections.size());
  int mult = classify_multiplicity(rs, base).multiplicity;
  double scale = std::max(1.0, base.lpNorm<Eigen::Infinity>());

  ZPartial out;
  std::map<std::vector<std::int64_t>, bool> seen;
  auto add = [&](const Eigen::VectorXd& b) {
    std::vector<std::int64_t> key(b.size());
    for (int i = 0; i < b.size(); ++i)
      key[i] = static_cast<std::int64_t>(std::llround(b[i] / (dedup_tol * scale)));
    if (!seen.emplace(std::move(key), true).second) return;
    ++out.terms;
    double e = -b.dot(s);
    if (e > 700.0) {
      out.saturated = true;
      out.value = std::numeric_limits<double>::infinity();
      return;
    }
    if (!out.saturated) out.value += std::exp(e);
  };

  struct Node {
    Eigen::VectorXd b;
    int last = -1;
  };
  std::vector<Node> layer{{base, -1}};
  add(base);
  for (int d = 1; d <= depth; ++d) {
    std::vector<Node> next;
    for (const auto& node : layer) {
      for (int j = 0; j < n; ++j) {
        if (j == node.last) continue;
        Node child{rs.reflect(j, node.b), j};
        add(child.b);
        next.push_back(std::move(child));
      }
    }
    layer = std::move(next);
  }
  if (!out.saturated) out.value *= mult;
  return out;
}

// ---------------------------------------------------------------------------
// Membership trichotomy for the domain-of-convergence cone.  Apply transposed
// reflections to drive s toward the fundamental domain; the sign pattern of
// the root pairings at termination decides convergence of Z(s).

enum class MembershipVerdict { Converges, Diverges, Undetermined };

inline const char* to_string(MembershipVerdict v) {
  switch (v) {
    case MembershipVerdict::Converges: return "converges";
    case MembershipVerdict::Diverges: return "diverges";
    default: return "undetermined";
  }
}

struct MembershipResult {
  MembershipVerdict verdict = MembershipVerdict::Undetermined;
  std::vector<int> word;  // generators applied, in order
  int iterations = 0;
  Eigen::VectorXd final_pairings;  // alpha_j . s at termination
};

inline MembershipResult membership(const RootSystem& rs,
                                   const Eigen::VectorXd& s0,
                                   int max_iter = 64, double tol = 1e-9) {
  int n = static_cast<int>(rs.reflections.size());
  Eigen::VectorXd s = s0;
  double scale = tol * std::max(1.0, s0.norm());
  MembershipResult res;
  for (res.iterations = 0; res.iterations <= max_iter; ++res.iterations) {
    Eigen::VectorXd pair = rs.roots.transpose() * s;
    res.final_pairings = pair;
    int zeros = 0, negatives = 0, worst = -1;
    double worst_val = 0.0;
    for (int j = 0; j < n; ++j) {
      if (std::abs(pair[j]) <= scale) {
        ++zeros;
      } else if (pair[j] < 0) {
        ++negatives;
        if (pair[j] < worst_val) {
          worst_val = pair[j];
          worst = j;
        }
      }
    }
    if (zeros + negatives >= 2) {
      res.verdict = MembershipVerdict::Diverges;
      return res;
    }
    if (negatives == 0) {
      res.verdict = MembershipVerdict::Converges;
      return res;
    }
    s = s - 2.0 * (rs.G_tilde * rs.roots.col(worst)) * rs.roots.col(worst).dot(s);
    res.word.push_back(worst);
  }
  res.verdict = MembershipVerdict::Undetermined;
  return res;
}

// ---------------------------------------------------------------------------
// Mesh export: unit sphere, polyhedron skeleton at the fundamental weights,
// and the tangency cone of every spacelike point in the weight cloud.

inline nlohmann::json export_cone_mesh(const RootSystem& rs, int depth) {
  nlohmann::json mesh;
  mesh["sphere"] = {{"center", {0.0, 0.0, 0.0}}, {"radius", 1.0}};

  int m = rs.G.rows();
  nlohmann::json verts = nlohmann::json::array();
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[i] = 1.0;
    Vec3 v = project_rp3(rs, e).affine();
    verts.push_back({v[0], v[1], v[2]});
  }
  mesh["polyhedron"] = {{"vertices", verts}, {"faces", rs.graph.faces}};

  nlohmann::json cones = nlohmann::json::array();
  for (const auto& wp : weight_cloud(rs, depth)) {
    if (wp.point.at_infinity()) continue;
    if (classify_causal(wp.point) != CausalType::Spacelike) continue;
    TangentCone cone = tangent_cone(wp.point);
    cones.push_back({{"apex", {cone.apex[0], cone.apex[1], cone.apex[2]}},
                     {"base_center", {cone.base_center[0], cone.base_center[1],
                                      cone.base_center[2]}},
                     {"base_radius", cone.base_radius},
                     {"word", wp.word}});
  }
  mesh["cones"] = std::move(cones);
  return mesh;
}

}  // namespace polypack
