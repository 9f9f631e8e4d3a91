#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "polypack/packing.hpp"

namespace polypack {

// ---------------------------------------------------------------------------
// Circular-arc regions between the circles of a bounded configuration.  Each
// face of the underlying graph owes one region, bounded by arcs of the
// circles around the face; arcs meet at the tangency points, which all lie on
// the face's dual circle.  The region of the outer face is clipped against
// the external disc and may fall apart into several components.

struct BoundaryArc {
  OrientedCircle circle;
  double start_angle = 0.0;
  double end_angle = 0.0;  // start + sweep
  double sweep = 0.0;      // signed, positive = counterclockwise
  bool region_inside = false;  // does the region lie inside this circle's disc
  Vec2 p0 = Vec2::Zero();
  Vec2 p1 = Vec2::Zero();
};

struct ArcRegion {
  int face = -1;
  std::vector<std::vector<BoundaryArc>> components;
  bool clipped_by_external = false;

  int connected_components() const { return static_cast<int>(components.size()); }
};

struct AreaReport {
  std::vector<double> areas;
  int max_index = -1;
  double area_invariant = 0.0;
};

namespace detail {

constexpr double kTau = 2.0 * std::numbers::pi;

inline Vec2 arc_point(const OrientedCircle& c, double angle) {
  return c.center() + std::abs(c.radius()) * Vec2(std::cos(angle), std::sin(angle));
}

inline double angle_of(const OrientedCircle& c, const Vec2& p) {
  Vec2 d = p - c.center();
  return std::atan2(d[1], d[0]);
}

// Positive remainder in [0, 2*pi).
inline double mod_tau(double a) {
  double r = std::fmod(a, kTau);
  return r < 0 ? r + kTau : r;
}

inline BoundaryArc make_arc(const OrientedCircle& c, double start, double sweep,
                            bool region_inside = false) {
  BoundaryArc arc;
  arc.circle = c;
  arc.start_angle = start;
  arc.sweep = sweep;
  arc.end_angle = start + sweep;
  arc.region_inside = region_inside;
  arc.p0 = arc_point(c, arc.start_angle);
  arc.p1 = arc_point(c, arc.end_angle);
  return arc;
}

inline BoundaryArc reverse_arc(const BoundaryArc& a) {
  return make_arc(a.circle, a.end_angle, -a.sweep, a.region_inside);
}

// Tangency point of two tangent proper circles, external or nested.
inline Vec2 circle_tangency(const OrientedCircle& a, const OrientedCircle& b) {
  if (a.is_line() || b.is_line())
    throw std::runtime_error("tangency point of a line is not supported here");
  Vec2 za = a.center(), zb = b.center();
  double ra = std::abs(a.radius()), rb = std::abs(b.radius());
  Vec2 u = zb - za;
  double d = u.norm();
  if (d <= 1e-14) throw std::runtime_error("concentric circles cannot be tangent");
  u /= d;
  Vec2 plus = za + ra * u, minus = za - ra * u;
  double res_plus = std::abs((plus - zb).norm() - rb);
  double res_minus = std::abs((minus - zb).norm() - rb);
  return res_plus <= res_minus ? plus : minus;
}

inline bool same_point(const Vec2& a, const Vec2& b, double tol = 1e-7) {
  return (a - b).norm() <= tol;
}

inline bool same_circle(const OrientedCircle& a, const OrientedCircle& b) {
  return (a.v - b.v).norm() <= 1e-9 * (1.0 + a.v.norm());
}

// Chain a bag of arcs into closed components by endpoint matching.  At a
// four-valent tangency pinch the continuation on a different circle is
// preferred, which separates the pinched components.
inline std::vector<std::vector<BoundaryArc>> chain_arcs(
    std::vector<BoundaryArc> arcs, double tol = 1e-7) {
  std::vector<std::vector<BoundaryArc>> components;
  std::vector<bool> used(arcs.size(), false);
  for (std::size_t seed = 0; seed < arcs.size(); ++seed) {
    if (used[seed]) continue;
    std::vector<BoundaryArc> comp{arcs[seed]};
    used[seed] = true;
    while (!same_point(comp.back().p1, comp.front().p0, tol)) {
      int pick = -1;
      bool pick_reversed = false, pick_other_circle = false;
      for (std::size_t i = 0; i < arcs.size(); ++i) {
        if (used[i]) continue;
        bool fwd = same_point(arcs[i].p0, comp.back().p1, tol);
        bool rev = same_point(arcs[i].p1, comp.back().p1, tol);
        if (!fwd && !rev) continue;
        bool other = !same_circle(arcs[i].circle, comp.back().circle);
        if (pick < 0 || (other && !pick_other_circle)) {
          pick = static_cast<int>(i);
          pick_reversed = !fwd;
          pick_other_circle = other;
        }
      }
      if (pick < 0)
        throw std::runtime_error("region boundary chain failed to close");
      comp.push_back(pick_reversed ? reverse_arc(arcs[pick]) : arcs[pick]);
      used[pick] = true;
    }
    components.push_back(std::move(comp));
  }
  return components;
}

// Even-odd test of a point against a sampled closed arc chain.
inline bool point_in_loop(const std::vector<BoundaryArc>& comp, const Vec2& p) {
  std::vector<Vec2> poly;
  for (const auto& arc : comp) {
    int steps = std::max(4, static_cast<int>(std::ceil(std::abs(arc.sweep) / 0.01)));
    for (int t = 0; t < steps; ++t)
      poly.push_back(arc_point(arc.circle, arc.start_angle + arc.sweep * t / steps));
  }
  bool inside = false;
  std::size_t np = poly.size();
  for (std::size_t i = 0, j = np - 1; i < np; j = i++) {
    if ((poly[i][1] > p[1]) != (poly[j][1] > p[1])) {
      double x = poly[j][0] + (p[1] - poly[j][1]) / (poly[i][1] - poly[j][1]) *
                                  (poly[i][0] - poly[j][0]);
      if (p[0] < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace detail

// Circle orthogonal to every member of a tangent ring.  Pure linear algebra
// on inversive coordinates: the (least-squares) null space of the pairing
// constraints, normalized to self-pairing one.  For rings of proper circles
// the orientation is fixed so the centroid of the consecutive tangency
// points lies in the interior.
inline OrientedCircle face_dual_circle(const std::vector<OrientedCircle>& ring) {
  int k = static_cast<int>(ring.size());
  if (k < 3) throw std::runtime_error("face_dual_circle needs at least 3 circles");
  Eigen::MatrixXd A(k, 4);
  const Mat4& P = form_P();
  for (int i = 0; i < k; ++i) A.row(i) = (P * ring[i].v).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  if (k >= 4 && svd.singularValues()[3] > 1e-8 * svd.singularValues()[0])
    throw std::runtime_error("inconsistent ring: no common orthogonal circle");
  Vec4 d = svd.matrixV().col(3);
  double self = pairing(d, d);
  if (self <= 1e-12)
    throw std::runtime_error("inconsistent ring: orthogonal solution degenerate");
  d /= std::sqrt(self);

  OrientedCircle dual(d);
  bool all_proper = true;
  for (const auto& c : ring)
    if (c.is_line()) all_proper = false;
  if (all_proper) {
    Vec2 centroid = Vec2::Zero();
    for (int i = 0; i < k; ++i)
      centroid += detail::circle_tangency(ring[i], ring[(i + 1) % k]);
    centroid /= k;
    if (!point_in_interior(centroid, dual)) dual = OrientedCircle(-d);
  }
  return dual;
}

namespace detail {

// The arc of `c` between tangency points `pa` and `pb` bounding the region
// inside the dual circle `d`.
inline BoundaryArc face_arc(const OrientedCircle& c, const Vec2& pa,
                            const Vec2& pb, const OrientedCircle& d) {
  double a0 = angle_of(c, pa);
  double a1 = angle_of(c, pb);
  double ccw_sweep = mod_tau(a1 - a0);
  if (ccw_sweep < 1e-12) ccw_sweep = kTau;
  BoundaryArc ccw = make_arc(c, a0, ccw_sweep);
  BoundaryArc cw = make_arc(c, a0, ccw_sweep - kTau);
  bool in_ccw = point_in_interior(arc_point(c, a0 + 0.5 * ccw.sweep), d);
  bool in_cw = point_in_interior(arc_point(c, a0 + 0.5 * cw.sweep), d);
  if (in_ccw == in_cw)
    throw std::runtime_error("face arc selection is ambiguous");
  return in_ccw ? ccw : cw;
}

// Angles (on circle c) at which c meets or touches the external circle e.
inline std::vector<double> external_cut_angles(const OrientedCircle& c,
                                               const OrientedCircle& e) {
  Vec2 zc = c.center(), ze = e.center();
  double rc = std::abs(c.radius()), re = std::abs(e.radius());
  double d = (ze - zc).norm();
  if (d <= 1e-14) return {};
  double tol = 1e-8 * re;
  if (std::abs(d - std::abs(re - rc)) <= tol || std::abs(d - (re + rc)) <= tol) {
    Vec2 dir = std::abs(d - (re + rc)) <= tol ? Vec2(ze - zc) : Vec2(zc - ze);
    return {std::atan2(dir[1], dir[0])};
  }
  if (d >= rc + re || d <= std::abs(rc - re)) return {};
  double a = (d * d + rc * rc - re * re) / (2.0 * d);
  double h2 = rc * rc - a * a;
  if (h2 <= 0) return {};
  double h = std::sqrt(h2);
  Vec2 u = (ze - zc) / d;
  Vec2 v(-u[1], u[0]);
  Vec2 q0 = zc + a * u + h * v;
  Vec2 q1 = zc + a * u - h * v;
  return {std::atan2(q0[1] - zc[1], q0[0] - zc[0]),
          std::atan2(q1[1] - zc[1], q1[0] - zc[0])};
}

}  // namespace detail

// One region per face of the configuration.  Circles must be bounded discs
// (positive curvature); the external circle clips whichever region reaches
// it.
inline std::vector<ArcRegion> compute_regions(
    const Eigen::MatrixXd& circles, const Eigen::MatrixXd& duals,
    const PolyhedronGraph& graph,
    const OrientedCircle& external = OrientedCircle(Vec4(1, -1, 0, 0))) {
  int m = static_cast<int>(circles.cols());
  int n = static_cast<int>(duals.cols());
  std::vector<OrientedCircle> cs;
  cs.reserve(m);
  for (int i = 0; i < m; ++i) {
    cs.emplace_back(Vec4(circles.col(i)));
    if (std::abs(cs.back().curvature()) <= 1e-12)
      throw std::runtime_error("compute_regions expects proper circles, not lines");
    // the only admissible negative-curvature member is the external circle
    if (cs.back().curvature() < 0 &&
        std::min((cs.back().v - external.v).norm(), (cs.back().v + external.v).norm()) >
            1e-7 * external.v.norm())
      throw std::runtime_error(
          "compute_regions: negative-curvature circle differs from the external circle");
  }
  double re = external.radius();

  // region points lie inside the external disc, i.e. outside the interior of
  // the outward-oriented external circle
  OrientedCircle ext_out = external.curvature() < 0 ? external : external.flipped();
  auto in_region = [&](const Vec2& z, const OrientedCircle& d) {
    if (!point_in_interior(z, d)) return false;
    if (point_in_interior(z, ext_out)) return false;
    for (const auto& c : cs)
      if (c.curvature() > 0 && point_in_interior(z, c)) return false;
    return true;
  };

  std::vector<ArcRegion> regions;
  regions.reserve(n);
  for (int j = 0; j < n; ++j) {
    const auto& face = graph.faces[j];
    int k = static_cast<int>(face.size());
    OrientedCircle dual{Vec4(duals.col(j))};

    std::vector<Vec2> tp(k);
    for (int i = 0; i < k; ++i)
      tp[i] = detail::circle_tangency(cs[face[i]], cs[face[(i + 1) % k]]);

    // Raw arcs: on the circle of face vertex i, from the tangency with the
    // previous ring circle to the tangency with the next.
    std::vector<BoundaryArc> raw;
    raw.reserve(k);
    for (int i = 0; i < k; ++i)
      raw.push_back(detail::face_arc(cs[face[i]], tp[(i + k - 1) % k], tp[i], dual));

    // Split the arcs wherever they touch or cross the external circle; drop
    // the pieces outside, remember the cut points on the external circle.
    ArcRegion region;
    region.face = j;
    std::vector<BoundaryArc> kept;
    std::vector<double> ext_angles;
    bool touched_external = false;
    for (const auto& arc : raw) {
      double dir = arc.sweep < 0 ? -1.0 : 1.0;
      std::vector<double> cuts{0.0, std::abs(arc.sweep)};
      for (double ca : detail::external_cut_angles(arc.circle, external)) {
        double local = detail::mod_tau((ca - arc.start_angle) * dir);
        if (local > 1e-9 && local < std::abs(arc.sweep) - 1e-9) cuts.push_back(local);
      }
      std::sort(cuts.begin(), cuts.end());
      for (std::size_t t = 0; t + 1 < cuts.size(); ++t) {
        double s0 = arc.start_angle + dir * cuts[t];
        double sweep = dir * (cuts[t + 1] - cuts[t]);
        // the region sits outside positive discs but inside the external circle
        BoundaryArc piece =
            detail::make_arc(arc.circle, s0, sweep, arc.circle.curvature() < 0);
        Vec2 mid = detail::arc_point(arc.circle, s0 + 0.5 * sweep);
        double gap = (mid - external.center()).norm() - re;
        if (gap < 1e-9)
          kept.push_back(piece);
        else
          touched_external = true;
        if (t > 0) ext_angles.push_back(detail::angle_of(external, piece.p0));
        if (t + 2 < cuts.size())
          ext_angles.push_back(detail::angle_of(external, piece.p1));
      }
    }

    if (!ext_angles.empty()) {
      // Close the boundary along the external circle wherever the strip just
      // inside it belongs to this region.
      std::vector<double> angles;
      for (double a : ext_angles) angles.push_back(detail::mod_tau(a));
      std::sort(angles.begin(), angles.end());
      angles.erase(std::unique(angles.begin(), angles.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-9; }),
                   angles.end());
      for (std::size_t t = 0; t < angles.size(); ++t) {
        double a0 = angles[t];
        double a1 = t + 1 < angles.size() ? angles[t + 1] : angles[0] + detail::kTau;
        double amid = 0.5 * (a0 + a1);
        Vec2 probe = external.center() +
                     (re * (1.0 - 1e-6)) * Vec2(std::cos(amid), std::sin(amid));
        if (in_region(probe, dual)) {
          kept.push_back(detail::make_arc(external, a0, a1 - a0, true));
          touched_external = true;
        }
      }
    } else if (std::none_of(kept.begin(), kept.end(), [&](const BoundaryArc& a) {
                 return detail::same_circle(a.circle, external) ||
                        detail::same_circle(a.circle, external.flipped());
               })) {
      // No contact with the external circle: if the strip inside it belongs
      // to this region, the full external circle is a boundary component.
      for (int t = 0; t < 64; ++t) {
        double a = detail::kTau * t / 64;
        Vec2 probe = external.center() +
                     (re * (1.0 - 1e-6)) * Vec2(std::cos(a), std::sin(a));
        if (in_region(probe, dual)) {
          kept.push_back(detail::make_arc(external, a, detail::kTau, true));
          touched_external = true;
          break;
        }
      }
    }

    region.clipped_by_external = touched_external;
    region.components = detail::chain_arcs(std::move(kept));
    regions.push_back(std::move(region));
  }
  return regions;
}

inline std::vector<ArcRegion> compute_regions(
    const PackingConfiguration& cfg,
    const OrientedCircle& external = OrientedCircle(Vec4(1, -1, 0, 0))) {
  return compute_regions(cfg.C, cfg.D, cfg.graph, external);
}

// Green's theorem over the boundary arcs.  Components are signed by probing
// which side of each loop the region lies on, so nested boundaries (a region
// between an inner chain and the external circle) come out right.
inline double region_area(const ArcRegion& r) {
  double total = 0.0;
  for (const auto& comp : r.components) {
    if (comp.empty()) continue;
    if (!detail::same_point(comp.back().p1, comp.front().p0))
      throw std::runtime_error("region component is not a closed chain");
    double a = 0.0;
    for (const auto& arc : comp) {
      double rr = std::abs(arc.circle.radius());
      Vec2 c = arc.circle.center();
      a += 0.5 * rr * rr * arc.sweep;
      a += 0.5 * (c[0] * (arc.p1[1] - arc.p0[1]) - c[1] * (arc.p1[0] - arc.p0[0]));
    }
    // Point just off the first arc, on the region's side of its circle.
    const BoundaryArc& probe_arc = comp.front();
    double rr = std::abs(probe_arc.circle.radius());
    Vec2 mid = detail::arc_point(probe_arc.circle,
                                 probe_arc.start_angle + 0.5 * probe_arc.sweep);
    Vec2 outward = (mid - probe_arc.circle.center()).normalized();
    Vec2 probe = mid + (probe_arc.region_inside ? -1.0 : 1.0) * 1e-4 * rr * outward;
    total += detail::point_in_loop(comp, probe) ? std::abs(a) : -std::abs(a);
  }
  if (total < -1e-9)
    throw std::runtime_error("region area came out negative");
  return std::max(total, 0.0);
}

inline AreaReport area_invariant(
    const Eigen::MatrixXd& circles, const Eigen::MatrixXd& duals,
    const PolyhedronGraph& graph,
    const OrientedCircle& external = OrientedCircle(Vec4(1, -1, 0, 0))) {
  AreaReport report;
  for (const auto& region : compute_regions(circles, duals, graph, external))
    report.areas.push_back(region_area(region));
  auto it = std::max_element(report.areas.begin(), report.areas.end());
  report.max_index = static_cast<int>(it - report.areas.begin());
  report.area_invariant = *it;
  return report;
}

inline AreaReport area_invariant(
    const OrbitNode& node, const PolyhedronGraph& graph,
    const OrientedCircle& external = OrientedCircle(Vec4(1, -1, 0, 0))) {
  return area_invariant(node.circles, node.duals, graph, external);
}

// ---------------------------------------------------------------------------
// Geometric base descent: repeatedly invert through the dual circle whose
// reflection strictly shrinks the maximal region area.  Ends at one minimal
// tuple, or two when the final comparison ties.

struct GeometricDescent {
  std::vector<OrbitNode> bases;  // one, or two related by a single generator
  std::vector<int> word;         // generators applied, in order
  std::vector<double> path_areas;
};

inline GeometricDescent geometric_base_descent(
    const PackingConfiguration& cfg, const OrbitNode& start,
    const OrientedCircle& external = OrientedCircle(Vec4(1, -1, 0, 0)),
    int max_iter = 256, double tie_tol = 1e-9) {
  GeometricDescent out;
  OrbitNode node = start;
  double area = area_invariant(node, cfg.graph, external).area_invariant;
  out.path_areas.push_back(area);
  for (int iter = 0; iter < max_iter; ++iter) {
    int best = -1, strict_count = 0, tie = -1;
    double best_area = area;
    for (int j = 0; j < cfg.n(); ++j) {
      OrbitNode child = orbit_child(node, j);
      double child_area = area_invariant(child, cfg.graph, external).area_invariant;
      if (child_area < area - tie_tol) {
        ++strict_count;
        if (child_area < best_area) {
          best_area = child_area;
          best = j;
        }
      } else if (std::abs(child_area - area) <= tie_tol) {
        tie = j;
      }
    }
    if (strict_count > 1)
      throw std::runtime_error("multiple area-decreasing generators detected");
    if (strict_count == 0) {
      out.bases.push_back(node);
      if (tie >= 0) out.bases.push_back(orbit_child(node, tie));
      return out;
    }
    node = orbit_child(node, best);
    area = best_area;
    out.word.push_back(best);
    out.path_areas.push_back(area);
  }
  throw std::runtime_error("geometric base descent did not terminate");
}

}  // namespace polypack
