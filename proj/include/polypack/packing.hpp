#pragma once

// Configuration matrices C (initial circles) and D (dual circles), orbit
// enumeration under the geometric Apollonian group by reduced words,
// normalization to a bounded packing, and SVG rendering.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "polypack/inversive.hpp"
#include "polypack/midsphere.hpp"
#include "polypack/polyhedron.hpp"

namespace polypack {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct PackingConfiguration {
  MatrixXd C;  // 4 x m, columns are the initial circles c_i
  MatrixXd D;  // 4 x n, columns are the dual circles d_j
  PolyhedronGraph graph;

  int m() const { return static_cast<int>(C.cols()); }
  int n() const { return static_cast<int>(D.cols()); }

  OrientedCircle circle(int i) const { return OrientedCircle(Vec4(C.col(i))); }
  OrientedCircle dual(int j) const { return OrientedCircle(Vec4(D.col(j))); }
};

// Checks the pairing patterns forced by the tangency combinatorics:
// CtPC has 1 on the diagonal, -1 on adjacency, < -1 otherwise; same for DtPD
// with face adjacency; CtPD is 0 on incidence and < -1 otherwise.
inline void verify_configuration(const PackingConfiguration& cfg, double tol = 1e-8) {
  const Mat4& P = form_P();
  MatrixXd G = cfg.C.transpose() * P * cfg.C;
  MatrixXd H = cfg.D.transpose() * P * cfg.D;
  MatrixXd X = cfg.C.transpose() * P * cfg.D;
  auto adj = cfg.graph.vertex_adjacency();
  auto fail = [](const std::string& what, int i, int j, double v) {
    throw std::runtime_error("configuration check failed: " + what + " at (" +
                             std::to_string(i) + "," + std::to_string(j) + "), value " +
                             std::to_string(v));
  };
  for (int i = 0; i < cfg.m(); ++i)
    for (int j = 0; j < cfg.m(); ++j) {
      double v = G(i, j);
      if (i == j) {
        if (std::abs(v - 1.0) > tol) fail("CtPC diagonal != 1", i, j, v);
      } else if (adj[i][j]) {
        if (std::abs(v + 1.0) > tol) fail("CtPC adjacency != -1", i, j, v);
      } else if (v >= -1.0 - tol) {
        fail("CtPC non-adjacent not < -1", i, j, v);
      }
    }
  for (int i = 0; i < cfg.n(); ++i)
    for (int j = 0; j < cfg.n(); ++j) {
      double v = H(i, j);
      if (i == j) {
        if (std::abs(v - 1.0) > tol) fail("DtPD diagonal != 1", i, j, v);
      } else if (cfg.graph.faces_adjacent(i, j)) {
        if (std::abs(v + 1.0) > tol) fail("DtPD adjacency != -1", i, j, v);
      } else if (v >= -1.0 - tol) {
        fail("DtPD non-adjacent not < -1", i, j, v);
      }
    }
  for (int i = 0; i < cfg.m(); ++i)
    for (int j = 0; j < cfg.n(); ++j) {
      double v = X(i, j);
      if (cfg.graph.face_contains_vertex(j, i)) {
        if (std::abs(v) > tol) fail("CtPD incidence != 0", i, j, v);
      } else if (v >= -1.0 - tol) {
        fail("CtPD non-incident not < -1", i, j, v);
      }
    }
  Eigen::JacobiSVD<MatrixXd> svd(cfg.C);
  if (svd.singularValues()(3) < 1e-10 * svd.singularValues()(0))
    throw std::runtime_error("configuration check failed: C does not have rank 4");
}

inline PackingConfiguration build_configuration(const MidsphereRealization& r,
                                                double tol = 1e-8) {
  PackingConfiguration cfg;
  cfg.graph = r.graph;
  int m = r.graph.vertex_count, n = r.graph.face_count();
  cfg.C.resize(4, m);
  cfg.D.resize(4, n);
  for (int i = 0; i < m; ++i) cfg.C.col(i) = vertex_circle(r, i).v;
  for (int j = 0; j < n; ++j) cfg.D.col(j) = face_circle(r, j).v;
  verify_configuration(cfg, tol);
  return cfg;
}

// One tuple of the packing orbit: the reduced word of dual-circle inversions
// producing it, the transported circle and dual matrices, and the curvatures.
struct OrbitNode {
  std::vector<int> word;  // generator indices, consecutive entries distinct
  MatrixXd circles;       // 4 x m
  MatrixXd duals;         // 4 x n
  VectorXd curvatures() const { return circles.row(1).transpose(); }
  int depth() const { return static_cast<int>(word.size()); }
};

// Appends generator j: inversion through the node's own j-th dual circle, so
// the new algebraic tuple is sigma_j applied to the node's tuple.
inline OrbitNode orbit_child(const OrbitNode& node, int j) {
  Vec4 mirror = node.duals.col(j);
  Mat4 R = Mat4::Identity() - 2.0 * mirror * (mirror.transpose() * form_P());
  OrbitNode child;
  child.word = node.word;
  child.word.push_back(j);
  child.circles = R * node.circles;
  child.duals = R * node.duals;
  return child;
}

inline OrbitNode orbit_root(const PackingConfiguration& cfg) {
  return OrbitNode{{}, cfg.C, cfg.D};
}

// Visits the orbit depth by depth in lexicographic word order.
inline void visit_orbit(const PackingConfiguration& cfg, int max_depth,
                        const std::function<void(const OrbitNode&)>& visit) {
  if (max_depth < 0) throw std::invalid_argument("visit_orbit: max_depth must be >= 0");
  std::vector<OrbitNode> frontier{orbit_root(cfg)};
  visit(frontier[0]);
  for (int depth = 1; depth <= max_depth; ++depth) {
    std::vector<OrbitNode> next;
    next.reserve(frontier.size() * (cfg.n() - 1));
    for (const auto& node : frontier)
      for (int j = 0; j < cfg.n(); ++j) {
        if (!node.word.empty() && node.word.back() == j) continue;
        next.push_back(orbit_child(node, j));
      }
    for (const auto& node : next) visit(node);
    frontier = std::move(next);
  }
}

inline std::vector<OrbitNode> enumerate_orbit(const PackingConfiguration& cfg, int max_depth) {
  std::vector<OrbitNode> out;
  visit_orbit(cfg, max_depth, [&](const OrbitNode& n) { out.push_back(n); });
  return out;
}

// 1 + sum_{k=1}^{depth} n (n-1)^{k-1}
inline std::uint64_t orbit_count(int n, int depth) {
  std::uint64_t total = 1, layer = 1;
  for (int k = 1; k <= depth; ++k) {
    layer *= (k == 1) ? static_cast<std::uint64_t>(n) : static_cast<std::uint64_t>(n - 1);
    total += layer;
  }
  return total;
}

struct PackingNormalization {
  MobiusMatrix mobius;
  OrientedCircle external_circle;
};

namespace detail {

inline bool bounded_sample_ok(const PackingConfiguration& cfg, int ext_col, int sample_depth,
                              double tol = 1e-7) {
  Vec4 ext = cfg.C.col(ext_col);
  bool ok = true;
  visit_orbit(cfg, sample_depth, [&](const OrbitNode& node) {
    if (!ok) return;
    for (int i = 0; i < cfg.m(); ++i) {
      if (node.depth() == 0 && i == ext_col) continue;
      Vec4 c = node.circles.col(i);
      if ((c - ext).cwiseAbs().maxCoeff() < 1e-9) continue;  // the external circle itself
      if (c(1) <= tol) ok = false;
      // Interiors disjoint from the external circle's (outward) interior:
      // nested discs pair to -1 at internal tangency and below when strictly
      // inside.
      if (pairing(c, ext) > -1.0 + tol) ok = false;
    }
  });
  return ok;
}

}  // namespace detail

// Moves the packing to a bounded position: one distinguished circle gets
// negative curvature (the external circle, normalized to the unit circle at
// the origin) and every other circle of a depth-3 sample lies inside it.
inline std::pair<PackingConfiguration, PackingNormalization> normalize_bounded(
    const PackingConfiguration& cfg, int sample_depth = 3) {
  // Already bounded: exactly one initial circle with negative curvature and
  // the sample confirms containment.
  int neg = -1, neg_count = 0;
  for (int i = 0; i < cfg.m(); ++i)
    if (cfg.C(1, i) < 0) {
      neg = i;
      ++neg_count;
    }
  auto recentered = [&](const MobiusMatrix& M, int ext_col)
      -> std::pair<PackingConfiguration, PackingNormalization> {
    // Recenter and rescale so the external circle is the unit circle.
    OrientedCircle extc(Vec4(M.m * cfg.C.col(ext_col)));
    MobiusMatrix T = MobiusMatrix::translation(-extc.center());
    MobiusMatrix S = MobiusMatrix::scaling(1.0 / extc.radius());
    MobiusMatrix full = S.compose(T).compose(M);
    PackingConfiguration out = cfg;
    out.C = full.m * cfg.C;
    out.D = full.m * cfg.D;
    PackingNormalization norm;
    norm.mobius = full;
    norm.external_circle = OrientedCircle(Vec4(out.C.col(ext_col)));
    return {out, norm};
  };

  if (neg_count == 1 && detail::bounded_sample_ok(cfg, neg, sample_depth))
    return recentered(MobiusMatrix::identity(), neg);

  std::vector<std::string> tried;
  for (int i = 0; i < cfg.m(); ++i) {
    if (cfg.C(1, i) <= 1e-12) continue;  // need a disc interior to invert in
    OrientedCircle ci = cfg.circle(i);
    OrientedCircle mirror =
        circle_from_center_radius(ci.center(), 0.5 * ci.radius(), Orientation::Inward);
    MobiusMatrix M = MobiusMatrix::inversion(mirror);
    auto candidate = recentered(M, i);
    if (detail::bounded_sample_ok(candidate.first, i, sample_depth)) return candidate;
    tried.push_back("inversion in circle " + std::to_string(i));
  }
  std::string msg = "normalize_bounded: no bounding inversion found; tried:";
  for (const auto& t : tried) msg += " " + t;
  throw std::runtime_error(msg);
}

// Largest proper disc of a tuple: the minimum over positive curvatures.  The
// external circle keeps curvature -1 along every word fixing it, so the
// signed minimum would never grow; the positive minimum does.
inline double min_positive_curvature(const VectorXd& curvatures) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < curvatures.size(); ++i)
    if (curvatures[i] > 0) best = std::min(best, curvatures[i]);
  return best;
}

// All orbit nodes whose creating reflection introduced a circle at least as
// large as the curvature bound allows (the root counts).  Circles orthogonal
// to a mirror persist unchanged through it, so tuple-wide minima never grow
// along some infinite branches; the termination argument lives on the
// *changed* columns: once a step is non-decreasing, every later circle in
// that subtree is nested inside the freshly changed ones, so when those all
// exceed the bound the branch is done.
namespace detail {

// Curvature-level data of the reflection action: sigma_j(b) = b - 2 (a_j . Gt b) a_j
// with a_j = -C^T P d_j rescaled so a_j . Gt a_j = 1, and Gt = C^+ P^{-1} C^{+T}.
struct CurvatureAction {
  MatrixXd alphas;      // m x n, entrywise >= 0
  MatrixXd gram_tilde;  // m x m

  VectorXd pairings(const VectorXd& b) const { return alphas.transpose() * (gram_tilde * b); }
};

inline CurvatureAction curvature_action(const PackingConfiguration& cfg) {
  Eigen::JacobiSVD<MatrixXd> svd(cfg.C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  MatrixXd pinv = svd.solve(MatrixXd::Identity(4, 4));  // m x 4
  CurvatureAction act;
  act.gram_tilde = pinv * form_P_inverse() * pinv.transpose();
  act.alphas.resize(cfg.m(), cfg.n());
  for (int j = 0; j < cfg.n(); ++j) {
    VectorXd a = -cfg.C.transpose() * form_P() * cfg.D.col(j);
    act.alphas.col(j) = a / std::sqrt(a.dot(act.gram_tilde * a));
  }
  return act;
}

}  // namespace detail

// Returns the descent path from cfg's tuple to the base tuple, plus every node
// whose step creates a circle of positive curvature <= bound. The search runs
// over suffix-reduced words from the base. Termination: the coefficient of the
// root added at suffix step k is >= 2 mu (k-1), where mu is the smallest nonzero
// |a_j . Gt b_base|, so a circle created in column i via generator j at any step
// past k has curvature >= b_i + 2 mu k alphas(i,j); a branch is cut once that
// exceeds the bound for every (i, j).
inline std::vector<OrbitNode> enumerate_by_curvature(const PackingConfiguration& cfg,
                                                     double curvature_bound) {
  bool has_negative = false;
  for (int i = 0; i < cfg.m(); ++i)
    if (cfg.C(1, i) < 0) has_negative = true;
  if (!has_negative)
    throw std::runtime_error(
        "enumerate_by_curvature: configuration has no negative-curvature circle; "
        "normalize_bounded first");

  const detail::CurvatureAction act = detail::curvature_action(cfg);
  const double tol = 1e-9;

  std::vector<OrbitNode> out;
  std::set<std::vector<std::int64_t>> seen;
  auto quantize = [](const MatrixXd& M) {
    std::vector<std::int64_t> key;
    key.reserve(M.size());
    for (int j = 0; j < M.cols(); ++j)
      for (int i = 0; i < M.rows(); ++i)
        key.push_back(static_cast<std::int64_t>(std::llround(M(i, j) * 1e7)));
    return key;
  };
  auto emit = [&](const OrbitNode& node) {
    if (seen.insert(quantize(node.circles)).second) out.push_back(node);
  };

  OrbitNode node = orbit_root(cfg);
  emit(node);
  auto decreasing_generator = [&](const OrbitNode& at) {
    VectorXd s = act.pairings(at.curvatures());
    int best = -1;
    double best_value = tol * std::max(1.0, at.curvatures().cwiseAbs().maxCoeff());
    for (int j = 0; j < cfg.n(); ++j)
      if (s[j] > best_value) {
        best_value = s[j];
        best = j;
      }
    return best;
  };
  const int descent_limit = 4 * cfg.m() * cfg.n() + 64;
  for (int it = 0; it < descent_limit; ++it) {
    int best = decreasing_generator(node);
    if (best < 0) break;
    node = orbit_child(node, best);
    emit(node);
  }
  if (decreasing_generator(node) >= 0)
    throw std::runtime_error("enumerate_by_curvature: descent to base did not terminate");

  VectorXd base_pairings = act.pairings(node.curvatures());
  double mu = std::numeric_limits<double>::infinity();
  for (int j = 0; j < cfg.n(); ++j)
    if (std::abs(base_pairings[j]) > tol) mu = std::min(mu, std::abs(base_pairings[j]));
  if (!std::isfinite(mu))
    throw std::runtime_error("enumerate_by_curvature: degenerate base tuple");

  struct Frame {
    OrbitNode node;
    int last;   // generator of the last suffix step, -1 at the base
    int depth;  // suffix-reduced word length from the base
  };
  // Words pick up the descent prefix; cancel immediate backtracks so each
  // emitted word is dual-inversion sequence notation from cfg's root.
  auto child_of = [](const OrbitNode& parent, int j) {
    OrbitNode c = orbit_child(parent, j);
    if (c.word.size() >= 2 && c.word[c.word.size() - 2] == j) {
      c.word.pop_back();
      c.word.pop_back();
    }
    return c;
  };

  std::vector<Frame> stack{Frame{node, -1, 0}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const VectorXd b = f.node.curvatures();
    bool branch_alive = false;
    for (int i = 0; i < cfg.m(); ++i)
      for (int j = 0; j < cfg.n(); ++j)
        if (act.alphas(i, j) > tol &&
            b[i] + 2.0 * mu * f.depth * act.alphas(i, j) <= curvature_bound)
          branch_alive = true;
    if (!branch_alive) continue;
    for (int j = 0; j < cfg.n(); ++j) {
      if (j == f.last) continue;
      OrbitNode child = child_of(f.node, j);
      bool creates_small = false;
      for (int i = 0; i < cfg.m(); ++i) {
        bool moved = (child.circles.col(i) - f.node.circles.col(i)).cwiseAbs().maxCoeff() >
                     1e-9 * (1.0 + f.node.circles.col(i).cwiseAbs().maxCoeff());
        if (moved && child.curvatures()[i] > 0 && child.curvatures()[i] <= curvature_bound)
          creates_small = true;
      }
      if (creates_small) emit(child);
      stack.push_back(Frame{std::move(child), j, f.depth + 1});
    }
  }
  return out;
}

struct RenderStyle {
  double stroke_width = 0.004;
  bool fill_by_depth = true;
  int size_px = 1000;
};

namespace detail {

inline std::string svg_color(int depth) {
  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  return palette[depth % 8];
}

}  // namespace detail

// One <circle> element per distinct geometric circle, deduplicated across
// tuples by coordinate quantization.
inline std::string render_svg(const std::vector<OrbitNode>& nodes,
                              const RenderStyle& style = {}) {
  if (nodes.empty()) throw std::invalid_argument("render_svg: empty node list");
  struct Entry {
    OrientedCircle c;
    int depth;
  };
  std::map<std::array<std::int64_t, 4>, Entry> seen;
  auto key = [](const Vec4& v) {
    std::array<std::int64_t, 4> k;
    for (int i = 0; i < 4; ++i) k[i] = static_cast<std::int64_t>(std::llround(v[i] * 1e9));
    return k;
  };
  const OrientedCircle* external = nullptr;
  for (const auto& node : nodes)
    for (int i = 0; i < node.circles.cols(); ++i) {
      Vec4 v = node.circles.col(i);
      auto [it, inserted] = seen.try_emplace(key(v), Entry{OrientedCircle(v), node.depth()});
      if (!inserted) it->second.depth = std::min(it->second.depth, node.depth());
    }
  for (auto& [k, e] : seen)
    if (e.c.curvature() < 0) external = &e.c;
  if (!external) throw std::invalid_argument("render_svg: nodes contain no external circle");

  double R = external->radius();
  Vec2 cen = external->center();
  std::ostringstream svg;
  svg.precision(10);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.size_px
      << "\" height=\"" << style.size_px << "\" viewBox=\"" << cen[0] - R << " " << cen[1] - R
      << " " << 2 * R << " " << 2 * R << "\">\n";
  for (const auto& [k, e] : seen) {
    if (e.c.is_line(1e-9)) continue;
    Vec2 c = e.c.center();
    svg << "  <circle cx=\"" << c[0] << "\" cy=\"" << c[1] << "\" r=\"" << e.c.radius()
        << "\" fill=\"" << (e.c.curvature() < 0 ? std::string("none")
                                                : detail::svg_color(e.depth))
        << "\" fill-opacity=\"0.55\" stroke=\"black\" stroke-width=\""
        << style.stroke_width * R << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace polypack
