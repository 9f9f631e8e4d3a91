#pragma once

// Combinatorial polyhedra given as oriented face lists, validation of the
// polyhedral invariants, and the dual graph.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace polypack {

struct PolyhedronGraph {
  std::string name;
  int vertex_count = 0;
  // Cyclically ordered vertex indices per face, counterclockwise from outside.
  std::vector<std::vector<int>> faces;

  int face_count() const { return static_cast<int>(faces.size()); }

  std::set<std::pair<int, int>> edge_set() const {
    std::set<std::pair<int, int>> edges;
    for (const auto& f : faces) {
      int k = static_cast<int>(f.size());
      for (int i = 0; i < k; ++i) {
        int a = f[i], b = f[(i + 1) % k];
        edges.insert({std::min(a, b), std::max(a, b)});
      }
    }
    return edges;
  }

  int edge_count() const { return static_cast<int>(edge_set().size()); }

  bool face_contains_vertex(int face, int vertex) const {
    const auto& f = faces[face];
    return std::find(f.begin(), f.end(), vertex) != f.end();
  }

  std::vector<std::vector<bool>> vertex_adjacency() const {
    std::vector<std::vector<bool>> adj(vertex_count, std::vector<bool>(vertex_count, false));
    for (const auto& [a, b] : edge_set()) adj[a][b] = adj[b][a] = true;
    return adj;
  }

  bool faces_adjacent(int f1, int f2) const {
    std::set<std::pair<int, int>> e1;
    const auto& a = faces[f1];
    int k = static_cast<int>(a.size());
    for (int i = 0; i < k; ++i)
      e1.insert({std::min(a[i], a[(i + 1) % k]), std::max(a[i], a[(i + 1) % k])});
    const auto& b = faces[f2];
    k = static_cast<int>(b.size());
    for (int i = 0; i < k; ++i)
      if (e1.count({std::min(b[i], b[(i + 1) % k]), std::max(b[i], b[(i + 1) % k])})) return true;
    return false;
  }
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

namespace detail {

inline bool connected_without(const std::vector<std::vector<bool>>& adj, int m,
                              const std::vector<int>& removed) {
  std::vector<bool> skip(m, false), seen(m, false);
  for (int r : removed) skip[r] = true;
  int start = -1;
  for (int i = 0; i < m; ++i)
    if (!skip[i]) { start = i; break; }
  if (start < 0) return true;
  std::vector<int> stack{start};
  seen[start] = true;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w = 0; w < m; ++w)
      if (adj[u][w] && !skip[w] && !seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  int alive = 0;
  for (int i = 0; i < m; ++i)
    if (!skip[i]) ++alive;
  return count == alive;
}

}  // namespace detail

inline ValidationReport validate_graph(const PolyhedronGraph& g) {
  ValidationReport rep;
  int m = g.vertex_count;
  if (m < 4) rep.errors.push_back("fewer than 4 vertices");
  for (size_t fi = 0; fi < g.faces.size(); ++fi) {
    const auto& f = g.faces[fi];
    if (f.size() < 3)
      rep.errors.push_back("face " + std::to_string(fi) + " has fewer than 3 vertices");
    std::set<int> uniq(f.begin(), f.end());
    if (uniq.size() != f.size())
      rep.errors.push_back("face " + std::to_string(fi) + " repeats a vertex");
    for (int v : f)
      if (v < 0 || v >= m)
        rep.errors.push_back("face " + std::to_string(fi) + " references vertex " +
                             std::to_string(v) + " out of range");
  }
  if (!rep.errors.empty()) return rep;

  // Each directed edge must appear exactly once: every undirected edge is
  // traversed twice, in opposite directions.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& f : g.faces) {
    int k = static_cast<int>(f.size());
    for (int i = 0; i < k; ++i) ++directed[{f[i], f[(i + 1) % k]}];
  }
  for (const auto& [e, count] : directed) {
    if (count > 1)
      rep.errors.push_back("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                           ") traversed twice in same direction");
    else if (!directed.count({e.second, e.first}))
      rep.errors.push_back("edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                           ") appears in only one face");
  }
  if (!rep.errors.empty()) return rep;

  int n = g.face_count();
  int e = g.edge_count();
  if (m - e + n != 2)
    rep.errors.push_back("Euler formula violated: " + std::to_string(m) + " - " +
                         std::to_string(e) + " + " + std::to_string(n) + " != 2");

  auto adj = g.vertex_adjacency();
  for (int i = 0; i < m; ++i) {
    int deg = 0;
    for (int j = 0; j < m; ++j)
      if (adj[i][j]) ++deg;
    if (deg < 3) rep.errors.push_back("vertex " + std::to_string(i) + " has degree < 3");
  }
  if (!rep.errors.empty()) return rep;

  if (m <= 64) {
    if (!detail::connected_without(adj, m, {}))
      rep.errors.push_back("graph is disconnected");
    for (int a = 0; a < m && rep.errors.empty(); ++a)
      if (!detail::connected_without(adj, m, {a}))
        rep.errors.push_back("cut vertex " + std::to_string(a) + ": graph is not 2-connected");
    for (int a = 0; a < m && rep.errors.empty(); ++a)
      for (int b = a + 1; b < m && rep.errors.empty(); ++b)
        if (!detail::connected_without(adj, m, {a, b}))
          rep.errors.push_back("cut pair {" + std::to_string(a) + "," + std::to_string(b) +
                               "}: graph is not 3-connected");
  } else {
    rep.warnings.push_back("3-connectivity check skipped for " + std::to_string(m) + " > 64 vertices");
  }
  return rep;
}

// Faces of the dual = vertex stars of the input, in rotational order around
// each vertex. Walks directed edges: from the face containing (u, i) the next
// face around i is the one containing the directed edge into i from the
// successor of i.
inline PolyhedronGraph dual_graph(const PolyhedronGraph& g) {
  auto rep = validate_graph(g);
  if (!rep.ok()) throw std::invalid_argument("dual_graph: invalid input: " + rep.errors.front());

  std::map<std::pair<int, int>, int> face_of_directed;  // directed edge -> face index
  for (size_t fi = 0; fi < g.faces.size(); ++fi) {
    const auto& f = g.faces[fi];
    int k = static_cast<int>(f.size());
    for (int i = 0; i < k; ++i) face_of_directed[{f[i], f[(i + 1) % k]}] = static_cast<int>(fi);
  }

  PolyhedronGraph d;
  d.name = g.name + "_dual";
  d.vertex_count = g.face_count();
  d.faces.resize(g.vertex_count);
  for (int v = 0; v < g.vertex_count; ++v) {
    // Find one face containing v and the successor of v in it.
    int f0 = -1, succ0 = -1;
    for (size_t fi = 0; fi < g.faces.size() && f0 < 0; ++fi) {
      const auto& f = g.faces[fi];
      int k = static_cast<int>(f.size());
      for (int i = 0; i < k; ++i)
        if (f[i] == v) {
          f0 = static_cast<int>(fi);
          succ0 = f[(i + 1) % k];
          break;
        }
    }
    int face = f0, succ = succ0;
    do {
      d.faces[v].push_back(face);
      // Cross edge {v, succ}: the neighboring face contains directed (succ, v).
      face = face_of_directed.at({succ, v});
      const auto& f = g.faces[face];
      int k = static_cast<int>(f.size());
      for (int i = 0; i < k; ++i)
        if (f[i] == v) {
          succ = f[(i + 1) % k];
          break;
        }
    } while (face != f0);
  }
  return d;
}

// Face lattice isomorphism check (used for dual-of-dual and A0 combinatorics).
inline bool same_combinatorics(const PolyhedronGraph& a, const PolyhedronGraph& b,
                               const std::vector<int>& vertex_map) {
  if (a.vertex_count != b.vertex_count || a.face_count() != b.face_count()) return false;
  std::set<std::vector<int>> bfaces;
  for (const auto& f : b.faces) {
    std::vector<int> s(f);
    std::sort(s.begin(), s.end());
    bfaces.insert(s);
  }
  for (const auto& f : a.faces) {
    std::vector<int> s;
    for (int v : f) s.push_back(vertex_map[v]);
    std::sort(s.begin(), s.end());
    if (!bfaces.count(s)) return false;
  }
  return true;
}

inline bool same_combinatorics(const PolyhedronGraph& a, const PolyhedronGraph& b) {
  std::vector<int> identity(a.vertex_count);
  for (int i = 0; i < a.vertex_count; ++i) identity[i] = i;
  return same_combinatorics(a, b, identity);
}

}  // namespace polypack
