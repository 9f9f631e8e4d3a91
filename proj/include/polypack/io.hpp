#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "polypack/packing.hpp"
#include "polypack/rootsys.hpp"

namespace polypack {

using nlohmann::json;

// All numeric output carries 17 significant digits so round-trips are exact.
inline std::string format_real(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline json matrix_to_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int c = 0; c < M.cols(); ++c) row.push_back(M(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::MatrixXd matrix_from_json(const json& rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows[0].size()) : 0;
  Eigen::MatrixXd M(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) M(i, k) = rows[i][k].get<double>();
  return M;
}

// --- polyhedron graphs ------------------------------------------------------

inline json graph_to_json(const PolyhedronGraph& g) {
  return json{{"name", g.name}, {"vertex_count", g.vertex_count}, {"faces", g.faces}};
}

inline PolyhedronGraph graph_from_json(const json& j) {
  PolyhedronGraph g;
  g.name = j.value("name", std::string{});
  if (!j.contains("vertex_count") || !j.contains("faces"))
    throw std::runtime_error("polyhedron JSON needs vertex_count and faces");
  g.vertex_count = j.at("vertex_count").get<int>();
  g.faces = j.at("faces").get<std::vector<std::vector<int>>>();
  return g;
}

inline PolyhedronGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return graph_from_json(j);
}

// --- configurations and root systems ---------------------------------------

// Vertex and face labels are embedded so matrix rows and columns can be tied
// back to the combinatorics when comparing tables.
inline json configuration_to_json(const PackingConfiguration& cfg) {
  json j;
  j["graph"] = graph_to_json(cfg.graph);
  json vlabels = json::array(), flabels = json::array();
  for (int i = 0; i < cfg.m(); ++i) vlabels.push_back("v" + std::to_string(i));
  for (int k = 0; k < cfg.n(); ++k) flabels.push_back("f" + std::to_string(k));
  j["vertex_labels"] = vlabels;
  j["face_labels"] = flabels;
  j["C"] = matrix_to_json(cfg.C);
  j["D"] = matrix_to_json(cfg.D);
  return j;
}

inline json root_system_to_json(const RootSystem& rs) {
  json j;
  json vlabels = json::array(), flabels = json::array();
  for (int i = 0; i < rs.G.rows(); ++i) vlabels.push_back("v" + std::to_string(i));
  for (std::size_t k = 0; k < rs.reflections.size(); ++k)
    flabels.push_back("f" + std::to_string(k));
  j["vertex_labels"] = vlabels;
  j["face_labels"] = flabels;
  j["G"] = matrix_to_json(rs.G);
  j["G_tilde"] = matrix_to_json(rs.G_tilde);
  j["roots"] = matrix_to_json(rs.roots);
  j["kernel"] = matrix_to_json(rs.kernel);
  return j;
}

// --- orbit node streams -----------------------------------------------------

// One JSON object per line: {"word": [...], "curvatures": [...]}.
inline void write_node_stream(std::ostream& out, const std::vector<OrbitNode>& nodes) {
  out.precision(17);
  for (const auto& node : nodes) {
    json j;
    j["word"] = node.word;
    json curv = json::array();
    for (double b : node.curvatures()) curv.push_back(b);
    j["curvatures"] = std::move(curv);
    out << j.dump() << "\n";
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace polypack
