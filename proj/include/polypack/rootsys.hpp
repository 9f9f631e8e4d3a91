#pragma once

// Root space / weight space algebra for a packing configuration: the Gram
// matrix G = CtPC, the dual form Gt on the row space, simple roots, simple
// reflections, the generalized Descartes identity, base-tuple descent,
// multiplicity, and the growth lower bound.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "polypack/inversive.hpp"
#include "polypack/packing.hpp"

namespace polypack {

struct RootSystem {
  MatrixXd C;            // 4 x m configuration matrix the system was built from
  MatrixXd G;            // m x m weight-space form CtPC
  MatrixXd C_pinv;       // m x 4 Moore-Penrose right inverse of C
  MatrixXd G_tilde;      // m x m dual form on the row space of C
  MatrixXd roots;        // m x n, column j = alpha_j = -CtP d_j
  std::vector<MatrixXd> reflections;  // sigma_j = I - 2 alpha_j alpha_j^T Gt
  MatrixXd kernel;         // m x (m-4) orthonormal basis of ker C
  MatrixXd row_projector;  // C_pinv C, orthogonal projector onto row space
  PolyhedronGraph graph;

  int m() const { return static_cast<int>(G.rows()); }
  int n() const { return static_cast<int>(roots.cols()); }

  VectorXd root(int j) const { return roots.col(j); }

  // alpha_j^T Gt b: positive means sigma_j strictly decreases the tuple.
  double root_pairing(int j, const VectorXd& b) const {
    return roots.col(j).dot(G_tilde * b);
  }

  VectorXd reflect(int j, const VectorXd& b) const {
    return b - 2.0 * root_pairing(j, b) * roots.col(j);
  }

  // Transpose action on the weight space.
  VectorXd reflect_weight(int j, const VectorXd& s) const {
    return s - 2.0 * (G_tilde * roots.col(j)) * roots.col(j).dot(s);
  }

  double descartes_residual(const VectorXd& b) const { return b.dot(G_tilde * b); }

  double row_space_residual(const VectorXd& b) const {
    return (b - row_projector * b).norm();
  }
};

inline RootSystem build_root_system(const PackingConfiguration& cfg) {
  RootSystem rs;
  rs.graph = cfg.graph;
  rs.C = cfg.C;
  int m = cfg.m(), n = cfg.n();
  const Mat4& P = form_P();

  Eigen::JacobiSVD<MatrixXd> svd(cfg.C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(3) < 1e-10 * sv(0)) throw std::runtime_error("build_root_system: C is rank deficient");

  // Pseudo-inverse and kernel from the same factorization.
  MatrixXd sinv = MatrixXd::Zero(m, 4);
  for (int i = 0; i < 4; ++i) sinv(i, i) = 1.0 / sv(i);
  rs.C_pinv = svd.matrixV() * sinv * svd.matrixU().transpose();
  rs.kernel = svd.matrixV().rightCols(m - 4);
  rs.row_projector = rs.C_pinv * cfg.C;

  rs.G = cfg.C.transpose() * P * cfg.C;
  rs.G_tilde = rs.C_pinv * form_P_inverse() * rs.C_pinv.transpose();
  rs.roots = -(cfg.C.transpose() * P * cfg.D);

  if ((cfg.C * rs.C_pinv - Mat4::Identity()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("build_root_system: pseudo-inverse failure, C C~ != I");
  if ((cfg.C * rs.G_tilde * cfg.C.transpose() - form_P_inverse()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("build_root_system: C Gt Ct != P^-1");

  for (int j = 0; j < n; ++j) {
    double norm = rs.roots.col(j).dot(rs.G_tilde * rs.roots.col(j));
    if (std::abs(norm - 1.0) > 1e-8)
      throw std::runtime_error("build_root_system: root " + std::to_string(j) +
                               " not normalized, alpha^T Gt alpha = " + std::to_string(norm));
    if (rs.roots.col(j).minCoeff() < -1e-8)
      throw std::runtime_error("build_root_system: root " + std::to_string(j) +
                               " has a negative entry");
    rs.reflections.push_back(MatrixXd::Identity(m, m) -
                             2.0 * rs.roots.col(j) *
                                 (rs.roots.col(j).transpose() * rs.G_tilde));
  }
  for (int j1 = 0; j1 < n; ++j1)
    for (int j2 = j1 + 1; j2 < n; ++j2) {
      double v = rs.roots.col(j1).dot(rs.G_tilde * rs.roots.col(j2));
      if (v > 1e-8)
        throw std::runtime_error("build_root_system: off-diagonal root pairing positive");
    }

  // Signature of G: three positive, one negative, m-4 zero.
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(rs.G);
  int pos = 0, negc = 0, zero = 0;
  double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
  for (int i = 0; i < m; ++i) {
    double lambda = eig.eigenvalues()(i);
    if (std::abs(lambda) < 1e-8 * scale)
      ++zero;
    else if (lambda > 0)
      ++pos;
    else
      ++negc;
  }
  if (pos != 3 || negc != 1 || zero != m - 4)
    throw std::runtime_error("build_root_system: G signature is not (3,1," +
                             std::to_string(m - 4) + " zeros)");
  return rs;
}

// Column j = alpha_j.
inline MatrixXd simple_roots_matrix(const RootSystem& rs) { return rs.roots; }

inline VectorXd reflect_tuple(const RootSystem& rs, int j, const VectorXd& b,
                              double tol = 1e-8) {
  if (rs.row_space_residual(b) > tol * std::max(1.0, b.norm()))
    throw std::invalid_argument("reflect_tuple: input is not in the row space of C");
  return rs.reflect(j, b);
}

struct DescentResult {
  VectorXd base;
  // Replay word in orbit convention: applying the generators in order to the
  // base (each acting on the current tuple) recovers the input tuple.
  std::vector<int> word;
  int iterations = 0;
};

inline DescentResult descend_to_base(const RootSystem& rs, VectorXd b, int max_iter = 4096) {
  DescentResult res;
  std::vector<int> applied;
  for (int it = 0; it < max_iter; ++it) {
    double scale = 1e-9 * std::max(1.0, b.norm());
    int strict = -1;
    int strict_count = 0;
    for (int j = 0; j < rs.n(); ++j) {
      double p = rs.root_pairing(j, b);
      if (p > scale) {
        strict = j;
        ++strict_count;
      }
    }
    if (strict_count > 1)
      throw std::runtime_error(
          "descend_to_base: two strictly decreasing generators (numerical failure or "
          "invalid tuple)");
    if (strict < 0) {
      res.base = b;
      res.word.assign(applied.rbegin(), applied.rend());
      res.iterations = it;
      return res;
    }
    b = rs.reflect(strict, b);
    applied.push_back(strict);
  }
  throw std::runtime_error(
      "descend_to_base: iteration cap exceeded (unbounded packing or numerical failure)");
}

struct MultiplicityVerdict {
  int multiplicity = 1;      // 1 or 2
  int fixing_generator = -1;  // set when multiplicity = 2
};

inline MultiplicityVerdict classify_multiplicity(const RootSystem& rs, const VectorXd& base) {
  double scale = 1e-9 * std::max(1.0, base.norm());
  MultiplicityVerdict v;
  int zeros = 0;
  for (int j = 0; j < rs.n(); ++j) {
    double p = rs.root_pairing(j, base);
    if (p > scale)
      throw std::invalid_argument("classify_multiplicity: input is not a base tuple");
    if (std::abs(p) <= scale) {
      ++zeros;
      v.fixing_generator = j;
    }
  }
  if (zeros > 1)
    throw std::runtime_error(
        "classify_multiplicity: more than one generator fixes the base (numerical failure)");
  v.multiplicity = (zeros == 1) ? 2 : 1;
  return v;
}

struct GrowthStep {
  int k = 0;
  double d_k = 0.0;
  double bound = 0.0;  // 2 mu (k-1)
};

struct GrowthReport {
  double mu = 0.0;
  std::vector<GrowthStep> steps;
  bool bound_holds = true;
};

// Checks d_k >= 2 mu (k-1) along a reduced word applied to a base tuple,
// where d_k is the coefficient of alpha_{j_k} added at step k.
inline GrowthReport growth_lower_bound_check(const RootSystem& rs, const VectorXd& base,
                                             const std::vector<int>& word, double tol = 1e-8) {
  double scale = 1e-9 * std::max(1.0, base.norm());
  int zeros = 0;
  for (int j = 0; j < rs.n(); ++j) {
    double p = rs.root_pairing(j, base);
    if (p > scale) throw std::invalid_argument("growth_lower_bound_check: not a base tuple");
    if (std::abs(p) <= scale) ++zeros;
  }
  if (zeros > 1)
    throw std::invalid_argument("growth_lower_bound_check: two zero pairings at the base");
  for (size_t i = 1; i < word.size(); ++i)
    if (word[i] == word[i - 1])
      throw std::invalid_argument("growth_lower_bound_check: word is not reduced");

  GrowthReport rep;
  double mu = 1e300;
  for (int j = 0; j < rs.n(); ++j) {
    double p = std::abs(rs.root_pairing(j, base));
    if (p > scale) mu = std::min(mu, p);
  }
  rep.mu = mu;
  VectorXd b = base;
  for (size_t k = 0; k < word.size(); ++k) {
    int j = word[k];
    VectorXd next = rs.reflect(j, b);
    VectorXd inc = next - b;
    double d = inc.dot(rs.roots.col(j)) / rs.roots.col(j).squaredNorm();
    GrowthStep step;
    step.k = static_cast<int>(k) + 1;
    step.d_k = d;
    step.bound = 2.0 * mu * static_cast<double>(k);
    if (d < step.bound - tol * std::max(1.0, std::abs(step.bound))) rep.bound_holds = false;
    rep.steps.push_back(step);
    b = next;
  }
  return rep;
}

}  // namespace polypack
