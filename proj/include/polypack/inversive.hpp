#pragma once

// Augmented curvature-center coordinates for oriented generalized circles,
// the signature-(3,1) bilinear form, pairings, and circle inversions.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace polypack {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

// An oriented generalized circle as the 4-vector (b~, b, h1, h2):
// b is the signed curvature, b~ the curvature after inversion through the
// unit circle, (h1, h2) is b times the center, or the unit normal when b = 0.
// The interior is the region the normal vector points toward.
struct OrientedCircle {
  Vec4 v = Vec4::Zero();

  OrientedCircle() = default;
  explicit OrientedCircle(const Vec4& coords) : v(coords) {}
  OrientedCircle(double co_curv, double curv, double h1, double h2)
      : v(co_curv, curv, h1, h2) {}

  double co_curvature() const { return v[0]; }
  double curvature() const { return v[1]; }
  double h1() const { return v[2]; }
  double h2() const { return v[3]; }

  bool is_line(double tol = 1e-12) const { return std::abs(v[1]) < tol; }

  // Center and radius; only meaningful when curvature != 0.
  Vec2 center() const { return Vec2(v[2], v[3]) / v[1]; }
  double radius() const { return 1.0 / std::abs(v[1]); }

  OrientedCircle flipped() const { return OrientedCircle(Vec4(-v)); }
};

enum class Orientation { Inward, Outward };

// The bilinear form of signature (3,1) on circle space, with the symmetric
// -1/2 coupling between b~ and b so that c^T P c = -b~ b + h1^2 + h2^2 = 1
// on valid circles.
inline const Mat4& form_P() {
  static const Mat4 P = [] {
    Mat4 m = Mat4::Zero();
    m(0, 1) = m(1, 0) = -0.5;
    m(2, 2) = m(3, 3) = 1.0;
    return m;
  }();
  return P;
}

inline const Mat4& form_P_inverse() {
  static const Mat4 Pinv = [] {
    Mat4 m = Mat4::Zero();
    m(0, 1) = m(1, 0) = -2.0;
    m(2, 2) = m(3, 3) = 1.0;
    return m;
  }();
  return Pinv;
}

inline double pairing(const Vec4& a, const Vec4& b) {
  return -0.5 * (a[0] * b[1] + a[1] * b[0]) + a[2] * b[2] + a[3] * b[3];
}

inline double pairing(const OrientedCircle& a, const OrientedCircle& b) {
  return pairing(a.v, b.v);
}

// Relative placement of two distinct oriented circles, keyed by the value
// of the pairing.
enum class CirclePairClass {
  DisjointExternal,  // < -1: disjoint, neither interior contains the other
  TangentExternal,   // = -1
  Crossing,          // (-1, 1) \ {0}: crossing at angle theta, cos(theta)
  Orthogonal,        // = 0
  TangentNested,     // = +1: tangent, one interior contains the other
  DisjointNested,    // > +1
};

inline CirclePairClass classify_pairing(double value, double tol = 1e-9) {
  if (value < -1.0 - tol) return CirclePairClass::DisjointExternal;
  if (value <= -1.0 + tol) return CirclePairClass::TangentExternal;
  if (std::abs(value) <= tol) return CirclePairClass::Orthogonal;
  if (value < 1.0 - tol) return CirclePairClass::Crossing;
  if (value <= 1.0 + tol) return CirclePairClass::TangentNested;
  return CirclePairClass::DisjointNested;
}

inline OrientedCircle circle_from_center_radius(const Vec2& center, double radius,
                                                Orientation orientation = Orientation::Inward) {
  if (!(radius > 0.0))
    throw std::invalid_argument("circle_from_center_radius: radius must be positive");
  double b = 1.0 / radius;
  Vec2 h = b * center;
  double co = (h.squaredNorm() - 1.0) / b;
  OrientedCircle c(co, b, h[0], h[1]);
  if (orientation == Orientation::Outward) c = c.flipped();
  return c;
}

inline OrientedCircle line_from_point_normal(const Vec2& point, const Vec2& unit_normal) {
  if (std::abs(unit_normal.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("line_from_point_normal: normal must be unit length");
  return OrientedCircle(2.0 * point.dot(unit_normal), 0.0, unit_normal[0], unit_normal[1]);
}

// The point circle (zero-radius) representation of a plane point; its pairing
// with an oriented circle is positive iff the point lies in the interior.
inline Vec4 point_vector(const Vec2& z) {
  return Vec4(z.squaredNorm(), 1.0, z[0], z[1]);
}

inline bool point_in_interior(const Vec2& z, const OrientedCircle& c) {
  return pairing(point_vector(z), c.v) > 0.0;
}

inline OrientedCircle invert_circle(const OrientedCircle& mirror, const OrientedCircle& c) {
  return OrientedCircle(Vec4(c.v - 2.0 * pairing(mirror, c) * mirror.v));
}

// 4x4 matrix of the inversion through `mirror`, acting on coordinate vectors.
inline Mat4 inversion_matrix(const OrientedCircle& mirror) {
  return Mat4::Identity() - 2.0 * mirror.v * (mirror.v.transpose() * form_P());
}

struct MobiusMatrix {
  Mat4 m = Mat4::Identity();

  MobiusMatrix() = default;
  explicit MobiusMatrix(const Mat4& mat) : m(mat) {}

  double form_residual() const {
    return (m.transpose() * form_P() * m - form_P()).cwiseAbs().maxCoeff();
  }

  static MobiusMatrix identity() { return MobiusMatrix(); }

  static MobiusMatrix inversion(const OrientedCircle& mirror) {
    return MobiusMatrix(inversion_matrix(mirror));
  }

  static MobiusMatrix translation(const Vec2& t) {
    Mat4 mat = Mat4::Identity();
    mat(0, 1) = t.squaredNorm();
    mat(0, 2) = 2.0 * t[0];
    mat(0, 3) = 2.0 * t[1];
    mat(2, 1) = t[0];
    mat(3, 1) = t[1];
    return MobiusMatrix(mat);
  }

  static MobiusMatrix scaling(double lambda) {
    Mat4 mat = Mat4::Identity();
    mat(0, 0) = lambda;
    mat(1, 1) = 1.0 / lambda;
    return MobiusMatrix(mat);
  }

  MobiusMatrix compose(const MobiusMatrix& other) const {
    return MobiusMatrix(m * other.m);
  }
};

inline OrientedCircle apply_mobius(const MobiusMatrix& M, const OrientedCircle& c,
                                   double tol = 1e-8) {
  if (M.form_residual() > tol)
    throw std::invalid_argument("apply_mobius: matrix does not preserve the form, residual " +
                                std::to_string(M.form_residual()));
  return OrientedCircle(Vec4(M.m * c.v));
}

// Residual of the defining invariants; zero for a valid oriented circle.
inline double circle_invariant_residual(const OrientedCircle& c) {
  double self = std::abs(pairing(c, c) - 1.0);
  double consistency;
  if (c.is_line())
    consistency = std::abs(c.h1() * c.h1() + c.h2() * c.h2() - 1.0);
  else
    consistency = std::abs(c.co_curvature() * c.curvature() -
                           (c.h1() * c.h1() + c.h2() * c.h2() - 1.0));
  return std::max(self, consistency);
}

}  // namespace polypack
