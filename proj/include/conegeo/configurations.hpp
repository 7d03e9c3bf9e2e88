#pragma once

#include <Eigen/Dense>

#include <array>

#include "conegeo/pseudo_euclidean.hpp"
#include "conegeo/sphere_models.hpp"

namespace conegeo {

/// Four distinct points of the unit sphere S^2 in R^3.
struct PointQuadruple {
  std::array<Eigen::Vector3d, 4> x;

  explicit PointQuadruple(const std::array<Eigen::Vector3d, 4>& pts, double eps = 1e-10);
};

/// Lift of a unit vector X to the light cone of Space::moebius(2):
/// X1 e1 + X2 e2 + X3 (o - inf) + (o + inf).
Vec lift_s2(const Eigen::Vector3d& X);

/// Inverse of lift_s2 for any nonzero null representative.
Eigen::Vector3d project_s2(const Vec& y);

/// Normalized s1 + s2; equal inversive angles with both. Throws Degenerate for s1 = -s2.
HomSphere angle_bisector_circle(const HomSphere& s1, const HomSphere& s2);

/// Circle through the three points other than x[d], oriented so that x[d]
/// lies on its positive side.
std::array<HomSphere, 4> oriented_circumcircles(const PointQuadruple& q);

/// Bisecting circle of the pencil through x[a] and x[b]: s_c - s_d for the
/// other two indices c < d.
HomSphere pair_bisector(const std::array<HomSphere, 4>& circles, int a, int b);

struct InExCentres {
  std::array<Eigen::Vector3d, 4> y;
  std::array<double, 4> concurrency{};  // third-circle incidence per point
};

/// y[a]: second common point of the three bisecting circles through x[a].
InExCentres in_ex_centres(const PointQuadruple& q);

struct DesmicCentre {
  std::array<int, 4> pairing{};  // x[a] is joined to y[pairing[a]]
  Eigen::Vector4d point;         // homogeneous (z, w), unit length, w >= 0
  double residual = 0.0;         // sqrt of the least-squares minimum
  bool interior = false;         // finite and inside the unit ball
};

/// Concurrency points of the joining lines for the four fixed-point-free-or-
/// identity pairings of the Klein four-group, in the ball model of RP^3.
std::array<DesmicCentre, 4> desmic_centres(const PointQuadruple& X, const InExCentres& Y);

struct AntipodalResult {
  Eigen::MatrixXd g;      // isometry of Space::moebius(2) in null-basis coordinates
  Eigen::Matrix4d boost;  // same map in the orthonormal frame (e1, e2, o-inf, o+inf)
  std::array<Eigen::Vector3d, 4> gx, gy;
  double residual = 0.0;  // max_a |g x[a] + g y[pairing[a]]|
};

/// Hyperbolic translation moving the interior point z to the centre of the ball.
AntipodalResult antipodal_normalization(const PointQuadruple& X, const InExCentres& Y, const Eigen::Vector3d& z,
                                        const std::array<int, 4>& pairing = {0, 1, 2, 3});

/// Action of a 4x4 orthonormal-frame Lorentz matrix on a point of S^2.
Eigen::Vector3d apply_lorentz(const Eigen::Matrix4d& B, const Eigen::Vector3d& X);

}  // namespace conegeo
