#pragma once

#include <Eigen/Dense>

#include <optional>
#include <span>

#include "conegeo/gauge.hpp"
#include "conegeo/pseudo_euclidean.hpp"

namespace conegeo {

/// Null vector representing a point. Any nonzero scale is allowed; use
/// `normalized` before reading off scale-dependent values.
class HomPoint {
 public:
  explicit HomPoint(Vec v, double eps = 1e-10);

  const Vec& v() const noexcept { return v_; }

  /// Representative with (v, q) = -1. Throws InfinitePoint when (v, q) ~ 0.
  HomPoint normalized(const Vec& q) const;

 private:
  Vec v_;
};

enum class SphereModel { Moebius, Lie };

/// Oriented hypersphere. Moebius model: spacelike, (s,s) = 1, sign = orientation.
/// Lie model: null vector with a p-component (or a point sphere).
class HomSphere {
 public:
  static HomSphere moebius(Vec s, double eps = 1e-10);
  static HomSphere lie(Vec sigma, double eps = 1e-10);

  const Vec& v() const noexcept { return v_; }
  SphereModel model() const noexcept { return model_; }

 private:
  HomSphere(Vec v, SphereModel m) : v_(std::move(v)), model_(m) {}
  Vec v_;
  SphereModel model_;
};

/// Concrete Euclidean description: a sphere with signed radius (0 = point) or
/// an oriented plane {x : x.normal = offset}.
struct EuclideanSphereData {
  enum class Kind { Sphere, Plane };

  Kind kind = Kind::Sphere;
  Eigen::VectorXd center;
  double radius = 0.0;
  Eigen::VectorXd normal;
  double offset = 0.0;

  static EuclideanSphereData sphere(Eigen::VectorXd center, double radius);
  static EuclideanSphereData point(Eigen::VectorXd x) { return sphere(std::move(x), 0.0); }
  /// Normal must have unit length.
  static EuclideanSphereData plane(Eigen::VectorXd normal, double offset);

  bool is_plane() const noexcept { return kind == Kind::Plane; }
  bool is_point() const noexcept { return kind == Kind::Sphere && radius == 0.0; }
  int dim() const { return static_cast<int>(is_plane() ? normal.size() : center.size()); }
};

/// xi(x) = o + x + |x|^2 inf.
HomPoint lift_point(const Space& space, const Eigen::VectorXd& x);

/// Chart coordinates of the point in the space form of the gauge. Flat gauges
/// give R^n; curved gauges give the n+1 coordinates of the q-orthogonal part
/// in the orthonormal frame (e_1..e_n, o - inf, o + inf) with q's direction
/// removed (for q = o + inf this is the unit sphere S^n of the stereographic model).
Eigen::VectorXd project_point(const HomPoint& hp, const SubgeometryGauge& gauge);

/// s = (o + c + (|c|^2 - r^2) inf) / r, or n + 2 d inf for planes.
HomSphere lift_sphere_moebius(const Space& space, const EuclideanSphereData& d);
/// sigma = o + c + (|c|^2 - r^2) inf + r p, or n + 2 d inf + p for planes.
HomSphere lift_sphere_lie(const Space& space, const EuclideanSphereData& d);

struct SphereLift {
  std::optional<HomSphere> moebius;  // empty for point spheres
  std::optional<HomSphere> lie;      // empty in Moebius spaces
};
SphereLift lift_sphere(const Space& space, const EuclideanSphereData& d);

/// Inverse of the lifts for the flat chart of the gauge.
EuclideanSphereData sphere_data(const HomSphere& hs, const SubgeometryGauge& gauge);

/// (hp.v, hs.v) on the stored representatives.
double incidence_residual(const HomPoint& hp, const HomSphere& hs);

/// Scale-free incidence test: |(v, s)| <= tol * |v| * |s|.
bool is_incident(const HomPoint& hp, const HomSphere& hs, double tol = 1e-10);

/// (sigma_1, sigma_2); zero iff the oriented spheres touch.
double contact_residual(const HomSphere& a, const HomSphere& b);

/// Lie map adding delta to every signed radius (Laguerre null rotation).
Eigen::MatrixXd parallel_transformation(const Space& space, double delta);

/// Sphere through n+1 points of R^n (a circle for three points in the plane),
/// oriented with positive radius.
HomSphere circumsphere(const Space& space, std::span<const Eigen::VectorXd> points);

/// Length of a common tangent segment, sqrt(|c1 - c2|^2 - (r1 - r2)^2).
double tangential_distance(const EuclideanSphereData& a, const EuclideanSphereData& b);

/// Copy a vector of the Moebius space of dimension n into the {p}^perp part of
/// the Lie space (or return it unchanged when the target is Moebius).
Vec embed(const Vec& v, const Space& target);

}  // namespace conegeo
