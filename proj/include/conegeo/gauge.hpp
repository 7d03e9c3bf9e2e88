#pragma once

#include <optional>

#include "conegeo/pseudo_euclidean.hpp"

namespace conegeo {

/// The absolute configuration (p, q) that breaks Lie or Moebius symmetry down
/// to a space form: p is the point sphere complex ((p,p) = -1, absent in a
/// Moebius space) and q the space form vector, with (p,q) = 0.
class SubgeometryGauge {
 public:
  SubgeometryGauge(std::optional<Vec> p, Vec q, double eps = 1e-10);

  /// p = basis p (Lie spaces only), q = 2 inf.
  static SubgeometryGauge euclidean(const Space& space);
  /// Space form of sectional curvature kappa with the origin o as a point of
  /// the quadric: q = 2 inf, sqrt(kappa)(o + inf) or sqrt(-kappa)(o - inf).
  static SubgeometryGauge space_form(const Space& space, double kappa);

  const Space& space() const noexcept { return q_.space(); }
  const std::optional<Vec>& p() const noexcept { return p_; }
  const Vec& q() const noexcept { return q_; }

  /// kappa = -(q,q).
  double curvature() const;

  /// True when q is a positive multiple of inf and p (if present) is the basis
  /// timelike vector, i.e. the flat chart x <-> o + x + |x|^2 inf applies.
  bool is_euclidean_chart(double eps = 1e-12) const;

 private:
  std::optional<Vec> p_;
  Vec q_;
};

}  // namespace conegeo
