#pragma once

#include <utility>
#include <vector>

#include "conegeo/gauge.hpp"
#include "conegeo/pseudo_euclidean.hpp"
#include "conegeo/sphere_models.hpp"

namespace conegeo {

/// kappa = -(q,q).
double space_form_curvature(const Vec& q);

/// H = -(s,q) for a normalized Moebius sphere.
double sphere_mean_curvature(const HomSphere& s, const Vec& q);

enum class PencilClass { Elliptic, Parabolic, Hyperbolic };
const char* to_string(PencilClass c);

/// Projective line through two Moebius spheres.
class SpherePencil {
 public:
  SpherePencil(HomSphere s1, HomSphere s2, double eps_sig = 1e-9);

  const HomSphere& s1() const noexcept { return s1_; }
  const HomSphere& s2() const noexcept { return s2_; }
  const SignatureTriple& signature() const noexcept { return sig_; }
  double eps_sig() const noexcept { return eps_; }

 private:
  HomSphere s1_, s2_;
  SignatureTriple sig_;
  double eps_;
};

/// (2,0,0) elliptic, (1,0,1) parabolic, (1,1,0) hyperbolic.
PencilClass classify_pencil(const SpherePencil& pc);

/// Null directions of the pencil: 0, 1 or 2 points, matching the class.
std::vector<HomPoint> pencil_base_points(const SpherePencil& pc);

struct ContactProjection {
  HomPoint xi;  // (xi,p) = 0, (xi,q) = -1
  Vec nu;       // (nu,p) = -1, (nu,q) = 0
};

/// Point and tangent-plane representatives of the contact element span{s1,s2}.
ContactProjection space_form_projection(const Vec& s1, const Vec& s2, const SubgeometryGauge& gauge);

/// Orthogonal splitting of the Lie space (n = 3) into two (2,1) subspaces.
class CyclideDecomposition {
 public:
  CyclideDecomposition(std::vector<Vec> plus, std::vector<Vec> minus, double eps = 1e-10);

  const std::vector<Vec>& plus() const noexcept { return plus_; }
  const std::vector<Vec>& minus() const noexcept { return minus_; }
  const Space& space() const noexcept { return plus_.front().space(); }

  /// Frames (w0, w1, w2) with (w0,w0) = -1, (w1,w1) = (w2,w2) = 1, pairwise orthogonal.
  const std::vector<Vec>& plus_frame() const noexcept { return plus_frame_; }
  const std::vector<Vec>& minus_frame() const noexcept { return minus_frame_; }

 private:
  std::vector<Vec> plus_, minus_;
  std::vector<Vec> plus_frame_, minus_frame_;
};

/// The torus of revolution with tube radius rho around the z-axis circle of
/// radius R: V+ carries the spheres of radius rho centred on that circle.
CyclideDecomposition torus_decomposition(double R, double rho);

/// sigma(theta) = w0 + cos(theta) w1 + sin(theta) w2 on each side.
std::pair<Vec, Vec> cyclide_contact_elements(const CyclideDecomposition& cd, double theta_plus,
                                             double theta_minus);

enum class Causal { Spacelike, Timelike, Null };
const char* to_string(Causal c);

struct CyclideReport {
  double pp_plus = 0.0;   // (p+, p+)
  double pp_minus = 0.0;  // (p-, p-)
  double sum_residual = 0.0;  // |pp_plus + pp_minus + 1|
  Causal plus_kind = Causal::Null;
  Causal minus_kind = Causal::Null;
};

CyclideReport classify_cyclide(const CyclideDecomposition& cd, const SubgeometryGauge& gauge,
                               double eps = 1e-10);

}  // namespace conegeo
