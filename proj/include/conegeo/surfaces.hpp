#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

#include "conegeo/gauge.hpp"
#include "conegeo/grid.hpp"
#include "conegeo/pseudo_euclidean.hpp"

namespace conegeo {

/// Immersion sampled on a rectangular (u, v) grid, curvature-line
/// parametrized. Normals point to the side where the round sphere has
/// kappa_1 = kappa_2 = +1/r (inward), so dn = -kappa df along principal directions.
struct SampledSurface {
  std::string kind;
  Axis u, v;
  std::vector<Eigen::Vector3d> f;
  std::vector<Eigen::Vector3d> n;
  std::vector<double> k1, k2;  // principal curvatures along u and v
  std::vector<double> E, F, G, L, M, N;
  bool analytic = true;  // false: curvatures estimated from samples

  GridTopology topology() const { return {u.n, v.n, u.periodic(), v.periodic()}; }
  int samples() const { return u.n * v.n; }
  double H(int k) const { return 0.5 * (k1[k] + k2[k]); }
  double K(int k) const { return k1[k] * k2[k]; }
};

SampledSurface make_plane(const Axis& u, const Axis& v);
/// r (cos v cos u, cos v sin u, sin v).
SampledSurface make_sphere(double r, const Axis& u, const Axis& v);
/// (r cos(u/r), r sin(u/r), v): arc length times height.
SampledSurface make_cylinder(double r, const Axis& u, const Axis& v);
/// (a cosh v cos u, a cosh v sin u, a v).
SampledSurface make_catenoid(double a, const Axis& u, const Axis& v);
/// (v sin(alpha) cos u, v sin(alpha) sin u, v cos(alpha)), v > 0.
SampledSurface make_cone(double alpha, const Axis& u, const Axis& v);
/// ((R + rho cos v) cos u, (R + rho cos v) sin u, rho sin v).
SampledSurface make_torus(double R, double rho, const Axis& u, const Axis& v);
/// Revolution of the meridian (r_j, z_j) sampled at the v-grid values.
/// Derivatives come from finite differences, so the surface is marked estimated.
SampledSurface make_revolution(const std::vector<double>& r, const std::vector<double>& z, const Axis& u,
                               const Axis& v);

/// Dispatch by generator name ("plane", "sphere", ...) with positional parameters.
SampledSurface make_surface(const std::string& kind, const std::vector<double>& params, const Axis& u,
                            const Axis& v);

/// Grid used when a scene gives none: periodic in u for the rotational kinds,
/// periodic in both directions for the torus.
std::pair<Axis, Axis> default_grid(const std::string& kind, const std::vector<double>& params);

/// Point and tangent-plane lifts in the Euclidean gauge.
struct LiftedSurface {
  GridTopology topo;
  std::vector<Vec> xi;
  std::vector<Vec> nu;
  std::vector<double> H;
  SubgeometryGauge gauge;
};

/// xi = o + f + |f|^2 inf, nu = n + 2 (f.n) inf + p. Needs q = 2 inf in Lie(3).
LiftedSurface lift_surface(const SampledSurface& s, const SubgeometryGauge& gauge);

/// Largest violation over samples of the seven lift conditions (relative to |xi|, |nu|).
double lift_invariant_residual(const LiftedSurface& ls);

/// gamma = nu + H xi per sample.
std::vector<Vec> central_sphere_congruence(const LiftedSurface& ls, const std::vector<double>& H);

/// Uses the central sphere congruence of the surface's own mean curvature:
/// max(max_edges |(d gamma, q)|, max_samples |(gamma, q) + H0|).
double cmc_residual(const LiftedSurface& ls, double H0, const Vec& q);

/// Composite midpoint rule for the integral of (H^2 - K) dA. Needs both axes
/// laid out as Cells or Periodic.
double willmore_energy(const SampledSurface& s);

struct IsothermicResidual {
  double conformal = 0.0;   // max |E - G| / E
  double orthogonal = 0.0;  // max |F| / E
  double principal = 0.0;   // max |M| / E
};
IsothermicResidual isothermic_residual(const SampledSurface& s);

/// max |c E G (k1 - k2)^2 - (E - eps G)|.
double guichard_surface_residual(const SampledSurface& s, double c, int eps);

/// max |a K + 2 b H + c|.
double linear_weingarten_residual(const SampledSurface& s, double a, double b, double c);

struct LinearWeingartenFit {
  Eigen::Vector3d abc;  // unit norm, largest-magnitude entry positive
  double residual = 0.0;
  double discriminant = 0.0;  // b^2 - a c
};
LinearWeingartenFit linear_weingarten_fit(const SampledSurface& s);

}  // namespace conegeo
