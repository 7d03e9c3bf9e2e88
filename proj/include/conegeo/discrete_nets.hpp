#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace conegeo {

/// Vertices on the window [0, nu-1] x [0, nv-1], stored at i * nv + j.
/// alpha[i] labels the u-edges (i,j)-(i+1,j), beta[j] the v-edges (i,j)-(i,j+1).
struct QuadNet {
  int nu = 0;
  int nv = 0;
  std::vector<Eigen::Vector3d> x;
  std::vector<double> alpha;
  std::vector<double> beta;

  QuadNet() = default;
  QuadNet(int nu_, int nv_);

  Eigen::Vector3d& at(int i, int j) { return x[static_cast<std::size_t>(i * nv + j)]; }
  const Eigen::Vector3d& at(int i, int j) const { return x[static_cast<std::size_t>(i * nv + j)]; }
  bool labelled() const { return static_cast<int>(alpha.size()) == nu - 1 && static_cast<int>(beta.size()) == nv - 1; }
  /// Largest distance between vertices (scale for tolerances).
  double diameter() const;
  /// Face (i,j): (i,j), (i+1,j), (i+1,j+1), (i,j+1).
  std::array<Eigen::Vector3d, 4> face(int i, int j) const;
};

struct Circle3D {
  Eigen::Vector3d center;
  double radius = 0.0;
  Eigen::Vector3d normal;
};

Circle3D circumcircle3(const Eigen::Vector3d& p1, const Eigen::Vector3d& p2, const Eigen::Vector3d& p3);

/// Distance from a point to a circle in space.
double distance_to_circle(const Circle3D& c, const Eigen::Vector3d& x);

/// Max over the four choices of the distance of one vertex from the circle
/// through the other three.
double circularity_residual(const std::array<Eigen::Vector3d, 4>& q);

/// ((z1-z2)(z3-z4)) / ((z2-z3)(z4-z1)) in an isometric chart of the circle's plane.
double cross_ratio(const std::array<Eigen::Vector3d, 4>& q, double tol = 1e-8);

/// Point on the circle through (a, b, c) at angle theta from c, measured about
/// the circle's centre. Used to build admissible transform data.
Eigen::Vector3d point_on_circle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
                                double theta);

/// Inversion in the sphere with centre c and radius r.
Eigen::Vector3d invert(const Eigen::Vector3d& x, const Eigen::Vector3d& c, double r = 1.0);

struct MiquelResult {
  Eigen::Vector3d xk_hat;
  double edge_residual_j = 0.0;  // (x_j, x_k, xk_hat, xj_hat)
  double edge_residual_l = 0.0;  // (x_l, x_k, xk_hat, xl_hat)
  double face_residual = 0.0;    // (xi_hat, xj_hat, xk_hat, xl_hat), the unused constraint
  /// The nearer candidate (x_k itself) also satisfies the face constraint.
  bool nearer_candidate_admissible = false;
};

/// Fourth point of a Ribaucour-transformed face. Throws Degenerate when the
/// data do not lie on a common sphere/plane or the circles meet tangentially.
MiquelResult miquel_completion(const Eigen::Vector3d& xi, const Eigen::Vector3d& xj, const Eigen::Vector3d& xk,
                               const Eigen::Vector3d& xl, const Eigen::Vector3d& xi_hat,
                               const Eigen::Vector3d& xj_hat, const Eigen::Vector3d& xl_hat, double tol = 1e-8);

struct RibaucourResult {
  QuadNet net;
  double max_face_residual = 0.0;  // transformed faces
  double max_edge_residual = 0.0;  // corresponding edge quads
  int flagged_faces = 0;           // faces where the nearer candidate was also admissible
};

/// Fill the transform from Cauchy data on row i = 0 and column j = 0 (all
/// other entries of `hat` are ignored), lexicographic face order.
RibaucourResult ribaucour_propagate(const QuadNet& net, const QuadNet& hat, double tol = 1e-8);

/// Max circularity residual over the faces of a net.
double net_circularity(const QuadNet& net);

/// max |cr(face) + alpha_i / beta_j|.
double isothermic_residual_discrete(const QuadNet& net);

struct ChristoffelResult {
  QuadNet dual;
  double closure_residual = 0.0;
};

/// Delta_u x* = alpha dx/|dx|^2, Delta_v x* = -beta dx/|dx|^2, x*(0,0) = 0.
/// Throws InvalidArgument when the face closure exceeds tol times the dual's scale.
ChristoffelResult christoffel_dual(const QuadNet& net, double tol = 1e-8);

struct DarbouxResult {
  QuadNet net;
  double closure_gap = 0.0;  // max disagreement of the two ways round each face
};

/// Vertical quads (x, x_n, xhat_n, xhat) get cross-ratio lambda * alpha on
/// u-edges and -lambda * beta on v-edges.
DarbouxResult darboux_transform_discrete(const QuadNet& net, double lambda, const Eigen::Vector3d& seed);

/// Fourth point z3 of a quad with prescribed real cross-ratio.
Eigen::Vector3d solve_cross_ratio(const Eigen::Vector3d& z1, const Eigen::Vector3d& z2, const Eigen::Vector3d& z4,
                                  double cr);

}  // namespace conegeo
