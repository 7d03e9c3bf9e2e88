#include "conegeo/configurations.hpp"

#include <cmath>
#include <string>

namespace conegeo {

using V3 = Eigen::Vector3d;

namespace {

const Space& s2space() {
  static const Space s = Space::moebius(2);
  return s;
}

HomSphere negate(const HomSphere& s) { return HomSphere::moebius(-s.v()); }

}  // namespace

PointQuadruple::PointQuadruple(const std::array<V3, 4>& pts, double eps) : x(pts) {
  for (const V3& p : x)
    if (!p.allFinite() || std::abs(p.norm() - 1.0) > eps) fail(ErrorCode::InvalidArgument, "quadruple points must be unit vectors");
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      if ((x[a] - x[b]).norm() < 1e-8) fail(ErrorCode::Degenerate, "quadruple points must be pairwise distinct");
}

Vec lift_s2(const V3& X) {
  const Space& s = s2space();
  Eigen::VectorXd c(4);
  // X3 (o - inf) + (o + inf)
  c << X[2] + 1.0, X[0], X[1], 1.0 - X[2];
  return {s, c};
}

V3 project_s2(const Vec& y) {
  if (!(y.space() == s2space())) fail(ErrorCode::SpaceMismatch, "S^2 points live in Space::moebius(2)");
  const double alpha = y[0], beta = y[3];
  const double w = 0.5 * (alpha + beta);
  if (std::abs(w) <= 1e-14 * y.norm()) fail(ErrorCode::Degenerate, "vector has no S^2 point (w = 0)");
  return V3(y[1], y[2], 0.5 * (alpha - beta)) / w;
}

HomSphere angle_bisector_circle(const HomSphere& s1, const HomSphere& s2) {
  const Vec sum = s1.v() + s2.v();
  const double nn = inner(sum, sum);
  if (nn <= 1e-14) fail(ErrorCode::Degenerate, "bisector undefined for opposite circles");
  return HomSphere::moebius(sum / std::sqrt(nn));
}

std::array<HomSphere, 4> oriented_circumcircles(const PointQuadruple& q) {
  std::array<Vec, 4> lifts = {lift_s2(q.x[0]), lift_s2(q.x[1]), lift_s2(q.x[2]), lift_s2(q.x[3])};
  std::array<std::optional<HomSphere>, 4> out;
  for (int d = 0; d < 4; ++d) {
    std::vector<Vec> three;
    for (int m = 0; m < 4; ++m)
      if (m != d) three.push_back(lifts[m]);
    const std::vector<Vec> comp = orthogonal_complement(three, s2space());
    if (comp.size() != 1) fail(ErrorCode::Degenerate, "three quadruple points do not determine a circle");
    Vec s = comp.front();
    const double ss = inner(s, s);
    if (ss <= 1e-14) fail(ErrorCode::Degenerate, "circumcircle degenerates");
    s = s / std::sqrt(ss);
    const double side = inner(lifts[d], s);
    if (std::abs(side) < 1e-12) fail(ErrorCode::Degenerate, "four points are concircular");
    if (side < 0) s = -s;
    out[d] = HomSphere::moebius(s);
  }
  return {*out[0], *out[1], *out[2], *out[3]};
}

HomSphere pair_bisector(const std::array<HomSphere, 4>& circles, int a, int b) {
  if (a == b || a < 0 || b < 0 || a > 3 || b > 3) fail(ErrorCode::InvalidArgument, "bisector needs two distinct indices");
  int others[2], k = 0;
  for (int m = 0; m < 4; ++m)
    if (m != a && m != b) others[k++] = m;
  return angle_bisector_circle(circles[others[0]], negate(circles[others[1]]));
}

InExCentres in_ex_centres(const PointQuadruple& q) {
  const auto circles = oriented_circumcircles(q);
  InExCentres out;
  for (int a = 0; a < 4; ++a) {
    std::vector<HomSphere> bis;
    for (int b = 0; b < 4; ++b)
      if (b != a) bis.push_back(pair_bisector(circles, a, b));
    const Vec xa = lift_s2(q.x[a]);
    const std::vector<Vec> two = {bis[0].v(), bis[1].v()};
    const std::vector<Vec> comp = orthogonal_complement(two, s2space());
    if (comp.size() != 2) fail(ErrorCode::Degenerate, "bisecting circles coincide");
    const Vec* best = &comp[0];
    if (std::abs(inner(comp[1], xa)) > std::abs(inner(comp[0], xa))) best = &comp[1];
    const Vec& u = *best;
    const double ux = inner(u, xa);
    if (std::abs(ux) <= 1e-12 * u.norm() * xa.norm()) fail(ErrorCode::Degenerate, "bisector pencil is not elliptic");
    const Vec y = u - xa * (inner(u, u) / (2.0 * ux));
    out.y[a] = project_s2(y);
    out.concurrency[a] = std::abs(inner(lift_s2(out.y[a]), bis[2].v()));
  }
  return out;
}

std::array<DesmicCentre, 4> desmic_centres(const PointQuadruple& X, const InExCentres& Y) {
  static const std::array<std::array<int, 4>, 4> klein = {
      {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}};
  std::array<DesmicCentre, 4> out;
  for (std::size_t k = 0; k < klein.size(); ++k) {
    Eigen::Matrix4d acc = Eigen::Matrix4d::Zero();
    std::array<Eigen::Matrix4d, 4> proj;
    for (int a = 0; a < 4; ++a) {
      Eigen::Matrix<double, 4, 2> m;
      m.col(0) << X.x[a], 1.0;
      m.col(1) << Y.y[klein[k][a]], 1.0;
      const Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(m);
      const Eigen::Matrix<double, 4, 2> Q = qr.householderQ() * Eigen::Matrix<double, 4, 2>::Identity();
      proj[a] = Eigen::Matrix4d::Identity() - Q * Q.transpose();
      acc += proj[a];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(acc);
    DesmicCentre& c = out[k];
    c.pairing = klein[k];
    c.point = es.eigenvectors().col(0);
    if (c.point[3] < 0) c.point = -c.point;
    // Evaluated directly: the square root of a roundoff-level eigenvalue is ~1e-8.
    double sum = 0.0;
    for (const auto& pr : proj) sum += (pr * c.point).squaredNorm();
    c.residual = std::sqrt(sum);
    c.interior = c.point[3] > 1e-12 && c.point.head<3>().norm() < c.point[3];
  }
  return out;
}

V3 apply_lorentz(const Eigen::Matrix4d& B, const V3& X) {
  Eigen::Vector4d h;
  h << X, 1.0;
  const Eigen::Vector4d r = B * h;
  return r.head<3>() / r[3];
}

AntipodalResult antipodal_normalization(const PointQuadruple& X, const InExCentres& Y, const V3& z,
                                        const std::array<int, 4>& pairing) {
  const double zz = z.squaredNorm();
  if (!(zz < 1.0)) fail(ErrorCode::InvalidArgument, "normalization centre must lie strictly inside the unit ball");
  const double gamma = 1.0 / std::sqrt(1.0 - zz);
  Eigen::Matrix4d B = Eigen::Matrix4d::Identity();
  if (zz > 0.0) {
    const V3 zh = z / std::sqrt(zz);
    B.topLeftCorner<3, 3>() += (gamma - 1.0) * zh * zh.transpose();
    B.topRightCorner<3, 1>() = -gamma * z;
    B.bottomLeftCorner<1, 3>() = -gamma * z.transpose();
    B(3, 3) = gamma;
  }
  AntipodalResult r;
  r.boost = B;
  const Eigen::MatrixXd F = s2space().orthonormal_frame();
  r.g = F * B * F.inverse();
  for (int a = 0; a < 4; ++a) {
    r.gx[a] = apply_lorentz(B, X.x[a]);
    r.gy[a] = apply_lorentz(B, Y.y[a]);
  }
  for (int a = 0; a < 4; ++a) r.residual = std::max(r.residual, (r.gx[a] + r.gy[pairing[a]]).norm());
  return r;
}

}  // namespace conegeo
