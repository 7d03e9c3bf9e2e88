#include "conegeo/sphere_models.hpp"

#include <cmath>
#include <string>

namespace conegeo {

namespace {

constexpr double kRelZero = 1e-12;

bool negligible(double value, double scale) { return std::abs(value) <= kRelZero * std::max(scale, 1e-300); }

Eigen::VectorXd euclid_part(const Vec& v) {
  const Space& s = v.space();
  return v.coords().segment(s.euclid_slot(0), s.n());
}

}  // namespace

// -- gauge -------------------------------------------------------------------

SubgeometryGauge::SubgeometryGauge(std::optional<Vec> p, Vec q, double eps)
    : p_(std::move(p)), q_(std::move(q)) {
  if (p_) {
    require_same_space(*p_, q_);
    const double pp = inner(*p_, *p_);
    const double pq = inner(*p_, q_);
    if (std::abs(pp + 1.0) > eps)
      throw Error(ErrorCode::Degenerate, "point sphere complex must satisfy (p,p) = -1, got " + std::to_string(pp));
    if (std::abs(pq) > eps * std::max(1.0, q_.norm()))
      throw Error(ErrorCode::Degenerate, "degenerate gauge: (p,q) = " + std::to_string(pq) + " != 0");
  } else if (q_.space().is_lie()) {
    fail(ErrorCode::InvalidArgument, "a gauge in a Lie space needs a point sphere complex");
  }
}

SubgeometryGauge SubgeometryGauge::euclidean(const Space& space) { return space_form(space, 0.0); }

SubgeometryGauge SubgeometryGauge::space_form(const Space& space, double kappa) {
  std::optional<Vec> p;
  if (space.is_lie()) p = point_sphere_complex(space);
  if (kappa == 0.0) return {p, infinity(space) * 2.0};
  if (kappa > 0.0) return {p, (origin(space) + infinity(space)) * std::sqrt(kappa)};
  return {p, (origin(space) - infinity(space)) * std::sqrt(-kappa)};
}

double SubgeometryGauge::curvature() const { return -inner(q_, q_); }

bool SubgeometryGauge::is_euclidean_chart(double eps) const {
  const Space& s = space();
  const double lambda = q_[s.infinity_slot()];
  if (lambda <= 0.0) return false;
  Eigen::VectorXd rest = q_.coords();
  rest[s.infinity_slot()] = 0.0;
  if (rest.norm() > eps * lambda) return false;
  if (p_) {
    if ((p_->coords() - point_sphere_complex(s).coords()).norm() > eps) return false;
  }
  return true;
}

// -- points and spheres ------------------------------------------------------

HomPoint::HomPoint(Vec v, double eps) : v_(std::move(v)) {
  const double n2 = v_.coords().squaredNorm();
  if (n2 == 0.0) fail(ErrorCode::Degenerate, "zero vector is not a point");
  if (std::abs(inner(v_, v_)) > eps * n2) fail(ErrorCode::InvalidArgument, "point representative is not null");
}

HomPoint HomPoint::normalized(const Vec& q) const {
  const double vq = inner(v_, q);
  if (negligible(vq, v_.norm() * q.norm())) throw Error(ErrorCode::InfinitePoint, "point lies at infinity of the chart");
  return HomPoint(v_ * (-1.0 / vq));
}

HomSphere HomSphere::moebius(Vec s, double eps) {
  const double ss = inner(s, s);
  if (std::abs(ss - 1.0) > eps)
    fail(ErrorCode::InvalidArgument, "Moebius sphere must be normalized, (s,s) = " + std::to_string(ss));
  return {std::move(s), SphereModel::Moebius};
}

HomSphere HomSphere::lie(Vec sigma, double eps) {
  if (!sigma.space().is_lie()) fail(ErrorCode::InvalidArgument, "Lie sphere needs a Lie space");
  const double n2 = sigma.coords().squaredNorm();
  if (n2 == 0.0) fail(ErrorCode::Degenerate, "zero vector is not a sphere");
  if (std::abs(inner(sigma, sigma)) > eps * n2) fail(ErrorCode::InvalidArgument, "Lie sphere must be null");
  return {std::move(sigma), SphereModel::Lie};
}

EuclideanSphereData EuclideanSphereData::sphere(Eigen::VectorXd center, double radius) {
  if (!center.allFinite() || !std::isfinite(radius)) fail(ErrorCode::InvalidArgument, "non-finite sphere data");
  EuclideanSphereData d;
  d.kind = Kind::Sphere;
  d.center = std::move(center);
  d.radius = radius;
  return d;
}

EuclideanSphereData EuclideanSphereData::plane(Eigen::VectorXd normal, double offset) {
  if (!normal.allFinite() || !std::isfinite(offset)) fail(ErrorCode::InvalidArgument, "non-finite plane data");
  if (std::abs(normal.norm() - 1.0) > 1e-12) fail(ErrorCode::InvalidArgument, "plane normal must have unit length");
  EuclideanSphereData d;
  d.kind = Kind::Plane;
  d.normal = std::move(normal);
  d.offset = offset;
  return d;
}

Vec embed(const Vec& v, const Space& target) {
  const Space& s = v.space();
  if (s == target) return v;
  if (s.n() != target.n() || s.is_lie() || !target.is_lie())
    fail(ErrorCode::SpaceMismatch, "can only embed a Moebius vector into the Lie space of the same dimension");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(target.dim());
  c.head(s.dim()) = v.coords();
  return {target, c};
}

HomPoint lift_point(const Space& space, const Eigen::VectorXd& x) {
  if (x.size() != space.n()) fail(ErrorCode::InvalidArgument, "point dimension does not match the space");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(space.dim());
  c[space.origin_slot()] = 1.0;
  c.segment(space.euclid_slot(0), space.n()) = x;
  c[space.infinity_slot()] = x.squaredNorm();
  return HomPoint(Vec(space, c));
}

Eigen::VectorXd project_point(const HomPoint& hp, const SubgeometryGauge& gauge) {
  const Vec& v = hp.v();
  const Vec& q = gauge.q();
  require_same_space(v, q);
  const Space& s = v.space();
  const double qq = inner(q, q);
  const double qscale = q.coords().squaredNorm();
  if (negligible(qq, qscale)) {
    if (!gauge.is_euclidean_chart(1e-10))
      throw Error(ErrorCode::UnsupportedGauge, "flat charts are only provided for q along inf");
    const HomPoint y = hp.normalized(q);
    const double yo = y.v()[s.origin_slot()];
    return euclid_part(y.v()) / yo;
  }

  const HomPoint y = hp.normalized(q);
  // q-orthogonal part of the normalized representative.
  const Vec yperp = y.v() + q * (1.0 / qq);

  // Orthonormal basis of q^perp inside the Moebius part, by Gram-Schmidt on
  // the standard orthonormal frame.
  const Eigen::MatrixXd frame = s.orthonormal_frame();
  std::vector<Vec> basis;
  for (int k = 0; k < s.n() + 2 && static_cast<int>(basis.size()) < s.n() + 1; ++k) {
    Vec cand(s, frame.col(k));
    cand = cand - q * (inner(cand, q) / qq);
    for (const Vec& b : basis) cand = cand - b * (inner(cand, b) / inner(b, b));
    const double cc = inner(cand, cand);
    if (std::abs(cc) < 1e-10) continue;
    basis.push_back(cand / std::sqrt(std::abs(cc)));
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    out[static_cast<Eigen::Index>(k)] = inner(yperp, basis[k]) / inner(basis[k], basis[k]);
  return out;
}

HomSphere lift_sphere_moebius(const Space& space, const EuclideanSphereData& d) {
  if (d.dim() != space.n()) fail(ErrorCode::InvalidArgument, "sphere dimension does not match the space");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(space.dim());
  if (d.is_plane()) {
    c.segment(space.euclid_slot(0), space.n()) = d.normal;
    c[space.infinity_slot()] = 2.0 * d.offset;
  } else {
    if (d.radius == 0.0) fail(ErrorCode::Degenerate, "a point sphere (radius 0) has no Moebius lift");
    c[space.origin_slot()] = 1.0;
    c.segment(space.euclid_slot(0), space.n()) = d.center;
    c[space.infinity_slot()] = d.center.squaredNorm() - d.radius * d.radius;
    c /= d.radius;
  }
  return HomSphere::moebius(Vec(space, c));
}

HomSphere lift_sphere_lie(const Space& space, const EuclideanSphereData& d) {
  if (!space.is_lie()) fail(ErrorCode::InvalidArgument, "Lie lift needs a Lie space");
  if (d.dim() != space.n()) fail(ErrorCode::InvalidArgument, "sphere dimension does not match the space");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(space.dim());
  if (d.is_plane()) {
    c.segment(space.euclid_slot(0), space.n()) = d.normal;
    c[space.infinity_slot()] = 2.0 * d.offset;
    c[space.p_slot()] = 1.0;
  } else {
    c[space.origin_slot()] = 1.0;
    c.segment(space.euclid_slot(0), space.n()) = d.center;
    c[space.infinity_slot()] = d.center.squaredNorm() - d.radius * d.radius;
    c[space.p_slot()] = d.radius;
  }
  return HomSphere::lie(Vec(space, c));
}

SphereLift lift_sphere(const Space& space, const EuclideanSphereData& d) {
  SphereLift out;
  if (!d.is_point()) out.moebius = lift_sphere_moebius(space, d);
  if (space.is_lie()) out.lie = lift_sphere_lie(space, d);
  return out;
}

EuclideanSphereData sphere_data(const HomSphere& hs, const SubgeometryGauge& gauge) {
  require_same_space(hs.v(), gauge.q());
  if (!gauge.is_euclidean_chart(1e-10))
    throw Error(ErrorCode::UnsupportedGauge, "sphere_data is provided for flat gauges (q along inf)");
  const Vec& v = hs.v();
  const Space& s = v.space();
  const double scale = v.norm();
  const double alpha = v[s.origin_slot()];
  const Eigen::VectorXd e = euclid_part(v);

  if (hs.model() == SphereModel::Moebius) {
    if (!negligible(alpha, scale)) return EuclideanSphereData::sphere(e / alpha, 1.0 / alpha);
    const double len = e.norm();
    if (negligible(len, scale)) fail(ErrorCode::Degenerate, "degenerate sphere vector");
    return EuclideanSphereData::plane(e / len, v[s.infinity_slot()] / (2.0 * len));
  }

  const double beta = v[s.p_slot()];
  if (!negligible(beta, scale)) {
    if (!negligible(alpha, scale)) return EuclideanSphereData::sphere(e / alpha, beta / alpha);
    const double len = e.norm();
    if (negligible(len, scale)) fail(ErrorCode::Degenerate, "degenerate sphere vector");
    // sigma / beta = n + 2 d inf + p with |n| = 1 up to rounding.
    return EuclideanSphereData::plane(e / len, v[s.infinity_slot()] / (2.0 * beta) * (std::abs(beta) / len));
  }
  if (negligible(alpha, scale)) fail(ErrorCode::Degenerate, "point at infinity has no Euclidean sphere data");
  return EuclideanSphereData::point(e / alpha);
}

double incidence_residual(const HomPoint& hp, const HomSphere& hs) { return inner(hp.v(), hs.v()); }

bool is_incident(const HomPoint& hp, const HomSphere& hs, double tol) {
  return std::abs(inner(hp.v(), hs.v())) <= tol * hp.v().norm() * hs.v().norm();
}

double contact_residual(const HomSphere& a, const HomSphere& b) {
  if (a.model() != SphereModel::Lie || b.model() != SphereModel::Lie)
    fail(ErrorCode::InvalidArgument, "oriented contact is defined for Lie sphere vectors");
  return inner(a.v(), b.v());
}

Eigen::MatrixXd parallel_transformation(const Space& space, double delta) {
  if (!space.is_lie()) fail(ErrorCode::InvalidArgument, "parallel transformations act on the Lie space");
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(space.dim(), space.dim());
  const int o = space.origin_slot();
  const int inf = space.infinity_slot();
  const int p = space.p_slot();
  t(p, o) += delta;
  t(inf, o) -= delta * delta;
  t(inf, p) -= 2.0 * delta;
  return t;
}

HomSphere circumsphere(const Space& space, std::span<const Eigen::VectorXd> points) {
  const int n = space.n();
  if (static_cast<int>(points.size()) != n + 1)
    fail(ErrorCode::InvalidArgument, "circumsphere needs exactly n+1 points");
  const Space m = Space::moebius(n);
  std::vector<Vec> lifts;
  for (const auto& x : points) lifts.push_back(lift_point(m, x).v());
  if (rank_of(lifts) < n + 1) fail(ErrorCode::Degenerate, "coincident points do not determine a sphere");
  const std::vector<Vec> comp = orthogonal_complement(lifts, m);
  if (comp.size() != 1) fail(ErrorCode::Degenerate, "points do not determine a unique sphere");
  Vec s = comp.front();
  const double ss = inner(s, s);
  if (ss <= 0.0) fail(ErrorCode::Degenerate, "degenerate circumsphere");
  s = s / std::sqrt(ss);
  // Affinely dependent points lie on a hyperplane: the o-coefficient vanishes.
  double diam = 0.0;
  for (const auto& a : points)
    for (const auto& b : points) diam = std::max(diam, (a - b).norm());
  if (std::abs(s[m.origin_slot()]) * std::max(diam, 1.0) < 1e-10)
    fail(ErrorCode::Degenerate, "points are affinely dependent (collinear/coplanar), no finite circumsphere");
  if (s[m.origin_slot()] < 0.0) s = -s;
  return HomSphere::moebius(embed(s, space));
}

double tangential_distance(const EuclideanSphereData& a, const EuclideanSphereData& b) {
  if (a.is_plane() || b.is_plane()) fail(ErrorCode::InvalidArgument, "tangential distance is defined for spheres");
  const double d2 = (a.center - b.center).squaredNorm() - (a.radius - b.radius) * (a.radius - b.radius);
  if (d2 < 0.0) fail(ErrorCode::Degenerate, "spheres admit no common oriented tangent");
  return std::sqrt(d2);
}

}  // namespace conegeo
