#include "conegeo/symmetry_breaking.hpp"

#include <cmath>
#include <string>

namespace conegeo {

double space_form_curvature(const Vec& q) { return -inner(q, q); }

double sphere_mean_curvature(const HomSphere& s, const Vec& q) {
  if (s.model() != SphereModel::Moebius) fail(ErrorCode::InvalidArgument, "mean curvature needs a Moebius sphere");
  return -inner(s.v(), q);
}

const char* to_string(PencilClass c) {
  switch (c) {
    case PencilClass::Elliptic: return "Elliptic";
    case PencilClass::Parabolic: return "Parabolic";
    case PencilClass::Hyperbolic: return "Hyperbolic";
  }
  return "?";
}

const char* to_string(Causal c) {
  switch (c) {
    case Causal::Spacelike: return "spacelike";
    case Causal::Timelike: return "timelike";
    case Causal::Null: return "null";
  }
  return "?";
}

SpherePencil::SpherePencil(HomSphere s1, HomSphere s2, double eps_sig)
    : s1_(std::move(s1)), s2_(std::move(s2)), eps_(eps_sig) {
  require_same_space(s1_.v(), s2_.v());
  const Vec vs[] = {s1_.v(), s2_.v()};
  if (rank_of(vs, 1e-10) < 2) fail(ErrorCode::Degenerate, "pencil spheres are linearly dependent");
  sig_ = signature_of_span(vs, eps_);
}

PencilClass classify_pencil(const SpherePencil& pc) {
  const SignatureTriple& s = pc.signature();
  if (s.positive == 2) return PencilClass::Elliptic;
  if (s.positive == 1 && s.null == 1) return PencilClass::Parabolic;
  if (s.positive == 1 && s.negative == 1) return PencilClass::Hyperbolic;
  fail(ErrorCode::Degenerate, "pencil span is wholly degenerate");
}

std::vector<HomPoint> pencil_base_points(const SpherePencil& pc) {
  const Vec& a = pc.s1().v();
  const Vec& b = pc.s2().v();
  Eigen::Matrix2d g;
  g << inner(a, a), inner(a, b), inner(b, a), inner(b, b);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(g);
  const Eigen::Vector2d lam = es.eigenvalues();  // ascending
  const Eigen::Matrix2d u = es.eigenvectors();
  auto combo = [&](const Eigen::Vector2d& c) {
    Vec v = a * c[0] + b * c[1];
    return HomPoint(v / v.norm(), 1e-8);
  };

  std::vector<HomPoint> out;
  switch (classify_pencil(pc)) {
    case PencilClass::Elliptic:
      break;
    case PencilClass::Parabolic:
      out.push_back(combo(u.col(0)));
      break;
    case PencilClass::Hyperbolic: {
      const Eigen::Vector2d neg = u.col(0) / std::sqrt(-lam[0]);
      const Eigen::Vector2d pos = u.col(1) / std::sqrt(lam[1]);
      out.push_back(combo(pos + neg));
      out.push_back(combo(pos - neg));
      break;
    }
  }
  return out;
}

ContactProjection space_form_projection(const Vec& s1, const Vec& s2, const SubgeometryGauge& gauge) {
  if (!gauge.p()) fail(ErrorCode::InvalidArgument, "space form projection needs a point sphere complex");
  require_same_space(s1, s2);
  require_same_space(s1, gauge.q());
  const Vec& p = *gauge.p();
  const Vec& q = gauge.q();

  const double scale = s1.norm() * s2.norm();
  const double n1 = s1.coords().squaredNorm();
  const double n2 = s2.coords().squaredNorm();
  if (std::abs(inner(s1, s1)) > 1e-10 * n1 || std::abs(inner(s2, s2)) > 1e-10 * n2 ||
      std::abs(inner(s1, s2)) > 1e-10 * scale)
    fail(ErrorCode::InvalidArgument, "span is not a contact element (basis not null and orthogonal)");
  const Vec pair[] = {s1, s2};
  if (rank_of(pair, 1e-10) < 2) fail(ErrorCode::Degenerate, "contact element basis is dependent");

  Eigen::Matrix2d m;
  m << inner(s1, p), inner(s2, p), inner(s1, q), inner(s2, q);
  const double det = m.determinant();
  if (std::abs(det) <= 1e-12 * std::max(m.squaredNorm(), 1e-300))
    fail(ErrorCode::Degenerate, "contact element has no point/plane representative for this gauge");
  const Eigen::Vector2d cx = m.inverse() * Eigen::Vector2d(0.0, -1.0);
  const Eigen::Vector2d cn = m.inverse() * Eigen::Vector2d(-1.0, 0.0);
  return {HomPoint(s1 * cx[0] + s2 * cx[1], 1e-8), s1 * cn[0] + s2 * cn[1]};
}

namespace {

// Eigen-diagonalized frame of a (2,1) subspace: timelike vector first.
std::vector<Vec> lorentz_frame(const std::vector<Vec>& basis) {
  const Space& s = basis.front().space();
  Eigen::MatrixXd q(s.dim(), 3);
  for (int k = 0; k < 3; ++k) q.col(k) = basis[k].coords();
  const Eigen::Matrix3d b = q.transpose() * s.gram() * q;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(b);
  std::vector<Vec> frame;
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd w = q * es.eigenvectors().col(k) / std::sqrt(std::abs(es.eigenvalues()[k]));
    Eigen::Index imax = 0;
    w.cwiseAbs().maxCoeff(&imax);
    if (w[imax] < 0) w = -w;
    frame.emplace_back(s, w);
  }
  return frame;
}

}  // namespace

CyclideDecomposition::CyclideDecomposition(std::vector<Vec> plus, std::vector<Vec> minus, double eps)
    : plus_(std::move(plus)), minus_(std::move(minus)) {
  if (plus_.size() != 3 || minus_.size() != 3) fail(ErrorCode::InvalidArgument, "each side needs three vectors");
  const Space& s = plus_.front().space();
  if (!s.is_lie() || s.n() != 3) fail(ErrorCode::InvalidArgument, "cyclide decompositions live in the Lie space of R^3");
  for (const Vec& a : plus_)
    for (const Vec& b : minus_) {
      require_same_space(a, b);
      if (std::abs(inner(a, b)) > eps * std::max(1.0, a.norm() * b.norm()))
        fail(ErrorCode::InvalidArgument, "V+ and V- are not orthogonal");
    }
  const SignatureTriple want{2, 1, 0};
  if (!(signature_of_span(plus_) == want) || !(signature_of_span(minus_) == want))
    fail(ErrorCode::InvalidArgument, "each side of a cyclide decomposition must have signature (2,1)");
  plus_frame_ = lorentz_frame(plus_);
  minus_frame_ = lorentz_frame(minus_);
}

CyclideDecomposition torus_decomposition(double R, double rho) {
  if (!(R > 0.0) || !(rho > 0.0) || !(rho < R)) fail(ErrorCode::InvalidArgument, "torus needs 0 < rho < R");
  const Space s = Space::lie(3);
  const double k = R * R - rho * rho;
  const Vec o = origin(s), inf = infinity(s), p = point_sphere_complex(s);
  std::vector<Vec> plus = {o + inf * k + p * rho, euclid(s, 0), euclid(s, 1)};
  std::vector<Vec> minus = {euclid(s, 2), o - inf * k, p - inf * (2.0 * rho)};
  return {std::move(plus), std::move(minus)};
}

std::pair<Vec, Vec> cyclide_contact_elements(const CyclideDecomposition& cd, double theta_plus,
                                             double theta_minus) {
  auto conic = [](const std::vector<Vec>& w, double th) {
    return w[0] + w[1] * std::cos(th) + w[2] * std::sin(th);
  };
  return {conic(cd.plus_frame(), theta_plus), conic(cd.minus_frame(), theta_minus)};
}

CyclideReport classify_cyclide(const CyclideDecomposition& cd, const SubgeometryGauge& gauge, double eps) {
  if (!gauge.p()) fail(ErrorCode::InvalidArgument, "cyclide classification needs a point sphere complex");
  const Vec& p = *gauge.p();
  require_same_space(p, cd.plus().front());
  auto part = [&](const std::vector<Vec>& w) {
    Vec acc = zero(p.space());
    for (const Vec& wk : w) acc = acc + wk * (inner(p, wk) / inner(wk, wk));
    return acc;
  };
  const Vec pp = part(cd.plus_frame());
  const Vec pm = part(cd.minus_frame());
  auto kind = [&](double v) {
    if (v > eps) return Causal::Spacelike;
    if (v < -eps) return Causal::Timelike;
    return Causal::Null;
  };
  CyclideReport r;
  r.pp_plus = inner(pp, pp);
  r.pp_minus = inner(pm, pm);
  r.sum_residual = std::abs(r.pp_plus + r.pp_minus + 1.0);
  r.plus_kind = kind(r.pp_plus);
  r.minus_kind = kind(r.pp_minus);
  return r;
}

}  // namespace conegeo
