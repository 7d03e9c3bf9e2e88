#include "conegeo/pseudo_euclidean.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace conegeo {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::SpaceMismatch: return "space_mismatch";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::InfinitePoint: return "infinite_point";
    case ErrorCode::UnsupportedGauge: return "unsupported_gauge";
    case ErrorCode::NonConserved: return "non_conserved";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

Space::Space(int n, SpaceKind kind) : n_(n), kind_(kind) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "geometry dimension must be >= 1");
}

int Space::p_slot() const {
  if (!is_lie()) fail(ErrorCode::InvalidArgument, "Moebius space has no point sphere complex slot");
  return n_ + 2;
}

Eigen::MatrixXd Space::gram() const {
  const int d = dim();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(d, d);
  g(origin_slot(), infinity_slot()) = g(infinity_slot(), origin_slot()) = -0.5;
  for (int i = 0; i < n_; ++i) g(euclid_slot(i), euclid_slot(i)) = 1.0;
  if (is_lie()) g(p_slot(), p_slot()) = -1.0;
  return g;
}

Eigen::MatrixXd Space::orthonormal_frame() const {
  const int d = dim();
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < n_; ++i) f(euclid_slot(i), i) = 1.0;
  // o - inf
  f(origin_slot(), n_) = 1.0;
  f(infinity_slot(), n_) = -1.0;
  // o + inf
  f(origin_slot(), n_ + 1) = 1.0;
  f(infinity_slot(), n_ + 1) = 1.0;
  if (is_lie()) f(p_slot(), n_ + 2) = 1.0;
  return f;
}

Vec::Vec(Space space, Eigen::VectorXd coords) : space_(space), coords_(std::move(coords)) {
  if (coords_.size() != space_.dim()) {
    fail(ErrorCode::InvalidArgument,
         "vector has " + std::to_string(coords_.size()) + " coordinates, space needs " +
             std::to_string(space_.dim()));
  }
  if (!coords_.allFinite()) fail(ErrorCode::InvalidArgument, "non-finite vector coordinate");
}

Vec Vec::operator+(const Vec& o) const {
  require_same_space(*this, o);
  return {space_, coords_ + o.coords_};
}

Vec Vec::operator-(const Vec& o) const {
  require_same_space(*this, o);
  return {space_, coords_ - o.coords_};
}

static Vec unit(const Space& s, int slot) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(s.dim());
  c[slot] = 1.0;
  return {s, c};
}

Vec origin(const Space& s) { return unit(s, s.origin_slot()); }
Vec infinity(const Space& s) { return unit(s, s.infinity_slot()); }
Vec euclid(const Space& s, int i) {
  if (i < 0 || i >= s.n()) fail(ErrorCode::InvalidArgument, "euclidean basis index out of range");
  return unit(s, s.euclid_slot(i));
}
Vec point_sphere_complex(const Space& s) { return unit(s, s.p_slot()); }
Vec zero(const Space& s) { return {s, Eigen::VectorXd::Zero(s.dim())}; }

void require_same_space(const Vec& u, const Vec& v) {
  if (!(u.space() == v.space())) fail(ErrorCode::SpaceMismatch, "vectors belong to different spaces");
}

double inner(const Space& s, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  double acc = 0.0;
  for (int i = 0; i < s.n(); ++i) acc += u[s.euclid_slot(i)] * v[s.euclid_slot(i)];
  const int o = s.origin_slot();
  const int inf = s.infinity_slot();
  acc -= 0.5 * (u[o] * v[inf] + u[inf] * v[o]);
  if (s.is_lie()) acc -= u[s.p_slot()] * v[s.p_slot()];
  return acc;
}

double inner(const Vec& u, const Vec& v) {
  require_same_space(u, v);
  return inner(u.space(), u.coords(), v.coords());
}

namespace {

Eigen::MatrixXd stack(std::span<const Vec> vs, const Space& space) {
  Eigen::MatrixXd c(space.dim(), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (!(vs[k].space() == space)) fail(ErrorCode::SpaceMismatch, "vectors belong to different spaces");
    c.col(static_cast<Eigen::Index>(k)) = vs[k].coords();
  }
  return c;
}

int numerical_rank(const Eigen::VectorXd& singular, double eps_rel) {
  if (singular.size() == 0 || singular[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < singular.size(); ++i)
    if (singular[i] > eps_rel * singular[0]) ++r;
  return r;
}

}  // namespace

int rank_of(std::span<const Vec> vs, double eps_rel) {
  if (vs.empty()) return 0;
  const Eigen::MatrixXd c = stack(vs, vs.front().space());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c);
  return numerical_rank(svd.singularValues(), eps_rel);
}

SignatureTriple signature_of_span(std::span<const Vec> vs, double eps_rel) {
  if (vs.empty()) fail(ErrorCode::InvalidArgument, "signature_of_span needs at least one vector");
  const Space& space = vs.front().space();
  const Eigen::MatrixXd c = stack(vs, space);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeFullU);
  const int r = numerical_rank(svd.singularValues(), 1e-12);
  SignatureTriple sig;
  if (r == 0) return sig;
  const Eigen::MatrixXd q = svd.matrixU().leftCols(r);
  const Eigen::MatrixXd b = q.transpose() * space.gram() * q;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double scale = std::max(lambda.cwiseAbs().maxCoeff(), 1.0);
  const double zero_tol = eps_rel * scale;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > zero_tol)
      ++sig.positive;
    else if (lambda[i] < -zero_tol)
      ++sig.negative;
    else
      ++sig.null;
  }
  return sig;
}

Vec reflect(const Vec& x, const Vec& m) {
  require_same_space(x, m);
  const double mm = inner(m, m);
  if (std::abs(mm) <= 1e-14 * std::max(m.coords().squaredNorm(), 1e-300))
    fail(ErrorCode::Degenerate, "reflection in a null vector is undefined");
  return x - m * (2.0 * inner(x, m) / mm);
}

Eigen::MatrixXd reflection_matrix(const Vec& m) {
  const Space& s = m.space();
  const double mm = inner(m, m);
  if (std::abs(mm) <= 1e-14 * std::max(m.coords().squaredNorm(), 1e-300))
    fail(ErrorCode::Degenerate, "reflection in a null vector is undefined");
  const Eigen::VectorXd gm = s.gram() * m.coords();
  return Eigen::MatrixXd::Identity(s.dim(), s.dim()) - (2.0 / mm) * m.coords() * gm.transpose();
}

IsometryCheck is_isometry(const Eigen::MatrixXd& m, const Space& space, double eps) {
  if (m.rows() != space.dim() || m.cols() != space.dim())
    fail(ErrorCode::InvalidArgument, "matrix dimension does not match the space");
  const Eigen::MatrixXd g = space.gram();
  IsometryCheck out;
  out.residual = (m.transpose() * g * m - g).norm();
  out.ok = out.residual < eps;
  return out;
}

std::vector<Vec> orthogonal_complement(std::span<const Vec> vs, const Space& space) {
  std::vector<Vec> out;
  if (vs.empty()) {
    for (int i = 0; i < space.dim(); ++i) out.push_back(unit(space, i));
    return out;
  }
  const Eigen::MatrixXd a = stack(vs, space).transpose() * space.gram();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const int r = numerical_rank(svd.singularValues(), 1e-12);
  const Eigen::MatrixXd& v = svd.matrixV();
  for (int k = r; k < space.dim(); ++k) out.emplace_back(space, v.col(k));
  return out;
}

Vec apply(const Eigen::MatrixXd& m, const Vec& v) {
  if (m.cols() != v.space().dim() || m.rows() != v.space().dim())
    fail(ErrorCode::InvalidArgument, "matrix dimension does not match the space");
  return {v.space(), m * v.coords()};
}

}  // namespace conegeo
