#include "conegeo/discrete_nets.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "conegeo/errors.hpp"

namespace conegeo {

using V3 = Eigen::Vector3d;
using cplx = std::complex<double>;

QuadNet::QuadNet(int nu_, int nv_) : nu(nu_), nv(nv_) {
  if (nu < 2 || nv < 2) fail(ErrorCode::InvalidArgument, "a net needs at least 2x2 vertices");
  x.assign(static_cast<std::size_t>(nu * nv), V3::Zero());
}

double QuadNet::diameter() const {
  if (x.empty()) return 0.0;
  V3 lo = x.front(), hi = x.front();
  for (const V3& p : x) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return (hi - lo).norm();
}

std::array<V3, 4> QuadNet::face(int i, int j) const { return {at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)}; }

Circle3D circumcircle3(const V3& p1, const V3& p2, const V3& p3) {
  const V3 a = p1 - p3, b = p2 - p3;
  const V3 axb = a.cross(b);
  const double den = axb.squaredNorm();
  if (den <= 1e-24 * a.squaredNorm() * b.squaredNorm() || den == 0.0)
    fail(ErrorCode::Degenerate, "collinear or coincident points have no circumcircle");
  const V3 off = (a.squaredNorm() * b - b.squaredNorm() * a).cross(axb) / (2.0 * den);
  return {p3 + off, off.norm(), axb.normalized()};
}

double distance_to_circle(const Circle3D& c, const V3& x) {
  const V3 d = x - c.center;
  const double h = d.dot(c.normal);
  const double rho = (d - h * c.normal).norm();
  return std::hypot(h, rho - c.radius);
}

double circularity_residual(const std::array<V3, 4>& q) {
  double worst = 0.0;
  for (int omit = 0; omit < 4; ++omit) {
    std::array<V3, 3> t;
    int k = 0;
    for (int m = 0; m < 4; ++m)
      if (m != omit) t[k++] = q[m];
    worst = std::max(worst, distance_to_circle(circumcircle3(t[0], t[1], t[2]), q[omit]));
  }
  return worst;
}

namespace {

double spread(const std::array<V3, 4>& q, double* min_dist) {
  double hi = 0.0, lo = INFINITY;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const double d = (q[a] - q[b]).norm();
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    }
  if (min_dist) *min_dist = lo;
  return hi;
}

// Isometric chart of the plane through `origin` spanned by e1 and the
// component of `dir2` orthogonal to it.
struct PlaneChart {
  V3 origin, e1, e2;

  PlaneChart(const V3& o, const V3& dir1, const V3& dir2) : origin(o) {
    e1 = dir1.normalized();
    V3 w = dir2 - dir2.dot(e1) * e1;
    if (w.norm() <= 1e-14 * dir2.norm() || w.norm() == 0.0) {
      // Collinear data: any perpendicular direction works.
      w = e1.unitOrthogonal();
    }
    e2 = w.normalized();
  }
  cplx to(const V3& x) const { return {(x - origin).dot(e1), (x - origin).dot(e2)}; }
  V3 from(cplx z) const { return origin + z.real() * e1 + z.imag() * e2; }
};

}  // namespace

double cross_ratio(const std::array<V3, 4>& q, double tol) {
  double dmin = 0.0;
  const double diam = spread(q, &dmin);
  if (dmin <= 1e-12 * diam || diam == 0.0) fail(ErrorCode::Degenerate, "coincident points in cross-ratio");
  if (circularity_residual(q) > tol * diam) fail(ErrorCode::InvalidArgument, "cross-ratio needs concircular points");
  const Circle3D c = circumcircle3(q[0], q[1], q[2]);
  const PlaneChart ch(c.center, q[0] - c.center, c.normal.cross(q[0] - c.center));
  const cplx z1 = ch.to(q[0]), z2 = ch.to(q[1]), z3 = ch.to(q[2]), z4 = ch.to(q[3]);
  return (((z1 - z2) * (z3 - z4)) / ((z2 - z3) * (z4 - z1))).real();
}

V3 point_on_circle(const V3& a, const V3& b, const V3& c, double theta) {
  const Circle3D k = circumcircle3(a, b, c);
  const V3 r = c - k.center;
  return k.center + std::cos(theta) * r + std::sin(theta) * k.normal.cross(r);
}

V3 invert(const V3& x, const V3& c, double r) {
  const V3 d = x - c;
  const double n2 = d.squaredNorm();
  if (n2 == 0.0) fail(ErrorCode::Degenerate, "inversion centre has no finite image");
  return c + (r * r / n2) * d;
}

namespace {

// rank of the rows (1, x, |x|^2) <= 4 iff all points lie on a sphere or plane.
double cosphericity(const std::vector<V3>& pts) {
  V3 c = V3::Zero();
  for (const V3& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  double s = 0.0;
  for (const V3& p : pts) s = std::max(s, (p - c).norm());
  if (s == 0.0) return 0.0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(pts.size()), 5);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const V3 y = (pts[k] - c) / s;
    m.row(static_cast<Eigen::Index>(k)) << 1.0, y.x(), y.y(), y.z(), y.squaredNorm();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd sv = svd.singularValues();
  return sv.size() < 5 ? 0.0 : sv[4] / sv[0];
}

}  // namespace

MiquelResult miquel_completion(const V3& xi, const V3& xj, const V3& xk, const V3& xl, const V3& xi_hat,
                               const V3& xj_hat, const V3& xl_hat, double tol) {
  const std::vector<V3> all = {xi, xj, xk, xl, xi_hat, xj_hat, xl_hat};
  double scale = 0.0;
  for (const V3& a : all)
    for (const V3& b : all) scale = std::max(scale, (a - b).norm());
  if (scale == 0.0) fail(ErrorCode::Degenerate, "all Miquel data coincide");

  MiquelResult r;
  if ((xi_hat - xi).norm() <= 1e-14 * scale && (xj_hat - xj).norm() <= 1e-14 * scale &&
      (xl_hat - xl).norm() <= 1e-14 * scale) {
    r.xk_hat = xk;
    return r;
  }
  if (circularity_residual({xi, xj, xk, xl}) > tol * scale)
    fail(ErrorCode::InvalidArgument, "Miquel face (x_i, x_j, x_k, x_l) is not circular");
  if (circularity_residual({xi, xj, xj_hat, xi_hat}) > tol * scale ||
      circularity_residual({xi, xl, xl_hat, xi_hat}) > tol * scale)
    fail(ErrorCode::InvalidArgument, "Miquel edge quads through x_i are not circular");
  if (cosphericity(all) > tol) fail(ErrorCode::Degenerate, "Miquel data do not lie on a common sphere");

  // Inversion at x_k straightens both circles through x_k.
  const V3 a1 = invert(xj, xk, scale), b1 = invert(xj_hat, xk, scale);
  const V3 a2 = invert(xl, xk, scale), b2 = invert(xl_hat, xk, scale);
  const V3 d1 = b1 - a1, d2 = b2 - a2, w = a2 - a1;
  Eigen::Matrix2d m;
  m << d1.dot(d1), -d1.dot(d2), d1.dot(d2), -d2.dot(d2);
  const double det = m.determinant();
  if (std::abs(det) <= 1e-12 * d1.squaredNorm() * d2.squaredNorm())
    fail(ErrorCode::Degenerate, "edge circles touch at x_k (no second intersection)");
  const Eigen::Vector2d st = m.inverse() * Eigen::Vector2d(w.dot(d1), w.dot(d2));
  const V3 hit = 0.5 * ((a1 + st[0] * d1) + (a2 + st[1] * d2));
  r.xk_hat = invert(hit, xk, scale);

  r.edge_residual_j = circularity_residual({xj, xk, r.xk_hat, xj_hat});
  r.edge_residual_l = circularity_residual({xl, xk, r.xk_hat, xl_hat});
  r.face_residual = circularity_residual({xi_hat, xj_hat, r.xk_hat, xl_hat});
  try {
    r.nearer_candidate_admissible = circularity_residual({xi_hat, xj_hat, xk, xl_hat}) <= tol * scale;
  } catch (const Error&) {
    r.nearer_candidate_admissible = false;
  }
  return r;
}

double net_circularity(const QuadNet& net) {
  double worst = 0.0;
  for (int i = 0; i + 1 < net.nu; ++i)
    for (int j = 0; j + 1 < net.nv; ++j) worst = std::max(worst, circularity_residual(net.face(i, j)));
  return worst;
}

RibaucourResult ribaucour_propagate(const QuadNet& net, const QuadNet& hat, double tol) {
  if (hat.nu != net.nu || hat.nv != net.nv) fail(ErrorCode::InvalidArgument, "Cauchy data window differs from the net");
  const double scale = std::max(net.diameter(), hat.diameter());
  if (net_circularity(net) > tol * scale) fail(ErrorCode::InvalidArgument, "input net is not circular");
  // An edge whose two endpoints stay fixed is trivially concircular.
  auto edge_residual = [&](const V3& a, const V3& b, const V3& bh, const V3& ah) {
    if ((ah - a).norm() <= 1e-14 * scale && (bh - b).norm() <= 1e-14 * scale) return 0.0;
    return circularity_residual({a, b, bh, ah});
  };
  for (int j = 0; j + 1 < net.nv; ++j)
    if (edge_residual(net.at(0, j), net.at(0, j + 1), hat.at(0, j + 1), hat.at(0, j)) > tol * scale)
      fail(ErrorCode::InvalidArgument, "Cauchy data on column i=0 is not edge-circular at j=" + std::to_string(j));
  for (int i = 0; i + 1 < net.nu; ++i)
    if (edge_residual(net.at(i, 0), net.at(i + 1, 0), hat.at(i + 1, 0), hat.at(i, 0)) > tol * scale)
      fail(ErrorCode::InvalidArgument, "Cauchy data on row j=0 is not edge-circular at i=" + std::to_string(i));

  RibaucourResult out;
  out.net = net;
  out.net.alpha.clear();
  out.net.beta.clear();
  QuadNet& h = out.net;
  for (int i = 0; i < net.nu; ++i) h.at(i, 0) = hat.at(i, 0);
  for (int j = 0; j < net.nv; ++j) h.at(0, j) = hat.at(0, j);
  for (int i = 1; i < net.nu; ++i)
    for (int j = 1; j < net.nv; ++j) {
      try {
        const MiquelResult m = miquel_completion(net.at(i - 1, j - 1), net.at(i, j - 1), net.at(i, j), net.at(i - 1, j),
                                                 h.at(i - 1, j - 1), h.at(i, j - 1), h.at(i - 1, j), tol);
        h.at(i, j) = m.xk_hat;
        if (m.nearer_candidate_admissible && (m.xk_hat - net.at(i, j)).norm() > tol * scale) ++out.flagged_faces;
      } catch (const Error& e) {
        throw Error(e.code(), std::string(e.what()) + " (face " + std::to_string(i - 1) + "," + std::to_string(j - 1) + ")");
      }
    }
  out.max_face_residual = net_circularity(h);
  for (int i = 0; i < net.nu; ++i)
    for (int j = 0; j < net.nv; ++j) {
      if (i + 1 < net.nu)
        out.max_edge_residual =
            std::max(out.max_edge_residual, edge_residual(net.at(i, j), net.at(i + 1, j), h.at(i + 1, j), h.at(i, j)));
      if (j + 1 < net.nv)
        out.max_edge_residual =
            std::max(out.max_edge_residual, edge_residual(net.at(i, j), net.at(i, j + 1), h.at(i, j + 1), h.at(i, j)));
    }
  return out;
}

double isothermic_residual_discrete(const QuadNet& net) {
  if (!net.labelled()) fail(ErrorCode::InvalidArgument, "discrete isothermic residual needs edge labels");
  double worst = 0.0;
  for (int i = 0; i + 1 < net.nu; ++i)
    for (int j = 0; j + 1 < net.nv; ++j) {
      const auto q = net.face(i, j);
      const double target = -net.alpha[i] / net.beta[j];
      double diam = 0.0;
      for (const V3& a : q)
        for (const V3& b : q) diam = std::max(diam, (a - b).norm());
      const double circ = circularity_residual(q);
      if (circ <= 1e-6 * diam) {
        worst = std::max(worst, std::abs(cross_ratio(q, 1e-6) - target));
        continue;
      }
      // Off a circle the cross-ratio is not real; fall back to its modulus
      // (a Moebius invariant of the four distances) plus the circularity defect.
      const double mod = (q[0] - q[1]).norm() * (q[2] - q[3]).norm() / ((q[1] - q[2]).norm() * (q[3] - q[0]).norm());
      worst = std::max(worst, std::abs(mod - std::abs(target)) + circ / diam);
    }
  return worst;
}

ChristoffelResult christoffel_dual(const QuadNet& net, double tol) {
  if (!net.labelled()) fail(ErrorCode::InvalidArgument, "Christoffel dual needs edge labels");
  auto du = [&](int i, int j) {
    const V3 d = net.at(i + 1, j) - net.at(i, j);
    return V3(net.alpha[i] * d / d.squaredNorm());
  };
  auto dv = [&](int i, int j) {
    const V3 d = net.at(i, j + 1) - net.at(i, j);
    return V3(-net.beta[j] * d / d.squaredNorm());
  };
  for (int i = 0; i < net.nu; ++i)
    for (int j = 0; j < net.nv; ++j) {
      if ((i + 1 < net.nu && (net.at(i + 1, j) - net.at(i, j)).norm() == 0.0) ||
          (j + 1 < net.nv && (net.at(i, j + 1) - net.at(i, j)).norm() == 0.0))
        fail(ErrorCode::Degenerate, "zero-length edge in Christoffel dual");
    }
  ChristoffelResult r;
  r.dual = QuadNet(net.nu, net.nv);
  r.dual.alpha = net.alpha;
  r.dual.beta = net.beta;
  for (int i = 0; i + 1 < net.nu; ++i) r.dual.at(i + 1, 0) = r.dual.at(i, 0) + du(i, 0);
  for (int i = 0; i < net.nu; ++i)
    for (int j = 0; j + 1 < net.nv; ++j) r.dual.at(i, j + 1) = r.dual.at(i, j) + dv(i, j);
  for (int i = 0; i + 1 < net.nu; ++i)
    for (int j = 0; j + 1 < net.nv; ++j)
      r.closure_residual =
          std::max(r.closure_residual, (du(i, j) + dv(i + 1, j) - du(i, j + 1) - dv(i, j)).norm());
  const double scale = std::max(r.dual.diameter(), 1e-300);
  if (r.closure_residual > tol * scale)
    throw Error(ErrorCode::InvalidArgument,
                "Christoffel dual does not close (residual " + std::to_string(r.closure_residual) +
                    "); the net is not discrete isothermic with these labels");
  return r;
}

V3 solve_cross_ratio(const V3& z1, const V3& z2, const V3& z4, double cr) {
  if ((z2 - z1).norm() == 0.0 || (z4 - z1).norm() == 0.0)
    fail(ErrorCode::Degenerate, "coincident points in cross-ratio equation");
  const PlaneChart ch(z1, z2 - z1, z4 - z1);
  const cplx a = ch.to(z1), b = ch.to(z2), d = ch.to(z4);
  const cplx w = d - a, dd = a - b;
  const cplx den = dd + cr * w;
  if (std::abs(den) <= 1e-14 * (std::abs(dd) + std::abs(cr * w)))
    fail(ErrorCode::Degenerate, "cross-ratio equation has its solution at infinity");
  return ch.from((cr * w * b + dd * d) / den);
}

DarbouxResult darboux_transform_discrete(const QuadNet& net, double lambda, const V3& seed) {
  if (!net.labelled()) fail(ErrorCode::InvalidArgument, "Darboux transform needs edge labels");
  if (!(std::abs(lambda) >= 1e-8)) fail(ErrorCode::InvalidArgument, "spectral parameter |lambda| < 1e-8 is degenerate");
  DarbouxResult r;
  QuadNet& h = r.net;
  h = QuadNet(net.nu, net.nv);
  h.alpha = net.alpha;
  h.beta = net.beta;
  auto step_u = [&](int i, int j) {  // xhat(i+1, j) from xhat(i, j)
    return solve_cross_ratio(net.at(i, j), net.at(i + 1, j), h.at(i, j), lambda * net.alpha[i]);
  };
  auto step_v = [&](int i, int j) {  // xhat(i, j+1) from xhat(i, j)
    return solve_cross_ratio(net.at(i, j), net.at(i, j + 1), h.at(i, j), -lambda * net.beta[j]);
  };
  h.at(0, 0) = seed;
  for (int i = 0; i + 1 < net.nu; ++i) h.at(i + 1, 0) = step_u(i, 0);
  for (int j = 0; j + 1 < net.nv; ++j) h.at(0, j + 1) = step_v(0, j);
  for (int i = 1; i < net.nu; ++i)
    for (int j = 1; j < net.nv; ++j) {
      const V3 via_u = step_u(i - 1, j);
      const V3 via_v = step_v(i, j - 1);
      r.closure_gap = std::max(r.closure_gap, (via_u - via_v).norm());
      h.at(i, j) = via_u;
    }
  return r;
}

}  // namespace conegeo
