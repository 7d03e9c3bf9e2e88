#include "conegeo/surfaces.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace conegeo {

namespace {

void check_axis(const Axis& a, const char* name) {
  if (a.n < 2) fail(ErrorCode::InvalidArgument, std::string(name) + "-axis needs at least 2 samples");
  if (!std::isfinite(a.a) || !std::isfinite(a.b) || !(a.b > a.a))
    fail(ErrorCode::InvalidArgument, std::string(name) + "-axis needs a finite interval with b > a");
}

SampledSurface blank(const std::string& kind, const Axis& u, const Axis& v) {
  check_axis(u, "u");
  check_axis(v, "v");
  SampledSurface s;
  s.kind = kind;
  s.u = u;
  s.v = v;
  const auto m = static_cast<std::size_t>(u.n * v.n);
  s.f.resize(m);
  s.n.resize(m);
  for (auto* arr : {&s.k1, &s.k2, &s.E, &s.F, &s.G, &s.L, &s.M, &s.N}) arr->assign(m, 0.0);
  return s;
}

// Per-sample fill from closed-form data; F = M = 0 for curvature-line charts.
struct Sample {
  Eigen::Vector3d f, n;
  double k1, k2, E, G;
};

SampledSurface tabulate(const std::string& kind, const Axis& u, const Axis& v,
                        const std::function<Sample(double, double)>& at) {
  SampledSurface s = blank(kind, u, v);
  for (int i = 0; i < u.n; ++i)
    for (int j = 0; j < v.n; ++j) {
      const int k = i * v.n + j;
      const Sample d = at(u.value(i), v.value(j));
      s.f[k] = d.f;
      s.n[k] = d.n;
      s.k1[k] = d.k1;
      s.k2[k] = d.k2;
      s.E[k] = d.E;
      s.G[k] = d.G;
      s.L[k] = d.k1 * d.E;
      s.N[k] = d.k2 * d.G;
    }
  return s;
}

// Meridian data (r, r', r'', z, z', z'') at v.
struct Meridian {
  double r, dr, ddr, z, dz, ddz;
};

Sample revolve(double u, const Meridian& m) {
  const double speed = std::hypot(m.dr, m.dz);
  if (!(m.r > 0.0) || !(speed > 0.0)) fail(ErrorCode::Degenerate, "meridian is singular (r <= 0 or zero speed)");
  Sample s;
  const double cu = std::cos(u), su = std::sin(u);
  s.f = {m.r * cu, m.r * su, m.z};
  s.n = Eigen::Vector3d(-m.dz * cu, -m.dz * su, m.dr) / speed;
  s.k1 = m.dz / (m.r * speed);
  s.k2 = (m.dr * m.ddz - m.ddr * m.dz) / (speed * speed * speed);
  s.E = m.r * m.r;
  s.G = speed * speed;
  return s;
}

}  // namespace

SampledSurface make_plane(const Axis& u, const Axis& v) {
  return tabulate("plane", u, v, [](double a, double b) {
    return Sample{{a, b, 0.0}, {0.0, 0.0, 1.0}, 0.0, 0.0, 1.0, 1.0};
  });
}

SampledSurface make_sphere(double r, const Axis& u, const Axis& v) {
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "sphere radius must be positive");
  return tabulate("sphere", u, v, [r](double a, double b) {
    return revolve(a, {r * std::cos(b), -r * std::sin(b), -r * std::cos(b), r * std::sin(b), r * std::cos(b),
                       -r * std::sin(b)});
  });
}

SampledSurface make_cylinder(double r, const Axis& u, const Axis& v) {
  if (!(r > 0.0)) fail(ErrorCode::InvalidArgument, "cylinder radius must be positive");
  return tabulate("cylinder", u, v, [r](double a, double b) {
    const double c = std::cos(a / r), s = std::sin(a / r);
    return Sample{{r * c, r * s, b}, {-c, -s, 0.0}, 1.0 / r, 0.0, 1.0, 1.0};
  });
}

SampledSurface make_catenoid(double a, const Axis& u, const Axis& v) {
  if (!(a > 0.0)) fail(ErrorCode::InvalidArgument, "catenoid waist must be positive");
  return tabulate("catenoid", u, v, [a](double x, double y) {
    return revolve(x, {a * std::cosh(y), a * std::sinh(y), a * std::cosh(y), a * y, a, 0.0});
  });
}

SampledSurface make_cone(double alpha, const Axis& u, const Axis& v) {
  if (!(alpha > 0.0) || !(alpha < M_PI / 2)) fail(ErrorCode::InvalidArgument, "cone angle must lie in (0, pi/2)");
  if (!(v.value(0) > 0.0)) fail(ErrorCode::InvalidArgument, "cone needs v > 0 (apex excluded)");
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  return tabulate("cone", u, v, [sa, ca](double x, double y) {
    return revolve(x, {y * sa, sa, 0.0, y * ca, ca, 0.0});
  });
}

SampledSurface make_torus(double R, double rho, const Axis& u, const Axis& v) {
  if (!(rho > 0.0) || !(R > rho)) fail(ErrorCode::InvalidArgument, "torus needs 0 < rho < R");
  return tabulate("torus", u, v, [R, rho](double x, double y) {
    const double c = std::cos(y), s = std::sin(y);
    return revolve(x, {R + rho * c, -rho * s, -rho * c, rho * s, rho * c, -rho * s});
  });
}

namespace {

// First and second derivative by central differences, one-sided order 2 at
// open ends, wrapped on periodic axes.
void differentiate(const std::vector<double>& y, const Axis& ax, std::vector<double>& d1, std::vector<double>& d2) {
  const int n = ax.n;
  const double h = ax.step();
  d1.assign(n, 0.0);
  d2.assign(n, 0.0);
  if (!ax.periodic() && n < 4) fail(ErrorCode::InvalidArgument, "profile needs at least 4 samples");
  for (int j = 0; j < n; ++j) {
    if (ax.periodic() || (j > 0 && j < n - 1)) {
      const double ym = y[(j - 1 + n) % n], yp = y[(j + 1) % n];
      d1[j] = (yp - ym) / (2 * h);
      d2[j] = (yp - 2 * y[j] + ym) / (h * h);
    } else if (j == 0) {
      d1[j] = (-3 * y[0] + 4 * y[1] - y[2]) / (2 * h);
      d2[j] = (2 * y[0] - 5 * y[1] + 4 * y[2] - y[3]) / (h * h);
    } else {
      d1[j] = (3 * y[n - 1] - 4 * y[n - 2] + y[n - 3]) / (2 * h);
      d2[j] = (2 * y[n - 1] - 5 * y[n - 2] + 4 * y[n - 3] - y[n - 4]) / (h * h);
    }
  }
}

}  // namespace

SampledSurface make_revolution(const std::vector<double>& r, const std::vector<double>& z, const Axis& u,
                               const Axis& v) {
  if (static_cast<int>(r.size()) != v.n || static_cast<int>(z.size()) != v.n)
    fail(ErrorCode::InvalidArgument, "profile sample count must equal the v-axis sample count");
  std::vector<double> dr, ddr, dz, ddz;
  differentiate(r, v, dr, ddr);
  differentiate(z, v, dz, ddz);
  SampledSurface s = blank("revolution", u, v);
  for (int i = 0; i < u.n; ++i)
    for (int j = 0; j < v.n; ++j) {
      const int k = i * v.n + j;
      const Sample d = revolve(u.value(i), {r[j], dr[j], ddr[j], z[j], dz[j], ddz[j]});
      s.f[k] = d.f;
      s.n[k] = d.n;
      s.k1[k] = d.k1;
      s.k2[k] = d.k2;
      s.E[k] = d.E;
      s.G[k] = d.G;
      s.L[k] = d.k1 * d.E;
      s.N[k] = d.k2 * d.G;
    }
  s.analytic = false;
  return s;
}

SampledSurface make_surface(const std::string& kind, const std::vector<double>& params, const Axis& u,
                            const Axis& v) {
  auto need = [&](std::size_t k) {
    if (params.size() != k)
      fail(ErrorCode::InvalidArgument, kind + " takes " + std::to_string(k) + " parameter(s)");
  };
  if (kind == "plane") return need(0), make_plane(u, v);
  if (kind == "sphere") return need(1), make_sphere(params[0], u, v);
  if (kind == "cylinder") return need(1), make_cylinder(params[0], u, v);
  if (kind == "catenoid") return need(1), make_catenoid(params[0], u, v);
  if (kind == "cone") return need(1), make_cone(params[0], u, v);
  if (kind == "torus") return need(2), make_torus(params[0], params[1], u, v);
  fail(ErrorCode::InvalidArgument, "unknown surface kind '" + kind + "'");
}

std::pair<Axis, Axis> default_grid(const std::string& kind, const std::vector<double>& params) {
  const double tau = 2 * M_PI;
  if (kind == "plane") return {{8, 0.0, 1.0, GridLayout::Nodes}, {8, 0.0, 1.0, GridLayout::Nodes}};
  if (kind == "torus") return {{32, 0.0, tau, GridLayout::Periodic}, {32, 0.0, tau, GridLayout::Periodic}};
  const double r0 = params.empty() ? 1.0 : params[0];
  const Axis u{32, 0.0, kind == "cylinder" ? tau * r0 : tau, GridLayout::Periodic};
  if (kind == "sphere") return {u, {16, -1.2, 1.2, GridLayout::Nodes}};
  if (kind == "catenoid") return {u, {16, -1.0, 1.0, GridLayout::Nodes}};
  if (kind == "cone") return {u, {8, 0.5, 1.5, GridLayout::Nodes}};
  if (kind == "cylinder") return {u, {8, 0.0, 1.0, GridLayout::Nodes}};
  fail(ErrorCode::InvalidArgument, "no default grid for surface kind '" + kind + "'");
}

LiftedSurface lift_surface(const SampledSurface& s, const SubgeometryGauge& gauge) {
  const Space& sp = gauge.space();
  if (!sp.is_lie() || sp.n() != 3) fail(ErrorCode::InvalidArgument, "surface lifts live in the Lie space of R^3");
  const Vec want = infinity(sp) * 2.0;
  if ((gauge.q().coords() - want.coords()).norm() > 1e-12 || !gauge.is_euclidean_chart())
    throw Error(ErrorCode::UnsupportedGauge, "surface lifts are provided in the Euclidean gauge q = 2 inf only");

  LiftedSurface ls{s.topology(), {}, {}, {}, gauge};
  ls.xi.reserve(s.f.size());
  ls.nu.reserve(s.f.size());
  for (std::size_t k = 0; k < s.f.size(); ++k) {
    const Eigen::Vector3d& f = s.f[k];
    const Eigen::Vector3d& n = s.n[k];
    if (std::abs(n.norm() - 1.0) > 1e-10) fail(ErrorCode::InvalidArgument, "surface normal is not a unit vector");
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sp.dim());
    x[sp.origin_slot()] = 1.0;
    x.segment(sp.euclid_slot(0), 3) = f;
    x[sp.infinity_slot()] = f.squaredNorm();
    Eigen::VectorXd t = Eigen::VectorXd::Zero(sp.dim());
    t.segment(sp.euclid_slot(0), 3) = n;
    t[sp.infinity_slot()] = 2.0 * f.dot(n);
    t[sp.p_slot()] = 1.0;
    ls.xi.emplace_back(sp, x);
    ls.nu.emplace_back(sp, t);
    ls.H.push_back(s.H(static_cast<int>(k)));
  }
  return ls;
}

double lift_invariant_residual(const LiftedSurface& ls) {
  const Vec& p = *ls.gauge.p();
  const Vec& q = ls.gauge.q();
  double worst = 0.0;
  for (std::size_t k = 0; k < ls.xi.size(); ++k) {
    const Vec& x = ls.xi[k];
    const Vec& t = ls.nu[k];
    const double sx = x.coords().squaredNorm(), st = t.coords().squaredNorm();
    const double r[] = {
        std::abs(inner(x, x)) / sx,         std::abs(inner(t, t)) / st,
        std::abs(inner(x, t)) / std::sqrt(sx * st), std::abs(inner(x, p)) / std::sqrt(sx),
        std::abs(inner(x, q) + 1.0),        std::abs(inner(t, p) + 1.0),
        std::abs(inner(t, q)) / std::sqrt(st),
    };
    for (double v : r) worst = std::max(worst, v);
  }
  return worst;
}

std::vector<Vec> central_sphere_congruence(const LiftedSurface& ls, const std::vector<double>& H) {
  if (H.size() != ls.xi.size()) fail(ErrorCode::InvalidArgument, "mean curvature grid has the wrong size");
  std::vector<Vec> g;
  g.reserve(H.size());
  for (std::size_t k = 0; k < H.size(); ++k) g.push_back(ls.nu[k] + ls.xi[k] * H[k]);
  return g;
}

double cmc_residual(const LiftedSurface& ls, double H0, const Vec& q) {
  const std::vector<Vec> g = central_sphere_congruence(ls, ls.H);
  double worst = 0.0;
  for (const Edge& e : ls.topo.edges()) worst = std::max(worst, std::abs(inner(g[e.dst] - g[e.src], q)));
  for (const Vec& gk : g) worst = std::max(worst, std::abs(inner(gk, q) + H0));
  return worst;
}

double willmore_energy(const SampledSurface& s) {
  if (s.u.layout == GridLayout::Nodes || s.v.layout == GridLayout::Nodes)
    fail(ErrorCode::InvalidArgument, "willmore_energy needs Cells or Periodic axes (composite midpoint rule)");
  const double w = s.u.step() * s.v.step();
  double sum = 0.0;
  for (int k = 0; k < s.samples(); ++k) {
    const double H = s.H(k);
    sum += (H * H - s.K(k)) * std::sqrt(std::max(0.0, s.E[k] * s.G[k] - s.F[k] * s.F[k]));
  }
  return sum * w;
}

IsothermicResidual isothermic_residual(const SampledSurface& s) {
  IsothermicResidual r;
  for (int k = 0; k < s.samples(); ++k) {
    r.conformal = std::max(r.conformal, std::abs(s.E[k] - s.G[k]) / s.E[k]);
    r.orthogonal = std::max(r.orthogonal, std::abs(s.F[k]) / s.E[k]);
    r.principal = std::max(r.principal, std::abs(s.M[k]) / s.E[k]);
  }
  return r;
}

double guichard_surface_residual(const SampledSurface& s, double c, int eps) {
  if (eps != 1 && eps != -1) fail(ErrorCode::InvalidArgument, "epsilon must be +1 or -1");
  const IsothermicResidual iso = isothermic_residual(s);
  if (iso.orthogonal > 1e-10 || iso.principal > 1e-10)
    fail(ErrorCode::InvalidArgument, "Guichard residual needs a curvature-line parametrization");
  double worst = 0.0;
  for (int k = 0; k < s.samples(); ++k) {
    const double dk = s.k1[k] - s.k2[k];
    worst = std::max(worst, std::abs(c * s.E[k] * s.G[k] * dk * dk - (s.E[k] - eps * s.G[k])));
  }
  return worst;
}

double linear_weingarten_residual(const SampledSurface& s, double a, double b, double c) {
  double worst = 0.0;
  for (int k = 0; k < s.samples(); ++k) worst = std::max(worst, std::abs(a * s.K(k) + 2 * b * s.H(k) + c));
  return worst;
}

LinearWeingartenFit linear_weingarten_fit(const SampledSurface& s) {
  Eigen::MatrixXd A(s.samples(), 3);
  for (int k = 0; k < s.samples(); ++k) A.row(k) << s.K(k), 2 * s.H(k), 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  Eigen::Vector3d x = svd.matrixV().col(2);
  Eigen::Index imax = 0;
  x.cwiseAbs().maxCoeff(&imax);
  if (x[imax] < 0) x = -x;
  LinearWeingartenFit out;
  out.abc = x;
  out.residual = linear_weingarten_residual(s, x[0], x[1], x[2]);
  out.discriminant = x[1] * x[1] - x[0] * x[2];
  return out;
}

}  // namespace conegeo
