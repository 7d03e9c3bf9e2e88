#include "conegeo/connections.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace conegeo {

WedgeEndo::WedgeEndo(Vec a, Vec b) : a_(std::move(a)), b_(std::move(b)) { require_same_space(a_, b_); }

Vec WedgeEndo::operator()(const Vec& x) const { return b_ * inner(a_, x) - a_ * inner(b_, x); }

Eigen::MatrixXd WedgeEndo::matrix() const { return wedge_matrix(a_.space(), a_.coords(), b_.coords()); }

WedgeEndo wedge_endo(const Vec& a, const Vec& b) { return {a, b}; }

Eigen::MatrixXd wedge_matrix(const Space& s, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::MatrixXd g = s.gram();
  return b * (g * a).transpose() - a * (g * b).transpose();
}

DiscreteConnection::DiscreteConnection(GridTopology topo, std::vector<double> ts, std::string recipe,
                                       const std::function<Eigen::MatrixXd(const Edge&)>& form)
    : topo_(topo), ts_(std::move(ts)), recipe_(std::move(recipe)), edges_(topo_.edges()) {
  std::vector<Eigen::MatrixXd> omegas;
  omegas.reserve(edges_.size());
  for (const Edge& e : edges_) omegas.push_back(form(e));
  for (double t : ts_) {
    std::vector<Eigen::MatrixXd> row;
    row.reserve(edges_.size());
    for (const auto& om : omegas) {
      const Eigen::MatrixXd a = -t * om;
      row.push_back(a.exp());
    }
    m_.push_back(std::move(row));
  }
}

const Eigen::MatrixXd& DiscreteConnection::u_transport(std::size_t k, int i, int j) const {
  return transport(k, static_cast<std::size_t>(i * topo_.nv + j));
}

const Eigen::MatrixXd& DiscreteConnection::v_transport(std::size_t k, int i, int j) const {
  const std::size_t off = static_cast<std::size_t>(topo_.u_edge_count_i() * topo_.nv);
  return transport(k, off + static_cast<std::size_t>(i * topo_.v_edge_count_j() + j));
}

double DiscreteConnection::isometry_residual(const Space& s) const {
  const Eigen::MatrixXd g = s.gram();
  double worst = 0.0;
  for (const auto& row : m_)
    for (const auto& m : row) worst = std::max(worst, (m.transpose() * g * m - g).norm());
  return worst;
}

DiscreteConnection middle_connection(const LiftedSurface& ls, double a, double b, double c,
                                     const std::vector<double>& ts) {
  const Space& s = ls.gauge.space();
  auto form = [&](const Edge& e) {
    const Eigen::VectorXd xm = 0.5 * (ls.xi[e.src].coords() + ls.xi[e.dst].coords());
    const Eigen::VectorXd nm = 0.5 * (ls.nu[e.src].coords() + ls.nu[e.dst].coords());
    const Eigen::VectorXd dx = ls.xi[e.dst].coords() - ls.xi[e.src].coords();
    const Eigen::VectorXd dn = ls.nu[e.dst].coords() - ls.nu[e.src].coords();
    return Eigen::MatrixXd(c * wedge_matrix(s, xm, dx) - b * (wedge_matrix(s, xm, dn) + wedge_matrix(s, nm, dx)) +
                           a * wedge_matrix(s, nm, dn));
  };
  return {ls.topo, ts, "mid", form};
}

Eigen::Vector3d cmc_coefficients(double H) { return {0.0, -0.5, H}; }

DiscreteConnection cmc_connection(const LiftedSurface& ls, double H, const std::vector<double>& ts) {
  const Space& s = ls.gauge.space();
  auto form = [&](const Edge& e) {
    const Eigen::VectorXd xm = 0.5 * (ls.xi[e.src].coords() + ls.xi[e.dst].coords());
    const Eigen::VectorXd nm = 0.5 * (ls.nu[e.src].coords() + ls.nu[e.dst].coords());
    const Eigen::VectorXd dx = ls.xi[e.dst].coords() - ls.xi[e.src].coords();
    const Eigen::VectorXd dn = ls.nu[e.dst].coords() - ls.nu[e.src].coords();
    return Eigen::MatrixXd(0.5 * (2 * H * wedge_matrix(s, xm, dx) + wedge_matrix(s, xm, dn) + wedge_matrix(s, nm, dx)));
  };
  return {ls.topo, ts, "cmc", form};
}

namespace {

void check_envelope(const std::vector<Vec>& gp, const std::vector<Vec>& gm, double tol) {
  for (std::size_t k = 0; k < gp.size(); ++k) {
    const double sp = gp[k].coords().squaredNorm(), sm = gm[k].coords().squaredNorm();
    if (std::abs(inner(gp[k], gp[k])) > tol * sp || std::abs(inner(gm[k], gm[k])) > tol * sm ||
        std::abs(inner(gp[k], gm[k])) > tol * std::sqrt(sp * sm))
      fail(ErrorCode::InvalidArgument,
           "envelope condition violated at sample " + std::to_string(k) + " (gamma+- not null and orthogonal)");
  }
}

}  // namespace

PairConnections pair_connections(const GridTopology& topo, const std::vector<Vec>& gplus,
                                 const std::vector<Vec>& gminus, const std::vector<double>& ts, double tol) {
  if (gplus.size() != static_cast<std::size_t>(topo.samples()) || gminus.size() != gplus.size())
    fail(ErrorCode::InvalidArgument, "congruence grids do not match the topology");
  check_envelope(gplus, gminus, tol);
  const Space& s = gplus.front().space();
  auto make = [&](const std::vector<Vec>& x, const std::vector<Vec>& y, const char* tag) {
    return DiscreteConnection(topo, ts, tag, [&](const Edge& e) {
      const Eigen::VectorXd xm = 0.5 * (x[e.src].coords() + x[e.dst].coords());
      return wedge_matrix(s, xm, y[e.dst].coords() - y[e.src].coords());
    });
  };
  return {make(gplus, gminus, "plus"), make(gminus, gplus, "minus")};
}

PolynomialConservedQuantity::PolynomialConservedQuantity(std::vector<std::vector<Vec>> coeffs)
    : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || coeffs_.front().empty()) fail(ErrorCode::InvalidArgument, "empty polynomial");
  for (const auto& c : coeffs_) {
    if (c.size() != coeffs_.front().size()) fail(ErrorCode::InvalidArgument, "coefficient grids differ in size");
    for (const Vec& v : c) require_same_space(v, coeffs_.front().front());
  }
}

std::vector<Vec> PolynomialConservedQuantity::evaluate(double t) const {
  std::vector<Vec> out = coeffs_.back();
  for (int k = degree() - 1; k >= 0; --k)
    for (std::size_t s = 0; s < out.size(); ++s) out[s] = out[s] * t + coeffs_[k][s];
  return out;
}

PolynomialConservedQuantity constant_quantity(const Vec& v, std::size_t samples) {
  return PolynomialConservedQuantity({std::vector<Vec>(samples, v)});
}

std::pair<PolynomialConservedQuantity, PolynomialConservedQuantity> lw_conserved_quantities(
    const LiftedSurface& ls, double a, double b, double c) {
  const Vec& p = *ls.gauge.p();
  const Vec& q = ls.gauge.q();
  const std::size_t m = ls.xi.size();
  std::vector<Vec> p1, q1;
  p1.reserve(m);
  q1.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    p1.push_back(ls.xi[k] * (-b) + ls.nu[k] * a);
    q1.push_back(ls.xi[k] * c - ls.nu[k] * b);
  }
  return {PolynomialConservedQuantity({std::vector<Vec>(m, p), p1}),
          PolynomialConservedQuantity({std::vector<Vec>(m, q), q1})};
}

std::vector<double> pairing_polynomial(const PolynomialConservedQuantity& x, const PolynomialConservedQuantity& y,
                                       double rel_tol) {
  if (x.samples() != y.samples()) fail(ErrorCode::InvalidArgument, "quantities live on different grids");
  const int deg = x.degree() + y.degree();
  std::vector<double> out(static_cast<std::size_t>(deg + 1), 0.0);
  for (int d = 0; d <= deg; ++d) {
    double lo = 0.0, hi = 0.0;
    for (std::size_t s = 0; s < x.samples(); ++s) {
      double acc = 0.0;
      for (int i = 0; i <= x.degree(); ++i) {
        const int j = d - i;
        if (j < 0 || j > y.degree()) continue;
        acc += inner(x.coefficients()[i][s], y.coefficients()[j][s]);
      }
      if (s == 0) lo = hi = acc;
      lo = std::min(lo, acc);
      hi = std::max(hi, acc);
    }
    const double mid = 0.5 * (lo + hi);
    if (hi - lo > rel_tol * (1.0 + std::abs(mid)))
      throw Error(ErrorCode::NonConserved, "coefficient of t^" + std::to_string(d) +
                                               " varies over the grid by " + std::to_string(hi - lo));
    out[static_cast<std::size_t>(d)] = mid;
  }
  return out;
}

std::vector<double> characteristic_polynomial(const PolynomialConservedQuantity& p, double rel_tol) {
  return pairing_polynomial(p, p, rel_tol);
}

const char* to_string(CqClass c) {
  switch (c) {
    case CqClass::Isothermic: return "Isothermic";
    case CqClass::LIsothermic: return "LIsothermic";
    case CqClass::Guichard: return "Guichard";
    case CqClass::Other: return "Other";
  }
  return "?";
}

CqClass classify_cq(const std::vector<double>& poly, double eps) {
  int deg = -1;
  for (std::size_t k = 0; k < poly.size(); ++k)
    if (std::abs(poly[k]) > eps) deg = static_cast<int>(k);
  if (deg < 0) return CqClass::LIsothermic;
  if (deg == 0) return poly[0] < 0 ? CqClass::Isothermic : CqClass::Other;
  if (deg == 1) return CqClass::Guichard;
  return CqClass::Other;
}

namespace {

std::vector<double> padded(std::vector<double> v, std::size_t n) {
  v.resize(std::max(v.size(), n), 0.0);
  return v;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

}  // namespace

GramReport gram_det(const PolynomialConservedQuantity& p, const PolynomialConservedQuantity& q, double kappa,
                    double a, double b, double c) {
  GramReport r;
  r.pp = padded(characteristic_polynomial(p), 3);
  r.qq = padded(characteristic_polynomial(q), 3);
  r.pq = padded(pairing_polynomial(p, q), 3);
  const std::vector<double> d1 = poly_mul(r.pp, r.qq), d2 = poly_mul(r.pq, r.pq);
  r.det.assign(std::max(d1.size(), d2.size()), 0.0);
  for (std::size_t k = 0; k < r.det.size(); ++k)
    r.det[k] = (k < d1.size() ? d1[k] : 0.0) - (k < d2.size() ? d2[k] : 0.0);
  r.pp_expected = {-1.0, -2 * a, 0.0};
  r.qq_expected = {-kappa, -2 * c, 0.0};
  r.pq_expected = {0.0, 2 * b, 0.0};
  r.det_expected = padded({kappa, 2 * (a * kappa + c), 4 * (a * c - b * b)}, r.det.size());
  auto cmp = [&](const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::max(x.size(), y.size());
    for (std::size_t k = 0; k < n; ++k) {
      const double xv = k < x.size() ? x[k] : 0.0, yv = k < y.size() ? y[k] : 0.0;
      r.residual = std::max(r.residual, std::abs(xv - yv));
    }
  };
  cmp(r.pp, r.pp_expected);
  cmp(r.qq, r.qq_expected);
  cmp(r.pq, r.pq_expected);
  cmp(r.det, r.det_expected);
  return r;
}

double parallel_residual(const DiscreteConnection& conn, const PolynomialConservedQuantity& s, std::size_t k) {
  if (s.samples() != static_cast<std::size_t>(conn.topology().samples()))
    fail(ErrorCode::InvalidArgument, "section and connection live on different grids");
  const std::vector<Vec> v = s.evaluate(conn.ts().at(k));
  double worst = 0.0;
  for (std::size_t e = 0; e < conn.edges().size(); ++e) {
    const Edge& ed = conn.edges()[e];
    worst = std::max(worst, (conn.transport(k, e) * v[ed.src].coords() - v[ed.dst].coords()).norm());
  }
  return worst;
}

Eigen::MatrixXd plaquette_holonomy(const DiscreteConnection& conn, std::size_t k, int i, int j) {
  const GridTopology& g = conn.topology();
  const int i1 = (i + 1) % g.nu, j1 = (j + 1) % g.nv;
  const Eigen::MatrixXd& S = conn.u_transport(k, i, j);
  const Eigen::MatrixXd& E = conn.v_transport(k, i1, j);
  const Eigen::MatrixXd& N = conn.u_transport(k, i, j1);
  const Eigen::MatrixXd& W = conn.v_transport(k, i, j);
  return W.inverse() * N.inverse() * E * S;
}

double flatness_residual(const DiscreteConnection& conn, std::size_t k) {
  const GridTopology& g = conn.topology();
  if (g.nu < 2 || g.nv < 2) fail(ErrorCode::InvalidArgument, "flatness needs a grid of at least 2x2 samples");
  double worst = 0.0;
  for (int i = 0; i < g.u_edge_count_i(); ++i)
    for (int j = 0; j < g.v_edge_count_j(); ++j) {
      const Eigen::MatrixXd h = plaquette_holonomy(conn, k, i, j);
      worst = std::max(worst, (h - Eigen::MatrixXd::Identity(h.rows(), h.cols())).norm());
    }
  return worst;
}

Eigen::MatrixXd gauge_exp_tau(const Vec& gplus, const Vec& gminus, double t) {
  require_same_space(gplus, gminus);
  const Space& s = gplus.space();
  return Eigen::MatrixXd::Identity(s.dim(), s.dim()) + t * wedge_matrix(s, gplus.coords(), gminus.coords());
}

DiscreteConnection apply_gauge(const DiscreteConnection& conn, const std::vector<std::vector<Eigen::MatrixXd>>& gauge) {
  if (gauge.size() != conn.ts().size()) fail(ErrorCode::InvalidArgument, "one gauge field per t value is required");
  DiscreteConnection out = conn;
  for (std::size_t k = 0; k < gauge.size(); ++k) {
    if (gauge[k].size() != static_cast<std::size_t>(conn.topology().samples()))
      fail(ErrorCode::InvalidArgument, "gauge field has the wrong number of samples");
    for (std::size_t e = 0; e < conn.edges().size(); ++e) {
      const Edge& ed = conn.edges()[e];
      out.transport(k, e) = gauge[k][ed.dst] * conn.transport(k, e) * gauge[k][ed.src].inverse();
    }
  }
  return out;
}

}  // namespace conegeo
