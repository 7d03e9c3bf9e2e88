#include <gtest/gtest.h>

#include "conegeo/connections.hpp"
#include "test_support.hpp"

using namespace conegeo;

namespace {

const Space L3 = Space::lie(3);

Axis periodic(int n) { return {n, 0.0, 2 * M_PI, GridLayout::Periodic}; }
Axis nodes(int n, double a, double b) { return {n, a, b, GridLayout::Nodes}; }

LiftedSurface lifted(const SampledSurface& s) { return lift_surface(s, SubgeometryGauge::euclidean(L3)); }

LiftedSurface sphere(int n) { return lifted(make_sphere(1.0, periodic(n), nodes(n / 2, -1.0, 1.0))); }
LiftedSurface catenoid(int n) { return lifted(make_catenoid(1.0, periodic(n), nodes(n / 2, -0.8, 0.8))); }
LiftedSurface cylinder(int n) { return lifted(make_cylinder(1.0, periodic(n), nodes(n / 2, 0.0, 1.0))); }

double max_transport_gap(const DiscreteConnection& a, const DiscreteConnection& b, std::size_t k) {
  double d = 0.0;
  for (std::size_t e = 0; e < a.edges().size(); ++e) d = std::max(d, (a.transport(k, e) - b.transport(k, e)).norm());
  return d;
}

/// Envelope pair of the CMC case: gamma+ = nu + H xi, gamma- = xi.
std::pair<std::vector<Vec>, std::vector<Vec>> cmc_pair(const LiftedSurface& ls) {
  std::vector<Vec> gp, gm;
  for (std::size_t k = 0; k < ls.xi.size(); ++k) {
    gp.push_back(ls.nu[k] + ls.H[k] * ls.xi[k]);
    gm.push_back(ls.xi[k]);
  }
  return {gp, gm};
}

std::vector<std::vector<Eigen::MatrixXd>> tau_gauge(const std::vector<Vec>& gp, const std::vector<Vec>& gm,
                                                    const std::vector<double>& ts, double factor) {
  std::vector<std::vector<Eigen::MatrixXd>> g(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k)
    for (std::size_t s = 0; s < gp.size(); ++s) g[k].push_back(gauge_exp_tau(gp[s], gm[s], factor * ts[k]));
  return g;
}

}  // namespace

TEST(Wedge, Examples) {
  const Vec e1 = euclid(L3, 0), e2 = euclid(L3, 1);
  EXPECT_EQ(wedge_endo(e1, e1).matrix().norm(), 0.0);
  EXPECT_LT((wedge_endo(e1, e2)(e1) - e2).norm(), 1e-15);
  EXPECT_THROW(wedge_endo(e1, euclid(Space::moebius(3), 0)), Error);
}

TEST(Wedge, PropertySkewOnBasis) {
  cgtest::Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec a(L3, rng.vec(6, -2, 2)), b(L3, rng.vec(6, -2, 2));
    const WedgeEndo w(a, b);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(6), y = Eigen::VectorXd::Zero(6);
        x[i] = 1;
        y[j] = 1;
        const Vec X(L3, x), Y(L3, y);
        EXPECT_NEAR(inner(w(X), Y), -inner(X, w(Y)), 1e-13);
      }
    EXPECT_LT((w.matrix() - wedge_matrix(L3, a.coords(), b.coords())).norm(), 1e-15);
  }
}

TEST(Wedge, TauIsNilpotentOnEnvelopes) {
  const auto ls = cylinder(16);
  const auto [gp, gm] = cmc_pair(ls);
  for (std::size_t k = 0; k < gp.size(); ++k) {
    const Eigen::MatrixXd tau = wedge_endo(gp[k], gm[k]).matrix();
    EXPECT_LT((tau * tau).norm(), 1e-12 * tau.squaredNorm());
  }
}

TEST(PairConnections, TrivialAtZeroAndIsometric) {
  const auto ls = cylinder(16);
  const auto [gp, gm] = cmc_pair(ls);
  const auto pc = pair_connections(ls.topo, gp, gm, {0.0, 0.5});
  for (std::size_t e = 0; e < pc.plus.edges().size(); ++e) {
    EXPECT_EQ((pc.plus.transport(0, e) - Eigen::MatrixXd::Identity(6, 6)).norm(), 0.0);
    EXPECT_EQ((pc.minus.transport(0, e) - Eigen::MatrixXd::Identity(6, 6)).norm(), 0.0);
  }
  EXPECT_LT(pc.plus.isometry_residual(L3), 1e-13);
  EXPECT_LT(pc.minus.isometry_residual(L3), 1e-13);
}

TEST(PairConnections, RejectsNonEnvelope) {
  const auto ls = cylinder(8);
  std::vector<Vec> gp = ls.nu, gm = ls.nu;  // (nu, nu) = 0 but gm = gp is fine; perturb one
  gm[3] = ls.nu[3] + point_sphere_complex(L3);
  EXPECT_THROW(pair_connections(ls.topo, gp, gm, {0.5}), Error);
}

TEST(PairConnections, GaugeRelationConverges) {
  // d-_t = exp(t tau) . d+_t with tau = gamma+ ^ gamma-.
  const std::vector<double> ts = {-0.5, 0.5, 1.0};
  std::vector<double> gap[3];
  for (int n : {16, 32, 64}) {
    const auto ls = cylinder(n);
    const auto [gp, gm] = cmc_pair(ls);
    const auto pc = pair_connections(ls.topo, gp, gm, ts);
    const auto gauged = apply_gauge(pc.plus, tau_gauge(gp, gm, ts, 1.0));
    for (std::size_t k = 0; k < ts.size(); ++k) gap[k].push_back(max_transport_gap(gauged, pc.minus, k));
  }
  for (auto& g : gap) {
    EXPECT_GT(g[0] / g[1], 3.5);
    EXPECT_GT(g[1] / g[2], 3.5);
  }
}

TEST(PairConnections, MiddleConnectionIsHalfwayGauge) {
  // d^mid_t = exp(t tau / 2) . d+_t on the CMC cylinder.
  const std::vector<double> ts = {0.5};
  std::vector<double> gap;
  for (int n : {16, 32, 64}) {
    const auto ls = cylinder(n);
    const auto [gp, gm] = cmc_pair(ls);
    const auto pc = pair_connections(ls.topo, gp, gm, ts);
    const auto mid = cmc_connection(ls, 0.5, ts);
    gap.push_back(max_transport_gap(apply_gauge(pc.plus, tau_gauge(gp, gm, ts, 0.5)), mid, 0));
  }
  EXPECT_GT(gap[0] / gap[1], 3.5);
  EXPECT_GT(gap[1] / gap[2], 3.5);
}

TEST(MiddleConnection, TrivialCases) {
  const auto ls = catenoid(8);
  const auto zero = middle_connection(ls, 0, 0, 0, {0.5});
  const auto t0 = middle_connection(ls, 1, 2, 3, {0.0});
  for (std::size_t e = 0; e < zero.edges().size(); ++e) {
    EXPECT_EQ((zero.transport(0, e) - Eigen::MatrixXd::Identity(6, 6)).norm(), 0.0);
    EXPECT_EQ((t0.transport(0, e) - Eigen::MatrixXd::Identity(6, 6)).norm(), 0.0);
  }
  EXPECT_EQ(flatness_residual(t0, 0), 0.0);
}

TEST(MiddleConnection, CmcDisplayMatchesLwCoefficients) {
  const auto ls = cylinder(12);
  const std::vector<double> ts = {-0.5, 0.3, 1.0};
  const Eigen::Vector3d abc = cmc_coefficients(0.5);
  EXPECT_EQ(abc, Eigen::Vector3d(0.0, -0.5, 0.5));
  const auto a = cmc_connection(ls, 0.5, ts);
  const auto b = middle_connection(ls, abc[0], abc[1], abc[2], ts);
  for (std::size_t k = 0; k < ts.size(); ++k) EXPECT_LT(max_transport_gap(a, b, k), 1e-14);
}

TEST(MiddleConnection, SphereIsFlatToRoundoff) {
  const auto conn = middle_connection(sphere(16), 1, 0, -1, {-0.5, 0.5, 1.0});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_LT(flatness_residual(conn, k), 1e-12);
}

TEST(MiddleConnection, CatenoidFlatnessConverges) {
  std::vector<double> f;
  for (int n : {16, 32, 64}) f.push_back(flatness_residual(middle_connection(catenoid(n), 0, 1, 0, {0.3}), 0));
  EXPECT_GT(f[0] / f[1], 6.0);
  EXPECT_GT(f[1] / f[2], 6.0);
}

TEST(MiddleConnection, PerturbedCoefficientIsNotFlat) {
  // c varying along u: per-plaquette defect only falls like the plaquette area,
  // so the total over all plaquettes stays bounded away from 0.
  std::vector<double> total;
  for (int n : {16, 32, 64}) {
    const auto ls = sphere(n);
    const auto form = [&](const Edge& e) {
      const Eigen::VectorXd xm = 0.5 * (ls.xi[e.src].coords() + ls.xi[e.dst].coords());
      const Eigen::VectorXd nm = 0.5 * (ls.nu[e.src].coords() + ls.nu[e.dst].coords());
      const Eigen::VectorXd dx = ls.xi[e.dst].coords() - ls.xi[e.src].coords();
      const Eigen::VectorXd dn = ls.nu[e.dst].coords() - ls.nu[e.src].coords();
      const double c = -1.0 + 0.5 * std::sin(xm[1] + 2 * xm[2]);
      return Eigen::MatrixXd(c * wedge_matrix(L3, xm, dx) + wedge_matrix(L3, nm, dn));
    };
    const DiscreteConnection conn(ls.topo, {0.5}, "perturbed", form);
    const int plaquettes = ls.topo.nu * (ls.topo.nv - 1);
    total.push_back(flatness_residual(conn, 0) * plaquettes);
  }
  EXPECT_GT(total[2], 0.2 * total[0]);
  EXPECT_GT(total[2], 1e-3);
}

TEST(ConservedQuantities, LwFormulas) {
  const auto ls = catenoid(8);
  const Vec p = point_sphere_complex(L3), q = 2.0 * infinity(L3);
  {
    const auto [pt, qt] = lw_conserved_quantities(ls, 0, -0.5, 0.0);
    for (std::size_t s = 0; s < ls.xi.size(); ++s)
      EXPECT_LT((pt.evaluate(0.8)[s] - (p + 0.4 * ls.xi[s])).norm(), 1e-15);
  }
  {
    const auto [pt, qt] = lw_conserved_quantities(ls, 0, 1, 0);
    for (std::size_t s = 0; s < ls.xi.size(); ++s) EXPECT_LT((qt.evaluate(0.7)[s] - (q - 0.7 * ls.nu[s])).norm(), 1e-15);
  }
  {
    const auto [pt, qt] = lw_conserved_quantities(ls, 2.0, 0, 1.0);
    for (std::size_t s = 0; s < ls.xi.size(); ++s) EXPECT_LT((pt.evaluate(0.5)[s] - (p + 1.0 * ls.nu[s])).norm(), 1e-15);
    EXPECT_EQ(pt.degree(), 1);
  }
}

TEST(ConservedQuantities, CharacteristicPolynomialAndClasses) {
  const auto ls = cylinder(8);
  const auto [pt, qt] = lw_conserved_quantities(ls, 0, -0.5, 0.5);
  const auto poly = characteristic_polynomial(pt);
  EXPECT_NEAR(poly[0], -1.0, 1e-14);
  for (std::size_t k = 1; k < poly.size(); ++k) EXPECT_NEAR(poly[k], 0.0, 1e-14);
  EXPECT_EQ(classify_cq(poly), CqClass::Isothermic);

  const std::size_t m = ls.xi.size();
  EXPECT_EQ(classify_cq(characteristic_polynomial(constant_quantity(2.0 * infinity(L3), m))), CqClass::LIsothermic);

  // a0 = p, a1 null with (p, a1) = 1: (p(t), p(t)) = -1 + 2t.
  const Vec p = point_sphere_complex(L3);
  const Vec a1 = euclid(L3, 0) - p;
  const PolynomialConservedQuantity g({std::vector<Vec>(m, p), std::vector<Vec>(m, a1)});
  const auto gp = characteristic_polynomial(g);
  EXPECT_NEAR(gp[0], -1.0, 1e-15);
  EXPECT_NEAR(gp[1], 2.0, 1e-15);
  EXPECT_EQ(classify_cq(gp), CqClass::Guichard);
  EXPECT_EQ(classify_cq({1.0, 0.0, 3.0}), CqClass::Other);
}

TEST(ConservedQuantities, GridVaryingPolynomialIsNonConserved) {
  std::vector<Vec> a0;
  for (int k = 0; k < 10; ++k) a0.push_back((1.0 + k) * euclid(L3, 0));
  try {
    characteristic_polynomial(PolynomialConservedQuantity({a0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonConserved);
  }
}

TEST(Gram, SphereExample) {
  const auto [pt, qt] = lw_conserved_quantities(sphere(8), 1, 0, -1);
  const GramReport g = gram_det(pt, qt, 0.0, 1, 0, -1);
  EXPECT_NEAR(g.det[0], 0.0, 1e-12);
  EXPECT_NEAR(g.det[1], -2.0, 1e-12);
  EXPECT_NEAR(g.det[2], -4.0, 1e-12);
  EXPECT_NEAR(g.qq[0], 0.0, 1e-12);
  EXPECT_NEAR(g.qq[1], 2.0, 1e-12);
  EXPECT_LT(cgtest::max_abs(g.pq), 1e-12);
  EXPECT_LT(g.residual, 1e-10);
}

TEST(Gram, PropertyClosedFormsOnGenerators) {
  cgtest::Rng rng(42);
  struct Case {
    LiftedSurface ls;
    Eigen::Vector3d abc;
  };
  const std::vector<Case> cases = {{sphere(8), {1, 0, -1}},
                                   {sphere(8), {0, -0.5, 1}},
                                   {catenoid(8), {0, 1, 0}},
                                   {cylinder(8), {0, 1, -1}},
                                   {cylinder(8), {0, -0.5, 0.5}}};
  for (const auto& c : cases) {
    for (int scale = 0; scale < 3; ++scale) {
      const Eigen::Vector3d abc = c.abc * rng.uniform(0.5, 2.0);
      const auto [pt, qt] = lw_conserved_quantities(c.ls, abc[0], abc[1], abc[2]);
      const GramReport g = gram_det(pt, qt, 0.0, abc[0], abc[1], abc[2]);
      EXPECT_LT(g.residual, 1e-10);
    }
  }
}

TEST(Parallel, PointSphereComplexIsConstantForMinus) {
  const auto ls = cylinder(16);
  const auto [gp, gm] = cmc_pair(ls);
  const std::vector<double> ts = {-0.5, 0.5, 1.0};
  const auto pc = pair_connections(ls.topo, gp, gm, ts);
  const auto pconst = constant_quantity(point_sphere_complex(L3), ls.xi.size());
  for (std::size_t k = 0; k < ts.size(); ++k) EXPECT_LT(parallel_residual(pc.minus, pconst, k), 1e-11);
}

TEST(Parallel, CmcSphereQMinusIsParallel) {
  const auto ls = sphere(16);
  const auto [gp, gm] = cmc_pair(ls);
  const std::vector<double> ts = {0.5, 1.0};
  const auto pc = pair_connections(ls.topo, gp, gm, ts);
  const Vec q = 2.0 * infinity(L3);
  std::vector<Vec> g0(ls.xi.size(), q);
  const PolynomialConservedQuantity qminus({g0, gp});
  for (std::size_t k = 0; k < ts.size(); ++k) EXPECT_LT(parallel_residual(pc.minus, qminus, k), 1e-11);
}

TEST(Parallel, SphereMiddleConnectionIsExact) {
  const auto ls = sphere(16);
  const auto conn = middle_connection(ls, 1, 0, -1, {0.5});
  const auto [pt, qt] = lw_conserved_quantities(ls, 1, 0, -1);
  EXPECT_LT(parallel_residual(conn, pt, 0), 1e-11);
  EXPECT_LT(parallel_residual(conn, qt, 0), 1e-11);
}

TEST(Parallel, CatenoidResidualConverges) {
  std::vector<double> r;
  for (int n : {16, 32, 64}) {
    const auto ls = catenoid(n);
    const auto [pt, qt] = lw_conserved_quantities(ls, 0, 1, 0);
    r.push_back(parallel_residual(middle_connection(ls, 0, 1, 0, {0.5}), qt, 0));
  }
  EXPECT_GT(r[0] / r[1], 3.5);
  EXPECT_GT(r[1] / r[2], 3.5);
}

TEST(Parallel, NonConservedSectionDoesNotConverge) {
  std::vector<double> r;
  for (int n : {16, 32}) {
    const auto ls = catenoid(n);
    r.push_back(parallel_residual(middle_connection(ls, 0, 1, 0, {0.5}),
                                  PolynomialConservedQuantity({ls.xi, ls.nu}), 0));
  }
  EXPECT_GT(r[1], 0.3 * r[0]);
}

TEST(Gauge, ExpTauProperties) {
  const auto ls = sphere(8);
  const auto [gp, gm] = cmc_pair(ls);
  EXPECT_EQ((gauge_exp_tau(gp[0], gm[0], 0.0) - Eigen::MatrixXd::Identity(6, 6)).norm(), 0.0);
  const auto [pt, qt] = lw_conserved_quantities(ls, 0, -0.5, 1.0);
  const Vec p = point_sphere_complex(L3);
  for (double t : {-0.5, 0.5, 1.0}) {
    const auto pv = pt.evaluate(t);
    for (std::size_t s = 0; s < gp.size(); ++s) {
      const Eigen::MatrixXd g = gauge_exp_tau(gp[s], gm[s], t);
      EXPECT_LT((g.transpose() * L3.gram() * g - L3.gram()).norm(), 1e-12);
      EXPECT_LT((apply(gauge_exp_tau(gp[s], gm[s], t / 2), pv[s]) - p).norm(), 1e-13);
    }
  }
}

TEST(Gauge, ParallelResidualIsGaugeCovariant) {
  const auto ls = catenoid(32);
  const std::vector<double> ts = {0.5};
  const auto conn = middle_connection(ls, 0, 1, 0, ts);
  const auto [pt, qt] = lw_conserved_quantities(ls, 0, 1, 0);
  cgtest::Rng rng(43);
  std::vector<std::vector<Eigen::MatrixXd>> g(1);
  std::vector<Vec> moved;
  const auto qv = qt.evaluate(0.5);
  for (std::size_t s = 0; s < ls.xi.size(); ++s) {
    g[0].push_back(gauge_exp_tau(ls.nu[s], ls.xi[s], 0.3));
    moved.push_back(apply(g[0].back(), qv[s]));
  }
  const double before = parallel_residual(conn, qt, 0);
  const double after = parallel_residual(apply_gauge(conn, g), PolynomialConservedQuantity({moved}), 0);
  EXPECT_LT(std::abs(after - before), 5 * before + 1e-13);
}
