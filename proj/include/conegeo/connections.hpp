#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "conegeo/grid.hpp"
#include "conegeo/pseudo_euclidean.hpp"
#include "conegeo/surfaces.hpp"

namespace conegeo {

/// x -> (a,x) b - (b,x) a.
class WedgeEndo {
 public:
  WedgeEndo(Vec a, Vec b);

  const Vec& a() const noexcept { return a_; }
  const Vec& b() const noexcept { return b_; }
  Vec operator()(const Vec& x) const;
  Eigen::MatrixXd matrix() const;

 private:
  Vec a_, b_;
};

WedgeEndo wedge_endo(const Vec& a, const Vec& b);

/// Matrix of a^b without constructing Vec objects.
Eigen::MatrixXd wedge_matrix(const Space& s, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Per-edge transports for a list of t values. A section s is parallel when
/// s(dst) = M_e(t) s(src) on every edge; M_e(t) = exp(-t Omega_e) with Omega_e
/// the connection form sampled on the edge.
class DiscreteConnection {
 public:
  /// `form(e)` returns Omega_e for edge e of `topo`.
  DiscreteConnection(GridTopology topo, std::vector<double> ts, std::string recipe,
                     const std::function<Eigen::MatrixXd(const Edge&)>& form);

  const GridTopology& topology() const noexcept { return topo_; }
  const std::vector<double>& ts() const noexcept { return ts_; }
  const std::string& recipe() const noexcept { return recipe_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Transport along edges()[e] for ts()[k].
  const Eigen::MatrixXd& transport(std::size_t k, std::size_t e) const { return m_.at(k).at(e); }
  Eigen::MatrixXd& transport(std::size_t k, std::size_t e) { return m_.at(k).at(e); }

  /// Transport along the u-edge / v-edge starting at (i,j).
  const Eigen::MatrixXd& u_transport(std::size_t k, int i, int j) const;
  const Eigen::MatrixXd& v_transport(std::size_t k, int i, int j) const;

  /// max over edges of |M^T G M - G| (Frobenius).
  double isometry_residual(const Space& s) const;

 private:
  GridTopology topo_;
  std::vector<double> ts_;
  std::string recipe_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Eigen::MatrixXd>> m_;
};

/// d + t (c xi^dxi - b (xi^dnu + nu^dxi) + a nu^dnu).
DiscreteConnection middle_connection(const LiftedSurface& ls, double a, double b, double c,
                                     const std::vector<double>& ts);

/// d + (t/2)(2H xi^dxi + xi^dnu + nu^dxi), i.e. the middle connection with
/// (a, b, c) = (0, -1/2, H).
DiscreteConnection cmc_connection(const LiftedSurface& ls, double H, const std::vector<double>& ts);

/// Coefficients (a, b, c) of the middle connection matching the CMC display.
Eigen::Vector3d cmc_coefficients(double H);

struct PairConnections {
  DiscreteConnection plus;   // d + t gamma+ ^ d gamma-
  DiscreteConnection minus;  // d + t gamma- ^ d gamma+
};

/// Throws InvalidArgument when the pair is not an envelope (null, orthogonal) to tol.
PairConnections pair_connections(const GridTopology& topo, const std::vector<Vec>& gplus,
                                 const std::vector<Vec>& gminus, const std::vector<double>& ts,
                                 double tol = 1e-8);

/// Vector polynomial sum_k a_k t^k with grid-valued coefficients.
class PolynomialConservedQuantity {
 public:
  explicit PolynomialConservedQuantity(std::vector<std::vector<Vec>> coeffs);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::size_t samples() const noexcept { return coeffs_.front().size(); }
  const std::vector<std::vector<Vec>>& coefficients() const noexcept { return coeffs_; }
  std::vector<Vec> evaluate(double t) const;

 private:
  std::vector<std::vector<Vec>> coeffs_;
};

/// Constant-coefficient quantity (same value at every sample).
PolynomialConservedQuantity constant_quantity(const Vec& v, std::size_t samples);

/// p(t) = p + t(-b xi + a nu), q(t) = q + t(c xi - b nu).
std::pair<PolynomialConservedQuantity, PolynomialConservedQuantity> lw_conserved_quantities(
    const LiftedSurface& ls, double a, double b, double c);

/// Coefficients of (x(t), y(t)) per power of t. Throws NonConserved when a
/// coefficient varies over the grid by more than rel_tol (1 + |coefficient|).
std::vector<double> pairing_polynomial(const PolynomialConservedQuantity& x, const PolynomialConservedQuantity& y,
                                       double rel_tol = 1e-8);

/// (p(t), p(t)).
std::vector<double> characteristic_polynomial(const PolynomialConservedQuantity& p, double rel_tol = 1e-8);

enum class CqClass { Isothermic, LIsothermic, Guichard, Other };
const char* to_string(CqClass c);

/// Negative constant: Isothermic; zero: LIsothermic; exact degree 1: Guichard.
CqClass classify_cq(const std::vector<double>& poly, double eps = 1e-10);

struct GramReport {
  std::vector<double> pp, qq, pq, det;                    // measured, padded to degree 2
  std::vector<double> pp_expected, qq_expected, pq_expected, det_expected;
  double residual = 0.0;  // max coefficient mismatch
};

/// Gram matrix of (p(t), q(t)) against the closed forms -1 - 2at, -kappa - 2ct, 2bt
/// and det G = kappa + 2(a kappa + c) t + 4(ac - b^2) t^2.
GramReport gram_det(const PolynomialConservedQuantity& p, const PolynomialConservedQuantity& q, double kappa,
                    double a, double b, double c);

/// max over edges |M_e(t_k) s(t_k)(src) - s(t_k)(dst)|.
double parallel_residual(const DiscreteConnection& conn, const PolynomialConservedQuantity& s, std::size_t k);

/// Plaquette holonomy M_W^-1 M_N^-1 M_E M_S around the face at (i,j).
Eigen::MatrixXd plaquette_holonomy(const DiscreteConnection& conn, std::size_t k, int i, int j);

/// max over plaquettes of |holonomy - I| (Frobenius).
double flatness_residual(const DiscreteConnection& conn, std::size_t k);

/// I + t tau with tau = gplus ^ gminus (nilpotent on envelopes).
Eigen::MatrixXd gauge_exp_tau(const Vec& gplus, const Vec& gminus, double t);

/// M'_e = g(dst) M_e g(src)^-1; gauge[k][sample] pairs with ts()[k].
DiscreteConnection apply_gauge(const DiscreteConnection& conn, const std::vector<std::vector<Eigen::MatrixXd>>& gauge);

}  // namespace conegeo
