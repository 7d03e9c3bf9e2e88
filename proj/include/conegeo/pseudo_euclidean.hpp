#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "conegeo/errors.hpp"

namespace conegeo {

enum class SpaceKind { Moebius, Lie };

/// Homogeneous coordinate space for sphere geometry of S^n.
///
/// Coordinates are taken in the null basis (o, e_1, ..., e_n, inf[, p]):
///   (o,o) = (inf,inf) = 0,  (o,inf) = -1/2,  (e_i,e_j) = delta_ij,  (p,p) = -1,
/// all other pairings zero. Moebius spaces (dimension n+2, signature (n+1,1))
/// omit p; Lie spaces (dimension n+3, signature (n+1,2)) carry it in the last slot.
class Space {
 public:
  Space(int n, SpaceKind kind);

  static Space moebius(int n) { return {n, SpaceKind::Moebius}; }
  static Space lie(int n) { return {n, SpaceKind::Lie}; }

  int n() const noexcept { return n_; }
  SpaceKind kind() const noexcept { return kind_; }
  bool is_lie() const noexcept { return kind_ == SpaceKind::Lie; }
  int dim() const noexcept { return n_ + (is_lie() ? 3 : 2); }

  int origin_slot() const noexcept { return 0; }
  int euclid_slot(int i) const noexcept { return 1 + i; }
  int infinity_slot() const noexcept { return n_ + 1; }
  int p_slot() const;

  /// Gram matrix of the null basis.
  Eigen::MatrixXd gram() const;

  /// Orthonormal view: columns are null-basis coordinates of
  /// (e_1..e_n, o-inf, o+inf[, p]) with Gram diag(1,..,1,1,-1[,-1]).
  Eigen::MatrixXd orthonormal_frame() const;

  bool operator==(const Space& other) const noexcept {
    return n_ == other.n_ && kind_ == other.kind_;
  }

 private:
  int n_;
  SpaceKind kind_;
};

/// A coordinate vector tagged with its space.
class Vec {
 public:
  Vec(Space space, Eigen::VectorXd coords);

  const Space& space() const noexcept { return space_; }
  const Eigen::VectorXd& coords() const noexcept { return coords_; }
  double operator[](int i) const { return coords_[i]; }
  double norm() const { return coords_.norm(); }

  Vec operator+(const Vec& o) const;
  Vec operator-(const Vec& o) const;
  Vec operator-() const { return {space_, -coords_}; }
  Vec operator*(double s) const { return {space_, coords_ * s}; }
  Vec operator/(double s) const { return {space_, coords_ / s}; }
  friend Vec operator*(double s, const Vec& v) { return v * s; }

 private:
  Space space_;
  Eigen::VectorXd coords_;
};

// Basis vectors.
Vec origin(const Space& s);
Vec infinity(const Space& s);
Vec euclid(const Space& s, int i);
Vec point_sphere_complex(const Space& s);
Vec zero(const Space& s);

struct SignatureTriple {
  int positive = 0;
  int negative = 0;
  int null = 0;

  int dim() const noexcept { return positive + negative + null; }
  bool operator==(const SignatureTriple&) const = default;
};

struct IsometryCheck {
  bool ok = false;
  double residual = 0.0;
};

void require_same_space(const Vec& u, const Vec& v);

double inner(const Vec& u, const Vec& v);

/// Raw bilinear form on coordinate arrays of `space`.
double inner(const Space& space, const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Signature of the form restricted to span(vs). Dependent vectors reduce the
/// dimension; an eigenvalue counts as zero when |lambda| < eps_rel * max(max|lambda|, 1).
SignatureTriple signature_of_span(std::span<const Vec> vs, double eps_rel = 1e-9);

/// x - 2 (x,m)/(m,m) m.
Vec reflect(const Vec& x, const Vec& m);
Eigen::MatrixXd reflection_matrix(const Vec& m);

IsometryCheck is_isometry(const Eigen::MatrixXd& m, const Space& space, double eps = 1e-10);

/// Basis of {vs}^perp with respect to the form.
std::vector<Vec> orthogonal_complement(std::span<const Vec> vs, const Space& space);

Vec apply(const Eigen::MatrixXd& m, const Vec& v);

/// Numerical rank of the coordinate vectors (relative SVD threshold).
int rank_of(std::span<const Vec> vs, double eps_rel = 1e-12);

}  // namespace conegeo
