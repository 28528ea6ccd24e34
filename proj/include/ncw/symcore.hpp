// SPDX-License-Identifier: Apache-2.0
#pragma once

// Symmetric-matrix primitives on the cone of positive semidefinite matrices:
// storage with enforced symmetry, cone/rank classification, Haar sampling on
// O(d), the d = 2 cone parameterization and the isometric coordinates that
// fix the Lebesgue measure convention.

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ncw/common.hpp"

namespace ncw {

/// Dense real symmetric d x d matrix. Every mutation writes both (i,j) and
/// (j,i), so the stored array is exactly symmetric.
class SymMatrix {
 public:
  /// Zero matrix of order `dim` (dim >= 1).
  explicit SymMatrix(int dim);

  /// Copies `m` after checking it is square and symmetric to within
  /// `asym_tol` relative to its largest entry; stores (m + m^T) / 2.
  explicit SymMatrix(const Eigen::MatrixXd& m, double asym_tol = 1e-12);

  static SymMatrix identity(int dim);
  static SymMatrix diagonal(std::span<const double> diag);
  /// I(k,d): d-k leading zeros on the diagonal, then k ones.
  static SymMatrix canonical_shift(int k, int dim);

  int dim() const { return static_cast<int>(m_.rows()); }
  double operator()(int i, int j) const { return m_(i, j); }
  void set(int i, int j, double v) {
    m_(i, j) = v;
    m_(j, i) = v;
  }
  const Eigen::MatrixXd& matrix() const { return m_; }

  bool is_finite() const { return m_.allFinite(); }
  double trace() const { return m_.trace(); }
  double max_abs() const { return m_.cwiseAbs().maxCoeff(); }
  /// Eigenvalues in ascending order.
  Eigen::VectorXd eigenvalues() const;
  double determinant() const;
  /// log det for positive definite matrices; throws DomainError otherwise.
  double log_det() const;
  SymMatrix inverse() const;
  /// Positive square root of a positive semidefinite matrix.
  SymMatrix sqrt_psd() const;

  SymMatrix& operator+=(const SymMatrix& o);
  SymMatrix& operator-=(const SymMatrix& o);
  SymMatrix& operator*=(double c);
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(SymMatrix a, double c) { return a *= c; }
  friend SymMatrix operator*(double c, SymMatrix a) { return a *= c; }

  std::string to_string(int precision = 6) const;

 private:
  Eigen::MatrixXd m_;
};

/// q x q^T (congruence); q need not be square-invertible.
SymMatrix congruence(const Eigen::MatrixXd& q, const SymMatrix& x);

/// tr(ab).
double trace_product(const SymMatrix& a, const SymMatrix& b);

enum class ConeTag { PositiveDefinite, BoundaryRank, NotInCone };

struct ConeClass {
  ConeTag tag = ConeTag::NotInCone;
  int rank = 0;  // eigenvalues > tolerance
  double tolerance = 0.0;
};

/// d * machine epsilon * largest eigenvalue magnitude.
double default_rank_tol(const SymMatrix& m);

/// Eigenvalue classification: NotInCone if some eigenvalue < -tol, otherwise
/// PositiveDefinite (rank d) or BoundaryRank(rank). Throws DomainError on
/// non-finite entries or negative tol.
ConeClass cone_classify(const SymMatrix& m, std::optional<double> tol = std::nullopt);

/// Number of eigenvalues above tol (default_rank_tol when unset).
int sym_rank(const SymMatrix& m, std::optional<double> tol = std::nullopt);

/// Numerical rank of a general matrix: singular values above
/// rel_tol * largest singular value.
int factor_rank(const Eigen::MatrixXd& a, double rel_tol);

bool is_positive_definite(const SymMatrix& m);

/// Haar-distributed orthogonal matrix: Gram-Schmidt (applied twice) on a
/// matrix of independent standard normals, which is the QR factorization
/// with positive diagonal of R.
Eigen::MatrixXd haar_orthogonal(int d, Rng& rng);

/// Point of the cone of revolution x >= sqrt(y^2 + z^2).
struct ConePoint2 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double radius() const { return std::hypot(y, z); }
  /// x^2 - y^2 - z^2, the determinant of phi2 of the point.
  double quadratic() const { return x * x - y * y - z * z; }
  bool in_closed_cone(double tol = 0.0) const { return x >= radius() - tol; }
  bool in_open_cone() const { return x > radius(); }
};

/// (x,y,z) -> [[x+y, z], [z, x-y]].
SymMatrix phi2(const ConePoint2& p);

/// Inverse of phi2 on 2 x 2 symmetric matrices.
ConePoint2 phi2_inverse(const SymMatrix& m);

/// Isometric coordinates: (x_11, ..., x_dd, sqrt(2) x_ij for i < j in
/// row-major order). Their Euclidean inner product is tr(ab).
Eigen::VectorXd lebesgue_coords(const SymMatrix& m);
SymMatrix from_lebesgue_coords(std::span<const double> coords, int dim);
/// Column labels matching lebesgue_coords, e.g. "x11", "s2*x12".
std::vector<std::string> lebesgue_coord_names(int dim);

/// Gram matrix G_jk = <c_j, c_k>. Throws std::invalid_argument on an empty
/// list or vectors of different lengths.
SymMatrix gram(std::span<const Eigen::VectorXd> cols);

}  // namespace ncw
