// SPDX-License-Identifier: Apache-2.0
#include "ncw/symcore.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ncw {

SymMatrix::SymMatrix(int dim) {
  if (dim < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
  m_ = Eigen::MatrixXd::Zero(dim, dim);
}

SymMatrix::SymMatrix(const Eigen::MatrixXd& m, double asym_tol) {
  if (m.rows() < 1 || m.rows() != m.cols())
    throw std::invalid_argument("SymMatrix: input must be a non-empty square matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= asym_tol * scale))
    throw std::invalid_argument("SymMatrix: input is not symmetric");
  m_ = 0.5 * (m + m.transpose());
}

SymMatrix SymMatrix::identity(int dim) {
  SymMatrix out(dim);
  out.m_.setIdentity();
  return out;
}

SymMatrix SymMatrix::diagonal(std::span<const double> diag) {
  SymMatrix out(static_cast<int>(diag.size()));
  for (std::size_t i = 0; i < diag.size(); ++i) out.m_(i, i) = diag[i];
  return out;
}

SymMatrix SymMatrix::canonical_shift(int k, int dim) {
  if (k < 0 || k > dim) throw std::invalid_argument("I(k,d) requires 0 <= k <= d");
  SymMatrix out(dim);
  for (int i = dim - k; i < dim; ++i) out.m_(i, i) = 1.0;
  return out;
}

Eigen::VectorXd SymMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double SymMatrix::determinant() const { return m_.determinant(); }

double SymMatrix::log_det() const {
  Eigen::LLT<Eigen::MatrixXd> llt(m_);
  if (llt.info() != Eigen::Success) throw DomainError("log_det: matrix is not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

SymMatrix SymMatrix::inverse() const {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(m_);
  if (ldlt.info() != Eigen::Success || (ldlt.vectorD().array().abs() == 0.0).any())
    throw DomainError("inverse: matrix is singular");
  const Eigen::MatrixXd inv = ldlt.solve(Eigen::MatrixXd::Identity(dim(), dim()));
  return SymMatrix(inv, 1e-8);
}

SymMatrix SymMatrix::sqrt_psd() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m_);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd r = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  return SymMatrix(0.5 * (r + r.transpose()));
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& o) {
  if (o.dim() != dim()) throw std::invalid_argument("SymMatrix: dimension mismatch");
  m_ += o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator-=(const SymMatrix& o) {
  if (o.dim() != dim()) throw std::invalid_argument("SymMatrix: dimension mismatch");
  m_ -= o.m_;
  return *this;
}

SymMatrix& SymMatrix::operator*=(double c) {
  m_ *= c;
  return *this;
}

std::string SymMatrix::to_string(int precision) const {
  std::ostringstream os;
  os << std::setprecision(precision) << '[';
  for (int i = 0; i < dim(); ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < dim(); ++j) os << (j ? " " : "") << m_(i, j);
  }
  os << ']';
  return os.str();
}

SymMatrix congruence(const Eigen::MatrixXd& q, const SymMatrix& x) {
  if (q.cols() != x.dim()) throw std::invalid_argument("congruence: dimension mismatch");
  const Eigen::MatrixXd r = q * x.matrix() * q.transpose();
  return SymMatrix(0.5 * (r + r.transpose()));
}

double trace_product(const SymMatrix& a, const SymMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace_product: dimension mismatch");
  return a.matrix().cwiseProduct(b.matrix()).sum();
}

double default_rank_tol(const SymMatrix& m) {
  const Eigen::VectorXd ev = m.eigenvalues();
  return m.dim() * std::numeric_limits<double>::epsilon() * ev.cwiseAbs().maxCoeff();
}

ConeClass cone_classify(const SymMatrix& m, std::optional<double> tol) {
  if (!m.is_finite()) throw DomainError("cone_classify: non-finite entries");
  const Eigen::VectorXd ev = m.eigenvalues();
  const double t = tol.value_or(m.dim() * std::numeric_limits<double>::epsilon() *
                                ev.cwiseAbs().maxCoeff());
  if (t < 0.0) throw DomainError("cone_classify: tolerance must be >= 0");
  ConeClass out;
  out.tolerance = t;
  out.rank = static_cast<int>((ev.array() > t).count());
  if ((ev.array() < -t).any())
    out.tag = ConeTag::NotInCone;
  else if (out.rank == m.dim())
    out.tag = ConeTag::PositiveDefinite;
  else
    out.tag = ConeTag::BoundaryRank;
  return out;
}

int sym_rank(const SymMatrix& m, std::optional<double> tol) { return cone_classify(m, tol).rank; }

int factor_rank(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  return static_cast<int>((sv.array() > rel_tol * sv(0)).count());
}

bool is_positive_definite(const SymMatrix& m) {
  if (!m.is_finite()) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m.matrix());
  return llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all();
}

Eigen::MatrixXd haar_orthogonal(int d, Rng& rng) {
  if (d < 1) throw std::invalid_argument("haar_orthogonal: d must be >= 1");
  Eigen::MatrixXd q(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) q(i, j) = std_normal(rng);
  for (int j = 0; j < d; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k < j; ++k) q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
    q.col(j).normalize();
  }
  return q;
}

SymMatrix phi2(const ConePoint2& p) {
  SymMatrix m(2);
  m.set(0, 0, p.x + p.y);
  m.set(1, 1, p.x - p.y);
  m.set(0, 1, p.z);
  return m;
}

ConePoint2 phi2_inverse(const SymMatrix& m) {
  if (m.dim() != 2) throw std::invalid_argument("phi2_inverse: expects a 2x2 matrix");
  return {0.5 * (m(0, 0) + m(1, 1)), 0.5 * (m(0, 0) - m(1, 1)), m(0, 1)};
}

Eigen::VectorXd lebesgue_coords(const SymMatrix& m) {
  const int d = m.dim();
  Eigen::VectorXd c(d * (d + 1) / 2);
  int idx = 0;
  for (int i = 0; i < d; ++i) c(idx++) = m(i, i);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) c(idx++) = std::sqrt(2.0) * m(i, j);
  return c;
}

SymMatrix from_lebesgue_coords(std::span<const double> coords, int dim) {
  if (static_cast<int>(coords.size()) != dim * (dim + 1) / 2)
    throw std::invalid_argument("from_lebesgue_coords: wrong coordinate count");
  SymMatrix m(dim);
  int idx = 0;
  for (int i = 0; i < dim; ++i) m.set(i, i, coords[idx++]);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) m.set(i, j, coords[idx++] / std::sqrt(2.0));
  return m;
}

std::vector<std::string> lebesgue_coord_names(int dim) {
  std::vector<std::string> names;
  for (int i = 0; i < dim; ++i) names.push_back("x" + std::to_string(i + 1) + std::to_string(i + 1));
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      names.push_back("s2*x" + std::to_string(i + 1) + std::to_string(j + 1));
  return names;
}

SymMatrix gram(std::span<const Eigen::VectorXd> cols) {
  if (cols.empty()) throw std::invalid_argument("gram: empty vector list");
  const auto r = cols.front().size();
  if (r < 1) throw std::invalid_argument("gram: vectors must be non-empty");
  Eigen::MatrixXd c(r, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != r) throw std::invalid_argument("gram: vectors differ in length");
    c.col(static_cast<Eigen::Index>(j)) = cols[j];
  }
  return SymMatrix(Eigen::MatrixXd(c.transpose() * c));
}

}  // namespace ncw
