#include <ttinherit/linalg.hpp>

#include <string>

#include <ttinherit/errors.hpp>

namespace ttinherit::linalg {

namespace {

// Orthonormal basis Q and coefficients S with M = Q S. Tall inputs go through
// thin QR; wide inputs keep Q = I so S = M.
QrFactors basis_and_coefficients(const Matrix& m) {
  if (m.rows() >= m.cols()) {
    return thin_qr(m);
  }
  return {Matrix::Identity(m.rows(), m.rows()), m};
}

ThinSVD truncate(const Matrix& w, const Vector& sigma, const Matrix& v, double rank_tol) {
  const std::size_t r = numerical_rank(sigma, rank_tol);
  if (r == 0) {
    throw RankError("matrix is numerically zero; compact SVD undefined");
  }
  const auto k = static_cast<Eigen::Index>(r);
  return {w.leftCols(k), sigma.head(k), v.leftCols(k)};
}

} // namespace

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw NumericError(std::string(what) + ": non-finite entry");
  }
}

QrFactors thin_qr(const Matrix& m) {
  require_finite(m, "thin_qr");
  if (m.rows() < m.cols()) {
    throw DomainError("thin_qr requires rows >= cols");
  }
  const Eigen::HouseholderQR<Matrix> qr(m);
  const Eigen::Index k = m.cols();
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), k);
  Matrix s = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return {std::move(q), std::move(s)};
}

std::size_t numerical_rank(std::span<const double> sigma, double rank_tol) {
  if (sigma.empty() || !(sigma[0] > 0.0)) {
    return 0;
  }
  const double threshold = rank_tol * sigma[0];
  std::size_t k = 0;
  while (k < sigma.size() && sigma[k] > threshold) {
    ++k;
  }
  return k;
}

std::size_t numerical_rank(const Vector& sigma, double rank_tol) {
  return numerical_rank(std::span<const double>(sigma.data(), static_cast<std::size_t>(sigma.size())),
                        rank_tol);
}

Vector singular_values(const Matrix& m) {
  require_finite(m, "singular_values");
  if (m.rows() >= m.cols()) {
    const Matrix s = thin_qr(m).S;
    return Eigen::JacobiSVD<Matrix>(s).singularValues();
  }
  const Matrix s = thin_qr(m.transpose()).S;
  return Eigen::JacobiSVD<Matrix>(s).singularValues();
}

ThinSVD thin_svd(const Matrix& m, double rank_tol) {
  require_finite(m, "thin_svd");
  if (m.rows() >= m.cols()) {
    const QrFactors qr = thin_qr(m);
    const Eigen::JacobiSVD<Matrix> svd(qr.S, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return truncate(qr.Q * svd.matrixU(), svd.singularValues(), svd.matrixV(), rank_tol);
  }
  const QrFactors qr = thin_qr(m.transpose());
  const Eigen::JacobiSVD<Matrix> svd(qr.S, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return truncate(svd.matrixV(), svd.singularValues(), qr.Q * svd.matrixU(), rank_tol);
}

ThinSVD factored_svd(const Matrix& a, const Matrix& b, double rank_tol) {
  require_finite(a, "factored_svd");
  require_finite(b, "factored_svd");
  if (a.cols() != b.cols()) {
    throw DomainError("factored_svd: inner dimensions differ");
  }
  const QrFactors left = basis_and_coefficients(a);
  const QrFactors right = basis_and_coefficients(b);
  const Matrix core = left.S * right.S.transpose();
  const Eigen::JacobiSVD<Matrix> svd(core, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return truncate(left.Q * svd.matrixU(), svd.singularValues(), right.Q * svd.matrixV(), rank_tol);
}

double pinv_spectral_norm(const Matrix& m, double rank_tol) {
  if (m.cols() == 0) {
    throw DomainError("pinv_spectral_norm of an empty matrix");
  }
  if (m.rows() < m.cols()) {
    throw SingularityError("pinv_spectral_norm: " + std::to_string(m.rows()) + " rows cannot have column rank " +
                           std::to_string(m.cols()));
  }
  const Vector sigma = singular_values(m);
  const double smin = sigma(sigma.size() - 1);
  if (!(smin > rank_tol * sigma(0))) {
    throw SingularityError("pinv_spectral_norm: matrix is numerically rank deficient");
  }
  return 1.0 / smin;
}

double row_two_inf_norm(const Matrix& m) {
  require_finite(m, "row_two_inf_norm");
  if (m.size() == 0) {
    return 0.0;
  }
  return m.rowwise().norm().maxCoeff();
}

double condition_number(const ThinSVD& svd) {
  if (svd.rank() == 0) {
    throw RankError("condition number of a rank-0 factorization");
  }
  return svd.sigma(0) / svd.sigma(svd.sigma.size() - 1);
}

} // namespace ttinherit::linalg
