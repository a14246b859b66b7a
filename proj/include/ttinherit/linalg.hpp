#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace ttinherit::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative threshold separating numerical rank from roundoff.
inline constexpr double kDefaultRankTol = 1e-9;

struct QrFactors {
  Matrix Q; ///< m x k, orthonormal columns
  Matrix S; ///< k x k, upper triangular
};

/// Compact SVD M = W diag(sigma) V^T truncated to the numerical rank.
struct ThinSVD {
  Matrix W;
  Vector sigma;
  Matrix V;

  [[nodiscard]] std::size_t rank() const noexcept { return static_cast<std::size_t>(sigma.size()); }
};

/// Householder thin QR of a tall (rows >= cols) matrix.
QrFactors thin_qr(const Matrix& m);

/// Largest k with sigma[k] > rank_tol * sigma[1] (1-based); 0 for empty input.
std::size_t numerical_rank(std::span<const double> sigma, double rank_tol = kDefaultRankTol);
std::size_t numerical_rank(const Vector& sigma, double rank_tol = kDefaultRankTol);

/// Compact SVD of M. Throws RankError when M is numerically zero.
ThinSVD thin_svd(const Matrix& m, double rank_tol = kDefaultRankTol);

/// Compact SVD of the product A B^T without forming it. A is m x r, B is n x r;
/// cost is O((m + n) r^2). Throws RankError when the product is numerically zero.
ThinSVD factored_svd(const Matrix& a, const Matrix& b, double rank_tol = kDefaultRankTol);

/// Singular values of M, descending, without vectors.
Vector singular_values(const Matrix& m);

/// ||M^+||_2 = 1 / sigma_min(M) for M of full column rank. Throws SingularityError
/// when sigma_min <= rank_tol * sigma_max or M has fewer rows than columns.
double pinv_spectral_norm(const Matrix& m, double rank_tol = kDefaultRankTol);

/// Largest Euclidean row norm.
double row_two_inf_norm(const Matrix& m);

/// sigma_1 / sigma_r over the retained rank.
double condition_number(const ThinSVD& svd);

void require_finite(const Matrix& m, const char* what);

} // namespace ttinherit::linalg
