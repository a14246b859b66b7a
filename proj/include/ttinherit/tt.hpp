#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <ttinherit/linalg.hpp>
#include <ttinherit/multiindex.hpp>

namespace ttinherit {

using linalg::Matrix;

/// Order-3 core of shape left_rank x mode_size x right_rank. Storage order is
/// a fastest, then j, then b (the same order used on disk).
class TTCore {
public:
  TTCore() = default;
  TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank);
  TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank, std::vector<double> data);

  [[nodiscard]] std::size_t left_rank() const noexcept { return left_; }
  [[nodiscard]] std::size_t mode_size() const noexcept { return mode_; }
  [[nodiscard]] std::size_t right_rank() const noexcept { return right_; }

  /// 0-based access.
  [[nodiscard]] double operator()(std::size_t a, std::size_t j, std::size_t b) const {
    return data_[a + left_ * (j + mode_ * b)];
  }
  double& operator()(std::size_t a, std::size_t j, std::size_t b) { return data_[a + left_ * (j + mode_ * b)]; }

  /// The left_rank x right_rank slice at mode index j (0-based).
  [[nodiscard]] Matrix slice(std::size_t j) const;

  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  [[nodiscard]] std::span<double> data() noexcept { return data_; }

  friend bool operator==(const TTCore&, const TTCore&) = default;

private:
  std::size_t left_ = 1;
  std::size_t mode_ = 1;
  std::size_t right_ = 1;
  std::vector<double> data_;
};

/// Validates a core chain and returns its internal ranks (r_1..r_{d-1}).
/// Throws StructuralError naming the offending core or junction.
std::vector<std::size_t> validate(std::span<const TTCore> cores);

/// Dense array with first-index-fastest storage. Desk-scale only.
struct DenseTensor {
  Shape shape;
  std::vector<double> data;

  [[nodiscard]] double operator()(std::span<const std::size_t> multi) const {
    return data[linearize(multi, shape) - 1];
  }
};

/// Immutable chain of cores T_1 * ... * T_d, d >= 2, r_0 = r_d = 1.
class TTTensor {
public:
  explicit TTTensor(std::vector<TTCore> cores);

  [[nodiscard]] std::size_t order() const noexcept { return cores_.size(); }
  [[nodiscard]] const Shape& shape() const noexcept { return shape_; }
  /// Internal ranks r_1..r_{d-1}.
  [[nodiscard]] const std::vector<std::size_t>& ranks() const noexcept { return ranks_; }
  /// r_i for i in [0, d]; r_0 = r_d = 1.
  [[nodiscard]] std::size_t rank(std::size_t i) const;
  /// 1-based core access.
  [[nodiscard]] const TTCore& core(std::size_t i) const { return cores_.at(i - 1); }
  [[nodiscard]] const std::vector<TTCore>& cores() const noexcept { return cores_; }

  friend bool operator==(const TTTensor&, const TTTensor&) = default;

private:
  std::vector<TTCore> cores_;
  Shape shape_;
  std::vector<std::size_t> ranks_;
};

inline constexpr std::uint64_t kDefaultDenseCap = 10'000'000;
inline constexpr std::size_t kDefaultBlockRows = std::size_t{1} << 16;

/// Product of the core slices selected by a 1-based multi-index.
double entry(const TTTensor& t, std::span<const std::size_t> multi);

DenseTensor to_dense(const TTTensor& t, std::uint64_t cap = kDefaultDenseCap);

/// L_i = (T_1 * ... * T_i)_<i>, of size (n_1...n_i) x r_i, so that T_<i> = L_i R_i^T.
Matrix left_interface(const TTTensor& t, std::size_t i, std::size_t block_rows = kDefaultBlockRows);
/// R_i, of size (n_{i+1}...n_d) x r_i, built from cores i+1..d.
Matrix right_interface(const TTTensor& t, std::size_t i, std::size_t block_rows = kDefaultBlockRows);

/// Selected rows of L_i (rows is an index set over n_1...n_i), by per-row chain products.
Matrix left_interface_rows(const TTTensor& t, std::size_t i, const IndexSet& rows);
/// Selected rows of R_i (cols is an index set over n_{i+1}...n_d).
Matrix right_interface_rows(const TTTensor& t, std::size_t i, const IndexSet& cols);

/// Compact SVD of T_<i> through the interface factors; the unfolding itself is never formed.
linalg::ThinSVD unfolding_svd(const TTTensor& t, std::size_t i, double rank_tol = linalg::kDefaultRankTol);

/// Numerical rank of every unfolding. A numerically zero unfolding throws RankError.
std::vector<std::size_t> tt_rank_numerical(const TTTensor& t, double rank_tol = linalg::kDefaultRankTol);

/// (T_1 * ... * T_i)_<i>(I, :) * T_{i+1} * ... * T_d: an order d-i+1 tensor whose
/// first mode enumerates I.
TTTensor row_restrict(const TTTensor& t, std::size_t i, const IndexSet& rows);

/// T_<i>(rows, cols) as L_i(rows,:) R_i(cols,:)^T.
Matrix column_submatrix(const TTTensor& t, std::size_t i, const IndexSet& rows, const IndexSet& cols);

/// Rows of `m` selected by a 1-based index set whose domain is m.rows().
Matrix select_rows(const Matrix& m, const IndexSet& rows);

/// Sequential truncated SVD of a dense array into TT format.
TTTensor tt_svd_from_dense(const DenseTensor& x, double rank_tol = linalg::kDefaultRankTol,
                           std::uint64_t cap = kDefaultDenseCap);

} // namespace ttinherit
