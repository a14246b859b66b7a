#include <ttinherit/tt.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include <ttinherit/errors.hpp>

namespace ttinherit {

namespace {

using Index = Eigen::Index;

void check_unfolding_index(const TTTensor& t, std::size_t i) {
  if (i < 1 || i >= t.order()) {
    throw DomainError("unfolding index " + std::to_string(i) + " outside [1, " + std::to_string(t.order() - 1) +
                      "]");
  }
}

// out[b] = sum_a in[a] * core(a, j, b)
void apply_slice_left(const TTCore& core, std::size_t j, std::span<const double> in, std::span<double> out) {
  for (std::size_t b = 0; b < core.right_rank(); ++b) {
    double acc = 0.0;
    for (std::size_t a = 0; a < core.left_rank(); ++a) {
      acc += in[a] * core(a, j, b);
    }
    out[b] = acc;
  }
}

// out[a] = sum_b core(a, j, b) * in[b]
void apply_slice_right(const TTCore& core, std::size_t j, std::span<const double> in, std::span<double> out) {
  for (std::size_t a = 0; a < core.left_rank(); ++a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < core.right_rank(); ++b) {
      acc += core(a, j, b) * in[b];
    }
    out[a] = acc;
  }
}

} // namespace

TTCore::TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank)
    : TTCore(left_rank, mode_size, right_rank, std::vector<double>(left_rank * mode_size * right_rank, 0.0)) {}

TTCore::TTCore(std::size_t left_rank, std::size_t mode_size, std::size_t right_rank, std::vector<double> data)
    : left_(left_rank), mode_(mode_size), right_(right_rank), data_(std::move(data)) {
  if (left_ == 0 || mode_ == 0 || right_ == 0) {
    throw StructuralError("core dimensions must be positive");
  }
  if (data_.size() != left_ * mode_ * right_) {
    throw StructuralError("core data has " + std::to_string(data_.size()) + " entries, expected " +
                          std::to_string(left_ * mode_ * right_));
  }
}

Matrix TTCore::slice(std::size_t j) const {
  Matrix s(static_cast<Index>(left_), static_cast<Index>(right_));
  for (std::size_t b = 0; b < right_; ++b) {
    for (std::size_t a = 0; a < left_; ++a) {
      s(static_cast<Index>(a), static_cast<Index>(b)) = (*this)(a, j, b);
    }
  }
  return s;
}

std::vector<std::size_t> validate(std::span<const TTCore> cores) {
  if (cores.size() < 2) {
    throw StructuralError("a TT tensor needs at least 2 cores, got " + std::to_string(cores.size()));
  }
  if (cores.front().left_rank() != 1) {
    throw StructuralError("core 1 has left rank " + std::to_string(cores.front().left_rank()) + ", expected 1");
  }
  if (cores.back().right_rank() != 1) {
    throw StructuralError("core " + std::to_string(cores.size()) + " has right rank " +
                          std::to_string(cores.back().right_rank()) + ", expected 1");
  }
  std::vector<std::size_t> ranks;
  ranks.reserve(cores.size() - 1);
  for (std::size_t k = 0; k + 1 < cores.size(); ++k) {
    if (cores[k].right_rank() != cores[k + 1].left_rank()) {
      throw StructuralError("rank mismatch at junction " + std::to_string(k + 1) + ": core " +
                            std::to_string(k + 1) + " right rank " + std::to_string(cores[k].right_rank()) +
                            " vs core " + std::to_string(k + 2) + " left rank " +
                            std::to_string(cores[k + 1].left_rank()));
    }
    ranks.push_back(cores[k].right_rank());
  }
  for (std::size_t k = 0; k < cores.size(); ++k) {
    for (const double v : cores[k].data()) {
      if (!std::isfinite(v)) {
        throw StructuralError("core " + std::to_string(k + 1) + " has a non-finite entry");
      }
    }
  }
  return ranks;
}

TTTensor::TTTensor(std::vector<TTCore> cores) : cores_(std::move(cores)) {
  ranks_ = validate(cores_);
  std::vector<std::size_t> dims;
  dims.reserve(cores_.size());
  for (const TTCore& c : cores_) {
    dims.push_back(c.mode_size());
  }
  shape_ = Shape(std::move(dims));
}

std::size_t TTTensor::rank(std::size_t i) const {
  if (i == 0 || i == order()) {
    return 1;
  }
  return ranks_.at(i - 1);
}

double entry(const TTTensor& t, std::span<const std::size_t> multi) {
  linearize(multi, t.shape()); // range check
  std::vector<double> v{1.0};
  std::vector<double> next;
  for (std::size_t k = 0; k < t.order(); ++k) {
    const TTCore& core = t.core(k + 1);
    next.assign(core.right_rank(), 0.0);
    apply_slice_left(core, multi[k] - 1, v, next);
    v.swap(next);
  }
  return v[0];
}

Matrix left_interface(const TTTensor& t, std::size_t i, std::size_t block_rows) {
  check_unfolding_index(t, i);
  block_rows = std::max<std::size_t>(block_rows, 1);
  const TTCore& first = t.core(1);
  Matrix l = Eigen::Map<const Matrix>(first.data().data(), static_cast<Index>(first.mode_size()),
                                      static_cast<Index>(first.right_rank()));
  for (std::size_t k = 2; k <= i; ++k) {
    const TTCore& core = t.core(k);
    const Index p = l.rows();
    Matrix next(p * static_cast<Index>(core.mode_size()), static_cast<Index>(core.right_rank()));
    for (std::size_t j = 0; j < core.mode_size(); ++j) {
      const Matrix s = core.slice(j);
      const Index base = static_cast<Index>(j) * p;
      for (Index start = 0; start < p; start += static_cast<Index>(block_rows)) {
        const Index len = std::min<Index>(static_cast<Index>(block_rows), p - start);
        next.middleRows(base + start, len).noalias() = l.middleRows(start, len) * s;
      }
    }
    l = std::move(next);
  }
  return l;
}

Matrix right_interface(const TTTensor& t, std::size_t i, std::size_t block_rows) {
  check_unfolding_index(t, i);
  block_rows = std::max<std::size_t>(block_rows, 1);
  const std::size_t d = t.order();
  const TTCore& last = t.core(d);
  Matrix r = Eigen::Map<const Matrix>(last.data().data(), static_cast<Index>(last.left_rank()),
                                      static_cast<Index>(last.mode_size()))
                 .transpose();
  using StridedMap = Eigen::Map<Matrix, 0, Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>>;
  for (std::size_t k = d - 1; k > i; --k) {
    const TTCore& core = t.core(k);
    const Index q = r.rows();
    const Index n = static_cast<Index>(core.mode_size());
    const Index total = q * n;
    Matrix next(total, static_cast<Index>(core.left_rank()));
    for (Index j = 0; j < n; ++j) {
      const Matrix st = core.slice(static_cast<std::size_t>(j)).transpose();
      // Rows j, j + n, j + 2n, ... of `next` correspond to rows 0, 1, 2, ... of r.
      for (Index start = 0; start < q; start += static_cast<Index>(block_rows)) {
        const Index len = std::min<Index>(static_cast<Index>(block_rows), q - start);
        StridedMap dst(next.data() + j + start * n, len, next.cols(), Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>(total, n));
        dst.noalias() = r.middleRows(start, len) * st;
      }
    }
    r = std::move(next);
  }
  return r;
}

Matrix left_interface_rows(const TTTensor& t, std::size_t i, const IndexSet& rows) {
  check_unfolding_index(t, i);
  const Shape prefix = t.shape().sub(0, i);
  if (rows.domain() != prefix.numel()) {
    throw DomainError("row index set domain " + std::to_string(rows.domain()) + " does not match n_1...n_" +
                      std::to_string(i) + " = " + std::to_string(prefix.numel()));
  }
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(t.rank(i)));
  std::vector<double> v;
  std::vector<double> next;
  for (std::size_t row = 0; row < rows.size(); ++row) {
    const std::vector<std::size_t> multi = delinearize(rows[row], prefix);
    v.assign(1, 1.0);
    for (std::size_t k = 0; k < i; ++k) {
      const TTCore& core = t.core(k + 1);
      next.assign(core.right_rank(), 0.0);
      apply_slice_left(core, multi[k] - 1, v, next);
      v.swap(next);
    }
    for (std::size_t b = 0; b < v.size(); ++b) {
      out(static_cast<Index>(row), static_cast<Index>(b)) = v[b];
    }
  }
  return out;
}

Matrix right_interface_rows(const TTTensor& t, std::size_t i, const IndexSet& cols) {
  check_unfolding_index(t, i);
  const std::size_t d = t.order();
  const Shape suffix = t.shape().sub(i, d);
  if (cols.domain() != suffix.numel()) {
    throw DomainError("column index set domain " + std::to_string(cols.domain()) + " does not match n_" +
                      std::to_string(i + 1) + "...n_d = " + std::to_string(suffix.numel()));
  }
  Matrix out(static_cast<Index>(cols.size()), static_cast<Index>(t.rank(i)));
  std::vector<double> w;
  std::vector<double> next;
  for (std::size_t col = 0; col < cols.size(); ++col) {
    const std::vector<std::size_t> multi = delinearize(cols[col], suffix);
    w.assign(1, 1.0);
    for (std::size_t k = d; k > i; --k) {
      const TTCore& core = t.core(k);
      next.assign(core.left_rank(), 0.0);
      apply_slice_right(core, multi[k - i - 1] - 1, w, next);
      w.swap(next);
    }
    for (std::size_t a = 0; a < w.size(); ++a) {
      out(static_cast<Index>(col), static_cast<Index>(a)) = w[a];
    }
  }
  return out;
}

linalg::ThinSVD unfolding_svd(const TTTensor& t, std::size_t i, double rank_tol) {
  return linalg::factored_svd(left_interface(t, i), right_interface(t, i), rank_tol);
}

std::vector<std::size_t> tt_rank_numerical(const TTTensor& t, double rank_tol) {
  std::vector<std::size_t> ranks;
  ranks.reserve(t.order() - 1);
  for (std::size_t i = 1; i < t.order(); ++i) {
    ranks.push_back(unfolding_svd(t, i, rank_tol).rank());
  }
  return ranks;
}

TTTensor row_restrict(const TTTensor& t, std::size_t i, const IndexSet& rows) {
  if (rows.empty()) {
    throw DomainError("row_restrict requires a non-empty index set");
  }
  const Matrix l = left_interface_rows(t, i, rows);
  std::vector<TTCore> cores;
  cores.reserve(t.order() - i + 1);
  cores.emplace_back(1, rows.size(), t.rank(i), std::vector<double>(l.data(), l.data() + l.size()));
  for (std::size_t k = i + 1; k <= t.order(); ++k) {
    cores.push_back(t.core(k));
  }
  return TTTensor(std::move(cores));
}

Matrix column_submatrix(const TTTensor& t, std::size_t i, const IndexSet& rows, const IndexSet& cols) {
  if (rows.empty() || cols.empty()) {
    throw DomainError("column_submatrix requires non-empty row and column sets");
  }
  return left_interface_rows(t, i, rows) * right_interface_rows(t, i, cols).transpose();
}

Matrix select_rows(const Matrix& m, const IndexSet& rows) {
  if (rows.domain() != static_cast<std::uint64_t>(m.rows())) {
    throw DomainError("row set domain " + std::to_string(rows.domain()) + " does not match " +
                      std::to_string(m.rows()) + " matrix rows");
  }
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.row(static_cast<Index>(k)) = m.row(static_cast<Index>(rows[k] - 1));
  }
  return out;
}

DenseTensor to_dense(const TTTensor& t, std::uint64_t cap) {
  const std::uint64_t total = t.shape().numel();
  if (total > cap) {
    throw CapacityError("dense tensor would hold " + std::to_string(total) + " entries (cap " +
                        std::to_string(cap) + ")");
  }
  const std::size_t d = t.order();
  const Matrix unfolding = left_interface(t, d - 1) * right_interface(t, d - 1).transpose();
  return {t.shape(), std::vector<double>(unfolding.data(), unfolding.data() + unfolding.size())};
}

TTTensor tt_svd_from_dense(const DenseTensor& x, double rank_tol, std::uint64_t cap) {
  const std::size_t d = x.shape.order();
  if (d < 2) {
    throw StructuralError("tt_svd_from_dense needs at least 2 modes");
  }
  const std::uint64_t total = x.shape.numel();
  if (total > cap) {
    throw CapacityError("dense input holds " + std::to_string(total) + " entries (cap " + std::to_string(cap) +
                        ")");
  }
  if (x.data.size() != total) {
    throw DomainError("dense data size does not match its shape");
  }
  std::vector<TTCore> cores;
  cores.reserve(d);
  // Remainder as an r_prev x (n_k ... n_d) matrix, first index fastest.
  Matrix rest = Eigen::Map<const Matrix>(x.data.data(), 1, static_cast<Index>(total));
  std::size_t r_prev = 1;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const std::size_t n = x.shape[k];
    const Index rows = static_cast<Index>(r_prev * n);
    const Index cols = rest.size() / rows;
    const Matrix c = Eigen::Map<const Matrix>(rest.data(), rows, cols);
    const linalg::ThinSVD svd = linalg::thin_svd(c, rank_tol);
    const std::size_t r = svd.rank();
    cores.emplace_back(r_prev, n, r, std::vector<double>(svd.W.data(), svd.W.data() + svd.W.size()));
    rest = svd.sigma.asDiagonal() * svd.V.transpose();
    r_prev = r;
  }
  cores.emplace_back(r_prev, x.shape[d - 1], 1, std::vector<double>(rest.data(), rest.data() + rest.size()));
  return TTTensor(std::move(cores));
}

} // namespace ttinherit
