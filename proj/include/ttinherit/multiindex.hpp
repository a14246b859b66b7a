#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include <ttinherit/rng.hpp>

namespace ttinherit {

/// Mode sizes n_1..n_d of a tensor. Non-empty, every size >= 1.
class Shape {
public:
  Shape() = default;
  explicit Shape(std::vector<std::size_t> dims);
  Shape(std::initializer_list<std::size_t> dims);

  [[nodiscard]] const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t order() const noexcept { return dims_.size(); }
  [[nodiscard]] std::size_t operator[](std::size_t k) const { return dims_.at(k); }

  /// Product of all mode sizes. Throws CapacityError on 64-bit overflow.
  [[nodiscard]] std::uint64_t numel() const;
  /// Product of modes [first, last) (0-based, half open).
  [[nodiscard]] std::uint64_t numel(std::size_t first, std::size_t last) const;
  /// Shape made of modes [first, last).
  [[nodiscard]] Shape sub(std::size_t first, std::size_t last) const;

  friend bool operator==(const Shape&, const Shape&) = default;

private:
  std::vector<std::size_t> dims_;
};

/// Sorted set of distinct 1-based indices drawn from [1, domain].
class IndexSet {
public:
  IndexSet() = default;
  /// Validates and sorts `indices`; duplicates or out-of-range values throw DomainError.
  IndexSet(std::vector<std::uint64_t> indices, std::uint64_t domain);

  /// The full set {1, ..., domain}.
  static IndexSet full(std::uint64_t domain);

  [[nodiscard]] const std::vector<std::uint64_t>& indices() const noexcept { return indices_; }
  [[nodiscard]] std::uint64_t domain() const noexcept { return domain_; }
  [[nodiscard]] std::size_t size() const noexcept { return indices_.size(); }
  [[nodiscard]] bool empty() const noexcept { return indices_.empty(); }
  [[nodiscard]] bool is_full() const noexcept { return indices_.size() == domain_; }
  [[nodiscard]] bool contains(std::uint64_t index) const;
  [[nodiscard]] std::uint64_t operator[](std::size_t k) const { return indices_[k]; }

  [[nodiscard]] auto begin() const noexcept { return indices_.begin(); }
  [[nodiscard]] auto end() const noexcept { return indices_.end(); }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

private:
  std::vector<std::uint64_t> indices_;
  std::uint64_t domain_ = 1;
};

/// First-index-fastest linearization: 1 + sum_k (multi[k]-1) * prod_{j<k} dims[j].
std::uint64_t linearize(std::span<const std::size_t> multi, const Shape& shape);
std::uint64_t linearize(std::initializer_list<std::size_t> multi, const Shape& shape);

/// Inverse of linearize.
std::vector<std::size_t> delinearize(std::uint64_t linear, const Shape& shape);

/// The set I (x) [n]: {q + (j-1) P : q in prefix, j in [n]} over domain P n,
/// P = prefix.domain(). The prefix index varies fastest.
IndexSet kron_extend(const IndexSet& prefix, std::size_t n);

/// Repeated kron_extend over each mode size in `modes`, left to right.
IndexSet kron_extend(const IndexSet& prefix, std::span<const std::size_t> modes);

/// Uniform m-subset of `pool` by partial Fisher-Yates. Throws SamplingError if m > |pool|.
IndexSet sample_without_replacement(const IndexSet& pool, std::size_t m, Rng& rng);

} // namespace ttinherit
