#include <ttinherit/multiindex.hpp>

#include <algorithm>
#include <limits>
#include <string>

#include <boost/random/uniform_int_distribution.hpp>

#include <ttinherit/errors.hpp>

namespace ttinherit {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    throw CapacityError("index space exceeds 64-bit range");
  }
  return a * b;
}

} // namespace

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw DomainError("shape must have at least one mode");
  }
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (dims_[k] == 0) {
      throw DomainError("mode " + std::to_string(k + 1) + " has size 0");
    }
  }
}

Shape::Shape(std::initializer_list<std::size_t> dims) : Shape(std::vector<std::size_t>(dims)) {}

std::uint64_t Shape::numel() const { return numel(0, dims_.size()); }

std::uint64_t Shape::numel(std::size_t first, std::size_t last) const {
  if (first > last || last > dims_.size()) {
    throw DomainError("mode range out of bounds");
  }
  std::uint64_t n = 1;
  for (std::size_t k = first; k < last; ++k) {
    n = checked_mul(n, dims_[k]);
  }
  return n;
}

Shape Shape::sub(std::size_t first, std::size_t last) const {
  if (first >= last || last > dims_.size()) {
    throw DomainError("mode range out of bounds");
  }
  return Shape(std::vector<std::size_t>(dims_.begin() + static_cast<std::ptrdiff_t>(first),
                                        dims_.begin() + static_cast<std::ptrdiff_t>(last)));
}

IndexSet::IndexSet(std::vector<std::uint64_t> indices, std::uint64_t domain)
    : indices_(std::move(indices)), domain_(domain) {
  if (domain_ == 0) {
    throw DomainError("index set domain must be positive");
  }
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw DomainError("index set contains duplicates");
  }
  if (!indices_.empty() && (indices_.front() < 1 || indices_.back() > domain_)) {
    throw DomainError("index outside [1, " + std::to_string(domain_) + "]");
  }
}

IndexSet IndexSet::full(std::uint64_t domain) {
  std::vector<std::uint64_t> all(domain);
  for (std::uint64_t k = 0; k < domain; ++k) {
    all[k] = k + 1;
  }
  IndexSet s;
  s.indices_ = std::move(all);
  s.domain_ = domain;
  if (domain == 0) {
    throw DomainError("index set domain must be positive");
  }
  return s;
}

bool IndexSet::contains(std::uint64_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

std::uint64_t linearize(std::span<const std::size_t> multi, const Shape& shape) {
  if (multi.size() != shape.order()) {
    throw DomainError("multi-index has " + std::to_string(multi.size()) + " components, shape has " +
                      std::to_string(shape.order()) + " modes");
  }
  std::uint64_t linear = 0;
  std::uint64_t stride = 1;
  for (std::size_t k = 0; k < multi.size(); ++k) {
    if (multi[k] < 1 || multi[k] > shape[k]) {
      throw DomainError("index " + std::to_string(multi[k]) + " out of range for mode " +
                        std::to_string(k + 1) + " (size " + std::to_string(shape[k]) + ")");
    }
    linear += (multi[k] - 1) * stride;
    stride *= shape[k];
  }
  return linear + 1;
}

std::uint64_t linearize(std::initializer_list<std::size_t> multi, const Shape& shape) {
  return linearize(std::span<const std::size_t>(multi.begin(), multi.size()), shape);
}

std::vector<std::size_t> delinearize(std::uint64_t linear, const Shape& shape) {
  if (linear < 1 || linear > shape.numel()) {
    throw DomainError("linear index " + std::to_string(linear) + " outside [1, " +
                      std::to_string(shape.numel()) + "]");
  }
  std::vector<std::size_t> multi(shape.order());
  std::uint64_t rest = linear - 1;
  for (std::size_t k = 0; k < shape.order(); ++k) {
    multi[k] = static_cast<std::size_t>(rest % shape[k]) + 1;
    rest /= shape[k];
  }
  return multi;
}

IndexSet kron_extend(const IndexSet& prefix, std::size_t n) {
  if (n == 0) {
    throw DomainError("kron_extend requires n >= 1");
  }
  const std::uint64_t p = prefix.domain();
  std::vector<std::uint64_t> out;
  out.reserve(prefix.size() * n);
  // j outer, q inner: already ascending since every q < P.
  for (std::uint64_t j = 0; j < n; ++j) {
    for (const std::uint64_t q : prefix) {
      out.push_back(q + j * p);
    }
  }
  return IndexSet(std::move(out), checked_mul(p, n));
}

IndexSet kron_extend(const IndexSet& prefix, std::span<const std::size_t> modes) {
  IndexSet out = prefix;
  for (const std::size_t n : modes) {
    out = kron_extend(out, n);
  }
  return out;
}

IndexSet sample_without_replacement(const IndexSet& pool, std::size_t m, Rng& rng) {
  if (m > pool.size()) {
    throw SamplingError("cannot draw " + std::to_string(m) + " elements from a pool of " +
                        std::to_string(pool.size()));
  }
  std::vector<std::uint64_t> work = pool.indices();
  const std::size_t n = work.size();
  for (std::size_t k = 0; k < m; ++k) {
    boost::random::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(work[k], work[pick(rng)]);
  }
  work.resize(m);
  return IndexSet(std::move(work), pool.domain());
}

} // namespace ttinherit
