#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <ttinherit/linalg.hpp>
#include <ttinherit/multiindex.hpp>
#include <ttinherit/tt.hpp>

namespace ttinherit {

/// Core entry distributions: N(0, 1), independent +-1 with equal probability, U[0, 1].
enum class GeneratorKind { gaussian, hadamard, uniform };

const char* to_string(GeneratorKind kind);
std::optional<GeneratorKind> parse_generator_kind(std::string_view name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::gaussian;
  Shape shape;
  std::vector<std::size_t> ranks; ///< r_1..r_{d-1}
  std::uint64_t seed = 0;
  int max_regen = 10;
};

/// Throws ConfigError if the ranks cannot be realized: r_i <= min(r_{i-1} n_i, r_{i+1} n_{i+1}).
void validate_spec(const GeneratorSpec& spec);

/// Draws every core entry for `seed`, cores in order, entries a fastest, then j, then b.
/// No rank check.
TTTensor draw_cores(GeneratorKind kind, const Shape& shape, const std::vector<std::size_t>& ranks,
                    std::uint64_t seed);

struct GeneratedTensor {
  TTTensor tensor;
  std::uint64_t seed_used = 0; ///< seed of the accepted draw
  int regenerations = 0;       ///< rejected draws before it
};

/// A random TT tensor whose numerical TT-rank equals spec.ranks. The first draw
/// uses spec.seed; rejected draws are redrawn from derived seeds up to
/// spec.max_regen times, then GenerationError.
GeneratedTensor generate(const GeneratorSpec& spec, double rank_tol = linalg::kDefaultRankTol);

} // namespace ttinherit
