#include <ttinherit/generators.hpp>

#include <string>

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

#include <ttinherit/errors.hpp>
#include <ttinherit/rng.hpp>

namespace ttinherit {

const char* to_string(GeneratorKind kind) {
  switch (kind) {
  case GeneratorKind::gaussian:
    return "gaussian";
  case GeneratorKind::hadamard:
    return "hadamard";
  case GeneratorKind::uniform:
    return "uniform";
  }
  return "unknown";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
  if (name == "gaussian") {
    return GeneratorKind::gaussian;
  }
  if (name == "hadamard") {
    return GeneratorKind::hadamard;
  }
  if (name == "uniform") {
    return GeneratorKind::uniform;
  }
  return std::nullopt;
}

void validate_spec(const GeneratorSpec& spec) {
  const std::size_t d = spec.shape.order();
  if (d < 2) {
    throw ConfigError("generator needs at least 2 modes");
  }
  if (spec.ranks.size() != d - 1) {
    throw ConfigError("expected " + std::to_string(d - 1) + " ranks, got " + std::to_string(spec.ranks.size()));
  }
  if (spec.max_regen < 0) {
    throw ConfigError("max_regen must be non-negative");
  }
  auto rank = [&](std::size_t i) -> std::size_t { return (i == 0 || i == d) ? 1 : spec.ranks[i - 1]; };
  for (std::size_t i = 1; i < d; ++i) {
    const std::size_t r = rank(i);
    if (r == 0) {
      throw ConfigError("rank r_" + std::to_string(i) + " must be positive");
    }
    if (r > rank(i - 1) * spec.shape[i - 1] || r > rank(i + 1) * spec.shape[i]) {
      throw ConfigError("rank r_" + std::to_string(i) + " = " + std::to_string(r) +
                        " exceeds min(r_{i-1} n_i, r_{i+1} n_{i+1})");
    }
  }
}

TTTensor draw_cores(GeneratorKind kind, const Shape& shape, const std::vector<std::size_t>& ranks,
                    std::uint64_t seed) {
  Rng rng = make_rng(seed);
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  boost::random::bernoulli_distribution<double> coin(0.5);
  boost::random::uniform_01<double> unit;
  const std::size_t d = shape.order();
  std::vector<TTCore> cores;
  cores.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t left = k == 0 ? 1 : ranks[k - 1];
    const std::size_t right = k + 1 == d ? 1 : ranks[k];
    TTCore core(left, shape[k], right);
    // Storage order is the draw order.
    for (double& v : core.data()) {
      switch (kind) {
      case GeneratorKind::gaussian:
        v = normal(rng);
        break;
      case GeneratorKind::hadamard:
        v = coin(rng) ? 1.0 : -1.0;
        break;
      case GeneratorKind::uniform:
        v = unit(rng);
        break;
      }
    }
    cores.push_back(std::move(core));
  }
  return TTTensor(std::move(cores));
}

GeneratedTensor generate(const GeneratorSpec& spec, double rank_tol) {
  validate_spec(spec);
  for (int attempt = 0; attempt <= spec.max_regen; ++attempt) {
    const std::uint64_t seed =
        attempt == 0 ? spec.seed
                     : derive_seed(spec.seed, StreamPurpose::regeneration, {static_cast<std::uint64_t>(attempt)});
    TTTensor t = draw_cores(spec.kind, spec.shape, spec.ranks, seed);
    std::vector<std::size_t> observed;
    try {
      observed = tt_rank_numerical(t, rank_tol);
    } catch (const RankError&) {
      continue;
    }
    if (observed == spec.ranks) {
      return {std::move(t), seed, attempt};
    }
  }
  throw GenerationError(std::string("no rank-valid ") + to_string(spec.kind) + " draw within " +
                        std::to_string(spec.max_regen) + " regenerations");
}

} // namespace ttinherit
