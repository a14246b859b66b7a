#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <ttinherit/tt.hpp>

namespace ttinherit {

/// Provenance written alongside the cores.
struct TTFileMetadata {
  std::string generator; ///< "gaussian", "hadamard", "uniform", or free text
  std::uint64_t seed = 0;
};

struct TTFile {
  TTTensor tensor;
  TTFileMetadata metadata;
};

/// Container layout (see docs/tt_format.md):
///   line 1: "TTCORES 1"
///   line 2: single-line JSON header {d, shape, ranks (r_0..r_d), generator, seed}
///   body:   cores 1..d, each as little-endian float64 in (a, j, b) order, a fastest.
void write_tt_file(const std::filesystem::path& path, const TTTensor& t, const TTFileMetadata& meta);
TTFile read_tt_file(const std::filesystem::path& path);

} // namespace ttinherit
