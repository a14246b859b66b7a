#include <ttinherit/rng.hpp>

#include <vector>

namespace ttinherit {

std::uint64_t derive_seed(std::uint64_t master, StreamPurpose purpose,
                          std::initializer_list<std::uint64_t> key) {
  std::vector<std::uint32_t> words;
  words.reserve(3 + 2 * key.size());
  words.push_back(static_cast<std::uint32_t>(master));
  words.push_back(static_cast<std::uint32_t>(master >> 32));
  words.push_back(static_cast<std::uint32_t>(purpose));
  for (const std::uint64_t k : key) {
    words.push_back(static_cast<std::uint32_t>(k));
    words.push_back(static_cast<std::uint32_t>(k >> 32));
  }
  std::seed_seq seq(words.begin(), words.end());
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

} // namespace ttinherit
