#include <ttinherit/serialize.hpp>

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include <ttinherit/errors.hpp>

namespace ttinherit {

namespace {

constexpr const char* kMagic = "TTCORES 1";

void put_le(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int k = 0; k < 8; ++k) {
    bytes[k] = static_cast<unsigned char>(bits >> (8 * k));
  }
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(std::istream& in) {
  unsigned char bytes[8];
  if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
    throw IoError("TT file truncated");
  }
  std::uint64_t bits = 0;
  for (int k = 0; k < 8; ++k) {
    bits |= static_cast<std::uint64_t>(bytes[k]) << (8 * k);
  }
  return std::bit_cast<double>(bits);
}

} // namespace

void write_tt_file(const std::filesystem::path& path, const TTTensor& t, const TTFileMetadata& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  std::vector<std::size_t> ranks{1};
  ranks.insert(ranks.end(), t.ranks().begin(), t.ranks().end());
  ranks.push_back(1);
  const nlohmann::json header = {{"d", t.order()},
                                 {"shape", t.shape().dims()},
                                 {"ranks", ranks},
                                 {"generator", meta.generator},
                                 {"seed", meta.seed}};
  out << kMagic << '\n' << header.dump() << '\n';
  for (const TTCore& core : t.cores()) {
    for (const double v : core.data()) {
      put_le(out, v);
    }
  }
  if (!out) {
    throw IoError("write to " + path.string() + " failed");
  }
}

TTFile read_tt_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::string magic;
  std::string header_line;
  if (!std::getline(in, magic) || magic != kMagic) {
    throw IoError(path.string() + " is not a TT container (bad magic line)");
  }
  if (!std::getline(in, header_line)) {
    throw IoError(path.string() + ": missing header");
  }
  nlohmann::json header;
  std::vector<std::size_t> shape;
  std::vector<std::size_t> ranks;
  TTFileMetadata meta;
  try {
    header = nlohmann::json::parse(header_line);
    shape = header.at("shape").get<std::vector<std::size_t>>();
    ranks = header.at("ranks").get<std::vector<std::size_t>>();
    meta.generator = header.at("generator").get<std::string>();
    meta.seed = header.at("seed").get<std::uint64_t>();
    if (header.at("d").get<std::size_t>() != shape.size()) {
      throw IoError("header d disagrees with shape");
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": malformed header: " + e.what());
  }
  if (ranks.size() != shape.size() + 1) {
    throw IoError(path.string() + ": ranks must list r_0..r_d");
  }
  std::vector<TTCore> cores;
  cores.reserve(shape.size());
  for (std::size_t k = 0; k < shape.size(); ++k) {
    std::vector<double> data(ranks[k] * shape[k] * ranks[k + 1]);
    for (double& v : data) {
      v = get_le(in);
    }
    cores.emplace_back(ranks[k], shape[k], ranks[k + 1], std::move(data));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IoError(path.string() + ": trailing bytes after the last core");
  }
  return {TTTensor(std::move(cores)), std::move(meta)};
}

} // namespace ttinherit
