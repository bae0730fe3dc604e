#include <bit>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>

#include "sng/error.hpp"
#include "sng/graph.hpp"

namespace sng {
namespace {

constexpr char kMagic[4] = {'S', 'N', 'G', '1'};
constexpr std::size_t kHeaderBytes = 4 + 4 * 5 + 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<char>((v >> shift) & 0xff));
  }
}

class Reader {
 public:
  Reader(std::string_view bytes, std::size_t offset, std::string name)
      : bytes_(bytes), name_(std::move(name)), off_(offset) {}

  std::uint32_t u32(const char* what) {
    need(4, what);
    const auto* p = reinterpret_cast<const unsigned char*>(bytes_.data() + off_);
    off_ += 4;
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
           (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return static_cast<std::uint8_t>(bytes_[off_++]);
  }
  std::size_t remaining() const { return bytes_.size() - off_; }

 private:
  void need(std::size_t count, const char* what) {
    if (remaining() < count) {
      throw FormatError(FormatErrorKind::kTruncated,
                        name_ + ": truncated while reading " + what);
    }
  }
  std::string_view bytes_;
  std::string name_;
  std::size_t off_;
};

}  // namespace

void save_graph(const SngGraph& g, const std::filesystem::path& path) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<std::uint32_t>(g.n()));
  put_u32(out, static_cast<std::uint32_t>(g.dim()));
  put_u32(out, g.r_cap().value_or(0));
  put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(g.alpha())));
  put_u32(out, g.medoid());
  out.push_back(static_cast<char>(g.kind()));
  for (std::size_t v = 0; v < g.n(); ++v) {
    const auto nb = g.neighbors(static_cast<std::uint32_t>(v));
    put_u32(out, static_cast<std::uint32_t>(nb.size()));
    for (std::uint32_t u : nb) put_u32(out, u);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed for " + path.string());
}

SngGraph load_graph(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  const std::string bytes(std::istreambuf_iterator<char>(f), {});
  const std::string name = path.string();

  if (bytes.size() < sizeof(kMagic) ||
      !std::equal(kMagic, kMagic + sizeof(kMagic), bytes.begin())) {
    throw FormatError(FormatErrorKind::kMagicMismatch,
                      name + ": not a graph file (bad magic)");
  }
  if (bytes.size() < kHeaderBytes) {
    throw FormatError(FormatErrorKind::kTruncated,
                      name + ": truncated header");
  }
  Reader in(bytes, sizeof(kMagic), name);
  const std::uint32_t n = in.u32("n");
  const std::uint32_t dim = in.u32("d");
  const std::uint32_t r_cap = in.u32("r_cap");
  const float alpha = std::bit_cast<float>(in.u32("alpha"));
  const std::uint32_t entry = in.u32("medoid");
  const std::uint8_t kind = in.u8("build_kind");
  if (kind > static_cast<std::uint8_t>(BuildKind::kRandomRegular)) {
    throw InvariantViolation(name + ": unknown build kind " +
                             std::to_string(kind));
  }
  // Each node needs at least its degree word; reject absurd n up front.
  if (static_cast<std::uint64_t>(n) * 4 > in.remaining()) {
    throw FormatError(FormatErrorKind::kTruncated,
                      name + ": file too short for " + std::to_string(n) +
                          " nodes");
  }
  Adjacency adj(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    const std::uint32_t degree = in.u32("degree");
    if (static_cast<std::uint64_t>(degree) * 4 > in.remaining()) {
      throw FormatError(FormatErrorKind::kTruncated,
                        name + ": adjacency of node " + std::to_string(v) +
                            " truncated");
    }
    adj[v].resize(degree);
    for (auto& u : adj[v]) u = in.u32("neighbour id");
  }
  if (in.remaining() != 0) {
    throw FormatError(FormatErrorKind::kTrailingData,
                      name + ": " + std::to_string(in.remaining()) +
                          " trailing bytes after adjacency");
  }
  std::optional<std::uint32_t> cap;
  if (r_cap != 0) cap = r_cap;
  return SngGraph(dim, std::move(adj), alpha, cap, entry,
                  static_cast<BuildKind>(kind));
}

}  // namespace sng
