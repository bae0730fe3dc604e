#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "sng/dataset.hpp"
#include "sng/error.hpp"

namespace sng {
namespace {

// Dimensions above this are treated as a corrupt header rather than an
// allocation request.
constexpr std::int32_t kMaxDim = 1 << 24;

std::uint32_t load_le32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
         (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

void store_le32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

// Walks the records of a *vecs file, calling emit(record_index, payload) with
// the d raw little-endian words of each record.
template <typename Emit>
std::size_t parse_vecs(const std::string& bytes, const std::string& name,
                       std::size_t& dim_out, Emit&& emit) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();
  if (size == 0) {
    throw FormatError(FormatErrorKind::kMalformedHeader,
                      name + ": empty file, no record header");
  }
  std::size_t off = 0;
  std::size_t records = 0;
  std::int32_t dim = 0;
  while (off < size) {
    if (size - off < 4) {
      throw FormatError(FormatErrorKind::kTruncated,
                        name + ": truncated record header at byte " +
                            std::to_string(off));
    }
    const auto d = static_cast<std::int32_t>(load_le32(p + off));
    if (d <= 0 || d > kMaxDim) {
      throw FormatError(FormatErrorKind::kMalformedHeader,
                        name + ": invalid dimension " + std::to_string(d) +
                            " in record " + std::to_string(records));
    }
    if (records == 0) {
      dim = d;
    } else if (d != dim) {
      throw FormatError(FormatErrorKind::kInconsistentDimension,
                        name + ": record " + std::to_string(records) +
                            " has dimension " + std::to_string(d) +
                            ", expected " + std::to_string(dim));
    }
    off += 4;
    const std::size_t payload = static_cast<std::size_t>(d) * 4;
    if (size - off < payload) {
      throw FormatError(FormatErrorKind::kTruncated,
                        name + ": record " + std::to_string(records) +
                            " truncated: needs " + std::to_string(payload) +
                            " bytes, " + std::to_string(size - off) +
                            " left");
    }
    emit(records, p + off);
    off += payload;
    ++records;
  }
  dim_out = static_cast<std::size_t>(dim);
  return records;
}

}  // namespace

VectorDataset read_fvecs(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  std::vector<float> data;
  std::size_t d = 0;
  const std::size_t n =
      parse_vecs(bytes, path.string(), d,
                 [&](std::size_t, const unsigned char* rec) {
                   const auto dim = load_le32(rec - 4);
                   for (std::uint32_t j = 0; j < dim; ++j) {
                     data.push_back(std::bit_cast<float>(load_le32(rec + 4 * j)));
                   }
                 });
  return VectorDataset(n, d, std::move(data), path.string());
}

void write_fvecs(const VectorDataset& ds, const std::filesystem::path& path) {
  std::string out;
  out.reserve(ds.n() * (4 + 4 * ds.d()));
  for (std::size_t i = 0; i < ds.n(); ++i) {
    store_le32(out, static_cast<std::uint32_t>(ds.d()));
    for (float v : ds.row(i)) store_le32(out, std::bit_cast<std::uint32_t>(v));
  }
  spit(path, out);
}

std::vector<std::vector<std::int32_t>> read_ivecs(
    const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  std::vector<std::vector<std::int32_t>> rows;
  std::size_t d = 0;
  parse_vecs(bytes, path.string(), d,
             [&](std::size_t, const unsigned char* rec) {
               const auto dim = load_le32(rec - 4);
               auto& row = rows.emplace_back(dim);
               for (std::uint32_t j = 0; j < dim; ++j) {
                 row[j] = static_cast<std::int32_t>(load_le32(rec + 4 * j));
               }
             });
  return rows;
}

void write_ivecs(const std::vector<std::vector<std::int32_t>>& rows,
                 const std::filesystem::path& path) {
  if (rows.empty()) throw PreconditionError("write_ivecs: no records");
  std::string out;
  for (const auto& row : rows) {
    if (row.empty() || row.size() != rows.front().size()) {
      throw PreconditionError(
          "write_ivecs: records must be non-empty and of equal length");
    }
    store_le32(out, static_cast<std::uint32_t>(row.size()));
    for (std::int32_t v : row) store_le32(out, static_cast<std::uint32_t>(v));
  }
  spit(path, out);
}

}  // namespace sng
