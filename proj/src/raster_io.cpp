#include "topocp/raster_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

namespace topocp {
namespace {

constexpr double kClampTolerance = 1e-6;
constexpr char kF32RMagic[4] = {'F', '3', '2', 'R'};

std::uint32_t load_u32_le(const std::byte* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32_le(std::vector<std::byte>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::byte>((v >> shift) & 0xFFu));
  }
}

std::vector<std::byte> encode_f32r(std::size_t height, std::size_t width,
                                   std::span<const double> values) {
  std::vector<std::byte> out;
  out.reserve(12 + 4 * values.size());
  for (char c : kF32RMagic) out.push_back(static_cast<std::byte>(c));
  store_u32_le(out, static_cast<std::uint32_t>(height));
  store_u32_le(out, static_cast<std::uint32_t>(width));
  for (double v : values) store_u32_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  return out;
}

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::size_t next_number() {
    skip_whitespace_and_comments();
    std::size_t value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(peek())) {
      value = value * 10 + static_cast<std::size_t>(peek() - '0');
      if (value > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::MalformedHeader, "PGM dimension too large");
      }
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw Error(ErrorCode::MalformedHeader, "PGM header field missing");
    return value;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  void single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(peek())) {
      throw Error(ErrorCode::MalformedHeader, "PGM header not terminated by whitespace");
    }
    ++pos_;
  }

  std::size_t position() const { return pos_; }

 private:
  int peek() const { return static_cast<unsigned char>(bytes_[pos_]); }

  void skip_whitespace_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(peek())) {
        ++pos_;
      } else if (peek() == '#') {
        while (pos_ < bytes_.size() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 2;
};

LikelihoodMap read_pgm(std::span<const std::byte> bytes) {
  if (bytes.size() < 2 || bytes[0] != std::byte{'P'} || bytes[1] != std::byte{'5'}) {
    throw Error(ErrorCode::MalformedHeader, "missing P5 magic");
  }
  PgmHeaderReader header(bytes);
  const std::size_t width = header.next_number();
  const std::size_t height = header.next_number();
  const std::size_t maxval = header.next_number();
  header.single_whitespace();
  if (width == 0 || height == 0) {
    throw Error(ErrorCode::MalformedHeader, "PGM dimensions must be positive");
  }
  if (maxval != 255) {
    throw Error(ErrorCode::MalformedHeader,
                "PGM maxval " + std::to_string(maxval) + " unsupported (need 255)");
  }
  const std::size_t count = width * height;
  const std::size_t available = bytes.size() - header.position();
  if (available < count) {
    throw Error(ErrorCode::TruncatedPayload,
                "PGM payload has " + std::to_string(available) + " of " +
                    std::to_string(count) + " samples");
  }
  std::vector<double> values(count);
  const std::byte* payload = bytes.data() + header.position();
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = static_cast<double>(std::to_integer<unsigned>(payload[i])) / 255.0;
  }
  return LikelihoodMap(height, width, std::move(values));
}

struct F32RHeader {
  std::size_t height;
  std::size_t width;
};

F32RHeader parse_f32r_header(std::span<const std::byte> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kF32RMagic, 4) != 0) {
    throw Error(ErrorCode::MalformedHeader, "missing F32R magic or header");
  }
  const std::size_t height = load_u32_le(bytes.data() + 4);
  const std::size_t width = load_u32_le(bytes.data() + 8);
  if (height == 0 || width == 0) {
    throw Error(ErrorCode::MalformedHeader, "F32R dimensions must be positive");
  }
  const std::size_t count = height * width;
  const std::size_t available = (bytes.size() - 12) / 4;
  if (available < count) {
    throw Error(ErrorCode::TruncatedPayload,
                "F32R payload has " + std::to_string(available) + " of " +
                    std::to_string(count) + " samples");
  }
  if (bytes.size() != 12 + 4 * count) {
    throw Error(ErrorCode::MalformedHeader, "F32R payload longer than declared");
  }
  return {height, width};
}

LikelihoodMap read_f32r(std::span<const std::byte> bytes) {
  const auto [height, width] = parse_f32r_header(bytes);
  const std::size_t count = height * width;
  std::vector<double> values(count);
  const std::byte* payload = bytes.data() + 12;
  for (std::size_t i = 0; i < count; ++i) {
    const float f = std::bit_cast<float>(load_u32_le(payload + 4 * i));
    double v = f;
    if (!std::isfinite(v) || v < -kClampTolerance || v > 1.0 + kClampTolerance) {
      throw Error(ErrorCode::OutOfRange,
                  "F32R value " + std::to_string(v) + " at index " +
                      std::to_string(i) + " outside [0,1]");
    }
    values[i] = std::clamp(v, 0.0, 1.0);
  }
  return LikelihoodMap(height, width, std::move(values));
}

}  // namespace

LikelihoodMap read_raster(std::span<const std::byte> bytes, RasterFormat format) {
  return format == RasterFormat::PGM8 ? read_pgm(bytes) : read_f32r(bytes);
}

std::vector<std::byte> write_raster(const LikelihoodMap& map, RasterFormat format) {
  std::vector<std::byte> out;
  if (format == RasterFormat::F32R) return encode_f32r(map.height(), map.width(), map.values());
  const std::string header = "P5\n" + std::to_string(map.width()) + " " +
                             std::to_string(map.height()) + "\n255\n";
  out.reserve(header.size() + map.size());
  for (char c : header) out.push_back(static_cast<std::byte>(c));
  for (double v : map.values()) {
    out.push_back(static_cast<std::byte>(static_cast<unsigned>(std::floor(v * 255.0 + 0.5))));
  }
  return out;
}

std::vector<std::byte> write_real_f32r(const RealRaster& raster) {
  return encode_f32r(raster.height(), raster.width(), raster.values());
}

RealRaster read_real_f32r(std::span<const std::byte> bytes) {
  const auto [height, width] = parse_f32r_header(bytes);
  std::vector<double> values(height * width);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<float>(load_u32_le(bytes.data() + 12 + 4 * i));
  }
  return RealRaster(height, width, std::move(values));
}

RasterFormat detect_format(const std::filesystem::path& path,
                           std::span<const std::byte> bytes) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".pgm") return RasterFormat::PGM8;
  if (ext == ".f32r") return RasterFormat::F32R;
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kF32RMagic, 4) == 0) {
    return RasterFormat::F32R;
  }
  if (bytes.size() >= 2 && bytes[0] == std::byte{'P'} && bytes[1] == std::byte{'5'}) {
    return RasterFormat::PGM8;
  }
  throw Error(ErrorCode::MalformedHeader, "unrecognized raster format: " + path.string());
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::byte> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename onto " + path.string() + ": " + ec.message());
}

LikelihoodMap load_raster(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return read_raster(bytes, detect_format(path, bytes));
}

void save_raster(const std::filesystem::path& path, const LikelihoodMap& map,
                 RasterFormat format) {
  write_file_atomic(path, write_raster(map, format));
}

}  // namespace topocp
