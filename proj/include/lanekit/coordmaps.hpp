#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace lanekit {

/// Normalized positional grids in [-1, 1], stored row-major with explicit
/// dimensions. x_map varies along columns only, y_map along rows only.
struct CoordMaps {
  int width = 0;
  int height = 0;
  std::vector<double> x_map;
  std::vector<double> y_map;

  double x(int row, int col) const { return x_map[static_cast<std::size_t>(row) * width + col]; }
  double y(int row, int col) const { return y_map[static_cast<std::size_t>(row) * width + col]; }

  friend bool operator==(const CoordMaps&, const CoordMaps&) = default;
};

/// Builds the W x H coordinate grids: with 0-based indices,
/// x(i,j) = 2j/(W-1) - 1 and y(i,j) = 2i/(H-1) - 1. Corners land on +-1
/// exactly; horizontal spacing is 2/(W-1) and vertical 2/(H-1).
inline CoordMaps make_coord_maps(int width, int height) {
  if (width < 2 || height < 2)
    throw std::invalid_argument("make_coord_maps: width and height must be >= 2");
  CoordMaps m;
  m.width = width;
  m.height = height;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  m.x_map.resize(n);
  m.y_map.resize(n);
  for (int i = 0; i < height; ++i) {
    const double yv = 2.0 * i / (height - 1) - 1.0;
    for (int j = 0; j < width; ++j) {
      const std::size_t at = static_cast<std::size_t>(i) * width + j;
      m.x_map[at] = 2.0 * j / (width - 1) - 1.0;
      m.y_map[at] = yv;
    }
  }
  return m;
}

namespace detail {

inline void put_u32le(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

inline std::uint32_t get_u32le(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("coord map stream: truncated header");
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace detail

/// Dump format: magic "CMAP", W and H as 32-bit little-endian unsigned
/// integers, then H*W x-values followed by H*W y-values as 32-bit
/// little-endian IEEE floats, row-major. The payload narrows to float32.
inline void write_coord_maps(const CoordMaps& m, std::ostream& os) {
  os.write("CMAP", 4);
  detail::put_u32le(os, static_cast<std::uint32_t>(m.width));
  detail::put_u32le(os, static_cast<std::uint32_t>(m.height));
  for (const auto* grid : {&m.x_map, &m.y_map})
    for (double v : *grid)
      detail::put_u32le(os, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  if (!os) throw std::runtime_error("coord map stream: write failed");
}

/// Reads a dump back; values carry float32 precision.
inline CoordMaps load_coord_maps(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string_view(magic, 4) != "CMAP")
    throw std::runtime_error("coord map stream: bad magic");
  CoordMaps m;
  m.width = static_cast<int>(detail::get_u32le(is));
  m.height = static_cast<int>(detail::get_u32le(is));
  if (m.width < 2 || m.height < 2) throw std::runtime_error("coord map stream: bad dimensions");
  const std::size_t n = static_cast<std::size_t>(m.width) * m.height;
  m.x_map.resize(n);
  m.y_map.resize(n);
  for (auto* grid : {&m.x_map, &m.y_map})
    for (double& v : *grid) {
      const std::uint32_t bits = detail::get_u32le(is);
      v = static_cast<double>(std::bit_cast<float>(bits));
    }
  return m;
}

}  // namespace lanekit
