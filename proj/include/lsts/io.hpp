#ifndef LSTS_IO_HPP
#define LSTS_IO_HPP

#include "lsts/errors.hpp"
#include "lsts/lattice.hpp"
#include "lsts/types.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace lsts {

/// Shortest-independent fixed format: 17 significant digits.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

/// Writes data to a sibling temporary file and renames it over path.
inline void write_atomic(const std::filesystem::path& path, std::string_view data) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot open " + tmp.string() + " for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw IOError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IOError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

/// Accumulates an RFC 4180 style table in memory.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += quote(cells[i]);
    }
    text_ += "\r\n";
  }

  void row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_double(v));
    row(s);
  }

  const std::string& str() const { return text_; }
  void save(const std::filesystem::path& path) const { write_atomic(path, text_); }

 private:
  static std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
    std::string q = "\"";
    for (char c : cell) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }

  std::string text_;
};

// ---------------------------------------------------------------- images

struct Rgb {
  std::uint8_t r, g, b;
};

/// Colour scale on [0, 1]: "viridis", "gray" or "coolwarm".
inline Rgb colormap(const std::string& name, double t) {
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  auto lerp = [t](const auto& stops) {
    const double x = t * double(stops.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(x), stops.size() - 2);
    const double f = x - double(i);
    std::array<double, 3> c;
    for (int k = 0; k < 3; ++k) c[k] = (1.0 - f) * stops[i][k] + f * stops[i + 1][k];
    return Rgb{static_cast<std::uint8_t>(std::lround(c[0])),
               static_cast<std::uint8_t>(std::lround(c[1])),
               static_cast<std::uint8_t>(std::lround(c[2]))};
  };
  if (name == "gray") {
    const auto v = static_cast<std::uint8_t>(std::lround(255.0 * t));
    return {v, v, v};
  }
  if (name == "coolwarm") {
    static constexpr std::array<std::array<double, 3>, 3> stops{
        {{59, 76, 192}, {221, 221, 221}, {180, 4, 38}}};
    return lerp(stops);
  }
  if (name == "viridis") {
    static constexpr std::array<std::array<double, 3>, 6> stops{{{68, 1, 84},
                                                                  {65, 68, 135},
                                                                  {42, 120, 142},
                                                                  {34, 168, 132},
                                                                  {122, 209, 81},
                                                                  {253, 231, 37}}};
    return lerp(stops);
  }
  throw InvalidSpec("unknown colormap '" + name + "' (expected viridis, gray or coolwarm)");
}

inline void write_ppm(const std::filesystem::path& path, int width, int height,
                      const std::vector<Rgb>& pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw LengthMismatch(static_cast<std::size_t>(width) * height, pixels.size());
  std::string data = "P6\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  data.reserve(data.size() + 3 * pixels.size());
  for (const auto& p : pixels) {
    data += static_cast<char>(p.r);
    data += static_cast<char>(p.g);
    data += static_cast<char>(p.b);
  }
  write_atomic(path, data);
}

inline void write_pgm(const std::filesystem::path& path, int width, int height,
                      const std::vector<std::uint8_t>& pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
    throw LengthMismatch(static_cast<std::size_t>(width) * height, pixels.size());
  std::string data = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  data.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
  write_atomic(path, data);
}

/// Raster size with width * height = m, as square as the divisors allow.
inline std::pair<int, int> balanced_raster(std::size_t m) {
  std::size_t w = static_cast<std::size_t>(std::sqrt(double(m)));
  while (w > 1 && m % w != 0) --w;
  if (w == 0) w = 1;
  return {static_cast<int>(m / w), static_cast<int>(w)};
}

/**
 * Nearest pattern point (periodic distance on the unit cell) for raster
 * sample positions, using a uniform bucket grid.
 */
class NearestPatternPoint {
 public:
  explicit NearestPatternPoint(const Lattice<2>& lattice) {
    const std::size_t m = lattice.size();
    nb_ = std::max(1, static_cast<int>(std::sqrt(double(m)) / 2));
    buckets_.resize(static_cast<std::size_t>(nb_) * nb_);
    points_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      const RealVector<2> y = lattice.pattern().point(i);
      points_.push_back(y);
      buckets_[bucket(cell(y(0)), cell(y(1)))].push_back(i);
    }
  }

  std::size_t operator()(const RealVector<2>& x) const {
    const int cx = cell(x(0)), cy = cell(x(1));
    const double width = 1.0 / nb_;
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    auto visit = [&](std::size_t i) {
      const double d = periodic_distance2(x, points_[i]);
      if (d < best || (d == best && i < arg)) {
        best = d;
        arg = i;
      }
    };
    for (int ring = 0;; ++ring) {
      if (2 * ring + 1 > nb_) {
        // rings wrap around the torus; fall back to the full scan
        for (std::size_t i = 0; i < points_.size(); ++i) visit(i);
        break;
      }
      for (int dx = -ring; dx <= ring; ++dx)
        for (int dy = -ring; dy <= ring; ++dy)
          if (std::max(std::abs(dx), std::abs(dy)) == ring)
            for (std::size_t i : buckets_[bucket(cx + dx, cy + dy)]) visit(i);
      // unvisited points lie at least ring * width away
      if (best < (ring * width) * (ring * width)) break;
    }
    return arg;
  }

  static double periodic_distance2(const RealVector<2>& a, const RealVector<2>& b) {
    double s = 0.0;
    for (int k = 0; k < 2; ++k) {
      double d = a(k) - b(k);
      d -= std::round(d);
      s += d * d;
    }
    return s;
  }

 private:
  int cell(double v) const {
    const int c = static_cast<int>(std::floor((v + 0.5) * nb_));
    return c;
  }
  std::size_t bucket(int cx, int cy) const {
    cx = ((cx % nb_) + nb_) % nb_;
    cy = ((cy % nb_) + nb_) % nb_;
    return static_cast<std::size_t>(cx) * nb_ + static_cast<std::size_t>(cy);
  }

  int nb_;
  std::vector<std::vector<std::size_t>> buckets_;
  std::vector<RealVector<2>> points_;
};

/// Raster cell (col, row) samples x = (-1/2 + col/W, -1/2 + row/H).
inline RealVector<2> raster_position(int col, int row, int width, int height) {
  return {-0.5 + double(col) / width, -0.5 + double(row) / height};
}

struct HeatmapRange {
  double min;
  double max;
};

/// PPM of a scalar field on a 2-D pattern plus a sidecar "<path>.range.txt"
/// holding the colour scale limits.
inline HeatmapRange emit_heatmap(const Lattice<2>& lattice, const std::vector<double>& values,
                                 const std::string& cmap, const std::filesystem::path& path,
                                 int width = 0, int height = 0) {
  if (values.size() != lattice.size()) throw LengthMismatch(lattice.size(), values.size());
  if (width <= 0 || height <= 0) std::tie(width, height) = balanced_raster(lattice.size());
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const HeatmapRange range{*lo, *hi};
  const double span = range.max - range.min;
  const NearestPatternPoint nearest(lattice);
  std::vector<Rgb> pixels;
  pixels.reserve(static_cast<std::size_t>(width) * height);
  for (int row = 0; row < height; ++row)
    for (int col = 0; col < width; ++col) {
      const double v = values[nearest(raster_position(col, row, width, height))];
      pixels.push_back(colormap(cmap, span > 0.0 ? (v - range.min) / span : 0.0));
    }
  write_ppm(path, width, height, pixels);
  write_atomic(std::filesystem::path(path.string() + ".range.txt"),
               "min " + format_double(range.min) + "\nmax " + format_double(range.max) + "\n");
  return range;
}

}  // namespace lsts

#endif  // LSTS_IO_HPP
