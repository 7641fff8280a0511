#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace dgr {

/// Row-major 2-D raster. Element (y, x) is row y, column x.
template <typename T>
using Image = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using GrayImage = Image<std::uint8_t>;
using BitMask = Image<bool>;

inline constexpr int kMinFrameSide = 16;

/// One grayscale frame of the camera (or synthetic) stream.
struct Frame {
  GrayImage pixels;
  std::int64_t index = 0;

  int width() const { return static_cast<int>(pixels.cols()); }
  int height() const { return static_cast<int>(pixels.rows()); }
};

/// All-zero frame; throws InvalidArgument when a side is below kMinFrameSide.
Frame make_frame(int width, int height, std::int64_t index = 0);

struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Raster-scan order: by row, then column.
inline bool raster_less(const Pixel& a, const Pixel& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

/// Inclusive pixel rectangle.
struct BoundingBox {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  int width() const { return x_max - x_min + 1; }
  int height() const { return y_max - y_min + 1; }
  bool contains(double x, double y) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max;
  }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Blob {
  std::size_t area = 0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  BoundingBox bbox;
  std::vector<Pixel> pixels;  // raster order
};

enum class Connectivity { Four = 4, Eight = 8 };

struct ImagingConfig {
  std::uint8_t threshold = 200;
  Connectivity connectivity = Connectivity::Eight;
  std::size_t min_area = 5;
};

/// Bit set iff intensity >= t.
template <typename Derived>
BitMask threshold(const Eigen::ArrayBase<Derived>& pixels, std::uint8_t t) {
  return (pixels.derived() >= t);
}

inline BitMask threshold(const Frame& frame, std::uint8_t t) {
  return threshold(frame.pixels, t);
}

/// Canonical blob ordering: descending area, then (y_min, x_min) of the
/// bounding box, then first pixel in raster order.
bool blob_precedes(const Blob& a, const Blob& b);

/// Connected components of `mask` with at least `min_area` pixels, in
/// canonical order. Two-pass labeling over a union-find forest.
std::vector<Blob> find_blobs(const BitMask& mask, Connectivity connectivity,
                             std::size_t min_area = 1);

/// Largest blob; ties go to the smallest (y_min, x_min).
std::optional<Blob> primary_blob(std::span<const Blob> blobs);

/// threshold -> find_blobs -> primary_blob.
std::optional<Blob> detect_wand(const Frame& frame, const ImagingConfig& config);

}  // namespace dgr
