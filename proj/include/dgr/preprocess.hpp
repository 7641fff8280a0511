#pragma once

#include <Eigen/Core>

#include "dgr/imaging.hpp"
#include "dgr/trace.hpp"

namespace dgr {

inline constexpr int kFeatureSide = 28;
inline constexpr int kFeatureDim = kFeatureSide * kFeatureSide;
/// Longest side of the ink box inside the 28x28 canvas.
inline constexpr int kInkBoxSide = 20;

/// 784 values in [0, 1], row-major 28x28.
using FeatureVector = Eigen::Matrix<double, kFeatureDim, 1>;

/// 3x3 median filter with edge replication.
PatternImage denoise_median3(const PatternImage& image);

/// Tightest box around the nonzero pixels. Throws EmptyPatternError when
/// there are none.
BoundingBox bounding_box(const PatternImage& image);

/// Crop to the ink, scale the longest side to 20 pixels (area-weighted box
/// filter when shrinking, nearest neighbour when enlarging), center in a
/// 28x28 canvas and map intensities to [0, 1].
FeatureVector normalize_to_28(const PatternImage& image);

/// Full live-gesture chain: denoise_median3 then normalize_to_28.
inline FeatureVector pattern_features(const PatternImage& image) {
  return normalize_to_28(denoise_median3(image));
}

}  // namespace dgr
