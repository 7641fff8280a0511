#include "dgr/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "dgr/errors.hpp"

namespace dgr {

namespace {

// Weights of source pixels [0, n) covered by the output interval
// [k * ratio, (k + 1) * ratio).
struct Coverage {
  int first = 0;
  std::vector<double> weights;
};

std::vector<Coverage> coverage_table(int source, int target) {
  const double ratio = static_cast<double>(source) / target;
  std::vector<Coverage> table(target);
  for (int k = 0; k < target; ++k) {
    const double lo = k * ratio;
    const double hi = (k + 1) * ratio;
    auto& cov = table[k];
    cov.first = static_cast<int>(std::floor(lo));
    const int last = std::min(source - 1, static_cast<int>(std::ceil(hi)) - 1);
    for (int i = cov.first; i <= last; ++i) {
      const double w = std::min<double>(i + 1, hi) - std::max<double>(i, lo);
      cov.weights.push_back(std::max(w, 0.0));
    }
  }
  return table;
}

}  // namespace

PatternImage denoise_median3(const PatternImage& image) {
  const int h = static_cast<int>(image.rows());
  const int w = static_cast<int>(image.cols());
  PatternImage out(h, w);
  std::array<std::uint8_t, 9> window;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int n = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int yy = std::clamp(y + dy, 0, h - 1);
        for (int dx = -1; dx <= 1; ++dx) window[n++] = image(yy, std::clamp(x + dx, 0, w - 1));
      }
      std::nth_element(window.begin(), window.begin() + 4, window.end());
      out(y, x) = window[4];
    }
  }
  return out;
}

BoundingBox bounding_box(const PatternImage& image) {
  const auto rows = (image != 0).rowwise().any();
  const auto cols = (image != 0).colwise().any();
  if (!rows.any()) throw EmptyPatternError("pattern image has no ink");
  BoundingBox box;
  box.y_min = 0;
  while (!rows(box.y_min)) ++box.y_min;
  box.y_max = static_cast<int>(image.rows()) - 1;
  while (!rows(box.y_max)) --box.y_max;
  box.x_min = 0;
  while (!cols(box.x_min)) ++box.x_min;
  box.x_max = static_cast<int>(image.cols()) - 1;
  while (!cols(box.x_max)) --box.x_max;
  return box;
}

FeatureVector normalize_to_28(const PatternImage& image) {
  const BoundingBox box = bounding_box(image);
  const int src_w = box.width();
  const int src_h = box.height();
  const auto crop = image.block(box.y_min, box.x_min, src_h, src_w);

  const int longest = std::max(src_w, src_h);
  const double scale = static_cast<double>(kInkBoxSide) / longest;
  const int dst_w = std::clamp(static_cast<int>(std::lround(src_w * scale)), 1, kInkBoxSide);
  const int dst_h = std::clamp(static_cast<int>(std::lround(src_h * scale)), 1, kInkBoxSide);

  Image<double> scaled(dst_h, dst_w);
  if (longest > kInkBoxSide) {
    const auto cols = coverage_table(src_w, dst_w);
    const auto rows = coverage_table(src_h, dst_h);
    const double cell_area = (static_cast<double>(src_w) / dst_w) * (static_cast<double>(src_h) / dst_h);
    for (int r = 0; r < dst_h; ++r) {
      for (int c = 0; c < dst_w; ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rows[r].weights.size(); ++i) {
          for (std::size_t j = 0; j < cols[c].weights.size(); ++j) {
            acc += rows[r].weights[i] * cols[c].weights[j] *
                   crop(rows[r].first + static_cast<int>(i), cols[c].first + static_cast<int>(j));
          }
        }
        scaled(r, c) = acc / cell_area / 255.0;
      }
    }
  } else {
    for (int r = 0; r < dst_h; ++r) {
      const int sy = std::min(src_h - 1, static_cast<int>((r + 0.5) * src_h / dst_h));
      for (int c = 0; c < dst_w; ++c) {
        const int sx = std::min(src_w - 1, static_cast<int>((c + 0.5) * src_w / dst_w));
        scaled(r, c) = crop(sy, sx) / 255.0;
      }
    }
  }

  Image<double> canvas = Image<double>::Zero(kFeatureSide, kFeatureSide);
  canvas.block((kFeatureSide - dst_h) / 2, (kFeatureSide - dst_w) / 2, dst_h, dst_w) =
      scaled.min(1.0).max(0.0);
  return Eigen::Map<const FeatureVector>(canvas.data());
}

}  // namespace dgr
