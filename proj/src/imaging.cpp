#include "dgr/imaging.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "dgr/errors.hpp"

namespace dgr {

namespace {

// Disjoint-set forest over provisional labels. The root of a set is always
// its smallest label, so the final numbering does not depend on union order.
class LabelForest {
 public:
  int make() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }

  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  int unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace

Frame make_frame(int width, int height, std::int64_t index) {
  if (width < kMinFrameSide || height < kMinFrameSide) {
    throw InvalidArgument("frame must be at least " + std::to_string(kMinFrameSide) +
                          " pixels per side, got " + std::to_string(width) + "x" +
                          std::to_string(height));
  }
  Frame frame;
  frame.pixels = GrayImage::Zero(height, width);
  frame.index = index;
  return frame;
}

bool blob_precedes(const Blob& a, const Blob& b) {
  if (a.area != b.area) return a.area > b.area;
  const auto ka = std::tie(a.bbox.y_min, a.bbox.x_min);
  const auto kb = std::tie(b.bbox.y_min, b.bbox.x_min);
  if (ka != kb) return ka < kb;
  return raster_less(a.pixels.front(), b.pixels.front());
}

std::vector<Blob> find_blobs(const BitMask& mask, Connectivity connectivity,
                             std::size_t min_area) {
  const int h = static_cast<int>(mask.rows());
  const int w = static_cast<int>(mask.cols());
  const bool diagonal = connectivity == Connectivity::Eight;

  Image<int> labels = Image<int>::Constant(h, w, -1);
  LabelForest forest;

  // First pass: provisional labels from the already-visited neighbours
  // (west, north-west, north, north-east).
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask(y, x)) continue;
      int label = -1;
      auto visit = [&](int ny, int nx) {
        if (ny < 0 || nx < 0 || nx >= w) return;
        const int other = labels(ny, nx);
        if (other < 0) return;
        label = label < 0 ? forest.find(other) : forest.unite(label, other);
      };
      visit(y, x - 1);
      visit(y - 1, x);
      if (diagonal) {
        visit(y - 1, x - 1);
        visit(y - 1, x + 1);
      }
      labels(y, x) = label < 0 ? forest.make() : label;
    }
  }

  // Second pass: resolve roots and gather per-component pixels.
  std::vector<int> slot_of_root;
  std::vector<Blob> blobs;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (labels(y, x) < 0) continue;
      const int root = forest.find(labels(y, x));
      if (static_cast<std::size_t>(root) >= slot_of_root.size()) {
        slot_of_root.resize(root + 1, -1);
      }
      if (slot_of_root[root] < 0) {
        slot_of_root[root] = static_cast<int>(blobs.size());
        Blob blob;
        blob.bbox = {x, y, x, y};
        blobs.push_back(std::move(blob));
      }
      Blob& blob = blobs[slot_of_root[root]];
      blob.pixels.push_back({x, y});
      blob.bbox.x_min = std::min(blob.bbox.x_min, x);
      blob.bbox.x_max = std::max(blob.bbox.x_max, x);
      blob.bbox.y_max = y;
    }
  }

  std::vector<Blob> kept;
  kept.reserve(blobs.size());
  for (auto& blob : blobs) {
    blob.area = blob.pixels.size();
    if (blob.area < min_area) continue;
    Eigen::Vector2d sum = Eigen::Vector2d::Zero();
    for (const auto& p : blob.pixels) sum += Eigen::Vector2d(p.x, p.y);
    blob.centroid = sum / static_cast<double>(blob.area);
    kept.push_back(std::move(blob));
  }
  std::sort(kept.begin(), kept.end(), blob_precedes);
  return kept;
}

std::optional<Blob> primary_blob(std::span<const Blob> blobs) {
  if (blobs.empty()) return std::nullopt;
  const auto best = std::min_element(blobs.begin(), blobs.end(), blob_precedes);
  return *best;
}

std::optional<Blob> detect_wand(const Frame& frame, const ImagingConfig& config) {
  const auto blobs = find_blobs(threshold(frame, config.threshold),
                                config.connectivity, config.min_area);
  return primary_blob(blobs);
}

}  // namespace dgr
