#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dgr {

inline constexpr int kNumLetters = 26;

/// One sample per row.
using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Labelled samples. Rows of `features` are samples; `labels[i]` is in 0..25
/// (0 = 'A'). Loaded CSV data always has 784 columns; hand-built datasets
/// may use any dimension.
struct Dataset {
  FeatureMatrix features;
  std::vector<int> labels;
  std::string source;

  std::size_t size() const { return labels.size(); }
  Eigen::Index dim() const { return features.cols(); }
};

char letter_of(int label);
/// 'A'..'Z' (either case) -> 0..25; throws InvalidArgument otherwise.
int label_of(char letter);
/// "A,C" or "0,2" -> {0, 2}.
std::set<int> parse_label_set(std::string_view text);

struct LoadOptions {
  /// Rows whose label is not in `keep` are skipped while streaming.
  std::optional<std::set<int>> keep;
  /// Stop after this many accepted rows.
  std::optional<std::size_t> max_rows;
};

/// Parses the 785-column alphabet CSV (label, then 784 pixels 0..255).
/// A first row whose first cell is not an integer is treated as a header.
/// Throws FormatError naming the 1-based line on any malformed row.
Dataset load_dataset(std::istream& in, const LoadOptions& options = {},
                     std::string source = "<stream>");
Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options = {});

/// Inverse of load_dataset: pixels written as round(255 * value).
void save_dataset(std::ostream& out, const Dataset& ds);
void save_dataset(const std::filesystem::path& path, const Dataset& ds);

/// Order-preserving subset. Throws EmptyResultError when nothing matches.
Dataset filter_labels(const Dataset& ds, const std::set<int>& keep);

/// Seeded shuffle, then the first floor(fraction * N) samples train.
/// Throws DegenerateSplitError if either side would be empty.
std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed);

/// At most `n` rows chosen by a seeded shuffle, kept in their original order.
Dataset subsample(const Dataset& ds, std::size_t n, std::uint64_t seed);

/// Rows `indices` of `ds`, in that order.
Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& indices);

}  // namespace dgr
