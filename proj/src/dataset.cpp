#include "dgr/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "dgr/errors.hpp"
#include "dgr/preprocess.hpp"

namespace dgr {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_int(std::string_view cell, int& value) {
  cell = trim(cell);
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  return ec == std::errc() && end == cell.data() + cell.size() && !cell.empty();
}

[[noreturn]] void row_error(std::size_t line, const std::string& what) {
  throw FormatError("row " + std::to_string(line) + ": " + what);
}

}  // namespace

char letter_of(int label) {
  if (label < 0 || label >= kNumLetters) throw InvalidArgument("label out of range");
  return static_cast<char>('A' + label);
}

int label_of(char letter) {
  if (letter >= 'a' && letter <= 'z') letter = static_cast<char>(letter - 'a' + 'A');
  if (letter < 'A' || letter > 'Z') throw InvalidArgument(std::string("not a letter: ") + letter);
  return letter - 'A';
}

std::set<int> parse_label_set(std::string_view text) {
  std::set<int> labels;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    if (!item.empty()) {
      int value = 0;
      if (parse_int(item, value)) {
        if (value < 0 || value >= kNumLetters) throw InvalidArgument("label out of range: " + std::string(item));
        labels.insert(value);
      } else if (item.size() == 1) {
        labels.insert(label_of(item.front()));
      } else {
        throw InvalidArgument("bad label: " + std::string(item));
      }
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (labels.empty()) throw InvalidArgument("empty label set");
  return labels;
}

Dataset load_dataset(std::istream& in, const LoadOptions& options, std::string source) {
  std::vector<double> values;
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  std::array<int, kFeatureDim> pixels{};

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;

    std::size_t column = 0;
    int label = 0;
    std::size_t pos = 0;
    bool header = false;
    while (true) {
      const auto comma = row.find(',', pos);
      const std::string_view cell = row.substr(pos, comma == std::string_view::npos ? row.npos : comma - pos);
      int value = 0;
      if (!parse_int(cell, value)) {
        if (column == 0 && line_no == 1) {
          header = true;
          break;
        }
        row_error(line_no, "non-integer cell in column " + std::to_string(column + 1));
      }
      if (column == 0) {
        if (value < 0 || value >= kNumLetters) row_error(line_no, "label outside 0-25");
        label = value;
      } else if (column <= static_cast<std::size_t>(kFeatureDim)) {
        if (value < 0 || value > 255) row_error(line_no, "pixel outside 0-255");
        pixels[column - 1] = value;
      }
      ++column;
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (header) continue;
    if (column != static_cast<std::size_t>(kFeatureDim) + 1) {
      row_error(line_no, "expected 785 columns, got " + std::to_string(column));
    }
    if (options.keep && !options.keep->contains(label)) continue;
    labels.push_back(label);
    for (int p : pixels) values.push_back(p / 255.0);
    if (options.max_rows && labels.size() >= *options.max_rows) break;
  }

  Dataset ds;
  ds.source = std::move(source);
  ds.labels = std::move(labels);
  ds.features = Eigen::Map<const FeatureMatrix>(values.data(), static_cast<Eigen::Index>(ds.labels.size()),
                                                kFeatureDim);
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("file not found or unreadable: " + path.string());
  return load_dataset(in, options, path.string());
}

void save_dataset(std::ostream& out, const Dataset& ds) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.labels[i];
    for (Eigen::Index j = 0; j < ds.dim(); ++j) {
      out << ',' << static_cast<int>(std::lround(ds.features(static_cast<Eigen::Index>(i), j) * 255.0));
    }
    out << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  save_dataset(out, ds);
}

Dataset take_rows(const Dataset& ds, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.source = ds.source;
  out.features.resize(static_cast<Eigen::Index>(indices.size()), ds.dim());
  out.labels.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    out.features.row(static_cast<Eigen::Index>(k)) = ds.features.row(static_cast<Eigen::Index>(indices[k]));
    out.labels.push_back(ds.labels[indices[k]]);
  }
  return out;
}

Dataset filter_labels(const Dataset& ds, const std::set<int>& keep) {
  if (keep.empty()) throw InvalidArgument("filter_labels: empty label set");
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (keep.contains(ds.labels[i])) rows.push_back(i);
  }
  if (rows.empty()) throw EmptyResultError("no samples carry the requested labels");
  return take_rows(ds, rows);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InvalidArgument("train fraction must lie in (0, 1)");
  }
  const std::size_t n = ds.size();
  const auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
  if (n < 2 || n_train == 0 || n_train == n) {
    throw DegenerateSplitError("split of " + std::to_string(n) + " samples leaves one side empty");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return {take_rows(ds, {order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train)}),
          take_rows(ds, {order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end()})};
}

Dataset subsample(const Dataset& ds, std::size_t n, std::uint64_t seed) {
  if (n >= ds.size()) return ds;
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(n);
  std::sort(order.begin(), order.end());
  return take_rows(ds, order);
}

}  // namespace dgr
