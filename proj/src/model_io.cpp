#include "dgr/model_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include <boost/crc.hpp>

#include "dgr/errors.hpp"

namespace dgr {

namespace {

void put_real(std::string& out, double v) {
  std::array<char, 32> buf;
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.push_back(' ');
  out.append(buf.data(), end);
}

template <typename Derived>
void put_row(std::string& out, const char* tag, const Eigen::DenseBase<Derived>& row) {
  out += tag;
  for (Eigen::Index j = 0; j < row.size(); ++j) put_real(out, row(j));
  out += '\n';
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    const std::size_t end = std::min(line.find(' ', pos), line.size());
    if (end > pos) words.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return words;
}

template <typename T>
T parse_number(std::string_view word) {
  T value{};
  const auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec != std::errc() || end != word.data() + word.size()) {
    throw FormatError("model: bad number '" + std::string(word) + "'");
  }
  return value;
}

// Sequential reader over the checksummed body.
class LineReader {
 public:
  explicit LineReader(std::string_view body) : body_(body) {}

  std::vector<std::string_view> expect(std::string_view tag, std::size_t min_words = 1) {
    if (pos_ >= body_.size()) throw FormatError("model: unexpected end before '" + std::string(tag) + "'");
    const std::size_t end = body_.find('\n', pos_);
    const std::string_view line = body_.substr(pos_, end - pos_);
    pos_ = end == std::string_view::npos ? body_.size() : end + 1;
    auto words = split_words(line);
    if (words.empty() || words.front() != tag || words.size() < min_words) {
      throw FormatError("model: expected '" + std::string(tag) + "' line");
    }
    words.erase(words.begin());
    return words;
  }

  bool done() const { return pos_ >= body_.size(); }

 private:
  std::string_view body_;
  std::size_t pos_ = 0;
};

Eigen::RowVectorXd parse_row(const std::vector<std::string_view>& words, std::size_t offset, Eigen::Index dim) {
  if (words.size() != offset + static_cast<std::size_t>(dim)) throw FormatError("model: row length mismatch");
  Eigen::RowVectorXd row(dim);
  for (Eigen::Index j = 0; j < dim; ++j) row(j) = parse_number<double>(words[offset + static_cast<std::size_t>(j)]);
  return row;
}

}  // namespace

std::uint32_t crc32_of(std::string_view bytes) {
  boost::crc_32_type crc;
  crc.process_bytes(bytes.data(), bytes.size());
  return crc.checksum();
}

std::string serialize_model(const Model& model) {
  std::string body;
  body += kModelMagic;
  body += '\n';
  body += "algorithm " + algorithm_tag(model) + "\n";
  body += "classes";
  for (int c : model_classes(model)) body += " " + std::to_string(c);
  body += "\ndim " + std::to_string(model_dim(model)) + "\nties lowest-label\n";

  if (const auto* svm = std::get_if<SvmModel>(&model)) {
    body += svm->classes.size() == 2 ? "orientation binary-positive-is-higher-class\n"
                                     : "orientation one-vs-rest\n";
    for (Eigen::Index k = 0; k < svm->weights.rows(); ++k) {
      body += "sep";
      put_real(body, svm->bias(k));
      for (Eigen::Index j = 0; j < svm->weights.cols(); ++j) put_real(body, svm->weights(k, j));
      body += '\n';
    }
  } else {
    const auto& nb = std::get<NbModel>(model);
    for (std::size_t k = 0; k < nb.classes.size(); ++k) {
      const auto r = static_cast<Eigen::Index>(k);
      body += "class " + std::to_string(nb.classes[k]);
      put_real(body, nb.log_prior(r));
      body += '\n';
      put_row(body, "mean", nb.mean.row(r));
      put_row(body, "var", nb.variance.row(r));
    }
  }
  return body + "crc32 " + std::to_string(crc32_of(body)) + "\n";
}

Model parse_model(std::string_view text) {
  const std::size_t first_nl = text.find('\n');
  if (text.substr(0, first_nl) != kModelMagic) throw VersionMismatchError("model: unrecognized magic/version line");

  // The trailer is the last line; everything before it is checksummed.
  std::string_view trimmed = text;
  if (trimmed.ends_with('\n')) trimmed.remove_suffix(1);
  const std::size_t last_nl = trimmed.rfind('\n');
  if (last_nl == std::string_view::npos) throw ChecksumError("model: missing checksum line");
  const std::string_view trailer = trimmed.substr(last_nl + 1);
  const std::string_view body = text.substr(0, last_nl + 1);
  if (!trailer.starts_with("crc32 ")) throw ChecksumError("model: missing checksum line");
  std::uint32_t stored = 0;
  try {
    stored = parse_number<std::uint32_t>(trailer.substr(6));
  } catch (const FormatError&) {
    throw ChecksumError("model: unreadable checksum");
  }
  if (stored != crc32_of(body)) throw ChecksumError("model: checksum mismatch");

  LineReader reader(body);
  reader.expect(kModelMagic);
  const auto algorithm = reader.expect("algorithm", 2);
  std::vector<int> classes;
  for (auto w : reader.expect("classes", 3)) classes.push_back(parse_number<int>(w));
  if (classes.size() < 2 || !std::is_sorted(classes.begin(), classes.end())) {
    throw FormatError("model: need at least two ascending classes");
  }
  const auto dim_words = reader.expect("dim", 2);
  const auto dim = parse_number<Eigen::Index>(dim_words.at(0));
  if (dim < 1) throw FormatError("model: bad dimension");
  reader.expect("ties", 2);

  Model result;
  if (algorithm.at(0) == "svm-linear") {
    reader.expect("orientation", 2);
    SvmModel svm;
    svm.classes = classes;
    const Eigen::Index rows = classes.size() == 2 ? 1 : static_cast<Eigen::Index>(classes.size());
    svm.weights.resize(rows, dim);
    svm.bias.resize(rows);
    for (Eigen::Index k = 0; k < rows; ++k) {
      const auto words = reader.expect("sep");
      const Eigen::RowVectorXd row = parse_row(words, 0, dim + 1);
      svm.bias(k) = row(0);
      svm.weights.row(k) = row.tail(dim);
    }
    result = std::move(svm);
  } else if (algorithm.at(0) == "gaussian-nb") {
    NbModel nb;
    nb.classes = classes;
    const auto k = static_cast<Eigen::Index>(classes.size());
    nb.log_prior.resize(k);
    nb.mean.resize(k, dim);
    nb.variance.resize(k, dim);
    for (Eigen::Index c = 0; c < k; ++c) {
      const auto header = reader.expect("class", 3);
      if (parse_number<int>(header[0]) != classes[static_cast<std::size_t>(c)]) {
        throw FormatError("model: class rows out of order");
      }
      nb.log_prior(c) = parse_number<double>(header[1]);
      nb.mean.row(c) = parse_row(reader.expect("mean"), 0, dim);
      nb.variance.row(c) = parse_row(reader.expect("var"), 0, dim);
    }
    result = std::move(nb);
  } else {
    throw FormatError("model: unknown algorithm '" + std::string(algorithm.at(0)) + "'");
  }
  if (!reader.done()) throw FormatError("model: trailing content");
  return result;
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << serialize_model(model);
  if (!out) throw IoError("write failed for " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_model(buffer.str());
}

}  // namespace dgr
