#include "dgr/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "dgr/errors.hpp"

namespace dgr {

namespace {

using Points = std::vector<Eigen::Vector2d>;

// Templates live in the unit square, y pointing down. The first and last
// points land on the zone centers.

Points template_a() {
  // Left leg up, right leg down to the crossbar, crossbar and back, finish
  // the right leg.
  return {{0.0, 1.0}, {0.5, 0.0}, {0.75, 0.5}, {0.25, 0.5}, {0.75, 0.5}, {1.0, 1.0}};
}

Points template_c() {
  // 12-point arc open to the right, from the upper tip (60 deg) round to the
  // lower tip (300 deg). The stroke enters at the middle of the back, runs
  // up to the upper tip, retraces the whole arc and exits to the right.
  Points arc;
  for (int i = 0; i < 12; ++i) {
    const double deg = 60.0 + i * (240.0 / 11.0);
    const double rad = deg * std::numbers::pi / 180.0;
    arc.emplace_back(0.5 + 0.5 * std::cos(rad), 0.5 - 0.5 * std::sin(rad));
  }
  Points path{{0.0, 0.5}};
  for (int i = 11; i >= 0; --i) {
    const double deg = 60.0 + i * (240.0 / 11.0);
    if (deg < 180.0) path.push_back(arc[static_cast<std::size_t>(i)]);
  }
  path.insert(path.end(), arc.begin() + 1, arc.end());
  path.emplace_back(1.0, 0.5);
  return path;
}

}  // namespace

bool has_letter_template(char letter) { return letter == 'A' || letter == 'C'; }

GestureScript letter_path(char letter, const TraceConfig& config, int width, int height) {
  Points unit;
  switch (letter) {
    case 'A':
      unit = template_a();
      break;
    case 'C':
      unit = template_c();
      break;
    default:
      throw UnsupportedLetterError(std::string("no gesture template for letter '") + letter + "'");
  }
  config.validate(width, height);

  GestureScript script;
  const Eigen::Vector2d start = config.start_zone.center;
  const Eigen::Vector2d end = config.end_zone.center;
  const double v0 = unit.front().y();
  double v_min = 0.0, v_max = 0.0;
  for (const auto& p : unit) {
    v_min = std::min(v_min, p.y() - v0);
    v_max = std::max(v_max, p.y() - v0);
  }
  const double margin = script.blob_radius + 2.0;
  double letter_height = std::abs(end.x() - start.x());
  if (v_min < 0) letter_height = std::min(letter_height, (start.y() - margin) / -v_min);
  if (v_max > 0) letter_height = std::min(letter_height, (height - 1 - margin - start.y()) / v_max);
  letter_height = std::max(letter_height, 0.0);

  for (const auto& p : unit) {
    const double x = start.x() + p.x() * (end.x() - start.x());
    const double y = start.y() + (p.y() - v0) * letter_height + p.x() * (end.y() - start.y());
    script.waypoints.emplace_back(x, y);
  }
  // Exact zone centers despite rounding in the map.
  script.waypoints.front() = start;
  script.waypoints.back() = end;
  return script;
}

std::vector<Eigen::Vector2d> sample_path(const GestureScript& script) {
  if (script.waypoints.size() < 2) throw InvalidArgument("gesture script needs at least two waypoints");
  if (script.samples_per_segment < 1) throw InvalidArgument("samples_per_segment must be >= 1");
  std::vector<Eigen::Vector2d> points;
  for (std::size_t i = 0; i + 1 < script.waypoints.size(); ++i) {
    const Eigen::Vector2d a = script.waypoints[i];
    const Eigen::Vector2d b = script.waypoints[i + 1];
    for (int k = 0; k < script.samples_per_segment; ++k) {
      points.push_back(a + (b - a) * (static_cast<double>(k) / script.samples_per_segment));
    }
  }
  points.push_back(script.waypoints.back());
  return points;
}

void draw_disc(GrayImage& image, const Eigen::Vector2d& center, double radius, std::uint8_t intensity) {
  const int h = static_cast<int>(image.rows());
  const int w = static_cast<int>(image.cols());
  const int y0 = std::max(0, static_cast<int>(std::floor(center.y() - radius)));
  const int y1 = std::min(h - 1, static_cast<int>(std::ceil(center.y() + radius)));
  const int x0 = std::max(0, static_cast<int>(std::floor(center.x() - radius)));
  const int x1 = std::min(w - 1, static_cast<int>(std::ceil(center.x() + radius)));
  const double r2 = radius * radius;
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - center.x();
      const double dy = y - center.y();
      if (dx * dx + dy * dy <= r2) image(y, x) = intensity;
    }
  }
}

std::vector<Frame> render_sequence(const GestureScript& script, int width, int height) {
  const auto centers = sample_path(script);
  std::mt19937_64 rng(script.seed);
  std::normal_distribution<double> jitter(0.0, 1.0);
  std::uniform_int_distribution<int> noise(0, script.background_noise_max);

  std::vector<Frame> frames;
  frames.reserve(centers.size());
  std::int64_t index = 1;
  for (const auto& c : centers) {
    Frame frame = make_frame(width, height, index++);
    Eigen::Vector2d center = c;
    if (script.jitter_sigma > 0.0) {
      const double jx = jitter(rng);
      const double jy = jitter(rng);
      center += script.jitter_sigma * Eigen::Vector2d(jx, jy);
    }
    if (center.x() < 0 || center.y() < 0 || center.x() > width - 1 || center.y() > height - 1) {
      throw OutOfBoundsError("jittered blob center leaves the frame at frame " + std::to_string(frame.index));
    }
    if (script.background_noise_max > 0) {
      for (Eigen::Index i = 0; i < frame.pixels.size(); ++i) {
        frame.pixels.data()[i] = static_cast<std::uint8_t>(noise(rng));
      }
    }
    draw_disc(frame.pixels, center, script.blob_radius, script.blob_intensity);
    frames.push_back(std::move(frame));
  }
  return frames;
}

void write_script(std::ostream& out, const GestureScript& script) {
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "samples_per_segment=" << script.samples_per_segment << '\n'
      << "blob_radius=" << script.blob_radius << '\n'
      << "blob_intensity=" << int(script.blob_intensity) << '\n'
      << "background_noise_max=" << int(script.background_noise_max) << '\n'
      << "jitter_sigma=" << script.jitter_sigma << '\n'
      << "seed=" << script.seed << '\n'
      << "waypoints=" << script.waypoints.size() << '\n';
  for (const auto& p : script.waypoints) out << p.x() << ' ' << p.y() << '\n';
}

GestureScript read_script(std::istream& in) {
  GestureScript script;
  std::string line;
  std::size_t count = 0;
  bool have_count = false;
  while (!have_count && std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("script: expected key=value, got '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "samples_per_segment") script.samples_per_segment = std::stoi(value);
      else if (key == "blob_radius") script.blob_radius = std::stod(value);
      else if (key == "blob_intensity") script.blob_intensity = static_cast<std::uint8_t>(std::stoi(value));
      else if (key == "background_noise_max") script.background_noise_max = static_cast<std::uint8_t>(std::stoi(value));
      else if (key == "jitter_sigma") script.jitter_sigma = std::stod(value);
      else if (key == "seed") script.seed = std::stoull(value);
      else if (key == "waypoints") {
        count = std::stoul(value);
        have_count = true;
      } else {
        throw FormatError("script: unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw FormatError("script: bad value for '" + key + "'");
    }
  }
  if (!have_count) throw FormatError("script: missing waypoints count");
  for (std::size_t i = 0; i < count; ++i) {
    double x = 0, y = 0;
    if (!(in >> x >> y)) throw FormatError("script: expected " + std::to_string(count) + " waypoints");
    script.waypoints.emplace_back(x, y);
  }
  return script;
}

}  // namespace dgr
