#include "dgr/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dgr/errors.hpp"

namespace dgr {

namespace {

Pixel to_pixel(const Eigen::Vector2d& p) {
  return {static_cast<int>(std::lround(p.x())), static_cast<int>(std::lround(p.y()))};
}

void or_blob(BitMask& canvas, const Blob& blob) {
  for (const auto& p : blob.pixels) {
    if (p.y >= 0 && p.y < canvas.rows() && p.x >= 0 && p.x < canvas.cols()) canvas(p.y, p.x) = true;
  }
}

bool zone_inside(const TriggerZone& z, int width, int height) {
  return z.radius > 0 && z.center.x() - z.radius >= 0 && z.center.y() - z.radius >= 0 &&
         z.center.x() + z.radius <= width - 1 && z.center.y() + z.radius <= height - 1;
}

}  // namespace

TraceConfig TraceConfig::defaults_for(int width, int height) {
  TraceConfig config;
  const double radius = 0.08 * std::min(width, height);
  config.start_zone = {Eigen::Vector2d(0.15 * width, 0.5 * height), radius, ZoneRole::Start};
  config.end_zone = {Eigen::Vector2d(0.85 * width, 0.5 * height), radius, ZoneRole::End};
  return config;
}

void TraceConfig::validate(int width, int height) const {
  if (!zone_inside(start_zone, width, height) || !zone_inside(end_zone, width, height)) {
    throw InvalidArgument("trigger zones must lie inside the " + std::to_string(width) + "x" +
                          std::to_string(height) + " frame");
  }
  if ((start_zone.center - end_zone.center).norm() <= start_zone.radius + end_zone.radius) {
    throw InvalidArgument("start and end zones overlap");
  }
  if (min_path_points < 1 || gap_tolerance < 0 || stroke_width < 1) {
    throw InvalidArgument("trace counters out of range");
  }
}

TraceState TraceState::idle(int width, int height) {
  TraceState state;
  state.accumulator = BitMask::Zero(height, width);
  return state;
}

TraceStep trace_step(TraceState state, const std::optional<Blob>& blob,
                     const TraceConfig& config, std::int64_t frame_index) {
  TraceEvent event;
  switch (state.phase) {
    case TracePhase::Complete:
      break;

    case TracePhase::Idle:
      if (blob && config.start_zone.contains(blob->centroid)) {
        state.phase = TracePhase::Tracing;
        state.path.push_back({frame_index, blob->centroid});
        or_blob(state.accumulator, *blob);
        state.missing_run = 0;
        event.kind = TraceEventKind::Started;
      }
      break;

    case TracePhase::Tracing:
      if (!blob) {
        if (++state.missing_run > config.gap_tolerance) {
          state.phase = TracePhase::Idle;
          state.path.clear();
          state.accumulator.setConstant(false);
          state.missing_run = 0;
          event.kind = TraceEventKind::Aborted;
        }
        break;
      }
      {
        state.missing_run = 0;
        const Eigen::Vector2d previous = state.path.back().centroid;
        const double blob_diameter =
            2.0 * std::sqrt(static_cast<double>(blob->area) / std::numbers::pi);
        if ((blob->centroid - previous).norm() > blob_diameter) {
          stamp_segment(state.accumulator, to_pixel(previous), to_pixel(blob->centroid),
                        config.stroke_width);
        }
        state.path.push_back({frame_index, blob->centroid});
        or_blob(state.accumulator, *blob);
        if (config.end_zone.contains(blob->centroid) &&
            state.path.size() >= config.min_path_points) {
          state.phase = TracePhase::Complete;
          event.kind = TraceEventKind::Completed;
          event.pattern = finalize_pattern(state);
        }
      }
      break;
  }
  return {std::move(state), std::move(event)};
}

std::vector<Pixel> bresenham_line(Pixel a, Pixel b) {
  std::vector<Pixel> line;
  const int dx = std::abs(b.x - a.x);
  const int dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  Pixel p = a;
  line.reserve(static_cast<std::size_t>(std::max(dx, -dy)) + 1);
  while (true) {
    line.push_back(p);
    if (p == b) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      p.x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      p.y += sy;
    }
  }
  return line;
}

void stamp_segment(BitMask& canvas, Pixel p0, Pixel p1, int width) {
  const int half = width / 2;
  const int h = static_cast<int>(canvas.rows());
  const int w = static_cast<int>(canvas.cols());
  for (const auto& p : bresenham_line(p0, p1)) {
    const int x0 = std::max(p.x - half, 0);
    const int x1 = std::min(p.x + half, w - 1);
    const int y0 = std::max(p.y - half, 0);
    const int y1 = std::min(p.y + half, h - 1);
    if (x0 > x1 || y0 > y1) continue;
    canvas.block(y0, x0, y1 - y0 + 1, x1 - x0 + 1).setConstant(true);
  }
}

PatternImage finalize_pattern(const TraceState& state) {
  if (state.phase != TracePhase::Complete) {
    throw WrongPhaseError("finalize_pattern requires a completed trace");
  }
  return state.accumulator.select(PatternImage::Constant(state.accumulator.rows(),
                                                         state.accumulator.cols(), 255),
                                  PatternImage::Zero(state.accumulator.rows(),
                                                     state.accumulator.cols()));
}

}  // namespace dgr
