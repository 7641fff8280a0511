#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "dgr/imaging.hpp"

namespace dgr {

/// Frame-sized grayscale image of one accumulated gesture (0 or 255).
using PatternImage = GrayImage;

enum class ZoneRole { Start, End };

/// Circular trigger region. Green (start) opens a trace, red (end) closes it.
struct TriggerZone {
  Eigen::Vector2d center = Eigen::Vector2d::Zero();
  double radius = 1.0;
  ZoneRole role = ZoneRole::Start;

  bool contains(const Eigen::Vector2d& p) const { return (p - center).norm() <= radius; }
};

struct TraceConfig {
  TriggerZone start_zone;
  TriggerZone end_zone{Eigen::Vector2d::Zero(), 1.0, ZoneRole::End};
  std::size_t min_path_points = 10;
  int gap_tolerance = 5;
  int stroke_width = 3;

  /// Start at (0.15 W, 0.5 H), end at (0.85 W, 0.5 H), radius 0.08 min(W, H).
  static TraceConfig defaults_for(int width, int height);

  /// Throws InvalidArgument unless both circles lie inside a width x height
  /// frame, do not overlap, and the counters are sane.
  void validate(int width, int height) const;
};

enum class TracePhase { Idle, Tracing, Complete };

struct PathPoint {
  std::int64_t frame_index = 0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
};

/// Trigger-zone state machine plus the cumulative blob canvas.
///
/// Idle: path and accumulator empty. Tracing: every primary blob is OR-ed
/// into the accumulator and its centroid appended to the path. Complete:
/// terminal until the owner resets; |path| >= min_path_points.
struct TraceState {
  TracePhase phase = TracePhase::Idle;
  std::vector<PathPoint> path;
  BitMask accumulator;
  int missing_run = 0;

  static TraceState idle(int width, int height);
};

enum class TraceEventKind { None, Started, Completed, Aborted };

struct TraceEvent {
  TraceEventKind kind = TraceEventKind::None;
  /// Set only for Completed: the accumulator frozen at the transition.
  std::optional<PatternImage> pattern;
};

struct TraceStep {
  TraceState state;
  TraceEvent event;
};

/// One transition of the trace state machine for the blob observed in frame
/// `frame_index` (absent when no blob survived detection).
TraceStep trace_step(TraceState state, const std::optional<Blob>& blob,
                     const TraceConfig& config, std::int64_t frame_index);

/// Pixels of the Bresenham line from a to b, endpoints included.
std::vector<Pixel> bresenham_line(Pixel a, Pixel b);

/// Sets every pixel within width/2 (Chebyshev) of the Bresenham line p0->p1,
/// clipped to the canvas. Existing bits are kept.
void stamp_segment(BitMask& canvas, Pixel p0, Pixel p1, int width);

inline BitMask bridge(BitMask canvas, Pixel p0, Pixel p1, int width) {
  stamp_segment(canvas, p0, p1, width);
  return canvas;
}

/// Accumulator as 0/255 image. Throws WrongPhaseError unless Complete.
PatternImage finalize_pattern(const TraceState& state);

}  // namespace dgr
