#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "dgr/imaging.hpp"
#include "dgr/trace.hpp"

namespace dgr {

/// A bright reflector moved along a polyline, one frame per sample.
struct GestureScript {
  std::vector<Eigen::Vector2d> waypoints;
  int samples_per_segment = 8;
  double blob_radius = 6.0;
  std::uint8_t blob_intensity = 255;
  std::uint8_t background_noise_max = 30;
  double jitter_sigma = 1.0;
  std::uint64_t seed = 0;
};

/// Letters with shipped templates.
bool has_letter_template(char letter);

/// Template polyline for `letter` ('A' or 'C') mapped so it starts at the
/// start-zone center and ends at the end-zone center. The horizontal axis
/// spans the two zones; the vertical scale is the largest that keeps the
/// blob inside the frame. Throws UnsupportedLetterError for other letters.
GestureScript letter_path(char letter, const TraceConfig& config, int width, int height);

/// Un-jittered blob centers, one per frame: samples_per_segment evenly
/// spaced points per segment plus the final waypoint.
std::vector<Eigen::Vector2d> sample_path(const GestureScript& script);

/// Frames with uniform background noise in [0, background_noise_max] and a
/// filled disc at each (Gaussian-jittered) sample. Frame indices start at 1.
/// Deterministic for a given seed. Throws OutOfBoundsError if a jittered
/// center falls outside the frame.
std::vector<Frame> render_sequence(const GestureScript& script, int width, int height);

/// Fills the disc |p - center| <= radius, clipped to the image.
void draw_disc(GrayImage& image, const Eigen::Vector2d& center, double radius, std::uint8_t intensity);

/// key=value header lines, "waypoints=N", then N lines "x y".
void write_script(std::ostream& out, const GestureScript& script);
GestureScript read_script(std::istream& in);

}  // namespace dgr
