#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dgr/imaging.hpp"

namespace dgr {

// Binary PGM (P5, maxval 255) frames and numbered frame directories.

GrayImage read_pgm(std::istream& in);
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const GrayImage& image);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// "frame_000042.pgm"
std::string frame_filename(std::int64_t index);

/// Writes frame_NNNNNN.pgm for every frame, named by Frame::index.
void write_frame_sequence(const std::filesystem::path& dir, std::span<const Frame> frames);

/// Reads every frame_*.pgm in `dir`, ordered by index. Frame::index comes
/// from the file name. A missing directory is an IoError; an empty one
/// yields no frames.
std::vector<Frame> read_frame_sequence(const std::filesystem::path& dir);

}  // namespace dgr
