#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "dgr/classify.hpp"

namespace dgr {

/// Text model file shared by both algorithms:
///
///   DGRM1
///   algorithm svm-linear | gaussian-nb
///   classes <ascending labels>
///   dim <feature dimension>
///   ties lowest-label
///   [svm]  orientation <binary-positive-is-higher-class | one-vs-rest>
///          sep <bias> <w_1> ... <w_dim>          (one line per separator)
///   [nb]   class <label> <log prior>, then mean ... and var ... lines
///   crc32 <decimal CRC-32 of every byte before this line>
///
/// Reals are written in shortest round-trip form, so loading reproduces the
/// model bit for bit.
inline constexpr std::string_view kModelMagic = "DGRM1";

std::string serialize_model(const Model& model);
/// Throws VersionMismatchError on a wrong magic line, ChecksumError on a
/// missing or mismatching CRC line, FormatError on malformed content.
Model parse_model(std::string_view text);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

/// CRC-32 (IEEE 802.3) of `bytes`.
std::uint32_t crc32_of(std::string_view bytes);

}  // namespace dgr
