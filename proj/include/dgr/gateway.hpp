#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dgr/classify.hpp"
#include "dgr/dispatch.hpp"
#include "dgr/pipeline.hpp"

namespace dgr {

/// Radius and intensity of the wand blob synthesized for pointer messages.
inline constexpr double kPointerBlobRadius = 6.0;
inline constexpr std::uint8_t kPointerBlobIntensity = 255;
inline constexpr int kMaxSessionSide = 4096;

/// Run-length rows: for every image row, a flat [start, length, ...] list
/// of the set runs.
nlohmann::json encode_rle(const BitMask& mask);
/// Inverse of encode_rle; throws FormatError if a run leaves the row.
BitMask decode_rle(const nlohmann::json& rows, int width, int height);

/// Frame with a single zero-noise wand disc at (x, y).
Frame pointer_frame(int width, int height, double x, double y, std::int64_t index);

/// {"status", "algorithm", "classes", "letters", "feature_dim"}
nlohmann::json health_json(const Model& model);

/// Server side of one live wand session. Every client message (JSON) is
/// turned into an ordered list of updates or in-band errors. Frame indices
/// count pointer/pointer_absent messages, so identical message lists give
/// identical replies.
///
/// Client messages:
///   {"type":"session_start","width":W,"height":H,"config":{...}}
///   {"type":"pointer","x":X,"y":Y}
///   {"type":"pointer_absent"}
///   {"type":"reset"}
/// Server replies are {"type":"update",...} or
///   {"type":"error","code":"protocol"|"validation","message":...}.
class GatewaySession {
 public:
  explicit GatewaySession(std::shared_ptr<const Model> model, Bindings bindings = default_bindings());

  std::vector<nlohmann::json> handle(const nlohmann::json& message);
  /// Parses `text` as JSON (malformed text is a protocol error) and
  /// serializes the replies.
  std::vector<std::string> handle_text(std::string_view text);

  bool active() const { return pipeline_.has_value(); }
  const Pipeline& pipeline() const { return *pipeline_; }

 private:
  nlohmann::json start(const nlohmann::json& message);
  nlohmann::json advance(const Frame& frame);
  nlohmann::json update(const StepOutcome* outcome);

  std::shared_ptr<const Model> model_;
  Bindings bindings_;
  std::optional<Pipeline> pipeline_;
  TraceConfig trace_;
  int width_ = 0;
  int height_ = 0;
  std::int64_t frame_counter_ = 0;
  std::uint64_t seq_ = 0;
};

}  // namespace dgr
