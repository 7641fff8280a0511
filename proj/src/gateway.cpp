#include "dgr/gateway.hpp"

#include <cmath>

#include "dgr/dataset.hpp"
#include "dgr/errors.hpp"
#include "dgr/synth.hpp"

namespace dgr {

using nlohmann::json;

namespace {

// Raised inside the handlers and converted into an in-band error reply.
struct MessageError {
  std::string code;
  std::string message;
};

[[noreturn]] void protocol_error(std::string message) { throw MessageError{"protocol", std::move(message)}; }
[[noreturn]] void validation_error(std::string message) { throw MessageError{"validation", std::move(message)}; }

double number_field(const json& message, const char* key) {
  const auto it = message.find(key);
  if (it == message.end() || !it->is_number()) protocol_error(std::string("field '") + key + "' must be a number");
  const double value = it->get<double>();
  if (!std::isfinite(value)) validation_error(std::string("field '") + key + "' must be finite");
  return value;
}

int int_field(const json& message, const char* key) {
  const double value = number_field(message, key);
  if (value != std::floor(value) || std::abs(value) > 1e9) {
    validation_error(std::string("field '") + key + "' must be an integer");
  }
  return static_cast<int>(value);
}

TriggerZone zone_from(const json& j, ZoneRole role) {
  if (!j.is_object()) protocol_error("zone override must be an object");
  return {Eigen::Vector2d(number_field(j, "x"), number_field(j, "y")), number_field(j, "radius"), role};
}

json zone_json(const TriggerZone& z) {
  return {{"x", z.center.x()}, {"y", z.center.y()}, {"radius", z.radius}};
}

const char* phase_name(TracePhase phase) {
  switch (phase) {
    case TracePhase::Idle:
      return "idle";
    case TracePhase::Tracing:
      return "tracing";
    case TracePhase::Complete:
      return "complete";
  }
  return "?";
}

json error_reply(const MessageError& e) { return {{"type", "error"}, {"code", e.code}, {"message", e.message}}; }

}  // namespace

json encode_rle(const BitMask& mask) {
  json rows = json::array();
  for (Eigen::Index y = 0; y < mask.rows(); ++y) {
    json runs = json::array();
    Eigen::Index x = 0;
    while (x < mask.cols()) {
      if (!mask(y, x)) {
        ++x;
        continue;
      }
      const Eigen::Index start = x;
      while (x < mask.cols() && mask(y, x)) ++x;
      runs.push_back(start);
      runs.push_back(x - start);
    }
    rows.push_back(std::move(runs));
  }
  return rows;
}

BitMask decode_rle(const json& rows, int width, int height) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != height) throw FormatError("rle: row count mismatch");
  BitMask mask = BitMask::Zero(height, width);
  for (int y = 0; y < height; ++y) {
    const auto& runs = rows[static_cast<std::size_t>(y)];
    if (!runs.is_array() || runs.size() % 2 != 0) throw FormatError("rle: malformed row");
    for (std::size_t k = 0; k < runs.size(); k += 2) {
      const int start = runs[k].get<int>();
      const int length = runs[k + 1].get<int>();
      if (start < 0 || length <= 0 || start + length > width) throw FormatError("rle: run leaves the row");
      mask.row(y).segment(start, length).setConstant(true);
    }
  }
  return mask;
}

Frame pointer_frame(int width, int height, double x, double y, std::int64_t index) {
  Frame frame = make_frame(width, height, index);
  draw_disc(frame.pixels, Eigen::Vector2d(x, y), kPointerBlobRadius, kPointerBlobIntensity);
  return frame;
}

json health_json(const Model& model) {
  json letters = json::array();
  for (int c : model_classes(model)) letters.push_back(std::string(1, letter_of(c)));
  return {{"status", "ok"},
          {"algorithm", algorithm_tag(model)},
          {"classes", model_classes(model)},
          {"letters", std::move(letters)},
          {"feature_dim", model_dim(model)}};
}

GatewaySession::GatewaySession(std::shared_ptr<const Model> model, Bindings bindings)
    : model_(std::move(model)), bindings_(std::move(bindings)) {
  if (!model_) throw InvalidArgument("gateway session needs a model");
}

std::vector<json> GatewaySession::handle(const json& message) {
  try {
    if (!message.is_object() || !message.contains("type") || !message["type"].is_string()) {
      protocol_error("message must be an object with a string 'type'");
    }
    const auto type = message["type"].get<std::string>();
    if (type == "session_start") return {start(message)};
    if (type != "pointer" && type != "pointer_absent" && type != "reset") protocol_error("unknown message type '" + type + "'");
    if (!pipeline_) protocol_error("'" + type + "' before session_start");

    if (type == "reset") {
      pipeline_->reset();
      return {update(nullptr)};
    }
    if (type == "pointer_absent") return {advance(make_frame(width_, height_, frame_counter_ + 1))};

    const double x = number_field(message, "x");
    const double y = number_field(message, "y");
    if (x < 0 || y < 0 || x > width_ - 1 || y > height_ - 1) {
      validation_error("pointer outside the " + std::to_string(width_) + "x" + std::to_string(height_) + " frame");
    }
    return {advance(pointer_frame(width_, height_, x, y, frame_counter_ + 1))};
  } catch (const MessageError& e) {
    return {error_reply(e)};
  }
}

std::vector<std::string> GatewaySession::handle_text(std::string_view text) {
  json message;
  try {
    message = json::parse(text);
  } catch (const json::parse_error&) {
    return {error_reply({"protocol", "malformed JSON"}).dump()};
  }
  std::vector<std::string> out;
  for (const auto& reply : handle(message)) out.push_back(reply.dump());
  return out;
}

json GatewaySession::start(const json& message) {
  const int width = int_field(message, "width");
  const int height = int_field(message, "height");
  if (width < kMinFrameSide || height < kMinFrameSide || width > kMaxSessionSide || height > kMaxSessionSide) {
    validation_error("frame size must be within " + std::to_string(kMinFrameSide) + ".." +
                     std::to_string(kMaxSessionSide));
  }

  PipelineConfig config;
  config.bindings = bindings_;
  TraceConfig trace = TraceConfig::defaults_for(width, height);
  if (message.contains("config")) {
    const json& c = message["config"];
    if (!c.is_object()) protocol_error("'config' must be an object");
    if (c.contains("threshold")) {
      const int t = int_field(c, "threshold");
      if (t < 0 || t > 255) validation_error("threshold must be 0..255");
      config.imaging.threshold = static_cast<std::uint8_t>(t);
    }
    if (c.contains("connectivity")) {
      const int conn = int_field(c, "connectivity");
      if (conn != 4 && conn != 8) validation_error("connectivity must be 4 or 8");
      config.imaging.connectivity = conn == 4 ? Connectivity::Four : Connectivity::Eight;
    }
    if (c.contains("min_area")) {
      const int a = int_field(c, "min_area");
      if (a < 1) validation_error("min_area must be >= 1");
      config.imaging.min_area = static_cast<std::size_t>(a);
    }
    if (c.contains("min_path_points")) {
      const int n = int_field(c, "min_path_points");
      if (n < 1) validation_error("min_path_points must be >= 1");
      trace.min_path_points = static_cast<std::size_t>(n);
    }
    if (c.contains("gap_tolerance")) trace.gap_tolerance = int_field(c, "gap_tolerance");
    if (c.contains("stroke_width")) trace.stroke_width = int_field(c, "stroke_width");
    if (c.contains("start_zone")) trace.start_zone = zone_from(c["start_zone"], ZoneRole::Start);
    if (c.contains("end_zone")) trace.end_zone = zone_from(c["end_zone"], ZoneRole::End);
  }
  try {
    trace.validate(width, height);
  } catch (const InvalidArgument& e) {
    validation_error(e.what());
  }
  config.trace = trace;
  trace_ = trace;

  pipeline_.emplace(std::move(config), model_);
  width_ = width;
  height_ = height;
  frame_counter_ = 0;
  return update(nullptr);
}

json GatewaySession::advance(const Frame& frame) {
  ++frame_counter_;
  const StepOutcome outcome = pipeline_->step(frame);
  return update(&outcome);
}

json GatewaySession::update(const StepOutcome* outcome) {
  const TraceConfig& trace = trace_;
  json j{{"type", "update"}, {"seq", seq_++}};
  j["frame"] = outcome ? json(frame_counter_) : json(nullptr);

  json path = json::array();
  BitMask accumulator = BitMask::Zero(height_, width_);
  TracePhase phase = TracePhase::Idle;
  if (pipeline_->started()) {
    const auto& state = pipeline_->trace_state();
    phase = state.phase;
    for (const auto& p : state.path) path.push_back({p.centroid.x(), p.centroid.y()});
    accumulator = state.accumulator;
  }
  j["phase"] = phase_name(phase);
  j["event"] = outcome && outcome->event ? json(event_name(outcome->event->kind)) : json(nullptr);
  if (outcome && outcome->event && !outcome->event->reason.empty()) j["reason"] = outcome->event->reason;
  j["centroid"] = outcome && outcome->centroid ? json{outcome->centroid->x(), outcome->centroid->y()} : json(nullptr);
  j["path"] = std::move(path);
  j["zones"] = {{"start", zone_json(trace.start_zone)}, {"end", zone_json(trace.end_zone)}};
  j["accumulator"] = {{"width", width_}, {"height", height_}, {"rows", encode_rle(accumulator)}};

  json prediction = nullptr;
  if (outcome && outcome->recognition) {
    const auto& rec = *outcome->recognition;
    json scores = json::array();
    for (std::size_t k = 0; k < rec.classes.size(); ++k) {
      scores.push_back({{"label", rec.classes[k]},
                        {"letter", std::string(1, letter_of(rec.classes[k]))},
                        {"score", rec.scores(static_cast<Eigen::Index>(k))}});
    }
    prediction = {{"label", rec.label}, {"letter", std::string(1, letter_of(rec.label))}, {"scores", std::move(scores)}};
    if (!rec.dispatch.warning.empty()) prediction["warning"] = rec.dispatch.warning;
  }
  j["prediction"] = std::move(prediction);
  json pins = json::object();
  for (const auto& [pin, level] : pipeline_->gpio().pins()) pins[std::to_string(pin)] = level_name(level);
  j["pins"] = std::move(pins);
  return j;
}

}  // namespace dgr
