#include "dgr/pipeline.hpp"

#include <string>

#include "dgr/dataset.hpp"
#include "dgr/errors.hpp"
#include "dgr/synth.hpp"

namespace dgr {

const char* event_name(PipelineEventKind kind) {
  switch (kind) {
    case PipelineEventKind::Started:
      return "started";
    case PipelineEventKind::Completed:
      return "completed";
    case PipelineEventKind::Aborted:
      return "aborted";
  }
  return "?";
}

nlohmann::json to_json(const PipelineReport& report) {
  using nlohmann::json;
  json events = json::array();
  for (const auto& e : report.events) {
    json j{{"kind", event_name(e.kind)}, {"frame", e.frame_index}};
    if (!e.reason.empty()) j["reason"] = e.reason;
    events.push_back(std::move(j));
  }
  json recognitions = json::array();
  for (const auto& r : report.recognitions) {
    json scores = json::array();
    for (std::size_t k = 0; k < r.classes.size(); ++k) {
      scores.push_back({{"label", r.classes[k]},
                        {"letter", std::string(1, letter_of(r.classes[k]))},
                        {"score", r.scores(static_cast<Eigen::Index>(k))}});
    }
    json action = nullptr;
    if (r.dispatch.action) action = {{"pin", r.dispatch.action->pin}, {"level", level_name(r.dispatch.action->level)}};
    json j{{"frame", r.frame_index},
           {"label", r.label},
           {"letter", std::string(1, letter_of(r.label))},
           {"scores", std::move(scores)},
           {"action", std::move(action)}};
    if (!r.dispatch.warning.empty()) j["warning"] = r.dispatch.warning;
    recognitions.push_back(std::move(j));
  }
  json prediction = recognitions.empty() ? json(nullptr) : recognitions.back();
  json pins = json::object();
  for (const auto& [pin, level] : report.pins) pins[std::to_string(pin)] = level_name(level);
  json log = json::array();
  for (const auto& e : report.gpio_log) log.push_back({{"seq", e.seq}, {"pin", e.pin}, {"level", level_name(e.level)}});

  return {{"frames_consumed", report.frames_consumed},
          {"events", std::move(events)},
          {"recognitions", std::move(recognitions)},
          {"prediction", std::move(prediction)},
          {"pins", std::move(pins)},
          {"gpio_log", std::move(log)}};
}

Pipeline::Pipeline(PipelineConfig config, std::shared_ptr<const Model> model)
    : config_(std::move(config)), model_(std::move(model)) {
  if (!model_) throw InvalidArgument("pipeline needs a model");
  if (model_dim(*model_) != kFeatureDim) {
    throw DimensionMismatchError("model feature dimension " + std::to_string(model_dim(*model_)) + ", pipeline needs " +
                                 std::to_string(kFeatureDim));
  }
}

void Pipeline::initialize(int width, int height) {
  trace_ = config_.trace.value_or(TraceConfig::defaults_for(width, height));
  trace_->validate(width, height);
  state_ = TraceState::idle(width, height);
  width_ = width;
  height_ = height;
}

void Pipeline::reset() {
  if (state_) state_ = TraceState::idle(width_, height_);
}

StepOutcome Pipeline::step(const Frame& frame) {
  if (!state_) {
    initialize(frame.width(), frame.height());
  } else if (frame.width() != width_ || frame.height() != height_) {
    throw InvalidArgument("frame size changed mid-session");
  }
  if (state_->phase == TracePhase::Complete) reset();
  ++report_.frames_consumed;

  const auto blob = detect_wand(frame, config_.imaging);
  auto [next, trace_event] = trace_step(std::move(*state_), blob, *trace_, frame.index);
  state_ = std::move(next);

  StepOutcome outcome;
  if (blob) outcome.centroid = blob->centroid;
  switch (trace_event.kind) {
    case TraceEventKind::None:
      break;
    case TraceEventKind::Started:
      outcome.event = PipelineEvent{PipelineEventKind::Started, frame.index, {}};
      break;
    case TraceEventKind::Aborted:
      outcome.event = PipelineEvent{PipelineEventKind::Aborted, frame.index, "blob_lost"};
      break;
    case TraceEventKind::Completed: {
      FeatureVector features;
      try {
        features = pattern_features(*trace_event.pattern);
      } catch (const EmptyPatternError&) {
        outcome.event = PipelineEvent{PipelineEventKind::Aborted, frame.index, "empty_pattern"};
        state_ = TraceState::idle(width_, height_);
        break;
      }
      outcome.event = PipelineEvent{PipelineEventKind::Completed, frame.index, {}};
      Recognition rec;
      rec.frame_index = frame.index;
      rec.classes = model_classes(*model_);
      rec.scores = decision_scores(*model_, features);
      rec.label = rec.classes[static_cast<std::size_t>(argmax_lowest(rec.scores))];
      rec.dispatch = dispatch(rec.label, config_.bindings, gpio_);
      outcome.recognition = rec;
      report_.recognitions.push_back(std::move(rec));
      break;
    }
  }
  if (outcome.event) report_.events.push_back(*outcome.event);
  report_.pins = gpio_.pins();
  report_.gpio_log = gpio_.log();
  return outcome;
}

PipelineReport run_pipeline(std::span<const Frame> frames, const PipelineConfig& config,
                            std::shared_ptr<const Model> model) {
  Pipeline pipeline(config, std::move(model));
  for (const auto& frame : frames) pipeline.step(frame);
  return pipeline.report();
}

std::optional<FeatureVector> gesture_features(std::span<const Frame> frames, const ImagingConfig& imaging,
                                              const TraceConfig& trace) {
  if (frames.empty()) return std::nullopt;
  trace.validate(frames.front().width(), frames.front().height());
  TraceState state = TraceState::idle(frames.front().width(), frames.front().height());
  for (const auto& frame : frames) {
    auto [next, event] = trace_step(std::move(state), detect_wand(frame, imaging), trace, frame.index);
    state = std::move(next);
    if (event.kind == TraceEventKind::Completed) {
      try {
        return pattern_features(*event.pattern);
      } catch (const EmptyPatternError&) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

Dataset synthetic_dataset(const SyntheticSetOptions& options, const ImagingConfig& imaging,
                          const TraceConfig& trace) {
  std::vector<double> values;
  Dataset ds;
  ds.source = "synthetic";
  std::uint64_t counter = 0;
  for (int i = 0; i < options.per_letter; ++i) {
    for (const char letter : options.letters) {
      GestureScript script = letter_path(letter, trace, options.width, options.height);
      script.samples_per_segment = options.samples_per_segment;
      script.blob_radius = options.blob_radius;
      script.background_noise_max = options.background_noise_max;
      script.jitter_sigma = options.jitter_sigma;
      script.seed = options.seed * 1'000'003ULL + counter++;
      const auto frames = render_sequence(script, options.width, options.height);
      const auto features = gesture_features(frames, imaging, trace);
      if (!features) continue;
      ds.labels.push_back(label_of(letter));
      values.insert(values.end(), features->data(), features->data() + kFeatureDim);
    }
  }
  ds.features = Eigen::Map<const FeatureMatrix>(values.data(), static_cast<Eigen::Index>(ds.labels.size()), kFeatureDim);
  return ds;
}

}  // namespace dgr
