#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "dgr/classify.hpp"
#include "dgr/dataset.hpp"
#include "dgr/dispatch.hpp"
#include "dgr/imaging.hpp"
#include "dgr/preprocess.hpp"
#include "dgr/trace.hpp"

namespace dgr {

struct PipelineConfig {
  ImagingConfig imaging;
  /// Zone geometry; TraceConfig::defaults_for(frame size) when absent.
  std::optional<TraceConfig> trace;
  Bindings bindings = default_bindings();
};

enum class PipelineEventKind { Started, Completed, Aborted };

const char* event_name(PipelineEventKind kind);

struct PipelineEvent {
  PipelineEventKind kind = PipelineEventKind::Started;
  std::int64_t frame_index = 0;
  std::string reason;  // Aborted only: "blob_lost" or "empty_pattern"
};

struct Recognition {
  std::int64_t frame_index = 0;
  int label = 0;
  std::vector<int> classes;
  Eigen::VectorXd scores;  // aligned with classes
  DispatchReport dispatch;
};

struct PipelineReport {
  std::size_t frames_consumed = 0;
  std::vector<PipelineEvent> events;
  std::vector<Recognition> recognitions;
  std::map<int, Level> pins;
  std::vector<GpioEvent> gpio_log;
};

nlohmann::json to_json(const PipelineReport& report);

struct StepOutcome {
  /// Centroid of the primary blob in this frame, if one was detected.
  std::optional<Eigen::Vector2d> centroid;
  std::optional<PipelineEvent> event;
  std::optional<Recognition> recognition;
};

/// One recognition session: frames -> blobs -> trace -> pattern -> features
/// -> prediction -> dispatch. Strictly sequential; after a completed gesture
/// the trace returns to Idle on the next frame.
class Pipeline {
 public:
  /// Throws DimensionMismatchError unless the model takes 784 features.
  Pipeline(PipelineConfig config, std::shared_ptr<const Model> model);

  /// Frame size is fixed by the first frame; later frames must match.
  StepOutcome step(const Frame& frame);

  /// Back to Idle without touching the pins.
  void reset();

  bool started() const { return state_.has_value(); }
  /// Valid once the first frame has been consumed.
  const TraceState& trace_state() const { return *state_; }
  const TraceConfig& trace_config() const { return *trace_; }
  const PipelineReport& report() const { return report_; }
  const VirtualGpio& gpio() const { return gpio_; }
  const Model& model() const { return *model_; }

 private:
  void initialize(int width, int height);

  PipelineConfig config_;
  std::shared_ptr<const Model> model_;
  std::optional<TraceConfig> trace_;
  std::optional<TraceState> state_;
  VirtualGpio gpio_;
  PipelineReport report_;
  int width_ = 0;
  int height_ = 0;
};

PipelineReport run_pipeline(std::span<const Frame> frames, const PipelineConfig& config,
                            std::shared_ptr<const Model> model);

/// Feature vector of the first gesture completed in `frames`, or nothing if
/// no gesture completes (or its pattern is empty after denoising).
std::optional<FeatureVector> gesture_features(std::span<const Frame> frames, const ImagingConfig& imaging,
                                              const TraceConfig& trace);

/// Knobs for synthetic_dataset.
struct SyntheticSetOptions {
  std::vector<char> letters{'A', 'C'};
  int per_letter = 100;
  std::uint64_t seed = 1;
  int width = 320;
  int height = 240;
  int samples_per_segment = 8;
  double blob_radius = 6.0;
  std::uint8_t background_noise_max = 30;
  double jitter_sigma = 1.0;
};

/// Renders per_letter gestures for every letter (fresh seed each), pushes
/// them through detection, tracing and preprocessing, and collects the
/// resulting feature vectors. Gestures that fail to complete are skipped.
Dataset synthetic_dataset(const SyntheticSetOptions& options, const ImagingConfig& imaging,
                          const TraceConfig& trace);

}  // namespace dgr
