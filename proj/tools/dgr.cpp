// dgr: train, evaluate, synthesize, run and serve the wand gesture recognizer.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dgr/classify.hpp"
#include "dgr/dataset.hpp"
#include "dgr/dispatch.hpp"
#include "dgr/errors.hpp"
#include "dgr/model_io.hpp"
#include "dgr/pgm.hpp"
#include "dgr/pipeline.hpp"
#include "dgr/server.hpp"
#include "dgr/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kModelEnv = "DGR_MODEL";

std::string default_model_path() {
  if (const char* env = std::getenv(kModelEnv); env && *env) return env;
  return "model.dgrm";
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

struct ImagingFlags {
  int threshold = 200;
  int connectivity = 8;
  std::size_t min_area = 5;

  void add(CLI::App* cmd) {
    cmd->add_option("--threshold", threshold, "Intensity threshold for the wand blob")->check(CLI::Range(0, 255));
    cmd->add_option("--connectivity", connectivity, "Blob connectivity")->check(CLI::IsMember({4, 8}));
    cmd->add_option("--min-area", min_area, "Smallest blob kept, in pixels")->check(CLI::PositiveNumber);
  }

  dgr::ImagingConfig config() const {
    return {static_cast<std::uint8_t>(threshold),
            connectivity == 4 ? dgr::Connectivity::Four : dgr::Connectivity::Eight, min_area};
  }
};

struct TraceFlags {
  std::optional<double> start_x, start_y, end_x, end_y, radius;
  std::size_t min_path_points = 10;
  int gap_tolerance = 5;
  int stroke_width = 3;

  void add(CLI::App* cmd) {
    cmd->add_option("--start-x", start_x, "Start zone center x");
    cmd->add_option("--start-y", start_y, "Start zone center y");
    cmd->add_option("--end-x", end_x, "End zone center x");
    cmd->add_option("--end-y", end_y, "End zone center y");
    cmd->add_option("--zone-radius", radius, "Radius of both trigger zones");
    cmd->add_option("--min-path-points", min_path_points, "Path length needed before the end zone counts");
    cmd->add_option("--gap-tolerance", gap_tolerance, "Blob-less frames tolerated while tracing");
    cmd->add_option("--stroke-width", stroke_width, "Width of bridging segments");
  }

  dgr::TraceConfig config(int width, int height) const {
    auto c = dgr::TraceConfig::defaults_for(width, height);
    if (start_x) c.start_zone.center.x() = *start_x;
    if (start_y) c.start_zone.center.y() = *start_y;
    if (end_x) c.end_zone.center.x() = *end_x;
    if (end_y) c.end_zone.center.y() = *end_y;
    if (radius) c.start_zone.radius = c.end_zone.radius = *radius;
    c.min_path_points = min_path_points;
    c.gap_tolerance = gap_tolerance;
    c.stroke_width = stroke_width;
    c.validate(width, height);
    return c;
  }
};

void print_json(const json& j) { std::cout << j.dump(2) << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dark-environment wand gesture recognizer"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "Train a classifier on the alphabet CSV and report held-out accuracy");
  std::string train_data, train_labels = "A,C", train_algo = "svm", train_out = default_model_path();
  double train_split = 0.8;
  std::uint64_t train_seed = 42;
  std::optional<std::size_t> train_max_rows;
  dgr::SvmParams svm_params;
  train->add_option("--data", train_data, "785-column alphabet CSV")->required();
  train->add_option("--labels", train_labels, "Letters to keep, e.g. A,C");
  train->add_option("--algo", train_algo, "svm or nb")->check(CLI::IsMember({"svm", "nb"}));
  train->add_option("--split", train_split, "Training fraction")->check(CLI::Range(0.0, 1.0));
  train->add_option("--seed", train_seed, "Split/shuffle seed");
  train->add_option("--max-rows", train_max_rows, "Seeded subsample of the filtered rows");
  train->add_option("--out", train_out, "Model file to write");
  train->add_option("--C", svm_params.C, "SVM regularization weight")->check(CLI::PositiveNumber);
  train->add_option("--tol", svm_params.tol, "SVM convergence tolerance")->check(CLI::PositiveNumber);
  train->add_option("--max-epochs", svm_params.max_epochs, "SVM epoch cap")->check(CLI::PositiveNumber);

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a CSV");
  std::string eval_data, eval_labels, eval_model = default_model_path();
  std::optional<double> eval_split;
  std::uint64_t eval_seed = 42;
  eval->add_option("--data", eval_data, "785-column alphabet CSV")->required();
  eval->add_option("--model", eval_model, "Model file");
  eval->add_option("--labels", eval_labels, "Letters to keep (default: the model's classes)");
  eval->add_option("--split", eval_split, "Evaluate only the held-out part of this train split");
  eval->add_option("--seed", eval_seed, "Split seed");

  // synth
  auto* synth = app.add_subcommand("synth", "Render a synthetic wand gesture as a PGM directory");
  std::string synth_letter = "A", synth_out, synth_dataset, synth_letters = "A,C";
  std::uint64_t synth_seed = 1;
  int synth_width = 320, synth_height = 240, synth_count = 100;
  dgr::GestureScript synth_script;
  int synth_noise = synth_script.background_noise_max;
  int synth_intensity = synth_script.blob_intensity;
  TraceFlags synth_trace;
  ImagingFlags synth_imaging;
  synth->add_option("--letter", synth_letter, "Letter to draw (A or C)");
  synth->add_option("--out", synth_out, "Output directory for frame_NNNNNN.pgm");
  synth->add_option("--dataset", synth_dataset, "Instead write a 785-column CSV of synthetic patterns");
  synth->add_option("--letters", synth_letters, "Letters for --dataset");
  synth->add_option("--count", synth_count, "Gestures per letter for --dataset")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Noise/jitter seed");
  synth->add_option("--width", synth_width, "Frame width");
  synth->add_option("--height", synth_height, "Frame height");
  synth->add_option("--samples-per-segment", synth_script.samples_per_segment, "Frames per polyline segment");
  synth->add_option("--radius", synth_script.blob_radius, "Blob radius in pixels");
  synth->add_option("--intensity", synth_intensity, "Blob intensity")->check(CLI::Range(0, 255));
  synth->add_option("--noise", synth_noise, "Background noise ceiling")->check(CLI::Range(0, 255));
  synth->add_option("--jitter", synth_script.jitter_sigma, "Positional jitter sigma");
  synth_trace.add(synth);
  synth_imaging.add(synth);

  // run
  auto* run = app.add_subcommand("run", "Run the recognition pipeline over a PGM directory");
  std::string run_frames, run_model = default_model_path(), run_bindings;
  ImagingFlags run_imaging;
  TraceFlags run_trace;
  run->add_option("--frames", run_frames, "Directory of frame_NNNNNN.pgm")->required();
  run->add_option("--model", run_model, "Model file");
  run->add_option("--bindings", run_bindings, "Bindings file (LETTER PIN LEVEL lines)");
  run_imaging.add(run);
  run_trace.add(run);

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the live wand gateway (WebSocket /session, GET /health)");
  std::string serve_model = default_model_path(), serve_host = "127.0.0.1", serve_bindings;
  unsigned short serve_port = 8080;
  serve->add_option("--model", serve_model, "Model file");
  serve->add_option("--host", serve_host, "Listen address");
  serve->add_option("--port", serve_port, "Listen port");
  serve->add_option("--bindings", serve_bindings, "Bindings file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      const auto keep = dgr::parse_label_set(train_labels);
      dgr::Dataset ds = dgr::load_dataset(fs::path(train_data), {keep, std::nullopt});
      ds = dgr::filter_labels(ds, keep);
      if (train_max_rows) ds = dgr::subsample(ds, *train_max_rows, train_seed);
      auto [train_set, test_set] = dgr::split(ds, train_split, train_seed);
      std::cerr << "loaded " << ds.size() << " samples (" << train_set.size() << " train / " << test_set.size()
                << " test)\n...Training the Model...\n";
      dgr::Model model;
      json extra = json::object();
      if (train_algo == "svm") {
        dgr::SvmTrainingLog log;
        svm_params.seed = train_seed;
        model = dgr::train_svm(train_set, svm_params, &log);
        extra["epochs"] = log.epochs;
        extra["converged"] = log.converged;
      } else {
        model = dgr::train_nb(train_set);
      }
      std::cerr << "...Model Trained...\n";
      const double accuracy = dgr::evaluate(model, test_set);
      std::cerr << "Accuracy of the model using " << (train_algo == "svm" ? "SVM" : "Naive Bayes")
                << " is: " << std::fixed << std::setprecision(4) << accuracy << "\n...Saving the trained model...\n";
      dgr::save_model(model, train_out);
      std::cerr << "...Model Saved...\n";
      json out{{"command", "train"},
               {"algorithm", dgr::algorithm_tag(model)},
               {"accuracy", round4(accuracy)},
               {"train_size", train_set.size()},
               {"test_size", test_set.size()},
               {"model", train_out}};
      out.update(extra);
      print_json(out);
      return 0;
    }

    if (*eval) {
      const auto model = dgr::load_model(eval_model);
      const auto& classes = dgr::model_classes(model);
      const std::set<int> keep = eval_labels.empty() ? std::set<int>(classes.begin(), classes.end())
                                                     : dgr::parse_label_set(eval_labels);
      dgr::Dataset ds = dgr::filter_labels(dgr::load_dataset(fs::path(eval_data), {keep, std::nullopt}), keep);
      if (eval_split) ds = dgr::split(ds, *eval_split, eval_seed).second;
      const double accuracy = dgr::evaluate(model, ds);
      print_json({{"command", "eval"},
                  {"algorithm", dgr::algorithm_tag(model)},
                  {"accuracy", round4(accuracy)},
                  {"samples", ds.size()}});
      return 0;
    }

    if (*synth) {
      const auto trace = synth_trace.config(synth_width, synth_height);
      if (!synth_dataset.empty()) {
        dgr::SyntheticSetOptions options;
        options.letters.clear();
        for (int label : dgr::parse_label_set(synth_letters)) options.letters.push_back(dgr::letter_of(label));
        options.per_letter = synth_count;
        options.seed = synth_seed;
        options.width = synth_width;
        options.height = synth_height;
        options.samples_per_segment = synth_script.samples_per_segment;
        options.blob_radius = synth_script.blob_radius;
        options.background_noise_max = static_cast<std::uint8_t>(synth_noise);
        options.jitter_sigma = synth_script.jitter_sigma;
        const auto ds = dgr::synthetic_dataset(options, synth_imaging.config(), trace);
        dgr::save_dataset(fs::path(synth_dataset), ds);
        print_json({{"command", "synth"}, {"dataset", synth_dataset}, {"samples", ds.size()}});
        return 0;
      }
      if (synth_out.empty()) throw dgr::InvalidArgument("synth needs --out or --dataset");
      if (synth_letter.size() != 1) throw dgr::UnsupportedLetterError("letter must be a single character");
      dgr::GestureScript script = dgr::letter_path(synth_letter.front(), trace, synth_width, synth_height);
      script.samples_per_segment = synth_script.samples_per_segment;
      script.blob_radius = synth_script.blob_radius;
      script.blob_intensity = static_cast<std::uint8_t>(synth_intensity);
      script.background_noise_max = static_cast<std::uint8_t>(synth_noise);
      script.jitter_sigma = synth_script.jitter_sigma;
      script.seed = synth_seed;
      const auto frames = dgr::render_sequence(script, synth_width, synth_height);
      dgr::write_frame_sequence(synth_out, frames);
      {
        std::ofstream out(fs::path(synth_out) / "script.txt");
        dgr::write_script(out, script);
      }
      const json manifest{{"letter", synth_letter},
                          {"seed", synth_seed},
                          {"width", synth_width},
                          {"height", synth_height},
                          {"frames", frames.size()},
                          {"start_zone", {trace.start_zone.center.x(), trace.start_zone.center.y(), trace.start_zone.radius}},
                          {"end_zone", {trace.end_zone.center.x(), trace.end_zone.center.y(), trace.end_zone.radius}}};
      std::ofstream(fs::path(synth_out) / "manifest.json") << manifest.dump(2) << '\n';
      print_json({{"command", "synth"}, {"out", synth_out}, {"frames", frames.size()}});
      return 0;
    }

    if (*run) {
      auto model = std::make_shared<const dgr::Model>(dgr::load_model(run_model));
      dgr::PipelineConfig config;
      config.imaging = run_imaging.config();
      if (!run_bindings.empty()) config.bindings = dgr::load_bindings(run_bindings);
      const auto frames = dgr::read_frame_sequence(run_frames);
      if (!frames.empty()) config.trace = run_trace.config(frames.front().width(), frames.front().height());
      const auto report = dgr::run_pipeline(frames, config, model);
      if (report.recognitions.empty()) std::cerr << "no gesture completed\n";
      print_json(dgr::to_json(report));
      return 0;
    }

    if (*serve) {
      auto model = std::make_shared<const dgr::Model>(dgr::load_model(serve_model));
      const dgr::Bindings bindings = serve_bindings.empty() ? dgr::default_bindings() : dgr::load_bindings(serve_bindings);
      dgr::GatewayServer server(model, bindings, serve_host, serve_port);
      std::cerr << "serving on " << serve_host << ":" << server.port() << " (WebSocket /session, GET /health)\n";
      server.run(/*handle_signals=*/true);
      std::cerr << "shutting down\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
