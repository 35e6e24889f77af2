#include "tcf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "tcf/classifier.hpp"
#include "tcf/descriptor_file.hpp"
#include "tcf/encoder.hpp"
#include "tcf/errors.hpp"
#include "tcf/evaluation.hpp"
#include "tcf/manifest.hpp"
#include "tcf/model_io.hpp"
#include "tcf/report.hpp"
#include "tcf/synth.hpp"
#include "tcf/tsf.hpp"

namespace tcf::cli {

namespace fs = std::filesystem;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::shared_ptr<spdlog::logger> logger() {
  static auto log = [] {
    auto l = spdlog::stderr_logger_st("tcf");
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("TCF_LOG_LEVEL")) {
      l->set_level(spdlog::level::from_str(env));
    }
    return l;
  }();
  return log;
}

struct EncoderFlags {
  std::size_t lambda = 64;
  std::size_t windows = 16;
  std::size_t lags = 6;
  std::size_t stride = 1;
  std::string scheme = "group";
  std::size_t m = 64;
  std::uint64_t selection_seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--lambda", lambda, "Group count (lambda) for the group scheme")
        ->capture_default_str();
    app->add_option("--windows", windows, "Non-overlapping temporal windows (L)")
        ->capture_default_str();
    app->add_option("--lags", lags, "Autocorrelation lag count (gamma)")->capture_default_str();
    app->add_option("--stride", stride, "Autocorrelation lag stride")->capture_default_str();
    app->add_option("--scheme", scheme, "Series selection: group|first|random|uniform")
        ->capture_default_str()
        ->check(CLI::IsMember({"group", "first", "random", "uniform"}));
    app->add_option("--m", m, "Series kept by first/random/uniform")->capture_default_str();
    app->add_option("--selection-seed", selection_seed, "Seed for the random scheme")
        ->capture_default_str();
  }

  [[nodiscard]] EncoderConfig config() const {
    EncoderConfig cfg;
    cfg.lambda = lambda;
    cfg.windows = windows;
    cfg.gamma = lags;
    cfg.stride = stride;
    cfg.selection = *parse_selection_scheme(scheme);
    cfg.selection_m = m;
    cfg.seed = selection_seed;
    return cfg;
  }
};

struct TrainFlags {
  double c = 1000.0;
  double tolerance = 1e-4;
  std::size_t max_iterations = TrainConfig{}.max_iterations;
  std::string normalize = "none";

  void attach(CLI::App* app) {
    app->add_option("--c", c, "SVM regularisation C")->capture_default_str();
    app->add_option("--tol", tolerance, "Solver tolerance (KKT violation and relative gap)")
        ->capture_default_str();
    app->add_option("--max-iter", max_iterations, "Solver iteration budget per binary problem")
        ->capture_default_str();
    app->add_option("--normalize", normalize, "Feature scaling: none|l2|zscore")
        ->capture_default_str()
        ->check(CLI::IsMember({"none", "l2", "zscore"}));
  }

  [[nodiscard]] TrainConfig config(std::uint64_t seed, std::size_t threads) const {
    TrainConfig cfg;
    cfg.c_reg = c;
    cfg.tolerance = tolerance;
    cfg.max_iterations = max_iterations;
    cfg.normalize = *parse_normalization(normalize);
    cfg.seed = seed;
    cfg.threads = threads;
    return cfg;
  }
};

// Inputs for encode/predict: a single TSF, a directory (manifest.tsv if
// present, else every *.tsf below it), or an explicit manifest.
LabeledDataset gather_inputs(const std::string& input, const std::string& manifest) {
  if (!manifest.empty()) {
    return read_manifest(manifest);
  }
  if (input.empty()) {
    throw UsageError("one of --input or --manifest is required");
  }
  const fs::path path(input);
  if (!fs::exists(path)) {
    throw DataError("input " + input + " does not exist");
  }
  LabeledDataset dataset;
  if (fs::is_directory(path)) {
    if (fs::exists(path / "manifest.tsv")) {
      return read_manifest(path / "manifest.tsv");
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".tsf") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw DataError("no .tsf files under " + input);
    }
    for (const auto& f : files) {
      dataset.add({fs::relative(f, path).generic_string(), "?", f, 0, nullptr});
    }
    return dataset;
  }
  dataset.add({path.filename().generic_string(), "?", path, 0, nullptr});
  return dataset;
}

std::vector<std::string> labels_of(const LabeledDataset& d) {
  std::vector<std::string> out;
  for (const auto& item : d.items()) out.push_back(item.label);
  return out;
}

std::vector<std::string> ids_of(const LabeledDataset& d) {
  std::vector<std::string> out;
  for (const auto& item : d.items()) out.push_back(item.id);
  return out;
}

Representation representation_of(const std::string& text) {
  return *parse_representation(text);
}

std::optional<TcfLayout> layout_for(const EncoderConfig& cfg, Representation rep,
                                    const TimeSeriesMatrix& first) {
  if (rep != Representation::Tcf) return std::nullopt;
  return TcfLayout{cfg.correlated_rows(), cfg.windows, cfg.gamma, cfg.stride,
                   first.series_count(),  0,           cfg.selection, std::string(kTcfOrdering)};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw DataError("failed writing " + path.string());
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Time-series correlation descriptors for video feature sequences"};
  app.name(args.empty() ? "tcf" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);
  app.fallthrough(false);

  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string input;
  std::string manifest;
  std::string output;
  std::string descriptors_in;
  std::string representation = "tcf";
  std::size_t reps = 100;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed for every randomised step")
        ->capture_default_str();
    sub->add_option("--threads", threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
  };
  auto add_representation = [&](CLI::App* sub) {
    sub->add_option("--representation", representation,
                    "Video representation: tcf|mean|max (pooling baselines)")
        ->capture_default_str()
        ->check(CLI::IsMember({"tcf", "mean", "max"}));
  };

  // encode
  EncoderFlags enc_encode;
  auto* encode = app.add_subcommand("encode", "Encode TSF files into a descriptor file");
  encode->add_option("--input", input, "A .tsf file or a directory of them");
  encode->add_option("--manifest", manifest, "Manifest listing the inputs (alternative to --input)");
  encode->add_option("--out", output, "Descriptor file to write")->required();
  enc_encode.attach(encode);
  add_common(encode);

  // train
  EncoderFlags enc_train;
  TrainFlags tr_train;
  auto* train = app.add_subcommand("train", "Train a one-vs-rest linear SVM on all listed videos");
  train->add_option("--manifest", manifest, "Manifest of labelled TSF files");
  train->add_option("--descriptors", descriptors_in, "Labelled descriptor file instead of a manifest");
  train->add_option("--out", output, "Model file to write")->required();
  enc_train.attach(train);
  tr_train.attach(train);
  add_representation(train);
  add_common(train);

  // eval
  EncoderFlags enc_eval;
  TrainFlags tr_eval;
  std::string report_path;
  auto* eval = app.add_subcommand("eval", "Repeated half/half split evaluation");
  eval->add_option("--manifest", manifest, "Manifest of labelled TSF files");
  eval->add_option("--descriptors", descriptors_in, "Labelled descriptor file instead of a manifest");
  eval->add_option("--reps", reps, "Number of random splits")->capture_default_str();
  eval->add_option("--report", report_path, "JSON report to write");
  enc_eval.attach(eval);
  tr_eval.attach(eval);
  add_representation(eval);
  add_common(eval);

  // sweep
  EncoderFlags enc_sweep;
  TrainFlags tr_sweep;
  std::vector<std::size_t> lambda_list{64};
  std::vector<std::size_t> l_list{16};
  std::vector<std::size_t> gamma_list{6};
  std::vector<std::string> scheme_list{"group"};
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate a grid of encoder settings");
  sweep_cmd->add_option("--manifest", manifest, "Manifest of labelled TSF files")->required();
  sweep_cmd->add_option("--lambda-list", lambda_list, "Group counts (or subset sizes m)")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--l-list", l_list, "Window counts L")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--gamma-list", gamma_list, "Lag counts gamma")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--scheme-list", scheme_list, "Selection schemes")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::IsMember({"group", "first", "random", "uniform"}));
  sweep_cmd->add_option("--reps", reps, "Random splits per grid point")->capture_default_str();
  sweep_cmd->add_option("--out", output, "Tab-separated table to write")->required();
  enc_sweep.attach(sweep_cmd);
  tr_sweep.attach(sweep_cmd);
  add_common(sweep_cmd);

  // synth
  std::string spec_path;
  DefaultSynthOptions synth_opts;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic TSF corpus and manifest");
  synth->add_option("--spec", spec_path, "JSON corpus spec (built-in block-factor corpus if omitted)");
  synth->add_option("--out", output, "Output directory")->required();
  synth->add_option("--classes", synth_opts.classes, "Classes (default spec)")->capture_default_str();
  synth->add_option("--videos", synth_opts.videos_per_class, "Videos per class (default spec)")
      ->capture_default_str();
  synth->add_option("--channels", synth_opts.channels, "Feature count n (default spec)")
      ->capture_default_str();
  synth->add_option("--min-frames", synth_opts.min_frames, "Shortest video (default spec)")
      ->capture_default_str();
  synth->add_option("--max-frames", synth_opts.max_frames, "Longest video (default spec)")
      ->capture_default_str();
  synth->add_option("--noise", synth_opts.noise, "Noise sigma (default spec)")->capture_default_str();
  synth->add_option("--block-size", synth_opts.block_size,
                    "Consecutive channels sharing a factor (default spec)")
      ->capture_default_str();
  synth->add_option("--seed", synth_opts.seed, "Generator seed")->capture_default_str();

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Print the shape of a TSF file and validate it");
  inspect->add_option("--input", input, "TSF file")->required();

  // predict
  std::string model_path;
  auto* predict_cmd = app.add_subcommand("predict", "Label TSF files with a trained model");
  predict_cmd->add_option("--model", model_path, "Model file")->required();
  predict_cmd->add_option("--input", input, "A .tsf file or a directory of them");
  predict_cmd->add_option("--manifest", manifest, "Manifest listing the inputs");
  EncoderFlags enc_predict;
  enc_predict.attach(predict_cmd);
  add_representation(predict_cmd);
  add_common(predict_cmd);

  try {
    std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rest.begin(), rest.end());
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  auto log = logger();
  try {
    if (*encode) {
      const auto cfg = enc_encode.config();
      const auto dataset = gather_inputs(input, manifest);
      const auto matrices = load_all(dataset, threads);
      DescriptorSet set;
      set.ids = ids_of(dataset);
      set.labels = labels_of(dataset);
      set.vectors = encode_all(matrices, set.ids, cfg, Representation::Tcf, threads);
      set.layout = layout_for(cfg, Representation::Tcf, matrices.front());
      write_descriptors(output, set);
      out << "encoded " << set.vectors.size() << " video(s), dimension "
          << (set.vectors.empty() ? 0 : set.vectors.front().size()) << " -> " << output << '\n';
      return kSuccess;
    }

    if (*train) {
      if (manifest.empty() == descriptors_in.empty()) {
        throw UsageError("train needs exactly one of --manifest or --descriptors");
      }
      const auto cfg = enc_train.config();
      const auto rep = representation_of(representation);
      std::vector<std::vector<double>> x;
      std::vector<std::string> labels;
      std::optional<TcfLayout> layout;
      if (!manifest.empty()) {
        const auto dataset = read_manifest(manifest);
        const auto matrices = load_all(dataset, threads);
        x = encode_all(matrices, ids_of(dataset), cfg, rep, threads);
        labels = labels_of(dataset);
        layout = layout_for(cfg, rep, matrices.front());
      } else {
        auto set = read_descriptors(descriptors_in);
        x = std::move(set.vectors);
        labels = std::move(set.labels);
        layout = set.layout;
      }
      auto model = train_ovr(x, labels, tr_train.config(seed, threads));
      model.layout = layout;
      save_model(output, model);
      out << "trained " << model.classes.size() << " classes on " << x.size()
          << " videos, dimension " << model.dimension() << " -> " << output << '\n';
      return kSuccess;
    }

    if (*eval) {
      if (manifest.empty() == descriptors_in.empty()) {
        throw UsageError("eval needs exactly one of --manifest or --descriptors");
      }
      ProtocolSettings settings{reps, seed, threads, representation_of(representation)};
      const auto train_cfg = tr_eval.config(seed, threads);
      EvalReport report;
      if (!manifest.empty()) {
        report = run_protocol(read_manifest(manifest), enc_eval.config(), train_cfg, settings);
      } else {
        const auto set = read_descriptors(descriptors_in);
        report = run_protocol_on_descriptors(set.vectors, set.labels, train_cfg, settings);
        report.encoder = enc_eval.config();
      }
      for (const auto& w : report.warnings) log->warn("{}", w);
      out << format_report(report);
      if (!report_path.empty()) {
        write_report(report_path, report);
        out << "report -> " << report_path << '\n';
      }
      return kSuccess;
    }

    if (*sweep_cmd) {
      SweepGrid grid;
      grid.schemes.clear();
      for (const auto& s : scheme_list) grid.schemes.push_back(*parse_selection_scheme(s));
      grid.sizes = lambda_list;
      grid.windows = l_list;
      grid.gammas = gamma_list;
      ProtocolSettings settings{reps, seed, threads, Representation::Tcf};
      const auto rows = sweep(read_manifest(manifest), enc_sweep.config(), grid,
                              tr_sweep.config(seed, threads), settings);
      const auto table = sweep_to_tsv(rows);
      write_text(output, table);
      out << table;
      for (const auto& r : rows) {
        if (!r.ok) log->warn("grid point failed: {}", r.failure);
      }
      return kSuccess;
    }

    if (*synth) {
      SynthSpec spec;
      if (!spec_path.empty()) {
        std::ifstream in(spec_path);
        if (!in) throw DataError("cannot open spec " + spec_path);
        nlohmann::json j;
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          throw DataError(spec_path + ": " + e.what());
        }
        spec = synth_spec_from_json(j);
      } else {
        spec = default_synth_spec(synth_opts);
      }
      const auto dataset = synth_generate(spec);
      const auto manifest_path = write_corpus(dataset, output);
      write_text(fs::path(output) / "spec.json", synth_spec_to_json(spec).dump(1) + "\n");
      out << "wrote " << dataset.size() << " videos in " << spec.classes.size()
          << " classes; manifest " << manifest_path.string() << '\n';
      return kSuccess;
    }

    if (*inspect) {
      const auto m = read_tsf(input);
      out << "file: " << input << '\n'
          << "n: " << m.series_count() << '\n'
          << "k: " << m.frame_count() << '\n'
          << "finite: yes\n";
      return kSuccess;
    }

    if (*predict_cmd) {
      const auto model = load_model(model_path);
      const auto dataset = gather_inputs(input, manifest);
      const auto matrices = load_all(dataset, threads);
      const auto x =
          encode_all(matrices, ids_of(dataset), enc_predict.config(),
                     representation_of(representation), threads);
      for (std::size_t i = 0; i < x.size(); ++i) {
        out << dataset.items()[i].id << '\t' << predict(model, x[i]) << '\n';
      }
      return kSuccess;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kConvergenceError;
  } catch (const std::invalid_argument& e) {
    // bad encoder/trainer settings for the data at hand
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace tcf::cli
