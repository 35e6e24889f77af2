#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcf/classifier.hpp"
#include "tcf/dataset.hpp"
#include "tcf/encoder.hpp"

namespace tcf {

/// How each video becomes a fixed-length vector.
enum class Representation {
  Tcf,       ///< correlation descriptor
  MeanPool,  ///< per-series temporal mean (order-blind control)
  MaxPool,   ///< per-series temporal max
};

[[nodiscard]] std::string_view to_string(Representation r) noexcept;
[[nodiscard]] std::optional<Representation> parse_representation(std::string_view text);

enum class PoolMode { Mean, Max };

/// Per-row mean or max over frames; length n.
[[nodiscard]] std::vector<double> baseline_pool(const TimeSeriesMatrix& ts, PoolMode mode);

/// Indices into the dataset, ascending.
struct SplitSpec {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;  ///< e.g. classes with a single video
};

/**
 * Per class with m items, floor(m/2) items drawn uniformly at random go to
 * training and the rest to test. Fully determined by `seed`.
 */
[[nodiscard]] SplitSpec make_split(std::span<const std::string> labels, std::uint64_t seed);
[[nodiscard]] SplitSpec make_split(const LabeledDataset& dataset, std::uint64_t seed);

/// Raw counts: entry (i, j) = number of class-i items predicted as class j.
[[nodiscard]] std::vector<std::vector<std::uint64_t>> confusion_counts(
    std::span<const std::string> truth, std::span<const std::string> predicted,
    std::span<const std::string> class_set);

/// Row-normalised percentages; rows of absent classes stay all-zero.
[[nodiscard]] std::vector<std::vector<double>> confusion_percentages(
    const std::vector<std::vector<std::uint64_t>>& counts);

[[nodiscard]] std::vector<std::vector<double>> confusion_matrix(
    std::span<const std::string> truth, std::span<const std::string> predicted,
    std::span<const std::string> class_set);

struct ProtocolSettings {
  std::size_t repetitions = 100;
  std::uint64_t master_seed = 0;
  std::size_t threads = 0;
  Representation representation = Representation::Tcf;
};

struct EvalReport {
  std::vector<double> per_rep_accuracy;
  double mean_accuracy = 0.0;
  std::vector<std::string> classes;
  std::vector<std::vector<std::uint64_t>> confusion_counts;  ///< pooled over repetitions
  std::vector<std::vector<double>> confusion;                ///< row-normalised percentages
  std::uint64_t descriptor_dimension = 0;
  EncoderConfig encoder;
  TrainConfig trainer;
  ProtocolSettings settings;
  std::vector<std::string> warnings;
};

/// Loads every item's matrix (in parallel), annotating failures with the item id.
[[nodiscard]] std::vector<TimeSeriesMatrix> load_all(const LabeledDataset& dataset,
                                                     std::size_t threads = 0);

/// One descriptor per matrix under the chosen representation.
[[nodiscard]] std::vector<std::vector<double>> encode_all(std::span<const TimeSeriesMatrix> matrices,
                                                          std::span<const std::string> ids,
                                                          const EncoderConfig& cfg,
                                                          Representation representation,
                                                          std::size_t threads = 0);

/**
 * Repeated random-split evaluation on precomputed descriptors. Repetition i
 * splits with derive_seed(master_seed, i), trains a one-vs-rest model on the
 * training half and scores the test half. The report is independent of the
 * thread count.
 */
[[nodiscard]] EvalReport run_protocol_on_descriptors(std::span<const std::vector<double>> descriptors,
                                                     std::span<const std::string> labels,
                                                     const TrainConfig& train_cfg,
                                                     const ProtocolSettings& settings);

/// Encodes each video once, then runs the repeated protocol.
[[nodiscard]] EvalReport run_protocol(const LabeledDataset& dataset, const EncoderConfig& enc_cfg,
                                      const TrainConfig& train_cfg,
                                      const ProtocolSettings& settings);

[[nodiscard]] EvalReport run_protocol(std::span<const TimeSeriesMatrix> matrices,
                                      std::span<const std::string> ids,
                                      std::span<const std::string> labels,
                                      const EncoderConfig& enc_cfg, const TrainConfig& train_cfg,
                                      const ProtocolSettings& settings);

struct SweepGrid {
  std::vector<SelectionScheme> schemes{SelectionScheme::Group};
  std::vector<std::size_t> sizes{64};  ///< lambda for Group, m for subset schemes
  std::vector<std::size_t> windows{16};
  std::vector<std::size_t> gammas{6};
};

struct SweepRow {
  EncoderConfig config;
  std::uint64_t dimension = 0;
  bool ok = false;
  std::string failure;
  double mean_accuracy = 0.0;
};

/**
 * Cartesian evaluation in scheme, size, windows, gamma order (gamma varies
 * fastest). Every cell uses the same master seed, so a cell can be
 * reproduced alone with run_protocol. Invalid cells are reported, not thrown.
 */
[[nodiscard]] std::vector<SweepRow> sweep(const LabeledDataset& dataset,
                                          const EncoderConfig& base, const SweepGrid& grid,
                                          const TrainConfig& train_cfg,
                                          const ProtocolSettings& settings);

}  // namespace tcf
