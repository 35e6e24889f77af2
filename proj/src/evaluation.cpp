#include "tcf/evaluation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

#include "tcf/errors.hpp"
#include "tcf/parallel.hpp"
#include "tcf/seeding.hpp"

namespace tcf {

std::string_view to_string(Representation r) noexcept {
  switch (r) {
    case Representation::Tcf:
      return "tcf";
    case Representation::MeanPool:
      return "mean";
    case Representation::MaxPool:
      return "max";
  }
  return "tcf";
}

std::optional<Representation> parse_representation(std::string_view text) {
  for (auto r : {Representation::Tcf, Representation::MeanPool, Representation::MaxPool}) {
    if (text == to_string(r)) return r;
  }
  return std::nullopt;
}

std::vector<double> baseline_pool(const TimeSeriesMatrix& ts, PoolMode mode) {
  std::vector<double> out(ts.series_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto row = ts.row(i);
    if (mode == PoolMode::Mean) {
      out[i] = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size());
    } else {
      out[i] = *std::max_element(row.begin(), row.end());
    }
  }
  return out;
}

SplitSpec make_split(std::span<const std::string> labels, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);

  SplitSpec split;
  split.seed = seed;
  std::mt19937_64 rng(seed);
  for (auto& [label, members] : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    const std::size_t n_train = members.size() / 2;
    split.train.insert(split.train.end(), members.begin(),
                       members.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test.insert(split.test.end(), members.begin() + static_cast<std::ptrdiff_t>(n_train),
                      members.end());
    if (members.size() == 1) {
      split.warnings.push_back("class '" + label + "' has a single video; it is only tested");
    }
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

SplitSpec make_split(const LabeledDataset& dataset, std::uint64_t seed) {
  std::vector<std::string> labels;
  labels.reserve(dataset.size());
  for (const auto& item : dataset.items()) labels.push_back(item.label);
  return make_split(labels, seed);
}

std::vector<std::vector<std::uint64_t>> confusion_counts(std::span<const std::string> truth,
                                                         std::span<const std::string> predicted,
                                                         std::span<const std::string> class_set) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("confusion matrix: truth and prediction counts differ");
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t c = 0; c < class_set.size(); ++c) index.emplace(class_set[c], c);
  auto lookup = [&](const std::string& label) {
    auto it = index.find(label);
    if (it == index.end()) {
      throw std::invalid_argument("confusion matrix: unknown label '" + label + "'");
    }
    return it->second;
  };
  std::vector<std::vector<std::uint64_t>> counts(class_set.size(),
                                                 std::vector<std::uint64_t>(class_set.size(), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++counts[lookup(truth[i])][lookup(predicted[i])];
  }
  return counts;
}

std::vector<std::vector<double>> confusion_percentages(
    const std::vector<std::vector<std::uint64_t>>& counts) {
  std::vector<std::vector<double>> out;
  out.reserve(counts.size());
  for (const auto& row : counts) {
    const auto total = std::accumulate(row.begin(), row.end(), std::uint64_t{0});
    std::vector<double> pct(row.size(), 0.0);
    if (total > 0) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        pct[j] = 100.0 * static_cast<double>(row[j]) / static_cast<double>(total);
      }
    }
    out.push_back(std::move(pct));
  }
  return out;
}

std::vector<std::vector<double>> confusion_matrix(std::span<const std::string> truth,
                                                  std::span<const std::string> predicted,
                                                  std::span<const std::string> class_set) {
  return confusion_percentages(confusion_counts(truth, predicted, class_set));
}

std::vector<TimeSeriesMatrix> load_all(const LabeledDataset& dataset, std::size_t threads) {
  std::vector<TimeSeriesMatrix> out(dataset.size());
  parallel_for(dataset.size(), threads, [&](std::size_t i) { out[i] = dataset.load_matrix(i); });
  return out;
}

std::vector<std::vector<double>> encode_all(std::span<const TimeSeriesMatrix> matrices,
                                            std::span<const std::string> ids,
                                            const EncoderConfig& cfg,
                                            Representation representation, std::size_t threads) {
  std::vector<std::vector<double>> out(matrices.size());
  parallel_for(matrices.size(), threads, [&](std::size_t i) {
    try {
      switch (representation) {
        case Representation::Tcf:
          out[i] = encode_tcf(matrices[i], cfg).combined;
          break;
        case Representation::MeanPool:
          out[i] = baseline_pool(matrices[i], PoolMode::Mean);
          break;
        case Representation::MaxPool:
          out[i] = baseline_pool(matrices[i], PoolMode::Max);
          break;
      }
    } catch (const std::invalid_argument& e) {
      const std::string who = i < ids.size() ? ids[i] : std::to_string(i);
      throw std::invalid_argument("video '" + who + "': " + e.what());
    }
  });
  return out;
}

namespace {

struct RepetitionResult {
  double accuracy = 0.0;
  std::vector<std::vector<std::uint64_t>> counts;
  std::vector<std::string> warnings;
};

RepetitionResult run_repetition(std::span<const std::vector<double>> descriptors,
                                std::span<const std::string> labels,
                                const std::vector<std::string>& classes,
                                const TrainConfig& train_cfg, std::uint64_t seed) {
  const auto split = make_split(labels, seed);
  std::vector<std::vector<double>> train_x;
  std::vector<std::string> train_y;
  for (auto i : split.train) {
    train_x.push_back(descriptors[i]);
    train_y.push_back(labels[i]);
  }
  const auto model = train_ovr(train_x, train_y, train_cfg);

  std::vector<std::string> truth;
  std::vector<std::string> predicted;
  std::size_t correct = 0;
  for (auto i : split.test) {
    truth.push_back(labels[i]);
    predicted.push_back(predict(model, descriptors[i]));
    correct += predicted.back() == truth.back() ? 1 : 0;
  }
  RepetitionResult r;
  r.accuracy = split.test.empty() ? 0.0
                                  : static_cast<double>(correct) /
                                        static_cast<double>(split.test.size());
  r.counts = confusion_counts(truth, predicted, classes);
  r.warnings = split.warnings;
  return r;
}

}  // namespace

EvalReport run_protocol_on_descriptors(std::span<const std::vector<double>> descriptors,
                                       std::span<const std::string> labels,
                                       const TrainConfig& train_cfg,
                                       const ProtocolSettings& settings) {
  train_cfg.validate();
  if (descriptors.size() != labels.size()) {
    throw std::invalid_argument("protocol: descriptor and label counts differ");
  }
  if (settings.repetitions == 0) {
    throw std::invalid_argument("protocol: repetitions must be positive");
  }
  EvalReport report;
  report.classes.assign(labels.begin(), labels.end());
  std::sort(report.classes.begin(), report.classes.end());
  report.classes.erase(std::unique(report.classes.begin(), report.classes.end()),
                       report.classes.end());
  std::size_t trainable = 0;
  for (const auto& c : report.classes) {
    trainable += std::count(labels.begin(), labels.end(), c) >= 2 ? 1 : 0;
  }
  if (trainable < 2) {
    throw std::invalid_argument("protocol: need at least 2 classes with >= 2 videos each");
  }
  report.trainer = train_cfg;
  report.settings = settings;
  report.descriptor_dimension = descriptors.empty() ? 0 : descriptors.front().size();

  // Repetitions run in parallel; each binary problem inside stays single-threaded.
  TrainConfig inner = train_cfg;
  inner.threads = 1;
  std::vector<RepetitionResult> results(settings.repetitions);
  parallel_for(settings.repetitions, settings.threads, [&](std::size_t rep) {
    const auto seed = derive_seed(settings.master_seed, rep);
    try {
      results[rep] = run_repetition(descriptors, labels, report.classes, inner, seed);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("repetition " + std::to_string(rep) + ": " + e.what(),
                             e.final_violation());
    } catch (const DataError& e) {
      throw DataError("repetition " + std::to_string(rep) + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("repetition " + std::to_string(rep) + ": " + e.what());
    }
  });

  const std::size_t c = report.classes.size();
  report.confusion_counts.assign(c, std::vector<std::uint64_t>(c, 0));
  for (const auto& r : results) {
    report.per_rep_accuracy.push_back(r.accuracy);
    for (std::size_t i = 0; i < c; ++i) {
      for (std::size_t j = 0; j < c; ++j) report.confusion_counts[i][j] += r.counts[i][j];
    }
  }
  if (!results.empty()) report.warnings = results.front().warnings;
  report.mean_accuracy =
      std::accumulate(report.per_rep_accuracy.begin(), report.per_rep_accuracy.end(), 0.0) /
      static_cast<double>(report.per_rep_accuracy.size());
  report.confusion = confusion_percentages(report.confusion_counts);
  return report;
}

EvalReport run_protocol(std::span<const TimeSeriesMatrix> matrices,
                        std::span<const std::string> ids, std::span<const std::string> labels,
                        const EncoderConfig& enc_cfg, const TrainConfig& train_cfg,
                        const ProtocolSettings& settings) {
  const auto descriptors =
      encode_all(matrices, ids, enc_cfg, settings.representation, settings.threads);
  auto report = run_protocol_on_descriptors(descriptors, labels, train_cfg, settings);
  report.encoder = enc_cfg;
  return report;
}

EvalReport run_protocol(const LabeledDataset& dataset, const EncoderConfig& enc_cfg,
                        const TrainConfig& train_cfg, const ProtocolSettings& settings) {
  if (dataset.empty()) {
    throw std::invalid_argument("protocol: empty dataset");
  }
  const auto matrices = load_all(dataset, settings.threads);
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  for (const auto& item : dataset.items()) {
    ids.push_back(item.id);
    labels.push_back(item.label);
  }
  return run_protocol(matrices, ids, labels, enc_cfg, train_cfg, settings);
}

std::vector<SweepRow> sweep(const LabeledDataset& dataset, const EncoderConfig& base,
                            const SweepGrid& grid, const TrainConfig& train_cfg,
                            const ProtocolSettings& settings) {
  if (dataset.empty()) {
    throw std::invalid_argument("sweep: empty dataset");
  }
  const auto matrices = load_all(dataset, settings.threads);
  std::vector<std::string> ids;
  std::vector<std::string> labels;
  for (const auto& item : dataset.items()) {
    ids.push_back(item.id);
    labels.push_back(item.label);
  }
  const std::size_t n = matrices.front().series_count();

  std::vector<SweepRow> rows;
  for (auto scheme : grid.schemes) {
    for (auto size : grid.sizes) {
      for (auto windows : grid.windows) {
        for (auto gamma : grid.gammas) {
          SweepRow row;
          row.config = base;
          row.config.selection = scheme;
          if (scheme == SelectionScheme::Group) {
            row.config.lambda = size;
          } else {
            row.config.selection_m = size;
          }
          row.config.windows = windows;
          row.config.gamma = gamma;
          row.dimension = tcf_dimension(n, row.config);
          try {
            auto report = run_protocol(matrices, ids, labels, row.config, train_cfg, settings);
            row.mean_accuracy = report.mean_accuracy;
            row.ok = true;
          } catch (const std::exception& e) {
            row.failure = e.what();
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

}  // namespace tcf
