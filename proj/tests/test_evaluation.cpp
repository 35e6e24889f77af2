#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tcf/evaluation.hpp"
#include "tcf/report.hpp"
#include "tcf/synth.hpp"

using namespace tcf;

namespace {

std::vector<std::string> labels_with_counts(const std::vector<std::size_t>& counts) {
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    for (std::size_t i = 0; i < counts[c]; ++i) labels.push_back("L" + std::to_string(c));
  }
  return labels;
}

LabeledDataset small_corpus(double noise, std::size_t videos = 8) {
  DefaultSynthOptions o;
  o.classes = 3;
  o.videos_per_class = videos;
  o.channels = 16;
  o.min_frames = 30;
  o.max_frames = 50;
  o.noise = noise;
  return synth_generate(default_synth_spec(o));
}

EncoderConfig small_encoder() {
  EncoderConfig cfg;
  cfg.lambda = 8;
  cfg.windows = 2;
  cfg.gamma = 3;
  return cfg;
}

TrainConfig quick_trainer() {
  TrainConfig cfg;
  cfg.c_reg = 10.0;
  cfg.tolerance = 1e-3;
  return cfg;
}

}  // namespace

TEST(BaselinePool, MeanAndMax) {
  const TimeSeriesMatrix ts(2, 3, {1, 5, 3, -2, -4, -3});
  EXPECT_EQ(baseline_pool(ts, PoolMode::Mean), (std::vector<double>{3.0, -3.0}));
  EXPECT_EQ(baseline_pool(ts, PoolMode::Max), (std::vector<double>{5.0, -2.0}));
}

TEST(BaselinePool, BlindToFrameOrder) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ts = oracle::random_matrix(rng, 5, 12);
    std::vector<std::size_t> perm(12);
    for (std::size_t t = 0; t < 12; ++t) perm[t] = t;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> v;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t t = 0; t < 12; ++t) v.push_back(ts.at(i, perm[t]));
    const TimeSeriesMatrix shuffled(5, 12, std::move(v));
    EXPECT_EQ(baseline_pool(ts, PoolMode::Max), baseline_pool(shuffled, PoolMode::Max));
    const auto a = baseline_pool(ts, PoolMode::Mean);
    const auto b = baseline_pool(shuffled, PoolMode::Mean);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  }
}

TEST(Representation, Parse) {
  EXPECT_EQ(parse_representation("tcf"), Representation::Tcf);
  EXPECT_EQ(parse_representation("mean"), Representation::MeanPool);
  EXPECT_EQ(parse_representation("max"), Representation::MaxPool);
  EXPECT_FALSE(parse_representation("median").has_value());
}

TEST(MakeSplit, PerClassHalvesAreDisjointAndComplete) {
  const auto labels = labels_with_counts({7, 4, 1, 10});
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto split = make_split(labels, seed);
    std::map<std::string, std::size_t> train_count, total;
    for (const auto& l : labels) ++total[l];
    for (auto i : split.train) ++train_count[labels[i]];
    for (const auto& [label, n] : total) ASSERT_EQ(train_count[label], n / 2) << label;
    std::vector<std::size_t> all = split.train;
    all.insert(all.end(), split.test.begin(), split.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < all.size(); ++i) ASSERT_EQ(all[i], i);
    ASSERT_TRUE(std::is_sorted(split.train.begin(), split.train.end()));
    ASSERT_TRUE(std::is_sorted(split.test.begin(), split.test.end()));
  }
}

TEST(MakeSplit, SingletonClassWarns) {
  const auto split = make_split(labels_with_counts({4, 1}), 3);
  ASSERT_EQ(split.warnings.size(), 1u);
  EXPECT_NE(split.warnings[0].find("L1"), std::string::npos);
  EXPECT_TRUE(make_split(labels_with_counts({4, 2}), 3).warnings.empty());
}

TEST(MakeSplit, DeterministicPerSeedAndVariesAcrossSeeds) {
  const auto labels = labels_with_counts({10, 10});
  EXPECT_EQ(make_split(labels, 5).train, make_split(labels, 5).train);
  std::set<std::vector<std::size_t>> seen;
  for (std::uint64_t s = 0; s < 30; ++s) seen.insert(make_split(labels, s).train);
  EXPECT_GT(seen.size(), 25u);
}

TEST(MakeSplit, EveryVideoIsTrainedAboutHalfTheTime) {
  const auto labels = labels_with_counts({6, 6, 6});
  std::vector<std::size_t> in_train(labels.size(), 0);
  for (std::uint64_t s = 0; s < 4000; ++s) {
    for (auto i : make_split(labels, s).train) ++in_train[i];
  }
  for (auto c : in_train) {
    EXPECT_GT(c, 1800u);
    EXPECT_LT(c, 2200u);
  }
}

TEST(Confusion, RowNormalisedPercentages) {
  const std::vector<std::string> truth{"a", "a", "a", "a", "b", "b"};
  const std::vector<std::string> pred{"a", "a", "a", "b", "b", "b"};
  const std::vector<std::string> classes{"a", "b"};
  const auto m = confusion_matrix(truth, pred, classes);
  EXPECT_EQ(m, (std::vector<std::vector<double>>{{75.0, 25.0}, {0.0, 100.0}}));
  const auto counts = confusion_counts(truth, pred, classes);
  EXPECT_EQ(counts, (std::vector<std::vector<std::uint64_t>>{{3, 1}, {0, 2}}));
}

TEST(Confusion, EmptyRowIsZeroAndUnknownLabelThrows) {
  const std::vector<std::string> classes{"a", "b", "c"};
  const auto m = confusion_matrix(std::vector<std::string>{"a"}, std::vector<std::string>{"a"},
                                  classes);
  EXPECT_EQ(m[1], (std::vector<double>{0, 0, 0}));
  EXPECT_THROW((void)confusion_matrix(std::vector<std::string>{"a"},
                                      std::vector<std::string>{"z"}, classes),
               std::invalid_argument);
}

TEST(RunProtocol, MemorisableDataScoresPerfectly) {
  std::vector<std::vector<double>> x;
  std::vector<std::string> y;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < 6; ++i) {
      std::vector<double> p(3, 0.0);
      p[c] = 1.0 + 0.01 * i;
      x.push_back(p);
      y.push_back("k" + std::to_string(c));
    }
  }
  ProtocolSettings settings;
  settings.repetitions = 10;
  const auto report = run_protocol_on_descriptors(x, y, quick_trainer(), settings);
  EXPECT_EQ(report.mean_accuracy, 1.0);
  ASSERT_EQ(report.per_rep_accuracy.size(), 10u);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(report.confusion[c][c], 100.0);
}

TEST(RunProtocol, ReportAggregatesConsistently) {
  const auto ds = small_corpus(2.0);
  ProtocolSettings settings;
  settings.repetitions = 6;
  settings.threads = 1;
  const auto report = run_protocol(ds, small_encoder(), quick_trainer(), settings);
  double sum = 0;
  for (double a : report.per_rep_accuracy) sum += a;
  EXPECT_NEAR(report.mean_accuracy, sum / 6.0, 1e-12);
  std::uint64_t pooled = 0, correct = 0;
  for (std::size_t r = 0; r < report.classes.size(); ++r) {
    for (std::size_t c = 0; c < report.classes.size(); ++c) pooled += report.confusion_counts[r][c];
    correct += report.confusion_counts[r][r];
  }
  // 3 classes x 4 test videos x 6 repetitions
  EXPECT_EQ(pooled, 72u);
  EXPECT_NEAR(static_cast<double>(correct) / pooled, report.mean_accuracy, 1e-12);
  EXPECT_EQ(report.descriptor_dimension, tcf_dimension(16, small_encoder()));
}

TEST(RunProtocol, IndependentOfThreadCount) {
  const auto ds = small_corpus(2.0);
  ProtocolSettings one;
  one.repetitions = 8;
  one.threads = 1;
  ProtocolSettings four = one;
  four.threads = 4;
  const auto a = run_protocol(ds, small_encoder(), quick_trainer(), one);
  const auto b = run_protocol(ds, small_encoder(), quick_trainer(), four);
  EXPECT_EQ(a.per_rep_accuracy, b.per_rep_accuracy);
  EXPECT_EQ(a.confusion_counts, b.confusion_counts);
  EXPECT_EQ(report_to_json(a).dump(), report_to_json(b).dump());
}

TEST(RunProtocol, DifferentMasterSeedsDrawDifferentSplits) {
  const auto ds = small_corpus(3.0);
  ProtocolSettings s;
  s.repetitions = 5;
  const auto a = run_protocol(ds, small_encoder(), quick_trainer(), s);
  s.master_seed = 1234;
  const auto b = run_protocol(ds, small_encoder(), quick_trainer(), s);
  EXPECT_NE(a.per_rep_accuracy, b.per_rep_accuracy);
}

TEST(RunProtocol, EncodingErrorSurfaces) {
  const auto ds = small_corpus(1.0, 4);
  EncoderConfig bad = small_encoder();
  bad.lambda = 5;  // does not divide 16
  ProtocolSettings s;
  s.repetitions = 2;
  try {
    (void)run_protocol(ds, bad, quick_trainer(), s);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("lambda=5"), std::string::npos) << e.what();
  }
}

TEST(Sweep, GammaAxisAndFailedCellsAreIsolated) {
  const auto ds = small_corpus(2.0, 6);
  SweepGrid grid;
  grid.schemes = {SelectionScheme::Group};
  grid.sizes = {8, 5};
  grid.windows = {1};
  grid.gammas = {1, 2, 3, 4, 5, 6, 7};
  ProtocolSettings s;
  s.repetitions = 2;
  const auto rows = sweep(ds, small_encoder(), grid, quick_trainer(), s);
  ASSERT_EQ(rows.size(), 14u);
  for (std::size_t g = 0; g < 7; ++g) {
    EXPECT_TRUE(rows[g].ok) << rows[g].failure;
    EXPECT_EQ(rows[g].config.gamma, g + 1);
    EXPECT_EQ(rows[g].dimension, 16u * (g + 1) + 28u);
    EXPECT_FALSE(rows[7 + g].ok);
    EXPECT_NE(rows[7 + g].failure.find("lambda=5"), std::string::npos);
  }
  const auto tsv = sweep_to_tsv(rows);
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 15);
  EXPECT_EQ(tsv.rfind("scheme\tsize\twindows\tgamma", 0), 0u);
}

TEST(Sweep, PaperScaleDimension) {
  EncoderConfig cfg;
  cfg.lambda = 64;
  cfg.windows = 1;
  cfg.gamma = 0;
  EXPECT_EQ(tcf_dimension(4096, cfg), 2016u);
}

TEST(Report, TextAndJson) {
  const auto ds = small_corpus(2.0, 4);
  ProtocolSettings s;
  s.repetitions = 3;
  const auto report = run_protocol(ds, small_encoder(), quick_trainer(), s);
  const auto json = report_to_json(report);
  EXPECT_EQ(json.at("format"), "tcf-eval-report");
  EXPECT_EQ(json.at("per_rep_accuracy").size(), 3u);
  const auto text = format_report(report);
  EXPECT_NE(text.find("class0"), std::string::npos);
  EXPECT_NE(text.find("mean accuracy"), std::string::npos);
}
