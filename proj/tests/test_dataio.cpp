#include <gtest/gtest.h>

#include <climits>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tcf/classifier.hpp"
#include "tcf/correlation.hpp"
#include "tcf/dataset.hpp"
#include "tcf/descriptor_file.hpp"
#include "tcf/errors.hpp"
#include "tcf/manifest.hpp"
#include "tcf/model_io.hpp"
#include "tcf/synth.hpp"
#include "tcf/tsf.hpp"

using namespace tcf;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("tcf_dataio_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.what();
  }
  return "<no DataError>";
}

}  // namespace

using Tsf = TempDir;
using Manifest = TempDir;
using Descriptors = TempDir;
using ModelFile = TempDir;
using Synth = TempDir;

TEST_F(Tsf, TwoByTwoFileLayout) {
  const TimeSeriesMatrix m(2, 2, {1, 2, 3, 4});  // rows are series: series0 = (1,2)
  write_tsf(m, dir_ / "a.tsf");
  const auto bytes = slurp(dir_ / "a.tsf");
  ASSERT_EQ(bytes.size(), 28u);
  EXPECT_EQ(bytes.substr(0, 4), "TSF1");
  std::uint32_t n = 0, k = 0;
  std::memcpy(&n, bytes.data() + 4, 4);
  std::memcpy(&k, bytes.data() + 8, 4);
  EXPECT_EQ(n, 2u);
  EXPECT_EQ(k, 2u);
  float v[4];
  std::memcpy(v, bytes.data() + 12, 16);
  // frame-major: frame 0 holds series 0 and 1 at t=0
  EXPECT_EQ(v[0], 1.0f);
  EXPECT_EQ(v[1], 3.0f);
  EXPECT_EQ(v[2], 2.0f);
  EXPECT_EQ(v[3], 4.0f);
}

TEST_F(Tsf, ThreeFramesOfTwoFeaturesIs36Bytes) {
  TsfWriter w(dir_ / "b.tsf", 2);
  for (int t = 0; t < 3; ++t) w.append_frame(std::vector<double>{1.0 * t, -1.0 * t});
  w.close();
  EXPECT_EQ(fs::file_size(dir_ / "b.tsf"), 36u);
  const auto m = read_tsf(dir_ / "b.tsf");
  EXPECT_EQ(m.series_count(), 2u);
  EXPECT_EQ(m.frame_count(), 3u);
  EXPECT_EQ(m.at(1, 2), -2.0);
}

TEST_F(Tsf, WriterPatchesFrameCountOnDestruction) {
  {
    TsfWriter w(dir_ / "c.tsf", 3);
    for (int t = 0; t < 5; ++t) w.append_frame(std::vector<double>{0.5, 1.5, 2.5 + t});
    EXPECT_EQ(w.frames_written(), 5u);
  }
  const auto m = read_tsf(dir_ / "c.tsf");
  EXPECT_EQ(m.frame_count(), 5u);
  EXPECT_EQ(m.at(2, 4), 6.5);
}

TEST_F(Tsf, WriterRejectsWrongWidthAndNonFinite) {
  TsfWriter w(dir_ / "d.tsf", 2);
  EXPECT_THROW(w.append_frame(std::vector<double>{1.0}), DataError);
  EXPECT_THROW(w.append_frame(std::vector<double>{1.0, NAN}), DataError);
}

TEST_F(Tsf, RoundTripIsExactForFloatValues) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto src = oracle::random_matrix(rng, 1 + trial, 2 + 3 * trial);
    std::vector<double> v(src.values().begin(), src.values().end());
    for (double& x : v) x = static_cast<float>(x);
    const TimeSeriesMatrix m(src.series_count(), src.frame_count(), std::move(v));
    write_tsf(m, dir_ / "r.tsf");
    EXPECT_TRUE(read_tsf(dir_ / "r.tsf") == m);
  }
}

TEST_F(Tsf, BadMagic) {
  spit(dir_ / "x.tsf", std::string("TSF2") + std::string(8 + 16, '\0'));
  const auto msg = message_of([&] { (void)read_tsf(dir_ / "x.tsf"); });
  EXPECT_NE(msg.find("bad magic 'TSF2'"), std::string::npos) << msg;
}

TEST_F(Tsf, TruncatedFile) {
  const TimeSeriesMatrix m(2, 3, {1, 2, 3, 4, 5, 6});
  write_tsf(m, dir_ / "t.tsf");
  auto bytes = slurp(dir_ / "t.tsf");
  bytes.resize(bytes.size() - 3);
  spit(dir_ / "t.tsf", bytes);
  const auto msg = message_of([&] { (void)read_tsf(dir_ / "t.tsf"); });
  EXPECT_NE(msg.find("size mismatch"), std::string::npos) << msg;
  spit(dir_ / "h.tsf", "TSF1\x02");
  EXPECT_THROW((void)read_tsf(dir_ / "h.tsf"), DataError);
}

TEST_F(Tsf, NonFiniteValueRejectedOnRead) {
  const TimeSeriesMatrix m(1, 2, {1, 2});
  write_tsf(m, dir_ / "n.tsf");
  auto bytes = slurp(dir_ / "n.tsf");
  const float nan = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(bytes.data() + 16, &nan, 4);
  spit(dir_ / "n.tsf", bytes);
  EXPECT_NE(message_of([&] { (void)read_tsf(dir_ / "n.tsf"); }).find("non-finite"),
            std::string::npos);
}

TEST_F(Tsf, MissingFile) { EXPECT_THROW((void)read_tsf(dir_ / "nope.tsf"), DataError); }

TEST_F(Manifest, CommentsBlankLinesAndRelativePaths) {
  fs::create_directories(dir_ / "walk");
  write_tsf(TimeSeriesMatrix(1, 2, {1, 2}), dir_ / "walk" / "v1.tsf");
  spit(dir_ / "m.tsv", "# label\tpath\n\nwalk\twalk/v1.tsf\n   \n# trailing\n");
  const auto ds = read_manifest(dir_ / "m.tsv");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.items()[0].label, "walk");
  EXPECT_EQ(ds.items()[0].id, "walk/v1.tsf");
  EXPECT_EQ(ds.items()[0].manifest_line, 3u);
  EXPECT_EQ(ds.load_matrix(0).frame_count(), 2u);
}

TEST_F(Manifest, DuplicatePathNamesBothLines) {
  spit(dir_ / "m.tsv", "a\tx.tsf\nb\ty.tsf\nc\tx.tsf\n");
  const auto msg = message_of([&] { (void)read_manifest(dir_ / "m.tsv"); });
  EXPECT_NE(msg.find("duplicate path 'x.tsf'"), std::string::npos) << msg;
  EXPECT_NE(msg.find('1'), std::string::npos);
  EXPECT_NE(msg.find('3'), std::string::npos);
}

TEST_F(Manifest, MalformedLines) {
  spit(dir_ / "a.tsv", "no-tab-here\n");
  EXPECT_THROW((void)read_manifest(dir_ / "a.tsv"), DataError);
  spit(dir_ / "b.tsv", "\tpath.tsf\n");
  EXPECT_THROW((void)read_manifest(dir_ / "b.tsv"), DataError);
  EXPECT_THROW((void)read_manifest(dir_ / "missing.tsv"), DataError);
}

TEST_F(Manifest, MissingReferencedFileReportsLine) {
  spit(dir_ / "m.tsv", "# header\nrun\tgone.tsf\n");
  const auto ds = read_manifest(dir_ / "m.tsv");
  const auto msg = message_of([&] { (void)ds.load_matrix(0); });
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("gone.tsf"), std::string::npos) << msg;
}

TEST_F(Manifest, WriteThenRead) {
  write_tsf(TimeSeriesMatrix(1, 2, {1, 2}), dir_ / "p.tsf");
  write_tsf(TimeSeriesMatrix(1, 2, {3, 4}), dir_ / "q.tsf");
  write_manifest(dir_ / "m.tsv", {{"jump", "p.tsf"}, {"run", "q.tsf"}});
  const auto ds = read_manifest(dir_ / "m.tsv");
  EXPECT_EQ(ds.class_set(), (std::vector<std::string>{"jump", "run"}));
  EXPECT_EQ(ds.load_matrix(1).at(0, 1), 4.0);
}

TEST(Dataset, RejectsDuplicatesAndEmptyLabels) {
  LabeledDataset ds;
  VideoItem a;
  a.id = "a";
  a.label = "x";
  a.matrix = std::make_shared<const TimeSeriesMatrix>(1, 2, std::vector<double>{1, 2});
  ds.add(a);
  EXPECT_THROW(ds.add(a), DataError);
  VideoItem b = a;
  b.id = "b";
  b.label = "";
  EXPECT_THROW(ds.add(b), DataError);
}

TEST_F(Descriptors, RoundTripIsBitExact) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  DescriptorSet set;
  TcfLayout layout;
  layout.correlated_rows = 4;
  layout.windows = 2;
  layout.gamma = 1;
  layout.series = 8;
  set.layout = layout;
  for (int i = 0; i < 5; ++i) {
    set.ids.push_back("clip" + std::to_string(i));
    set.labels.push_back(i % 2 ? "a" : "b");
    std::vector<double> v(20);
    for (double& x : v) x = g(rng);
    v[3] = 0.1;
    set.vectors.push_back(v);
  }
  write_descriptors(dir_ / "d.tcd", set);
  const auto back = read_descriptors(dir_ / "d.tcd");
  EXPECT_EQ(back.ids, set.ids);
  EXPECT_EQ(back.labels, set.labels);
  EXPECT_EQ(back.vectors, set.vectors);
  ASSERT_TRUE(back.layout.has_value());
  EXPECT_TRUE(*back.layout == layout);
}

TEST_F(Descriptors, CorruptFiles) {
  DescriptorSet set;
  set.ids = {"a"};
  set.labels = {"x"};
  set.vectors = {{1.0, 2.0}};
  write_descriptors(dir_ / "d.tcd", set);
  auto bytes = slurp(dir_ / "d.tcd");
  spit(dir_ / "t.tcd", bytes.substr(0, bytes.size() - 1));
  EXPECT_THROW((void)read_descriptors(dir_ / "t.tcd"), DataError);
  bytes[0] = 'X';
  spit(dir_ / "m.tcd", bytes);
  EXPECT_THROW((void)read_descriptors(dir_ / "m.tcd"), DataError);
  DescriptorSet ragged = set;
  ragged.ids.push_back("b");
  ragged.labels.push_back("y");
  ragged.vectors.push_back({1.0});
  EXPECT_THROW(write_descriptors(dir_ / "r.tcd", ragged), DataError);
}

TEST_F(ModelFile, RoundTripReproducesPredictionsExactly) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> x;
  std::vector<std::string> y;
  for (int i = 0; i < 45; ++i) {
    std::vector<double> p(6);
    for (double& v : p) v = g(rng) + (i % 3) * 1.5;
    x.push_back(p);
    y.push_back("c" + std::to_string(i % 3));
  }
  TrainConfig cfg;
  cfg.threads = 1;
  cfg.normalize = Normalization::ZScore;
  auto model = train_ovr(x, y, cfg);
  TcfLayout layout;
  layout.correlated_rows = 3;
  layout.windows = 2;
  layout.gamma = 0;
  model.layout = layout;
  save_model(dir_ / "model.json", model);
  const auto back = load_model(dir_ / "model.json");
  EXPECT_TRUE(back == model);
  for (const auto& p : x) {
    EXPECT_EQ(decision_scores(back, p), decision_scores(model, p));
  }
}

TEST_F(ModelFile, MalformedModels) {
  spit(dir_ / "a.json", "{not json");
  EXPECT_THROW((void)load_model(dir_ / "a.json"), DataError);
  spit(dir_ / "b.json", R"({"format":"something-else","version":1})");
  EXPECT_THROW((void)load_model(dir_ / "b.json"), DataError);
  spit(dir_ / "c.json",
       R"({"format":"tcf-linear-ovr","version":1,"classes":["a","b"],"weights":[[1.0]],"biases":[0.0,0.0],"normalization":"none"})");
  EXPECT_THROW((void)load_model(dir_ / "c.json"), DataError);
  EXPECT_THROW((void)load_model(dir_ / "missing.json"), DataError);
}

TEST_F(Synth, SameSeedGivesByteIdenticalCorpus) {
  DefaultSynthOptions o;
  o.classes = 2;
  o.videos_per_class = 3;
  o.channels = 8;
  o.min_frames = 10;
  o.max_frames = 20;
  const auto spec = default_synth_spec(o);
  const auto m1 = write_corpus(synth_generate(spec), dir_ / "one");
  const auto m2 = write_corpus(synth_generate(spec), dir_ / "two");
  EXPECT_EQ(slurp(m1), slurp(m2));
  const auto corpus = read_manifest(m1);
  ASSERT_EQ(corpus.size(), 6u);
  for (const auto& item : corpus.items()) {
    EXPECT_EQ(slurp(dir_ / "one" / item.id), slurp(dir_ / "two" / item.id)) << item.id;
  }
  o.seed = 8;
  const auto other = synth_generate(default_synth_spec(o));
  EXPECT_FALSE(other.load_matrix(0) == synth_generate(spec).load_matrix(0));
}

TEST_F(Synth, SpecJsonRoundTrip) {
  const auto spec = default_synth_spec({});
  const auto back = synth_spec_from_json(synth_spec_to_json(spec));
  EXPECT_EQ(synth_spec_to_json(back), synth_spec_to_json(spec));
  EXPECT_THROW((void)synth_spec_from_json(nlohmann::json{{"channels", 4}}), DataError);
  const auto via_default = synth_spec_from_json(nlohmann::json{{"default", {{"classes", 4}}}});
  EXPECT_EQ(via_default.classes.size(), 4u);
}

namespace {

// Channels driven by the same latent under a class blueprint.
bool same_driver(const ClassBlueprint& bp, std::size_t a, std::size_t b) {
  std::size_t da = SIZE_MAX, db = SIZE_MAX;
  for (const auto& l : bp.loadings) {
    if (l.channel == a) da = l.driver;
    if (l.channel == b) db = l.driver;
  }
  return da == db;
}

}  // namespace

TEST(SynthSoundness, NoiselessChannelsSharingALatentCorrelatePerfectly) {
  DefaultSynthOptions o;
  o.classes = 3;
  o.videos_per_class = 2;
  o.channels = 16;
  o.noise = 0.0;
  o.periodic_channels = 0;
  const auto spec = default_synth_spec(o);
  const auto ds = synth_generate(spec);
  std::size_t tied_pairs = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto m = ds.load_matrix(i);
    const auto& bp = spec.classes[i / o.videos_per_class];
    ASSERT_EQ(bp.label, ds.items()[i].label);
    for (std::size_t a = 0; a < m.series_count(); ++a) {
      for (std::size_t b = a + 1; b < m.series_count(); ++b) {
        if (!same_driver(bp, a, b)) continue;
        EXPECT_NEAR(pearson(m.row(a), m.row(b)), 1.0, 1e-9) << bp.label << " " << a << "," << b;
        ++tied_pairs;
      }
    }
  }
  EXPECT_GT(tied_pairs, 0u);
}

TEST(SynthSoundness, LowNoiseCorrelationsFollowTheTemplate) {
  DefaultSynthOptions o;
  o.classes = 3;
  o.videos_per_class = 5;
  o.channels = 16;
  o.noise = 0.5;
  o.periodic_channels = 0;
  const auto spec = default_synth_spec(o);
  const auto ds = synth_generate(spec);
  std::size_t agree = 0, total = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto m = ds.load_matrix(i);
    const auto& bp = spec.classes[i / o.videos_per_class];
    for (std::size_t a = 0; a < m.series_count(); ++a) {
      for (std::size_t b = a + 1; b < m.series_count(); ++b) {
        // shared latent: 1 / (1 + 0.25) = 0.8 in expectation; independent: 0
        agree += (pearson(m.row(a), m.row(b)) > 0.4) == same_driver(bp, a, b);
        ++total;
      }
    }
  }
  EXPECT_GE(static_cast<double>(agree) / total, 0.99);
}

TEST(SynthSoundness, ClassesCoupleDifferentChannelPairs) {
  const auto spec = default_synth_spec({});
  for (std::size_t c = 0; c + 1 < spec.classes.size(); ++c) {
    bool differs = false;
    for (std::size_t a = 0; a < spec.channels && !differs; ++a)
      for (std::size_t b = a + 1; b < spec.channels && !differs; ++b)
        differs = same_driver(spec.classes[c], a, b) != same_driver(spec.classes[c + 1], a, b);
    EXPECT_TRUE(differs) << c;
  }
}

TEST(SynthSoundness, ChannelMeansDoNotRevealTheClass) {
  const auto spec = default_synth_spec({});
  const auto ds = synth_generate(spec);
  const auto classes = ds.class_set();
  std::map<std::string, std::vector<double>> mean_of;
  std::map<std::string, std::size_t> count;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto m = ds.load_matrix(i);
    auto& acc = mean_of[ds.items()[i].label];
    acc.resize(m.series_count(), 0.0);
    for (std::size_t ch = 0; ch < m.series_count(); ++ch) {
      double s = 0;
      for (double v : m.row(ch)) s += v;
      acc[ch] += s / m.frame_count();
    }
    ++count[ds.items()[i].label];
  }
  double worst = 0;
  for (std::size_t ch = 0; ch < spec.channels; ++ch) {
    for (const auto& a : classes) {
      for (const auto& b : classes) {
        worst = std::max(worst, std::abs(mean_of[a][ch] / count[a] - mean_of[b][ch] / count[b]));
      }
    }
  }
  EXPECT_LT(worst, 0.05);
}

TEST(SynthSpec, Validation) {
  auto spec = default_synth_spec({});
  spec.classes[0].loadings.push_back({999, 0, 1.0});
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  DefaultSynthOptions o;
  o.classes = 1;
  EXPECT_THROW((void)default_synth_spec(o), std::invalid_argument);
}
