#include "tcf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "tcf/errors.hpp"
#include "tcf/manifest.hpp"
#include "tcf/seeding.hpp"
#include "tcf/tsf.hpp"

namespace tcf {

using nlohmann::json;

void SynthSpec::validate() const {
  if (channels < 1) throw std::invalid_argument("synth: channels must be >= 1");
  if (videos_per_class < 1) throw std::invalid_argument("synth: videos_per_class must be >= 1");
  if (classes.empty()) throw std::invalid_argument("synth: no classes");
  if (baseline_spread < 0.0 || offset_jitter < 0.0) {
    throw std::invalid_argument("synth: spreads must be non-negative");
  }
  for (const auto& c : classes) {
    const std::string who = "synth class '" + c.label + "': ";
    if (c.label.empty()) throw std::invalid_argument("synth: empty class label");
    if (c.min_frames < 2 || c.max_frames < c.min_frames) {
      throw std::invalid_argument(who + "frame range must satisfy 2 <= min <= max");
    }
    if (!(c.noise >= 0.0)) throw std::invalid_argument(who + "noise must be >= 0");
    for (const auto& l : c.loadings) {
      if (l.channel >= channels || l.driver >= c.drivers) {
        throw std::invalid_argument(who + "loading refers to a missing channel or driver");
      }
    }
    for (const auto& p : c.periodic) {
      if (p.channel >= channels || !(p.period > 0.0)) {
        throw std::invalid_argument(who + "bad periodic component");
      }
    }
  }
}

SynthSpec default_synth_spec(const DefaultSynthOptions& o) {
  if (o.classes < 2) throw std::invalid_argument("synth: default spec needs >= 2 classes");
  SynthSpec spec;
  spec.channels = o.channels;
  spec.videos_per_class = o.videos_per_class;
  spec.seed = o.seed;

  if (o.block_size < 1) throw std::invalid_argument("synth: block_size must be >= 1");
  const std::size_t factors = std::max<std::size_t>(o.classes, 3);
  std::mt19937_64 rng(derive_seed(o.seed, 0xB1));
  std::uniform_int_distribution<std::size_t> pick(0, factors - 1);
  std::vector<std::size_t> factor(o.channels);
  for (std::size_t begin = 0; begin < o.channels; begin += o.block_size) {
    const std::size_t f = pick(rng);
    const std::size_t end = std::min(o.channels, begin + o.block_size);
    std::fill(factor.begin() + static_cast<std::ptrdiff_t>(begin),
              factor.begin() + static_cast<std::ptrdiff_t>(end), f);
  }
  constexpr double kPeriods[] = {4.0, 6.0, 8.0, 10.0, 12.0};
  for (std::size_t c = 0; c < o.classes; ++c) {
    ClassBlueprint bp;
    bp.label = "class" + std::to_string(c);
    bp.min_frames = o.min_frames;
    bp.max_frames = o.max_frames;
    // driver 0 is the shared latent, driver f + 1 belongs to factor f
    bp.drivers = factors + 1;
    bp.noise = o.noise;
    for (std::size_t ch = 0; ch < o.channels; ++ch) {
      const std::size_t f = factor[ch];
      const bool tied = f == c || f == (c + 1) % factors;
      bp.loadings.push_back({ch, tied ? 0 : f + 1, 1.0});
    }
    std::vector<std::size_t> pool(o.channels);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::mt19937_64 prng(derive_seed(o.seed, 0x100 + c));
    std::shuffle(pool.begin(), pool.end(), prng);
    const double period = kPeriods[c % std::size(kPeriods)];
    for (std::size_t p = 0; p < std::min(o.periodic_channels, o.channels); ++p) {
      bp.periodic.push_back({pool[p], period, o.periodic_amplitude});
    }
    spec.classes.push_back(std::move(bp));
  }
  return spec;
}

namespace {

TimeSeriesMatrix generate_video(const SynthSpec& spec, const ClassBlueprint& bp,
                                std::span<const double> baseline, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> frames(bp.min_frames, bp.max_frames);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  const std::size_t n = spec.channels;
  const std::size_t k = frames(rng);
  std::vector<double> latent(bp.drivers * k);
  for (double& z : latent) z = gauss(rng);

  std::vector<double> x(n * k, 0.0);
  for (const auto& l : bp.loadings) {
    for (std::size_t t = 0; t < k; ++t) {
      x[l.channel * k + t] += l.weight * latent[l.driver * k + t];
    }
  }
  for (const auto& p : bp.periodic) {
    const double phi = phase(rng);
    for (std::size_t t = 0; t < k; ++t) {
      x[p.channel * k + t] +=
          p.amplitude * std::cos(2.0 * std::numbers::pi * static_cast<double>(t + 1) / p.period + phi);
    }
  }
  if (bp.noise > 0.0) {
    for (double& v : x) v += bp.noise * gauss(rng);
  }
  for (std::size_t ch = 0; ch < n; ++ch) {
    double* row = x.data() + ch * k;
    const double mean = std::accumulate(row, row + k, 0.0) / static_cast<double>(k);
    const double offset = baseline[ch] + spec.offset_jitter * gauss(rng);
    for (std::size_t t = 0; t < k; ++t) row[t] = row[t] - mean + offset;
  }
  return TimeSeriesMatrix(n, k, std::move(x));
}

}  // namespace

LabeledDataset synth_generate(const SynthSpec& spec) {
  spec.validate();
  std::vector<double> baseline(spec.channels);
  {
    std::mt19937_64 rng(derive_seed(spec.seed, 0xBA5E));
    std::uniform_real_distribution<double> level(0.0, 1.0);
    for (double& b : baseline) b = spec.baseline_spread * level(rng);
  }
  LabeledDataset dataset;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    const auto& bp = spec.classes[c];
    for (std::size_t v = 0; v < spec.videos_per_class; ++v) {
      const std::uint64_t seed = derive_seed(derive_seed(spec.seed, 1 + c), v);
      VideoItem item;
      char name[32];
      std::snprintf(name, sizeof name, "_%03zu.tsf", v);
      item.id = bp.label + "/" + bp.label + name;
      item.label = bp.label;
      item.matrix =
          std::make_shared<const TimeSeriesMatrix>(generate_video(spec, bp, baseline, seed));
      dataset.add(std::move(item));
    }
  }
  return dataset;
}

std::filesystem::path write_corpus(const LabeledDataset& dataset, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& item = dataset.items()[i];
    const auto target = dir / item.id;
    std::filesystem::create_directories(target.parent_path());
    write_tsf(dataset.load_matrix(i), target);
    entries.push_back({item.label, item.id});
  }
  const auto manifest = dir / "manifest.tsv";
  write_manifest(manifest, entries);
  return manifest;
}

json synth_spec_to_json(const SynthSpec& spec) {
  json classes = json::array();
  for (const auto& c : spec.classes) {
    json loadings = json::array();
    for (const auto& l : c.loadings) {
      loadings.push_back({{"channel", l.channel}, {"driver", l.driver}, {"weight", l.weight}});
    }
    json periodic = json::array();
    for (const auto& p : c.periodic) {
      periodic.push_back(
          {{"channel", p.channel}, {"period", p.period}, {"amplitude", p.amplitude}});
    }
    classes.push_back({{"label", c.label},
                       {"frames", {c.min_frames, c.max_frames}},
                       {"drivers", c.drivers},
                       {"noise", c.noise},
                       {"loadings", loadings},
                       {"periodic", periodic}});
  }
  return json{{"channels", spec.channels},
              {"videos_per_class", spec.videos_per_class},
              {"seed", spec.seed},
              {"baseline_spread", spec.baseline_spread},
              {"offset_jitter", spec.offset_jitter},
              {"classes", classes}};
}

SynthSpec synth_spec_from_json(const json& j) {
  try {
    if (j.contains("default")) {
      const auto& d = j.at("default");
      DefaultSynthOptions o;
      o.classes = d.value("classes", o.classes);
      o.videos_per_class = d.value("videos_per_class", o.videos_per_class);
      o.channels = d.value("channels", o.channels);
      o.min_frames = d.value("min_frames", o.min_frames);
      o.max_frames = d.value("max_frames", o.max_frames);
      o.noise = d.value("noise", o.noise);
      o.periodic_channels = d.value("periodic_channels", o.periodic_channels);
      o.periodic_amplitude = d.value("periodic_amplitude", o.periodic_amplitude);
      o.block_size = d.value("block_size", o.block_size);
      o.seed = d.value("seed", o.seed);
      return default_synth_spec(o);
    }
    SynthSpec spec;
    spec.channels = j.at("channels").get<std::size_t>();
    spec.videos_per_class = j.at("videos_per_class").get<std::size_t>();
    spec.seed = j.value("seed", spec.seed);
    spec.baseline_spread = j.value("baseline_spread", spec.baseline_spread);
    spec.offset_jitter = j.value("offset_jitter", spec.offset_jitter);
    for (const auto& jc : j.at("classes")) {
      ClassBlueprint c;
      c.label = jc.at("label").get<std::string>();
      const auto frames = jc.at("frames").get<std::vector<std::size_t>>();
      if (frames.size() != 2) throw DataError("synth spec: 'frames' must be [min, max]");
      c.min_frames = frames[0];
      c.max_frames = frames[1];
      c.drivers = jc.value("drivers", std::size_t{1});
      c.noise = jc.value("noise", 0.0);
      for (const auto& jl : jc.value("loadings", json::array())) {
        c.loadings.push_back({jl.at("channel").get<std::size_t>(),
                              jl.at("driver").get<std::size_t>(), jl.value("weight", 1.0)});
      }
      for (const auto& jp : jc.value("periodic", json::array())) {
        c.periodic.push_back({jp.at("channel").get<std::size_t>(), jp.at("period").get<double>(),
                              jp.value("amplitude", 1.0)});
      }
      spec.classes.push_back(std::move(c));
    }
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw DataError(std::string("synth spec: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
}

}  // namespace tcf
