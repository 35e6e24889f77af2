#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcf/dataset.hpp"

namespace tcf {

/// Channel `channel` receives weight * latent driver `driver` (sign of weight = co-variation sign).
struct DriverLoading {
  std::size_t channel = 0;
  std::size_t driver = 0;
  double weight = 1.0;
};

/// Adds amplitude * cos(2 pi t / period + phase) to a channel, phase random per video.
struct PeriodicComponent {
  std::size_t channel = 0;
  double period = 8.0;
  double amplitude = 1.0;
};

struct ClassBlueprint {
  std::string label;
  std::size_t min_frames = 40;
  std::size_t max_frames = 120;
  std::size_t drivers = 1;  ///< independent white N(0,1) latents per video
  std::vector<DriverLoading> loadings;
  std::vector<PeriodicComponent> periodic;
  double noise = 0.0;  ///< sigma of i.i.d. Gaussian noise per sample
};

/**
 * Synthetic corpus description. Every channel is centred over time per video
 * before the shared per-channel baseline and a small class-independent
 * offset are added, so the per-video channel means carry no class
 * information: classes differ only in correlation structure and periodicity.
 */
struct SynthSpec {
  std::size_t channels = 64;
  std::size_t videos_per_class = 20;
  std::uint64_t seed = 7;
  double baseline_spread = 1.0;  ///< per-channel baseline ~ U[0, spread), shared by all videos
  double offset_jitter = 0.02;   ///< per-video per-channel offset ~ N(0, jitter)
  std::vector<ClassBlueprint> classes;

  void validate() const;  ///< throws std::invalid_argument
};

struct DefaultSynthOptions {
  std::size_t classes = 3;
  std::size_t videos_per_class = 20;
  std::size_t channels = 64;
  std::size_t min_frames = 40;
  std::size_t max_frames = 120;
  double noise = 3.0;
  std::size_t periodic_channels = 8;
  double periodic_amplitude = 1.0;
  /// Consecutive channels that share a factor.
  std::size_t block_size = 4;
  std::uint64_t seed = 7;
};

/**
 * Block-factor blueprint family. Channels come in blocks of `block_size`
 * consecutive channels; each block is assigned one of F = max(C, 3) factors,
 * drawn once from the seed and shared by all classes. A factor's channels
 * normally follow that factor's own latent. Class c instead ties factors c
 * and (c+1) mod F to one shared latent, so each class couples a different
 * pair of channel populations. Each class also adds a class-specific period
 * to a few random channels.
 */
[[nodiscard]] SynthSpec default_synth_spec(const DefaultSynthOptions& options);

/// Deterministic in spec.seed; items are named "<label>/<label>_<index>.tsf".
[[nodiscard]] LabeledDataset synth_generate(const SynthSpec& spec);

/// Writes one TSF per item plus "manifest.tsv" into `dir`; returns the manifest path.
std::filesystem::path write_corpus(const LabeledDataset& dataset, const std::filesystem::path& dir);

[[nodiscard]] nlohmann::json synth_spec_to_json(const SynthSpec& spec);
/// Accepts a full spec or {"default": {...DefaultSynthOptions fields...}}.
[[nodiscard]] SynthSpec synth_spec_from_json(const nlohmann::json& j);

}  // namespace tcf
