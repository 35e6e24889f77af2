#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tcf/evaluation.hpp"

namespace tcf {

[[nodiscard]] nlohmann::json encoder_config_to_json(const EncoderConfig& cfg);
[[nodiscard]] nlohmann::json train_config_to_json(const TrainConfig& cfg);

/// Machine-readable report; schema documented in docs/formats.md.
[[nodiscard]] nlohmann::json report_to_json(const EvalReport& report);

/// Mean accuracy followed by the confusion matrix as a fixed-width table.
[[nodiscard]] std::string format_report(const EvalReport& report);

void write_report(const std::filesystem::path& path, const EvalReport& report);

/// Tab-separated sweep table with a header line.
[[nodiscard]] std::string sweep_to_tsv(const std::vector<SweepRow>& rows);

}  // namespace tcf
