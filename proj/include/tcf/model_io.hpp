#pragma once

#include <filesystem>
#include <json.hpp>

#include "tcf/classifier.hpp"
#include "tcf/encoder.hpp"

namespace tcf {

inline constexpr int kModelFormatVersion = 1;

[[nodiscard]] nlohmann::json layout_to_json(const TcfLayout& layout);
[[nodiscard]] TcfLayout layout_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json model_to_json(const LinearOvrModel& model);
/// Throws DataError on a malformed or unsupported document.
[[nodiscard]] LinearOvrModel model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const LinearOvrModel& model);
[[nodiscard]] LinearOvrModel load_model(const std::filesystem::path& path);

}  // namespace tcf
