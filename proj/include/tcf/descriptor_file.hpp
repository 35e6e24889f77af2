#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tcf/encoder.hpp"

namespace tcf {

/**
 * A batch of encoded descriptors, one per video, sharing a layout.
 *
 * On disk ("TCD1", little-endian):
 *   magic "TCD1" | u32 header_bytes | UTF-8 JSON header
 *   {"version":1,"count":c,"dimension":d,"layout":{...}|null,"ids":[...],"labels":[...]}
 *   | c*d IEEE-754 binary64 values, descriptor-major.
 */
struct DescriptorSet {
  std::optional<TcfLayout> layout;
  std::vector<std::string> ids;
  std::vector<std::string> labels;  ///< may be empty strings when unknown
  std::vector<std::vector<double>> vectors;
};

void write_descriptors(const std::filesystem::path& path, const DescriptorSet& set);
/// Throws DataError on malformed files.
[[nodiscard]] DescriptorSet read_descriptors(const std::filesystem::path& path);

}  // namespace tcf
