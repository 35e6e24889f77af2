#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tcf/dataset.hpp"

namespace tcf {

struct ManifestEntry {
  std::string label;
  std::string path;  ///< relative to the manifest's directory
};

/**
 * Reads a tab-separated `label<TAB>path` manifest. Blank lines and lines
 * starting with '#' are skipped. Item ids are the paths as written.
 * Matrices are not read here; a missing file surfaces when it is loaded.
 *
 * Throws DataError for malformed lines and duplicate paths (naming both lines).
 */
[[nodiscard]] LabeledDataset read_manifest(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

}  // namespace tcf
