#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tcf/matrix.hpp"

namespace tcf {

/// A labelled video: either an in-memory matrix or a TSF file loaded on demand.
struct VideoItem {
  std::string id;
  std::string label;
  std::filesystem::path source;       ///< TSF file, if the matrix is not held in memory
  std::size_t manifest_line = 0;      ///< 1-based, 0 when not from a manifest
  std::shared_ptr<const TimeSeriesMatrix> matrix;
};

class LabeledDataset {
 public:
  /// Throws DataError on a duplicate id or empty label.
  void add(VideoItem item);

  [[nodiscard]] const std::vector<VideoItem>& items() const noexcept { return items_; }
  [[nodiscard]] std::size_t size() const noexcept { return items_.size(); }
  [[nodiscard]] bool empty() const noexcept { return items_.empty(); }
  /// Sorted distinct labels.
  [[nodiscard]] std::vector<std::string> class_set() const;

  /// The item's matrix, reading its TSF file if needed (not cached).
  [[nodiscard]] TimeSeriesMatrix load_matrix(std::size_t index) const;

 private:
  std::vector<VideoItem> items_;
};

}  // namespace tcf
