#include "tcf/dataset.hpp"

#include <set>

#include "tcf/errors.hpp"
#include "tcf/tsf.hpp"

namespace tcf {

void LabeledDataset::add(VideoItem item) {
  if (item.label.empty()) {
    throw DataError("dataset: item '" + item.id + "' has an empty label");
  }
  for (const auto& existing : items_) {
    if (existing.id == item.id) {
      throw DataError("dataset: duplicate video id '" + item.id + "'");
    }
  }
  items_.push_back(std::move(item));
}

std::vector<std::string> LabeledDataset::class_set() const {
  std::set<std::string> labels;
  for (const auto& item : items_) labels.insert(item.label);
  return {labels.begin(), labels.end()};
}

TimeSeriesMatrix LabeledDataset::load_matrix(std::size_t index) const {
  const auto& item = items_.at(index);
  if (item.matrix) {
    return *item.matrix;
  }
  if (!std::filesystem::exists(item.source)) {
    std::string where = item.manifest_line > 0
                            ? "manifest line " + std::to_string(item.manifest_line) + ": "
                            : std::string();
    throw DataError(where + "referenced file " + item.source.string() + " does not exist");
  }
  try {
    return read_tsf(item.source);
  } catch (const DataError& e) {
    if (item.manifest_line > 0) {
      throw DataError("manifest line " + std::to_string(item.manifest_line) + ": " + e.what());
    }
    throw;
  }
}

}  // namespace tcf
