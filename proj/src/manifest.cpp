#include "tcf/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "tcf/errors.hpp"

namespace tcf {

LabeledDataset read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open manifest " + path.string());
  }
  const auto base = path.parent_path();
  LabeledDataset dataset;
  std::map<std::string, std::size_t> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t'; })) {
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(lineno) +
                      ": expected 'label<TAB>path'");
    }
    std::string label = line.substr(0, tab);
    std::string rel = line.substr(tab + 1);
    if (label.empty()) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": empty label");
    }
    if (rel.empty()) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": empty path");
    }
    if (auto it = seen.find(rel); it != seen.end()) {
      throw DataError(path.string() + ": duplicate path '" + rel + "' on lines " +
                      std::to_string(it->second) + " and " + std::to_string(lineno));
    }
    seen.emplace(rel, lineno);
    VideoItem item;
    item.id = rel;
    item.label = std::move(label);
    item.source = base / rel;
    item.manifest_line = lineno;
    dataset.add(std::move(item));
  }
  return dataset;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  out << "# label\tpath\n";
  for (const auto& e : entries) {
    out << e.label << '\t' << e.path << '\n';
  }
  if (!out) {
    throw DataError("failed writing " + path.string());
  }
}

}  // namespace tcf
