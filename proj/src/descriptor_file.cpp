#include "tcf/descriptor_file.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>

#include "tcf/errors.hpp"
#include "tcf/model_io.hpp"

namespace tcf {

using nlohmann::json;

void write_descriptors(const std::filesystem::path& path, const DescriptorSet& set) {
  const std::size_t count = set.vectors.size();
  const std::size_t dim = count == 0 ? 0 : set.vectors.front().size();
  if (set.ids.size() != count || (!set.labels.empty() && set.labels.size() != count)) {
    throw DataError("descriptor set: ids/labels do not match the descriptor count");
  }
  for (const auto& v : set.vectors) {
    if (v.size() != dim) {
      throw DataError("descriptor set: descriptors differ in dimension");
    }
  }
  json header{{"version", 1},
              {"count", count},
              {"dimension", dim},
              {"layout", set.layout ? layout_to_json(*set.layout) : json(nullptr)},
              {"ids", set.ids},
              {"labels", set.labels}};
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  auto put_u32 = [&](std::uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
    out.write(b, 4);
  };
  out.write("TCD1", 4);
  put_u32(static_cast<std::uint32_t>(text.size()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const auto& v : set.vectors) {
    for (double x : v) {
      const auto bits = std::bit_cast<std::uint64_t>(x);
      char b[8];
      for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xFFu);
      out.write(b, 8);
    }
  }
  if (!out) {
    throw DataError("failed writing " + path.string());
  }
}

DescriptorSet read_descriptors(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  auto fail = [&](const std::string& why) { return DataError(path.string() + ": " + why); };
  if (bytes.size() < 8 || std::string(bytes.begin(), bytes.begin() + 4) != "TCD1") {
    throw fail("not a descriptor file (bad magic)");
  }
  std::uint64_t header_len = 0;
  for (int i = 0; i < 4; ++i) header_len |= static_cast<std::uint64_t>(bytes[4 + i]) << (8 * i);
  if (8 + header_len > bytes.size()) {
    throw fail("truncated header");
  }
  DescriptorSet set;
  std::size_t count = 0;
  std::size_t dim = 0;
  try {
    const auto header = json::parse(bytes.begin() + 8, bytes.begin() + 8 + header_len);
    if (header.at("version").get<int>() != 1) {
      throw fail("unsupported version");
    }
    count = header.at("count").get<std::size_t>();
    dim = header.at("dimension").get<std::size_t>();
    if (!header.at("layout").is_null()) set.layout = layout_from_json(header.at("layout"));
    set.ids = header.at("ids").get<std::vector<std::string>>();
    set.labels = header.at("labels").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw fail(e.what());
  }
  if (set.ids.size() != count) {
    throw fail("id count disagrees with header");
  }
  const std::uint64_t expected = 8 + header_len + 8ull * count * dim;
  if (bytes.size() != expected) {
    throw fail("size mismatch: expected " + std::to_string(expected) + " bytes, found " +
               std::to_string(bytes.size()));
  }
  const unsigned char* p = bytes.data() + 8 + header_len;
  set.vectors.assign(count, std::vector<double>(dim));
  for (auto& v : set.vectors) {
    for (double& x : v) {
      std::uint64_t bits = 0;
      for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
      x = std::bit_cast<double>(bits);
      p += 8;
    }
  }
  return set;
}

}  // namespace tcf
