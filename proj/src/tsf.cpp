#include "tcf/tsf.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "tcf/errors.hpp"

namespace tcf {

namespace {

constexpr std::array<char, 4> kMagic{'T', 'S', 'F', '1'};

void put_u32(char* dst, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) dst[b] = static_cast<char>((v >> (8 * b)) & 0xFFu);
}

std::uint32_t get_u32(const unsigned char* src) {
  return static_cast<std::uint32_t>(src[0]) | (static_cast<std::uint32_t>(src[1]) << 8) |
         (static_cast<std::uint32_t>(src[2]) << 16) | (static_cast<std::uint32_t>(src[3]) << 24);
}

}  // namespace

TsfWriter::TsfWriter(const std::filesystem::path& path, std::uint32_t n)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), n_(n) {
  if (!out_) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  if (n_ == 0) {
    throw DataError("TSF writer: feature count must be positive");
  }
  std::array<char, kTsfHeaderSize> header{};
  std::copy(kMagic.begin(), kMagic.end(), header.begin());
  put_u32(header.data() + 4, n_);
  put_u32(header.data() + 8, 0);
  out_.write(header.data(), header.size());
}

TsfWriter::~TsfWriter() {
  try {
    close();
  } catch (...) {
  }
}

void TsfWriter::append_frame(std::span<const double> frame) {
  if (closed_) {
    throw DataError("TSF writer: append after close");
  }
  if (frame.size() != n_) {
    throw DataError("TSF writer: frame has " + std::to_string(frame.size()) +
                    " values, expected " + std::to_string(n_));
  }
  std::vector<char> buf(4 * frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const auto f = static_cast<float>(frame[i]);
    if (!std::isfinite(f)) {
      throw DataError("TSF writer: value " + std::to_string(frame[i]) + " at frame " +
                      std::to_string(frames_) + " is not a finite 32-bit float");
    }
    put_u32(buf.data() + 4 * i, std::bit_cast<std::uint32_t>(f));
  }
  out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out_) {
    throw DataError("failed writing " + path_.string());
  }
  ++frames_;
}

void TsfWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::array<char, 4> k{};
  put_u32(k.data(), frames_);
  out_.seekp(8);
  out_.write(k.data(), k.size());
  out_.close();
  if (!out_) {
    throw DataError("failed finalising " + path_.string());
  }
}

void write_tsf(const TimeSeriesMatrix& matrix, const std::filesystem::path& path) {
  TsfWriter writer(path, static_cast<std::uint32_t>(matrix.series_count()));
  std::vector<double> frame(matrix.series_count());
  for (std::size_t t = 0; t < matrix.frame_count(); ++t) {
    for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = matrix.at(i, t);
    writer.append_frame(frame);
  }
  writer.close();
}

TimeSeriesMatrix read_tsf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < kTsfHeaderSize) {
    throw DataError(path.string() + ": size mismatch, file has " + std::to_string(bytes.size()) +
                    " bytes, shorter than the 12-byte header");
  }
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    std::string magic(bytes.begin(), bytes.begin() + 4);
    for (char& ch : magic) {
      if (ch < 0x20 || ch > 0x7e) ch = '?';
    }
    throw DataError(path.string() + ": bad magic '" + magic + "', expected 'TSF1'");
  }
  const std::uint64_t n = get_u32(bytes.data() + 4);
  const std::uint64_t k = get_u32(bytes.data() + 8);
  const std::uint64_t expected = kTsfHeaderSize + 4 * n * k;
  if (bytes.size() != expected) {
    throw DataError(path.string() + ": size mismatch, header says n=" + std::to_string(n) +
                    ", k=" + std::to_string(k) + " (" + std::to_string(expected) +
                    " bytes) but file has " + std::to_string(bytes.size()) + " bytes");
  }
  if (n < 1 || k < 2) {
    throw DataError(path.string() + ": need n >= 1 and k >= 2, got n=" + std::to_string(n) +
                    ", k=" + std::to_string(k));
  }
  std::vector<double> values(n * k);
  const unsigned char* payload = bytes.data() + kTsfHeaderSize;
  for (std::uint64_t t = 0; t < k; ++t) {
    for (std::uint64_t i = 0; i < n; ++i) {
      const float f = std::bit_cast<float>(get_u32(payload + 4 * (t * n + i)));
      if (!std::isfinite(f)) {
        throw DataError(path.string() + ": non-finite value at frame " + std::to_string(t) +
                        ", feature " + std::to_string(i));
      }
      values[i * k + t] = static_cast<double>(f);
    }
  }
  return TimeSeriesMatrix(n, k, std::move(values));
}

}  // namespace tcf
