#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>

#include "tcf/matrix.hpp"

namespace tcf {

// TSF layout, all little-endian:
//   bytes 0..3   magic "TSF1"
//   bytes 4..7   n (u32)   feature count
//   bytes 8..11  k (u32)   frame count
//   then n*k IEEE-754 binary32 values, frame-major (frame 1's n values first).
inline constexpr std::size_t kTsfHeaderSize = 12;

/// Streaming writer; frames are appended one at a time and k is patched on close.
class TsfWriter {
 public:
  TsfWriter(const std::filesystem::path& path, std::uint32_t n);
  TsfWriter(const TsfWriter&) = delete;
  TsfWriter& operator=(const TsfWriter&) = delete;
  ~TsfWriter();

  void append_frame(std::span<const double> frame);
  /// Patches the frame count into the header and flushes. Idempotent.
  void close();
  [[nodiscard]] std::uint32_t frames_written() const noexcept { return frames_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::uint32_t n_;
  std::uint32_t frames_ = 0;
  bool closed_ = false;
};

/// Throws DataError on I/O failure or values not representable as finite binary32.
void write_tsf(const TimeSeriesMatrix& matrix, const std::filesystem::path& path);

/// Throws DataError on bad magic, size mismatch, or non-finite payload.
[[nodiscard]] TimeSeriesMatrix read_tsf(const std::filesystem::path& path);

}  // namespace tcf
