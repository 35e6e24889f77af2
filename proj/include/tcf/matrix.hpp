#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tcf {

/// One frame's feature descriptor (length n).
using FrameDescriptor = std::vector<double>;

/**
 * n feature series by k frames, stored row-major: row i is the activation of
 * feature i over time.
 *
 * Invariants: n >= 1, k >= 2, every entry finite. Constructors enforce them
 * and throw std::invalid_argument otherwise.
 */
class TimeSeriesMatrix {
 public:
  TimeSeriesMatrix() = default;
  /// `values` holds n*k entries, series-major.
  TimeSeriesMatrix(std::size_t n, std::size_t k, std::vector<double> values);

  [[nodiscard]] std::size_t series_count() const noexcept { return n_; }
  [[nodiscard]] std::size_t frame_count() const noexcept { return k_; }
  [[nodiscard]] bool empty() const noexcept { return n_ == 0; }

  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * k_, k_};
  }
  [[nodiscard]] double at(std::size_t i, std::size_t t) const { return values_[i * k_ + t]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Copy of the given rows, in the given order.
  [[nodiscard]] TimeSeriesMatrix select_rows(std::span<const std::size_t> rows) const;

  friend bool operator==(const TimeSeriesMatrix&, const TimeSeriesMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<double> values_;
};

/// Stacks per-frame descriptors into the series matrix (a transpose).
[[nodiscard]] TimeSeriesMatrix build_matrix(std::span<const FrameDescriptor> frames);

}  // namespace tcf
