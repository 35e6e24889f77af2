#include "tcf/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tcf {

TimeSeriesMatrix::TimeSeriesMatrix(std::size_t n, std::size_t k, std::vector<double> values)
    : n_(n), k_(k), values_(std::move(values)) {
  if (n_ < 1) {
    throw std::invalid_argument("time series matrix needs at least one series");
  }
  if (k_ < 2) {
    throw std::invalid_argument("time series matrix needs at least 2 frames, got " +
                                std::to_string(k_));
  }
  if (values_.size() != n_ * k_) {
    throw std::invalid_argument("time series matrix: expected " + std::to_string(n_ * k_) +
                                " values, got " + std::to_string(values_.size()));
  }
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    if (!std::isfinite(values_[idx])) {
      throw std::invalid_argument("time series matrix: non-finite value at series " +
                                  std::to_string(idx / k_) + ", frame " +
                                  std::to_string(idx % k_));
    }
  }
}

TimeSeriesMatrix TimeSeriesMatrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> out;
  out.reserve(rows.size() * k_);
  for (std::size_t r : rows) {
    if (r >= n_) {
      throw std::out_of_range("row index " + std::to_string(r) + " out of range");
    }
    auto src = row(r);
    out.insert(out.end(), src.begin(), src.end());
  }
  return TimeSeriesMatrix(rows.size(), k_, std::move(out));
}

TimeSeriesMatrix build_matrix(std::span<const FrameDescriptor> frames) {
  if (frames.size() < 2) {
    throw std::invalid_argument("build_matrix: need at least 2 frames, got " +
                                std::to_string(frames.size()));
  }
  const std::size_t n = frames.front().size();
  const std::size_t k = frames.size();
  std::vector<double> values(n * k);
  for (std::size_t t = 0; t < k; ++t) {
    if (frames[t].size() != n) {
      throw std::invalid_argument("build_matrix: frame " + std::to_string(t) + " has " +
                                  std::to_string(frames[t].size()) + " features, expected " +
                                  std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      values[i * k + t] = frames[t][i];
    }
  }
  return TimeSeriesMatrix(n, k, std::move(values));
}

}  // namespace tcf
