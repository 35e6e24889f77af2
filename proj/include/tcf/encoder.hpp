#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcf/correlation.hpp"
#include "tcf/matrix.hpp"

namespace tcf {

/// Which series feed the cross-correlation part of the descriptor.
enum class SelectionScheme {
  Group,    ///< all series, interleaved into lambda groups
  First,    ///< the first m series
  Random,   ///< m distinct series drawn with the config seed
  Uniform,  ///< m series at a uniform stride
};

[[nodiscard]] std::string_view to_string(SelectionScheme scheme) noexcept;
[[nodiscard]] std::optional<SelectionScheme> parse_selection_scheme(std::string_view text);

struct EncoderConfig {
  std::size_t lambda = 64;  ///< group count (Group scheme)
  std::size_t windows = 16;
  std::size_t gamma = 6;    ///< autocorrelation lag count
  std::size_t stride = 1;   ///< lag spacing; lags are stride, 2*stride, ..., gamma*stride
  SelectionScheme selection = SelectionScheme::Group;
  std::size_t selection_m = 64;  ///< series kept by First/Random/Uniform
  DegeneratePolicy policy = DegeneratePolicy::ZeroFill;
  std::uint64_t seed = 0;   ///< only consumed by Random selection

  /// Number of rows entering the pairwise correlation.
  [[nodiscard]] std::size_t correlated_rows() const noexcept {
    return selection == SelectionScheme::Group ? lambda : selection_m;
  }
  /// Throws std::invalid_argument for values that are invalid irrespective of the data.
  void validate() const;
};

/**
 * lambda rows of length delta*k. Row g interleaves its delta source series
 * frame by frame: frame 1 of each member, then frame 2 of each, and so on.
 */
struct GroupedMatrix {
  std::size_t lambda = 0;
  std::size_t delta = 0;
  std::size_t row_length = 0;
  std::vector<double> values;

  [[nodiscard]] std::span<const double> row(std::size_t g) const {
    return {values.data() + g * row_length, row_length};
  }
};

/// Half-open range [begin, end) of 0-based sample indices.
struct Interval {
  std::size_t begin = 0;
  std::size_t end = 0;

  [[nodiscard]] std::size_t length() const noexcept { return end - begin; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Layout metadata carried with every descriptor so its entries can be interpreted.
struct TcfLayout {
  std::size_t correlated_rows = 0;  ///< lambda for Group, m otherwise
  std::size_t windows = 0;
  std::size_t gamma = 0;
  std::size_t stride = 0;
  std::size_t series = 0;  ///< n
  std::size_t frames = 0;  ///< k
  SelectionScheme selection = SelectionScheme::Group;
  std::string ordering;

  friend bool operator==(const TcfLayout&, const TcfLayout&) = default;
};

/// Fixed entry ordering recorded in every layout.
inline constexpr std::string_view kTcfOrdering =
    "ccf:window-major,pairs-lexicographic(a<b);acf:series-major,lag-ascending";

struct TcfVector {
  std::vector<double> ccf;
  std::vector<double> acf;
  std::vector<double> combined;  ///< ccf followed by acf
  TcfLayout layout;
  bool acf_lag_exceeded = false;  ///< some lag reached past the sequence end
};

/// lambda must divide n; otherwise std::invalid_argument naming both.
[[nodiscard]] GroupedMatrix group(const TimeSeriesMatrix& ts, std::size_t lambda);

/// 0-based indices of the series kept by a subset scheme, ascending.
[[nodiscard]] std::vector<std::size_t> select_indices(std::size_t n, SelectionScheme scheme,
                                                      std::size_t m, std::uint64_t seed);

[[nodiscard]] TimeSeriesMatrix select_subset(const TimeSeriesMatrix& ts, SelectionScheme scheme,
                                             std::size_t m, std::uint64_t seed);

/**
 * Splits [0, series_len) into `windows` contiguous blocks whose lengths differ
 * by at most one; the longer blocks come first.
 *
 * @throws std::invalid_argument if windows == 0 or series_len < 2 * windows
 */
[[nodiscard]] std::vector<Interval> partition(std::size_t series_len, std::size_t windows);

[[nodiscard]] std::vector<double> encode_ccf(const TimeSeriesMatrix& ts, const EncoderConfig& cfg);
[[nodiscard]] std::vector<double> encode_acf(const TimeSeriesMatrix& ts, const EncoderConfig& cfg,
                                             bool* lag_exceeded = nullptr);
[[nodiscard]] TcfVector encode_tcf(const TimeSeriesMatrix& ts, const EncoderConfig& cfg);

/// n*gamma + windows * r(r-1)/2 with r = correlated_rows(); no allocation.
[[nodiscard]] std::uint64_t tcf_dimension(std::uint64_t n, const EncoderConfig& cfg) noexcept;
[[nodiscard]] std::uint64_t ccf_dimension(std::uint64_t rows, std::uint64_t windows) noexcept;

}  // namespace tcf
