#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tcf {

/// How correlations that are mathematically undefined (a zero-variance
/// series) are reported. ZeroFill is the only mode: they become 0.
enum class DegeneratePolicy { ZeroFill };

/**
 * A series with its mean removed, ready for repeated correlation.
 *
 * `constant` is set when every input value is identical; the deviations are
 * then all exactly zero regardless of rounding in the mean.
 */
struct CenteredSeries {
  std::vector<double> deviations;
  double mean = 0.0;
  double sum_squares = 0.0;  ///< sum of squared deviations
  bool constant = false;
};

/// Two-pass centering. Throws std::invalid_argument on non-finite values.
[[nodiscard]] CenteredSeries center(std::span<const double> values);

/// Pearson coefficient of two already-centered series of equal length.
[[nodiscard]] double pearson_centered(const CenteredSeries& a, const CenteredSeries& b,
                                      DegeneratePolicy policy = DegeneratePolicy::ZeroFill);

/**
 * Sample Pearson correlation between two equal-length series.
 *
 * Uses the (k-1) s_a s_b normalisation, i.e. the usual sample coefficient.
 * A zero-variance input yields 0 under ZeroFill. The result is clamped to
 * [-1, 1] to absorb rounding.
 *
 * @throws std::invalid_argument on length mismatch, fewer than two samples,
 *         or non-finite input
 */
[[nodiscard]] double pearson(std::span<const double> a, std::span<const double> b,
                             DegeneratePolicy policy = DegeneratePolicy::ZeroFill);

struct AcfResult {
  std::vector<double> values;  ///< one coefficient per requested lag
  bool lag_exceeded = false;   ///< some lag was >= series length and zero-filled
};

/**
 * Biased sample autocorrelation at the given lags:
 * r(l) = sum_{t<k-l} (a_t - mean)(a_{t+l} - mean) / sum_t (a_t - mean)^2.
 *
 * Lags >= length are emitted as 0 and flagged in `lag_exceeded`.
 *
 * @throws std::invalid_argument if the series has fewer than two samples,
 *         contains non-finite values, or a lag is zero
 */
[[nodiscard]] AcfResult sample_acf(std::span<const double> a, std::span<const std::size_t> lags,
                                   DegeneratePolicy policy = DegeneratePolicy::ZeroFill);

/// Same estimator on a pre-centered series; lags must be >= 1.
[[nodiscard]] AcfResult sample_acf_centered(const CenteredSeries& a,
                                            std::span<const std::size_t> lags,
                                            DegeneratePolicy policy = DegeneratePolicy::ZeroFill);

}  // namespace tcf
