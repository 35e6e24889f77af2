#include "tcf/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tcf {

namespace {

double clamp_unit(double r) { return std::clamp(r, -1.0, 1.0); }

}  // namespace

CenteredSeries center(std::span<const double> values) {
  CenteredSeries out;
  if (values.empty()) {
    return out;
  }
  double sum = 0.0;
  bool constant = true;
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("series contains a non-finite value");
    }
    sum += v;
    constant = constant && v == values.front();
  }
  out.mean = sum / static_cast<double>(values.size());
  out.constant = constant;
  out.deviations.resize(values.size(), 0.0);
  if (constant) {
    out.mean = values.front();
    return out;
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - out.mean;
    out.deviations[i] = d;
    ss += d * d;
  }
  out.sum_squares = ss;
  return out;
}

double pearson_centered(const CenteredSeries& a, const CenteredSeries& b, DegeneratePolicy) {
  if (a.deviations.size() != b.deviations.size()) {
    throw std::invalid_argument("pearson: length mismatch (" +
                                std::to_string(a.deviations.size()) + " vs " +
                                std::to_string(b.deviations.size()) + ")");
  }
  if (a.constant || b.constant || a.sum_squares == 0.0 || b.sum_squares == 0.0) {
    return 0.0;
  }
  double cross = 0.0;
  for (std::size_t i = 0; i < a.deviations.size(); ++i) {
    cross += a.deviations[i] * b.deviations[i];
  }
  return clamp_unit(cross / (std::sqrt(a.sum_squares) * std::sqrt(b.sum_squares)));
}

double pearson(std::span<const double> a, std::span<const double> b, DegeneratePolicy policy) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("pearson: length mismatch (" + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) {
    throw std::invalid_argument("pearson: need at least 2 samples");
  }
  return pearson_centered(center(a), center(b), policy);
}

AcfResult sample_acf_centered(const CenteredSeries& a, std::span<const std::size_t> lags,
                              DegeneratePolicy) {
  const std::size_t k = a.deviations.size();
  AcfResult out;
  out.values.reserve(lags.size());
  for (std::size_t lag : lags) {
    if (lag == 0) {
      throw std::invalid_argument("sample_acf: lags must be positive");
    }
    if (lag >= k) {
      out.lag_exceeded = true;
      out.values.push_back(0.0);
      continue;
    }
    if (a.constant || a.sum_squares == 0.0) {
      out.values.push_back(0.0);
      continue;
    }
    double num = 0.0;
    for (std::size_t t = 0; t + lag < k; ++t) {
      num += a.deviations[t] * a.deviations[t + lag];
    }
    out.values.push_back(clamp_unit(num / a.sum_squares));
  }
  return out;
}

AcfResult sample_acf(std::span<const double> a, std::span<const std::size_t> lags,
                     DegeneratePolicy policy) {
  if (a.size() < 2) {
    throw std::invalid_argument("sample_acf: need at least 2 samples");
  }
  return sample_acf_centered(center(a), lags, policy);
}

}  // namespace tcf
