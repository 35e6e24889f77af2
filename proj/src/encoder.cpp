#include "tcf/encoder.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace tcf {

std::string_view to_string(SelectionScheme scheme) noexcept {
  switch (scheme) {
    case SelectionScheme::Group:
      return "group";
    case SelectionScheme::First:
      return "first";
    case SelectionScheme::Random:
      return "random";
    case SelectionScheme::Uniform:
      return "uniform";
  }
  return "group";
}

std::optional<SelectionScheme> parse_selection_scheme(std::string_view text) {
  for (auto s : {SelectionScheme::Group, SelectionScheme::First, SelectionScheme::Random,
                 SelectionScheme::Uniform}) {
    if (text == to_string(s)) {
      return s;
    }
  }
  return std::nullopt;
}

void EncoderConfig::validate() const {
  if (windows < 1) {
    throw std::invalid_argument("encoder: windows (L) must be >= 1");
  }
  if (stride < 1) {
    throw std::invalid_argument("encoder: stride must be >= 1");
  }
  if (selection == SelectionScheme::Group && lambda < 1) {
    throw std::invalid_argument("encoder: lambda must be >= 1");
  }
  if (selection != SelectionScheme::Group && selection_m < 1) {
    throw std::invalid_argument("encoder: selection size m must be >= 1");
  }
}

GroupedMatrix group(const TimeSeriesMatrix& ts, std::size_t lambda) {
  const std::size_t n = ts.series_count();
  if (lambda == 0 || n % lambda != 0) {
    throw std::invalid_argument("group: lambda=" + std::to_string(lambda) +
                                " does not divide n=" + std::to_string(n));
  }
  const std::size_t k = ts.frame_count();
  GroupedMatrix out;
  out.lambda = lambda;
  out.delta = n / lambda;
  out.row_length = out.delta * k;
  out.values.resize(lambda * out.row_length);
  for (std::size_t g = 0; g < lambda; ++g) {
    double* dst = out.values.data() + g * out.row_length;
    for (std::size_t t = 0; t < k; ++t) {
      for (std::size_t d = 0; d < out.delta; ++d) {
        *dst++ = ts.at(g * out.delta + d, t);
      }
    }
  }
  return out;
}

std::vector<std::size_t> select_indices(std::size_t n, SelectionScheme scheme, std::size_t m,
                                        std::uint64_t seed) {
  if (m < 1 || m > n) {
    throw std::invalid_argument("select_subset: m=" + std::to_string(m) +
                                " must lie in [1, n=" + std::to_string(n) + "]");
  }
  std::vector<std::size_t> idx;
  switch (scheme) {
    case SelectionScheme::First:
      idx.resize(m);
      std::iota(idx.begin(), idx.end(), std::size_t{0});
      break;
    case SelectionScheme::Uniform: {
      if (m == 1) {
        idx.push_back(0);
        break;
      }
      // round((j * (n-1)) / (m-1)), halves rounded up
      const std::size_t den = m - 1;
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t num = j * (n - 1);
        idx.push_back((2 * num + den) / (2 * den));
      }
      idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
      for (std::size_t next = 0; idx.size() < m; ++next) {
        if (!std::binary_search(idx.begin(), idx.end(), next)) {
          idx.insert(std::lower_bound(idx.begin(), idx.end(), next), next);
        }
      }
      break;
    }
    case SelectionScheme::Random: {
      std::vector<std::size_t> pool(n);
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      std::mt19937_64 rng(seed);
      for (std::size_t i = 0; i < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(pool[i], pool[pick(rng)]);
      }
      idx.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(m));
      std::sort(idx.begin(), idx.end());
      break;
    }
    case SelectionScheme::Group:
      throw std::invalid_argument("select_subset: Group is not a subset scheme");
  }
  return idx;
}

TimeSeriesMatrix select_subset(const TimeSeriesMatrix& ts, SelectionScheme scheme, std::size_t m,
                               std::uint64_t seed) {
  const auto idx = select_indices(ts.series_count(), scheme, m, seed);
  return ts.select_rows(idx);
}

std::vector<Interval> partition(std::size_t series_len, std::size_t windows) {
  if (windows < 1) {
    throw std::invalid_argument("partition: windows must be >= 1");
  }
  if (series_len < 2 * windows) {
    throw std::invalid_argument("partition: series of length " + std::to_string(series_len) +
                                " is too short for " + std::to_string(windows) +
                                " windows (each needs >= 2 samples)");
  }
  const std::size_t base = series_len / windows;
  const std::size_t extra = series_len % windows;
  std::vector<Interval> out;
  out.reserve(windows);
  std::size_t begin = 0;
  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t len = base + (w < extra ? 1 : 0);
    out.push_back({begin, begin + len});
    begin += len;
  }
  return out;
}

namespace {

// Pairwise correlations of `rows` equal-length rows, window by window.
std::vector<double> windowed_pairwise(std::span<const double> values, std::size_t rows,
                                      std::size_t row_length, std::size_t windows,
                                      DegeneratePolicy policy) {
  const auto intervals = partition(row_length, windows);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(ccf_dimension(rows, windows)));
  std::vector<CenteredSeries> centered(rows);
  for (const auto& win : intervals) {
    for (std::size_t r = 0; r < rows; ++r) {
      centered[r] = center(values.subspan(r * row_length + win.begin, win.length()));
    }
    for (std::size_t a = 0; a < rows; ++a) {
      for (std::size_t b = a + 1; b < rows; ++b) {
        out.push_back(pearson_centered(centered[a], centered[b], policy));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<double> encode_ccf(const TimeSeriesMatrix& ts, const EncoderConfig& cfg) {
  cfg.validate();
  if (cfg.selection == SelectionScheme::Group) {
    const auto grouped = group(ts, cfg.lambda);
    return windowed_pairwise(grouped.values, grouped.lambda, grouped.row_length, cfg.windows,
                             cfg.policy);
  }
  const auto subset = select_subset(ts, cfg.selection, cfg.selection_m, cfg.seed);
  return windowed_pairwise(subset.values(), subset.series_count(), subset.frame_count(),
                           cfg.windows, cfg.policy);
}

std::vector<double> encode_acf(const TimeSeriesMatrix& ts, const EncoderConfig& cfg,
                               bool* lag_exceeded) {
  cfg.validate();
  std::vector<std::size_t> lags(cfg.gamma);
  for (std::size_t l = 0; l < cfg.gamma; ++l) {
    lags[l] = (l + 1) * cfg.stride;
  }
  std::vector<double> out;
  out.reserve(ts.series_count() * cfg.gamma);
  bool exceeded = false;
  if (cfg.gamma > 0) {
    for (std::size_t i = 0; i < ts.series_count(); ++i) {
      auto r = sample_acf_centered(center(ts.row(i)), lags, cfg.policy);
      exceeded = exceeded || r.lag_exceeded;
      out.insert(out.end(), r.values.begin(), r.values.end());
    }
  }
  if (lag_exceeded != nullptr) {
    *lag_exceeded = exceeded;
  }
  return out;
}

TcfVector encode_tcf(const TimeSeriesMatrix& ts, const EncoderConfig& cfg) {
  TcfVector out;
  out.ccf = encode_ccf(ts, cfg);
  out.acf = encode_acf(ts, cfg, &out.acf_lag_exceeded);
  out.combined.reserve(out.ccf.size() + out.acf.size());
  out.combined.insert(out.combined.end(), out.ccf.begin(), out.ccf.end());
  out.combined.insert(out.combined.end(), out.acf.begin(), out.acf.end());
  out.layout = TcfLayout{cfg.correlated_rows(), cfg.windows, cfg.gamma, cfg.stride,
                         ts.series_count(),     ts.frame_count(), cfg.selection,
                         std::string(kTcfOrdering)};
  return out;
}

std::uint64_t ccf_dimension(std::uint64_t rows, std::uint64_t windows) noexcept {
  return rows < 2 ? 0 : windows * (rows * (rows - 1) / 2);
}

std::uint64_t tcf_dimension(std::uint64_t n, const EncoderConfig& cfg) noexcept {
  return n * cfg.gamma + ccf_dimension(cfg.correlated_rows(), cfg.windows);
}

}  // namespace tcf
