#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcf/encoder.hpp"

namespace tcf {

enum class Normalization { None, L2, ZScore };

[[nodiscard]] std::string_view to_string(Normalization mode) noexcept;
[[nodiscard]] std::optional<Normalization> parse_normalization(std::string_view text);

struct TrainConfig {
  double c_reg = 1000.0;
  /// Relative duality-gap and KKT-violation bound at which the solver stops.
  double tolerance = 1e-4;
  std::size_t max_iterations = 20'000'000;
  Normalization normalize = Normalization::None;
  /// Recorded for reproducibility; the SMO solver itself is deterministic.
  std::uint64_t seed = 0;
  /// Worker threads for the per-class problems; 0 picks hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

/// Fitted feature transform. `mean`/`scale` are only populated for ZScore.
struct FeatureTransform {
  Normalization mode = Normalization::None;
  std::vector<double> mean;
  std::vector<double> scale;

  [[nodiscard]] std::vector<double> apply(std::span<const double> x) const;
  friend bool operator==(const FeatureTransform&, const FeatureTransform&) = default;
};

[[nodiscard]] FeatureTransform fit_transform(std::span<const std::vector<double>> x,
                                             Normalization mode);

struct LinearOvrModel {
  std::vector<std::string> classes;          ///< sorted, unique
  std::vector<std::vector<double>> weights;  ///< one per class
  std::vector<double> biases;                ///< one per class
  FeatureTransform transform;
  std::optional<TcfLayout> layout;           ///< layout of the descriptors it was trained on

  [[nodiscard]] std::size_t dimension() const noexcept {
    return weights.empty() ? 0 : weights.front().size();
  }
  friend bool operator==(const LinearOvrModel&, const LinearOvrModel&) = default;
};

/// Result of one binary hinge-loss problem.
struct BinarySvmSolution {
  std::vector<double> weights;
  double bias = 0.0;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double kkt_violation = 0.0;
  std::size_t iterations = 0;
};

/**
 * Precomputed inner products between training points, shared by every
 * one-vs-rest subproblem.
 */
class GramMatrix {
 public:
  explicit GramMatrix(std::span<const std::vector<double>> x);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * n_ + j];
  }
  [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * n_, n_};
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/**
 * Solves min_{w,b} 1/2 |w|^2 + C sum_i max(0, 1 - y_i (w.x_i + b)) with an
 * unregularised bias, via SMO on the dual with second-order working-set
 * selection. Stops once the maximal KKT violation is <= tolerance and the
 * duality gap is <= tolerance * (1 + |primal|).
 *
 * `labels` holds +1 / -1.
 *
 * @throws ConvergenceError when max_iterations is exhausted
 */
[[nodiscard]] BinarySvmSolution train_binary(std::span<const std::vector<double>> x,
                                             const GramMatrix& gram,
                                             std::span<const int> labels, double c_reg,
                                             double tolerance, std::size_t max_iterations);

[[nodiscard]] BinarySvmSolution train_binary(std::span<const std::vector<double>> x,
                                             std::span<const int> labels, double c_reg,
                                             double tolerance, std::size_t max_iterations);

/**
 * One-vs-rest training. Needs at least two distinct labels and
 * equal-dimension descriptors; throws std::invalid_argument otherwise.
 */
[[nodiscard]] LinearOvrModel train_ovr(std::span<const std::vector<double>> descriptors,
                                       std::span<const std::string> labels,
                                       const TrainConfig& cfg);

/// w_c . x' + b_c per class, x' being x under the model's transform.
[[nodiscard]] std::vector<double> decision_scores(const LinearOvrModel& model,
                                                  std::span<const double> x);

/// Index of the maximal score; ties go to the lowest index.
[[nodiscard]] std::size_t argmax_class(std::span<const double> scores);

[[nodiscard]] const std::string& predict(const LinearOvrModel& model, std::span<const double> x);

}  // namespace tcf
