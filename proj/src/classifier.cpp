#include "tcf/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "tcf/errors.hpp"
#include "tcf/parallel.hpp"

namespace tcf {

std::string_view to_string(Normalization mode) noexcept {
  switch (mode) {
    case Normalization::None:
      return "none";
    case Normalization::L2:
      return "l2";
    case Normalization::ZScore:
      return "zscore";
  }
  return "none";
}

std::optional<Normalization> parse_normalization(std::string_view text) {
  for (auto m : {Normalization::None, Normalization::L2, Normalization::ZScore}) {
    if (text == to_string(m)) {
      return m;
    }
  }
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (!(c_reg > 0.0) || !std::isfinite(c_reg)) {
    throw std::invalid_argument("train: C must be a positive finite number");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("train: tolerance must be positive");
  }
  if (max_iterations == 0) {
    throw std::invalid_argument("train: max_iterations must be positive");
  }
}

std::vector<double> FeatureTransform::apply(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  switch (mode) {
    case Normalization::None:
      break;
    case Normalization::L2: {
      double ss = 0.0;
      for (double v : out) ss += v * v;
      if (ss > 0.0) {
        const double inv = 1.0 / std::sqrt(ss);
        for (double& v : out) v *= inv;
      }
      break;
    }
    case Normalization::ZScore:
      for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = (out[j] - mean[j]) / scale[j];
      }
      break;
  }
  return out;
}

FeatureTransform fit_transform(std::span<const std::vector<double>> x, Normalization mode) {
  FeatureTransform t;
  t.mode = mode;
  if (mode != Normalization::ZScore || x.empty()) {
    return t;
  }
  const std::size_t d = x.front().size();
  const double count = static_cast<double>(x.size());
  t.mean.assign(d, 0.0);
  t.scale.assign(d, 0.0);
  for (const auto& row : x) {
    for (std::size_t j = 0; j < d; ++j) t.mean[j] += row[j];
  }
  for (double& m : t.mean) m /= count;
  for (const auto& row : x) {
    for (std::size_t j = 0; j < d; ++j) {
      const double dv = row[j] - t.mean[j];
      t.scale[j] += dv * dv;
    }
  }
  for (double& s : t.scale) {
    s = std::sqrt(s / count);
    if (!(s > 0.0)) s = 1.0;  // constant feature: centre only
  }
  return t;
}

GramMatrix::GramMatrix(std::span<const std::vector<double>> x) : n_(x.size()), values_(n_ * n_) {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      const double v = std::inner_product(x[i].begin(), x[i].end(), x[j].begin(), 0.0);
      values_[i * n_ + j] = v;
      values_[j * n_ + i] = v;
    }
  }
}

namespace {

constexpr double kTau = 1e-12;

struct Objectives {
  double primal = 0.0;
  double dual = 0.0;
  double bias = 0.0;
};

// Exact primal/dual values for the current alpha, with the bias chosen to
// minimise the primal for the implied w.
Objectives evaluate(const GramMatrix& gram, std::span<const int> y, std::span<const double> alpha,
                    double c_reg) {
  const std::size_t n = y.size();
  std::vector<double> ay(n);
  for (std::size_t i = 0; i < n; ++i) ay[i] = alpha[i] * y[i];
  std::vector<double> score(n);
  double wnorm2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto row = gram.row(i);
    score[i] = std::inner_product(row.begin(), row.end(), ay.begin(), 0.0);
    wnorm2 += ay[i] * score[i];
  }
  wnorm2 = std::max(wnorm2, 0.0);

  // The hinge sum as a function of b has slope -P + (#kinks passed), so it is
  // minimal on [kink_(P), kink_(P+1)] with kink_i = y_i - s_i.
  std::vector<double> kinks(n);
  std::size_t positives = 0;
  double free_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    kinks[i] = y[i] - score[i];
    positives += y[i] > 0 ? 1 : 0;
    if (alpha[i] > 0.0 && alpha[i] < c_reg) {
      free_sum += kinks[i];
      ++free_count;
    }
  }
  std::sort(kinks.begin(), kinks.end());
  const double lo = kinks[positives - 1];
  const double hi = kinks[positives];
  const double preferred = free_count > 0 ? free_sum / static_cast<double>(free_count)
                                          : 0.5 * (lo + hi);
  Objectives out;
  out.bias = std::clamp(preferred, lo, hi);
  double hinge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    hinge += std::max(0.0, 1.0 - y[i] * (score[i] + out.bias));
  }
  const double alpha_sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  out.primal = 0.5 * wnorm2 + c_reg * hinge;
  out.dual = alpha_sum - 0.5 * wnorm2;
  return out;
}

}  // namespace

BinarySvmSolution train_binary(std::span<const std::vector<double>> x, const GramMatrix& gram,
                               std::span<const int> labels, double c_reg, double tolerance,
                               std::size_t max_iterations) {
  const std::size_t n = labels.size();
  if (gram.size() != n || x.size() != n) {
    throw std::invalid_argument("train_binary: data/label count mismatch");
  }
  const bool has_pos = std::any_of(labels.begin(), labels.end(), [](int v) { return v > 0; });
  const bool has_neg = std::any_of(labels.begin(), labels.end(), [](int v) { return v < 0; });
  if (!has_pos || !has_neg) {
    throw std::invalid_argument("train_binary: both classes must be present");
  }

  const double c = c_reg;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  const auto& y = labels;

  auto in_up = [&](std::size_t t) {
    return (y[t] > 0 && alpha[t] < c) || (y[t] < 0 && alpha[t] > 0.0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] > 0 && alpha[t] > 0.0) || (y[t] < 0 && alpha[t] < c);
  };

  BinarySvmSolution sol;
  Objectives obj;
  double violation = std::numeric_limits<double>::infinity();
  std::size_t next_check = 0;
  bool converged = false;
  std::size_t iter = 0;

  for (; iter < max_iterations; ++iter) {
    // Working set: i maximises -y G over I_up, j by second-order gain over I_low.
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (in_up(t)) {
        const double v = -y[t] * grad[t];
        if (v >= gmax) {
          gmax = v;
          i = t;
        }
      }
    }
    double gmin = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    double best_gain = std::numeric_limits<double>::infinity();
    if (i < n) {
      const auto ki = gram.row(i);
      for (std::size_t t = 0; t < n; ++t) {
        if (!in_low(t)) continue;
        const double v = -y[t] * grad[t];
        gmin = std::min(gmin, v);
        const double diff = gmax - v;
        if (diff > 0.0) {
          double quad = ki[i] + gram(t, t) - 2.0 * ki[t];
          if (quad <= 0.0) quad = kTau;
          const double gain = -(diff * diff) / quad;
          if (gain <= best_gain) {
            best_gain = gain;
            j = t;
          }
        }
      }
    }
    violation = (i < n && gmin < std::numeric_limits<double>::infinity()) ? gmax - gmin : 0.0;

    if (violation <= tolerance || j == n) {
      if (iter >= next_check || j == n) {
        // Re-derive the gradient to shed accumulated drift before judging the gap.
        for (std::size_t t = 0; t < n; ++t) {
          auto row = gram.row(t);
          double s = 0.0;
          for (std::size_t u = 0; u < n; ++u) s += alpha[u] * y[u] * row[u];
          grad[t] = y[t] * s - 1.0;
        }
        obj = evaluate(gram, y, alpha, c);
        const double gap = obj.primal - obj.dual;
        if (j == n || gap <= tolerance * (1.0 + std::abs(obj.primal))) {
          converged = true;
          break;
        }
        next_check = iter + std::max<std::size_t>(n, 64);
      }
    }

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    const auto ki = gram.row(i);
    const auto kj = gram.row(j);
    double quad = ki[i] + kj[j] - 2.0 * ki[j];
    if (quad <= 0.0) quad = kTau;
    if (y[i] != y[j]) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = c - diff;
        }
      } else if (alpha[j] > c) {
        alpha[j] = c;
        alpha[i] = c + diff;
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) {
          alpha[i] = c;
          alpha[j] = sum - c;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > c) {
        if (alpha[j] > c) {
          alpha[j] = c;
          alpha[i] = sum - c;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double dai = (alpha[i] - old_ai) * y[i];
    const double daj = (alpha[j] - old_aj) * y[j];
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y[t] * (ki[t] * dai + kj[t] * daj);
    }
  }

  if (!converged) {
    obj = evaluate(gram, y, alpha, c);
    throw ConvergenceError("SVM solver did not converge within " +
                               std::to_string(max_iterations) +
                               " iterations (KKT violation " + std::to_string(violation) +
                               ", duality gap " + std::to_string(obj.primal - obj.dual) + ")",
                           violation);
  }

  const std::size_t d = x.front().size();
  sol.weights.assign(d, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] == 0.0) continue;
    const double coef = alpha[t] * y[t];
    for (std::size_t f = 0; f < d; ++f) sol.weights[f] += coef * x[t][f];
  }
  sol.bias = obj.bias;
  sol.primal_objective = obj.primal;
  sol.dual_objective = obj.dual;
  sol.kkt_violation = violation;
  sol.iterations = iter;
  return sol;
}

BinarySvmSolution train_binary(std::span<const std::vector<double>> x, std::span<const int> labels,
                               double c_reg, double tolerance, std::size_t max_iterations) {
  const GramMatrix gram(x);
  return train_binary(x, gram, labels, c_reg, tolerance, max_iterations);
}

LinearOvrModel train_ovr(std::span<const std::vector<double>> descriptors,
                         std::span<const std::string> labels, const TrainConfig& cfg) {
  cfg.validate();
  if (descriptors.size() != labels.size()) {
    throw std::invalid_argument("train_ovr: " + std::to_string(descriptors.size()) +
                                " descriptors but " + std::to_string(labels.size()) + " labels");
  }
  if (descriptors.empty()) {
    throw std::invalid_argument("train_ovr: no training data");
  }
  const std::size_t dim = descriptors.front().size();
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    if (descriptors[i].size() != dim) {
      throw std::invalid_argument("train_ovr: descriptor " + std::to_string(i) + " has dimension " +
                                  std::to_string(descriptors[i].size()) + ", expected " +
                                  std::to_string(dim));
    }
  }
  LinearOvrModel model;
  model.classes.assign(labels.begin(), labels.end());
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()),
                      model.classes.end());
  if (model.classes.size() < 2) {
    throw std::invalid_argument("train_ovr: need at least 2 distinct classes");
  }

  model.transform = fit_transform(descriptors, cfg.normalize);
  std::vector<std::vector<double>> x;
  x.reserve(descriptors.size());
  for (const auto& d : descriptors) x.push_back(model.transform.apply(d));
  const GramMatrix gram(x);

  const std::size_t classes = model.classes.size();
  model.weights.resize(classes);
  model.biases.resize(classes);
  parallel_for(classes, cfg.threads, [&](std::size_t c) {
    std::vector<int> y(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      y[i] = labels[i] == model.classes[c] ? 1 : -1;
    }
    auto sol = train_binary(x, gram, y, cfg.c_reg, cfg.tolerance, cfg.max_iterations);
    model.weights[c] = std::move(sol.weights);
    model.biases[c] = sol.bias;
  });
  return model;
}

std::vector<double> decision_scores(const LinearOvrModel& model, std::span<const double> x) {
  if (x.size() != model.dimension()) {
    throw std::invalid_argument("decision_scores: descriptor has dimension " +
                                std::to_string(x.size()) + ", model expects " +
                                std::to_string(model.dimension()));
  }
  const auto xt = model.transform.apply(x);
  std::vector<double> scores(model.classes.size());
  for (std::size_t c = 0; c < scores.size(); ++c) {
    scores[c] = std::inner_product(xt.begin(), xt.end(), model.weights[c].begin(), 0.0) +
                model.biases[c];
  }
  return scores;
}

std::size_t argmax_class(std::span<const double> scores) {
  if (scores.empty()) {
    throw std::invalid_argument("argmax_class: no scores");
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return best;
}

const std::string& predict(const LinearOvrModel& model, std::span<const double> x) {
  return model.classes[argmax_class(decision_scores(model, x))];
}

}  // namespace tcf
