#include "tcf/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tcf/errors.hpp"

namespace tcf {

using nlohmann::json;

namespace {

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

json encoder_config_to_json(const EncoderConfig& cfg) {
  return json{{"lambda", cfg.lambda},
              {"windows", cfg.windows},
              {"gamma", cfg.gamma},
              {"stride", cfg.stride},
              {"selection", std::string(to_string(cfg.selection))},
              {"selection_m", cfg.selection_m},
              {"degenerate_policy", "zero_fill"},
              {"seed", cfg.seed}};
}

json train_config_to_json(const TrainConfig& cfg) {
  return json{{"c", cfg.c_reg},
              {"tolerance", cfg.tolerance},
              {"max_iterations", cfg.max_iterations},
              {"normalize", std::string(to_string(cfg.normalize))},
              {"seed", cfg.seed}};
}

json report_to_json(const EvalReport& report) {
  return json{{"format", "tcf-eval-report"},
              {"version", 1},
              {"representation", std::string(to_string(report.settings.representation))},
              {"repetitions", report.settings.repetitions},
              {"master_seed", report.settings.master_seed},
              {"encoder", encoder_config_to_json(report.encoder)},
              {"trainer", train_config_to_json(report.trainer)},
              {"descriptor_dimension", report.descriptor_dimension},
              {"classes", report.classes},
              {"per_rep_accuracy", report.per_rep_accuracy},
              {"mean_accuracy", report.mean_accuracy},
              {"confusion_counts", report.confusion_counts},
              {"confusion_percent", report.confusion},
              {"warnings", report.warnings}};
}

std::string format_report(const EvalReport& report) {
  std::ostringstream out;
  out << "mean accuracy: " << fixed(100.0 * report.mean_accuracy, 2) << "% over "
      << report.per_rep_accuracy.size() << " repetitions (descriptor dimension "
      << report.descriptor_dimension << ")\n";
  std::size_t width = 6;
  for (const auto& c : report.classes) width = std::max(width, c.size() + 1);
  out << "confusion matrix (% of true class, rows = true, columns = predicted)\n";
  out << std::string(width, ' ');
  for (const auto& c : report.classes) {
    out << ' ' << std::string(std::max<std::size_t>(7, c.size()) - c.size(), ' ') << c;
  }
  out << '\n';
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    const auto& name = report.classes[i];
    out << name << std::string(width - name.size(), ' ');
    for (std::size_t j = 0; j < report.classes.size(); ++j) {
      const auto cell = fixed(report.confusion[i][j], 1);
      const std::size_t w = std::max<std::size_t>(7, report.classes[j].size());
      out << ' ' << std::string(w > cell.size() ? w - cell.size() : 0, ' ') << cell;
    }
    out << '\n';
  }
  for (const auto& w : report.warnings) out << "warning: " << w << '\n';
  return out.str();
}

void write_report(const std::filesystem::path& path, const EvalReport& report) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  out << report_to_json(report).dump(2) << '\n';
  if (!out) {
    throw DataError("failed writing " + path.string());
  }
}

std::string sweep_to_tsv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "scheme\tsize\twindows\tgamma\tstride\tdimension\tstatus\tmean_accuracy\tfailure\n";
  for (const auto& r : rows) {
    const auto size = r.config.correlated_rows();
    std::string reason = r.failure;
    std::replace(reason.begin(), reason.end(), '\t', ' ');
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    out << to_string(r.config.selection) << '\t' << size << '\t' << r.config.windows << '\t'
        << r.config.gamma << '\t' << r.config.stride << '\t' << r.dimension << '\t'
        << (r.ok ? "ok" : "failed") << '\t' << (r.ok ? fixed(r.mean_accuracy, 6) : "") << '\t'
        << reason << '\n';
  }
  return out.str();
}

}  // namespace tcf
