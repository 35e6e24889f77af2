#include "tcf/model_io.hpp"

#include <fstream>
#include <string>

#include "tcf/errors.hpp"

namespace tcf {

using nlohmann::json;

json layout_to_json(const TcfLayout& layout) {
  return json{{"correlated_rows", layout.correlated_rows},
              {"windows", layout.windows},
              {"gamma", layout.gamma},
              {"stride", layout.stride},
              {"series", layout.series},
              {"frames", layout.frames},
              {"selection", std::string(to_string(layout.selection))},
              {"ordering", layout.ordering}};
}

TcfLayout layout_from_json(const json& j) {
  try {
    TcfLayout layout;
    layout.correlated_rows = j.at("correlated_rows").get<std::size_t>();
    layout.windows = j.at("windows").get<std::size_t>();
    layout.gamma = j.at("gamma").get<std::size_t>();
    layout.stride = j.at("stride").get<std::size_t>();
    layout.series = j.at("series").get<std::size_t>();
    layout.frames = j.at("frames").get<std::size_t>();
    const auto sel = j.at("selection").get<std::string>();
    const auto scheme = parse_selection_scheme(sel);
    if (!scheme) {
      throw DataError("layout: unknown selection scheme '" + sel + "'");
    }
    layout.selection = *scheme;
    layout.ordering = j.at("ordering").get<std::string>();
    return layout;
  } catch (const json::exception& e) {
    throw DataError(std::string("layout: ") + e.what());
  }
}

json model_to_json(const LinearOvrModel& model) {
  json j;
  j["format"] = "tcf-linear-ovr";
  j["version"] = kModelFormatVersion;
  j["classes"] = model.classes;
  j["dimension"] = model.dimension();
  j["normalization"] = {{"mode", std::string(to_string(model.transform.mode))},
                        {"mean", model.transform.mean},
                        {"scale", model.transform.scale}};
  j["layout"] = model.layout ? layout_to_json(*model.layout) : json(nullptr);
  j["biases"] = model.biases;
  j["weights"] = model.weights;
  return j;
}

LinearOvrModel model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "tcf-linear-ovr") {
      throw DataError("model: unexpected format tag");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("model: unsupported version " + std::to_string(version));
    }
    LinearOvrModel model;
    model.classes = j.at("classes").get<std::vector<std::string>>();
    const auto& norm = j.at("normalization");
    const auto mode_text = norm.at("mode").get<std::string>();
    const auto mode = parse_normalization(mode_text);
    if (!mode) {
      throw DataError("model: unknown normalization '" + mode_text + "'");
    }
    model.transform.mode = *mode;
    model.transform.mean = norm.at("mean").get<std::vector<double>>();
    model.transform.scale = norm.at("scale").get<std::vector<double>>();
    if (!j.at("layout").is_null()) {
      model.layout = layout_from_json(j.at("layout"));
    }
    model.biases = j.at("biases").get<std::vector<double>>();
    model.weights = j.at("weights").get<std::vector<std::vector<double>>>();
    const auto dim = j.at("dimension").get<std::size_t>();
    if (model.weights.size() != model.classes.size() ||
        model.biases.size() != model.classes.size()) {
      throw DataError("model: class/weight/bias counts disagree");
    }
    for (const auto& w : model.weights) {
      if (w.size() != dim) {
        throw DataError("model: weight vector dimension disagrees with header");
      }
    }
    if (model.transform.mode == Normalization::ZScore &&
        (model.transform.mean.size() != dim || model.transform.scale.size() != dim)) {
      throw DataError("model: z-score parameters have the wrong dimension");
    }
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("model: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const LinearOvrModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open " + path.string() + " for writing");
  }
  out << model_to_json(model).dump(1) << '\n';
  if (!out) {
    throw DataError("failed writing " + path.string());
  }
}

LinearOvrModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open model file " + path.string());
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace tcf
