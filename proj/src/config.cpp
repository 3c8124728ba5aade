#include "nodeadapt/config.hpp"

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "nodeadapt/errors.hpp"

namespace nodeadapt {

using nlohmann::json;

TrainConfig swiss_roll_preset() {
  TrainConfig c;
  c.dataset = DatasetId::SwissRoll;
  c.width = 4;
  c.final_time = 20.0;
  c.lambda = 1e-3;
  c.learning_rate = 5e-3;
  c.tol = 0.025;
  c.it_max = 3000;
  c.it_up = 50;
  return c;
}

TrainConfig peaks_preset() {
  TrainConfig c;
  c.dataset = DatasetId::Peaks;
  c.width = 20;
  c.final_time = 10.0;
  c.lambda = 1e-3;
  c.learning_rate = 1e-3;
  c.tol = 0.05;
  c.it_max = 2500;
  c.it_up = 75;
  return c;
}

TrainConfig preset_for(const std::string& dataset) {
  if (dataset == "swiss_roll") return swiss_roll_preset();
  if (dataset == "peaks") return peaks_preset();
  throw ConfigError("unknown dataset '" + dataset + "'");
}

TrainMode parse_mode(const std::string& name) {
  if (name == "adaptive") return TrainMode::Adaptive;
  if (name == "random") return TrainMode::Random;
  if (name == "fixed") return TrainMode::Fixed;
  throw ConfigError("unknown mode '" + name + "'");
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    const json& v = j.at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(std::string("'") + key + "' must be a boolean");
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(std::string("'") + key + "' must be an integer");
      if (std::is_unsigned_v<T> && v.get<std::int64_t>() < 0) {
        throw ConfigError(std::string("'") + key + "' must be non-negative");
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    }
    out = v.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("'") + key + "': " + e.what());
  }
}

const std::set<std::string> kKeys{"dataset",      "mode",        "T",
                                  "d",            "lambda",      "learning_rate",
                                  "tol",          "it_max",      "it_up",
                                  "initial_intervals", "fixed_intervals", "seed",
                                  "data_seed",    "sup_samples", "optimizer",
                                  "trainable_io"};

}  // namespace

TrainConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  std::string dataset = "swiss_roll";
  read(j, "dataset", dataset);
  TrainConfig c = preset_for(dataset);
  std::string mode = to_string(c.mode);
  read(j, "mode", mode);
  c.mode = parse_mode(mode);
  read(j, "T", c.final_time);
  read(j, "d", c.width);
  read(j, "lambda", c.lambda);
  read(j, "learning_rate", c.learning_rate);
  read(j, "tol", c.tol);
  read(j, "it_max", c.it_max);
  read(j, "it_up", c.it_up);
  read(j, "initial_intervals", c.initial_intervals);
  read(j, "fixed_intervals", c.fixed_intervals);
  read(j, "seed", c.seed);
  read(j, "data_seed", c.data_seed);
  read(j, "sup_samples", c.sup_samples);
  read(j, "trainable_io", c.trainable_io);
  std::string optimizer = "adam";
  read(j, "optimizer", optimizer);
  if (optimizer == "adam") {
    c.optimizer = OptimizerKind::Adam;
  } else if (optimizer == "gd") {
    c.optimizer = OptimizerKind::GradientDescent;
  } else {
    throw ConfigError("unknown optimizer '" + optimizer + "'");
  }
  c.validate();
  return c;
}

json config_to_json(const TrainConfig& c) {
  return json{{"dataset", to_string(c.dataset)},
              {"mode", to_string(c.mode)},
              {"T", c.final_time},
              {"d", c.width},
              {"lambda", c.lambda},
              {"learning_rate", c.learning_rate},
              {"tol", c.tol},
              {"it_max", c.it_max},
              {"it_up", c.it_up},
              {"initial_intervals", c.initial_intervals},
              {"fixed_intervals", c.fixed_intervals},
              {"seed", c.seed},
              {"data_seed", c.data_seed},
              {"sup_samples", c.sup_samples},
              {"optimizer", c.optimizer == OptimizerKind::Adam ? "adam" : "gd"},
              {"trainable_io", c.trainable_io}};
}

TrainConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

TrainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace nodeadapt
