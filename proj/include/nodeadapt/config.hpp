#pragma once

#include <string>

#include <json.hpp>

#include "nodeadapt/trainer.hpp"

namespace nodeadapt {

/// Hyperparameters of the two benchmark problems.
TrainConfig swiss_roll_preset();
TrainConfig peaks_preset();

/// Preset for the named dataset ("swiss_roll" or "peaks").
TrainConfig preset_for(const std::string& dataset);

/// Parses a config object. Missing keys take the dataset preset's value,
/// unknown keys and wrongly typed values are errors. Throws ConfigError.
TrainConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const TrainConfig& config);

TrainConfig parse_config(const std::string& text);
TrainConfig load_config(const std::string& path);

TrainMode parse_mode(const std::string& name);

}  // namespace nodeadapt
