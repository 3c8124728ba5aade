#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "nodeadapt/trainer.hpp"

namespace nodeadapt {

inline constexpr int kSummarySchemaVersion = 1;

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Exact round trip through C99 hex-float text ("0x1.8p+1").
std::string encode_hex(double value);
double decode_hex(const std::string& text);

nlohmann::json summary_json(const TrainRecord& record);
nlohmann::json grids_json(const TrainRecord& record);
/// iteration,train_loss,val_loss,val_accuracy,K
std::string loss_csv(const TrainRecord& record);

struct Checkpoint {
  TrainConfig config;
  std::vector<double> nodes;
  NodalParams theta;
  DenseMatrix w_in;
  DenseMatrix w_out;
  std::int64_t optimizer_steps = 0;
  std::vector<double> optimizer_first;
  std::vector<double> optimizer_second;
  std::string rng_state;
  std::vector<double> initial_nodes;
  std::vector<InsertionEvent> insertions;

  ControlPath control() const { return {TimeGrid(nodes), theta}; }
};

Checkpoint make_checkpoint(const TrainRecord& record);
nlohmann::json checkpoint_json(const Checkpoint& checkpoint);
/// Throws ConfigError on malformed input.
Checkpoint checkpoint_from_json(const nlohmann::json& j);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// config.json, loss.csv, grids.json, summary.json and checkpoint.json.
void write_run(const std::filesystem::path& dir, const TrainRecord& record);

}  // namespace nodeadapt
