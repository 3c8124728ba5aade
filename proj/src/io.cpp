#include "nodeadapt/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nodeadapt/config.hpp"
#include "nodeadapt/errors.hpp"

namespace nodeadapt {

using nlohmann::json;

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string encode_hex(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%a", value);
  return buffer;
}

double decode_hex(const std::string& text) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ConfigError("malformed hex float '" + text + "'");
  }
  return value;
}

namespace {

// NaN has no JSON literal; it is written as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json hex_array(const double* data, std::size_t size) {
  json out = json::array();
  for (std::size_t i = 0; i < size; ++i) out.push_back(encode_hex(data[i]));
  return out;
}

std::vector<double> hex_vector(const json& j) {
  if (!j.is_array()) throw ConfigError("checkpoint: expected an array");
  std::vector<double> out;
  for (const json& v : j) {
    if (!v.is_string()) throw ConfigError("checkpoint: expected hex strings");
    out.push_back(decode_hex(v.get<std::string>()));
  }
  return out;
}

json matrix_json(const DenseMatrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"col_major", hex_array(m.data(), static_cast<std::size_t>(m.size()))}};
}

DenseMatrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const std::vector<double> data = hex_vector(j.at("col_major"));
  if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw ConfigError("checkpoint: matrix size mismatch");
  }
  return Eigen::Map<const DenseMatrix>(data.data(), rows, cols);
}

json insertions_json(const std::vector<InsertionEvent>& events) {
  json out = json::array();
  for (const InsertionEvent& e : events) {
    out.push_back({{"iteration", e.iteration}, {"interval", e.interval}, {"time", e.time}, {"nodes", e.nodes}});
  }
  return out;
}

}  // namespace

json summary_json(const TrainRecord& r) {
  const TrainConfig& c = r.config;
  std::vector<double> times;
  for (const InsertionEvent& e : r.insertions) times.push_back(e.time);
  return json{{"schema_version", kSummarySchemaVersion},
              {"dataset", to_string(c.dataset)},
              {"mode", to_string(c.mode)},
              {"seed", c.seed},
              {"d", c.width},
              {"T", c.final_time},
              {"lambda", c.lambda},
              {"learning_rate", c.learning_rate},
              {"tol", c.tol},
              {"it_max", c.it_max},
              {"it_up", c.it_up},
              {"iterations", r.iterations},
              {"K", r.intervals()},
              {"termination", to_string(r.termination)},
              {"reached_tolerance", r.reached_tolerance()},
              {"final_train_loss", number_or_null(r.final_train_loss)},
              {"final_val_loss", number_or_null(r.final_val_loss)},
              {"final_val_accuracy", number_or_null(r.final_val_accuracy)},
              {"insertion_times", times},
              {"message", r.message}};
}

json grids_json(const TrainRecord& r) {
  return json{{"initial", r.initial_nodes}, {"insertions", insertions_json(r.insertions)},
              {"final", r.theta.grid.nodes()}};
}

std::string loss_csv(const TrainRecord& r) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,train_loss,val_loss,val_accuracy,K\n";
  for (const IterationLog& e : r.log) {
    out << e.iteration << ',' << e.train_loss << ',' << e.val_loss << ',' << e.val_accuracy << ','
        << e.intervals << '\n';
  }
  return out.str();
}

Checkpoint make_checkpoint(const TrainRecord& r) {
  return Checkpoint{r.config,          r.theta.grid.nodes(), r.theta.values,
                    r.w_in,            r.w_out,              r.optimizer_steps,
                    r.optimizer_first, r.optimizer_second,   r.rng_state,
                    r.initial_nodes,   r.insertions};
}

json checkpoint_json(const Checkpoint& c) {
  json theta = json::array();
  for (const ThetaVec& v : c.theta) theta.push_back(hex_array(v.data(), static_cast<std::size_t>(v.size())));
  return json{{"config", config_to_json(c.config)},
              {"nodes", hex_array(c.nodes.data(), c.nodes.size())},
              {"theta", theta},
              {"w_in", matrix_json(c.w_in)},
              {"w_out", matrix_json(c.w_out)},
              {"optimizer",
               {{"steps", c.optimizer_steps},
                {"first_moment", hex_array(c.optimizer_first.data(), c.optimizer_first.size())},
                {"second_moment", hex_array(c.optimizer_second.data(), c.optimizer_second.size())}}},
              {"rng_state", c.rng_state},
              {"grid_history", {{"initial", c.initial_nodes}, {"insertions", insertions_json(c.insertions)}}}};
}

Checkpoint checkpoint_from_json(const json& j) {
  try {
    Checkpoint c;
    c.config = config_from_json(j.at("config"));
    c.nodes = hex_vector(j.at("nodes"));
    for (const json& v : j.at("theta")) {
      const std::vector<double> values = hex_vector(v);
      c.theta.push_back(Eigen::Map<const ThetaVec>(values.data(), static_cast<Eigen::Index>(values.size())));
    }
    c.w_in = matrix_from_json(j.at("w_in"));
    c.w_out = matrix_from_json(j.at("w_out"));
    const json& opt = j.at("optimizer");
    c.optimizer_steps = opt.at("steps").get<std::int64_t>();
    c.optimizer_first = hex_vector(opt.at("first_moment"));
    c.optimizer_second = hex_vector(opt.at("second_moment"));
    c.rng_state = j.at("rng_state").get<std::string>();
    const json& history = j.at("grid_history");
    c.initial_nodes = history.at("initial").get<std::vector<double>>();
    for (const json& e : history.at("insertions")) {
      c.insertions.push_back({e.at("iteration").get<int>(), e.at("interval").get<int>(),
                              e.at("time").get<double>(), e.at("nodes").get<std::vector<double>>()});
    }
    // Validates node ordering and the node/value pairing.
    (void)c.control();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed checkpoint: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid checkpoint: ") + e.what());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read checkpoint '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed checkpoint: ") + e.what());
  }
  return checkpoint_from_json(j);
}

void write_run(const std::filesystem::path& dir, const TrainRecord& record) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "config.json", config_to_json(record.config).dump(2) + "\n");
  write_file_atomic(dir / "loss.csv", loss_csv(record));
  write_file_atomic(dir / "grids.json", grids_json(record).dump(2) + "\n");
  write_file_atomic(dir / "checkpoint.json", checkpoint_json(make_checkpoint(record)).dump() + "\n");
  write_file_atomic(dir / "summary.json", summary_json(record).dump(2) + "\n");
}

}  // namespace nodeadapt
