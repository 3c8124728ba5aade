// Command-line front end: train | compare | gradcheck | indicators.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "nodeadapt/config.hpp"
#include "nodeadapt/dwr_estimator.hpp"
#include "nodeadapt/errors.hpp"
#include "nodeadapt/gradcheck.hpp"
#include "nodeadapt/io.hpp"

namespace fs = std::filesystem;
using namespace nodeadapt;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitGradcheck = 4;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<int> it_max;
};

void apply(const Overrides& o, TrainConfig& config) {
  if (o.seed) config.seed = *o.seed;
  if (o.mode) config.mode = parse_mode(*o.mode);
  if (o.it_max) config.it_max = *o.it_max;
  config.validate();
}

void write_trajectories(const fs::path& dir, const TrainConfig& config, const TrainRecord& record,
                        const DatasetSplits& data) {
  const Problem problem = make_problem(config, data.train, data.head, record.w_in, record.w_out);
  const ForwardPass pass = forward(problem, record.theta);
  const AdjointTrajectory adjoint = backward(problem, record.theta, pass.state);
  std::ostringstream state_csv;
  std::ostringstream adjoint_csv;
  write_trajectory_csv(state_csv, pass.state.grid, pass.state.values);
  write_trajectory_csv(adjoint_csv, adjoint.grid, adjoint.values);
  write_file_atomic(dir / "state.csv", state_csv.str());
  write_file_atomic(dir / "adjoint.csv", adjoint_csv.str());
}

int cmd_train(const std::string& config_path, const Overrides& overrides, const fs::path& out,
              bool trajectories, bool quiet) {
  TrainConfig config;
  try {
    config = load_config(config_path);
    apply(overrides, config);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const DatasetSplits data = load_dataset(config);
  const TrainRecord record = train(config, data, [&](const IterationLog& e) {
    if (!quiet && (e.iteration == 1 || e.iteration % 100 == 0)) {
      std::cout << "it " << e.iteration << "  loss " << e.train_loss << "  val_acc " << e.val_accuracy
                << "  K " << e.intervals << '\n';
    }
  });
  write_run(out, record);
  if (trajectories && record.termination != Termination::NonFiniteLoss) {
    write_trajectories(out, config, record, data);
  }
  std::cout << to_string(config.mode) << ": " << to_string(record.termination) << " after "
            << record.iterations << " iterations, K = " << record.intervals()
            << ", validation accuracy " << record.final_val_accuracy << '\n';
  return record.termination == Termination::NonFiniteLoss ? kExitNumerical : 0;
}

struct Cell {
  bool ok = false;
  double accuracy = 0.0;
  int iterations = 0;
  int depth = 0;
  bool reached = false;
  std::string error;
};

std::string cell_text(const Cell& c) {
  if (!c.ok) return "failed";
  std::ostringstream s;
  s.precision(2);
  s << std::fixed << c.accuracy << " || " << c.iterations;
  return s.str();
}

Cell run_cell(TrainConfig config, const DatasetSplits& data, const fs::path& dir) {
  Cell cell;
  try {
    const TrainRecord r = train(config, data);
    write_run(dir, r);
    cell.ok = r.termination != Termination::NonFiniteLoss;
    cell.accuracy = r.final_val_accuracy;
    cell.iterations = r.iterations;
    cell.depth = r.intervals();
    cell.reached = r.reached_tolerance();
    if (!cell.ok) cell.error = r.message;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

int cmd_compare(const std::string& dataset, const std::optional<std::string>& config_path,
                const std::vector<std::uint64_t>& seeds, const Overrides& overrides, const fs::path& out,
                int threads) {
  TrainConfig base;
  try {
    base = config_path ? load_config(*config_path) : preset_for(dataset);
    if (config_path && to_string(base.dataset) != dataset) {
      throw ConfigError("config dataset does not match --dataset");
    }
    apply(overrides, base);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (seeds.empty()) {
    std::cerr << "compare needs at least one seed\n";
    return kExitConfig;
  }
  const DatasetSplits data = load_dataset(base);
  const std::vector<TrainMode> methods{TrainMode::Adaptive, TrainMode::Random, TrainMode::Fixed};
  std::vector<std::vector<Cell>> table(methods.size(), std::vector<Cell>(seeds.size()));

  std::atomic<std::size_t> next{0};
  std::mutex print_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      const fs::path seed_dir = out / ("seed_" + std::to_string(seeds[i]));
      TrainConfig c = base;
      c.seed = seeds[i];
      c.mode = TrainMode::Adaptive;
      table[0][i] = run_cell(c, data, seed_dir / "adaptive");
      c.mode = TrainMode::Random;
      table[1][i] = run_cell(c, data, seed_dir / "random");
      if (table[0][i].ok) {
        c.mode = TrainMode::Fixed;
        c.fixed_intervals = table[0][i].depth;
        table[2][i] = run_cell(c, data, seed_dir / "fixed");
      } else {
        table[2][i].error = "adaptive run failed, no depth to match";
      }
      std::lock_guard lock(print_mutex);
      std::cout << "seed " << seeds[i] << " done\n";
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < std::max(1, threads); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "method";
  for (auto s : seeds) csv << ",seed_" << s;
  csv << '\n';
  json rows = json::array();
  bool any_ok = false;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    csv << to_string(methods[m]);
    json cells = json::array();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const Cell& c = table[m][i];
      any_ok = any_ok || c.ok;
      csv << ',' << cell_text(c);
      cells.push_back(c.ok ? json{{"seed", seeds[i]}, {"accuracy", c.accuracy}, {"iterations", c.iterations},
                                  {"K", c.depth}, {"reached_tolerance", c.reached}}
                           : json{{"seed", seeds[i]}, {"failed", true}, {"error", c.error}});
    }
    csv << '\n';
    rows.push_back({{"method", to_string(methods[m])}, {"runs", cells}});
  }
  fs::create_directories(out);
  write_file_atomic(out / "comparison.csv", csv.str());
  write_file_atomic(out / "comparison.json",
                    json{{"dataset", dataset}, {"seeds", seeds}, {"methods", rows}}.dump(2) + "\n");
  std::cout << csv.str();
  return any_ok ? 0 : 1;
}

GradcheckOptions gradcheck_options(const std::optional<std::string>& path) {
  GradcheckOptions options;
  if (!path) return options;
  std::ifstream in(*path);
  if (!in) throw ConfigError("cannot read '" + *path + "'");
  try {
    const json j = json::parse(in);
    for (const auto& [key, value] : j.items()) {
      if (key == "d") options.instance.width = value.get<int>();
      else if (key == "m") options.instance.samples = value.get<int>();
      else if (key == "K") options.instance.intervals = value.get<int>();
      else if (key == "seed") options.seed = value.get<std::uint64_t>();
      else if (key == "lambda") options.instance.lambda = value.get<double>();
      else if (key == "nonuniform") options.instance.nonuniform = value.get<bool>();
      else if (key == "head") {
        const auto head = value.get<std::string>();
        if (head == "binary") options.instance.head = HeadKind::BinarySigmoid;
        else if (head == "multiclass") options.instance.head = HeadKind::MulticlassSoftmax;
        else throw ConfigError("unknown head '" + head + "'");
      } else {
        throw ConfigError("unknown gradcheck key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  if (options.instance.width < 1 || options.instance.samples < 1 || options.instance.intervals < 1) {
    throw ConfigError("gradcheck sizes must be positive");
  }
  return options;
}

int cmd_gradcheck(const std::optional<std::string>& config_path, std::optional<std::uint64_t> seed,
                  bool corrupt) {
  GradcheckOptions options;
  try {
    options = gradcheck_options(config_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (seed) options.seed = *seed;
  options.corrupt_vjp = corrupt;
  const GradcheckReport report = run_gradcheck(options);
  print_report(std::cout, report);
  return report.passed() ? 0 : kExitGradcheck;
}

int cmd_indicators(const std::optional<std::string>& config_path, const std::string& checkpoint_path,
                   const fs::path& out) {
  Checkpoint checkpoint;
  TrainConfig config;
  try {
    checkpoint = load_checkpoint(checkpoint_path);
    config = config_path ? load_config(*config_path) : checkpoint.config;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  const DatasetSplits data = load_dataset(config);
  const ControlPath theta = checkpoint.control();
  Problem problem = make_problem(config, data.train, data.head, checkpoint.w_in, checkpoint.w_out);
  if (problem.field.param_count() != theta.param_count()) {
    std::cerr << "error: checkpoint width does not match the config\n";
    return kExitConfig;
  }
  const ForwardPass pass = forward(problem, theta);
  const AdjointTrajectory adjoint = backward(problem, theta, pass.state);
  const IndicatorReport report = indicate(problem.field, pass.state, theta, adjoint, config.lambda,
                                          SupSampling{config.sup_samples});
  std::ostringstream csv;
  write_indicator_csv(csv, report);
  fs::create_directories(out);
  write_file_atomic(out / "indicators.csv", csv.str());
  const json history{{"initial", checkpoint.initial_nodes},
                     {"insertions", json::array()},
                     {"final", checkpoint.nodes},
                     {"argmax", report.argmax},
                     {"estimate", report.estimate}};
  json insertions = json::array();
  for (const InsertionEvent& e : checkpoint.insertions) {
    insertions.push_back({{"iteration", e.iteration}, {"interval", e.interval}, {"time", e.time}, {"nodes", e.nodes}});
  }
  json grids = history;
  grids["insertions"] = insertions;
  write_file_atomic(out / "grids.json", grids.dump(2) + "\n");
  std::cout << report.intervals.size() << " intervals, refinement target k = " << report.argmax << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth-adaptive neural ODE training"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string config_path;
  std::optional<std::string> opt_config;
  std::string out = "runs/latest";
  std::string dataset = "swiss_roll";
  std::string checkpoint;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  int threads = 1;
  bool trajectories = false;
  bool quiet = false;
  bool corrupt = false;

  auto add_overrides = [&](CLI::App* sub) {
    sub->add_option("--seed", overrides.seed, "Override the config seed");
    sub->add_option("--mode", overrides.mode, "adaptive | random | fixed")
        ->check(CLI::IsMember({"adaptive", "random", "fixed"}));
    sub->add_option("--it-max", overrides.it_max, "Override it_max");
  };

  CLI::App* train_cmd = app.add_subcommand("train", "Run one training");
  train_cmd->add_option("--config", config_path, "JSON config")->required();
  train_cmd->add_option("--out", out, "Run directory");
  train_cmd->add_flag("--trajectories", trajectories, "Also write state.csv and adjoint.csv");
  train_cmd->add_flag("--quiet", quiet, "No progress lines");
  add_overrides(train_cmd);

  CLI::App* compare_cmd = app.add_subcommand("compare", "Adaptive vs random vs fixed over seeds");
  compare_cmd->add_option("--dataset", dataset, "swiss_roll | peaks")
      ->check(CLI::IsMember({"swiss_roll", "peaks"}));
  compare_cmd->add_option("--config", opt_config, "JSON config (defaults to the dataset preset)");
  compare_cmd->add_option("--seeds", seeds, "Seeds")->delimiter(',');
  compare_cmd->add_option("--out", out, "Output directory");
  compare_cmd->add_option("--threads", threads, "Concurrent seeds")->check(CLI::PositiveNumber);
  add_overrides(compare_cmd);

  CLI::App* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference derivative checks");
  grad_cmd->add_option("--config", opt_config, "JSON with d, m, K, seed, lambda, head, nonuniform");
  grad_cmd->add_option("--seed", overrides.seed, "Instance seed");
  grad_cmd->add_flag("--corrupt-vjp", corrupt, "Perturb the analytic vjp_state (negative control)");

  CLI::App* ind_cmd = app.add_subcommand("indicators", "Per-interval error indicators of a checkpoint");
  ind_cmd->add_option("--checkpoint", checkpoint, "checkpoint.json of a prior run")->required();
  ind_cmd->add_option("--config", opt_config, "Config (defaults to the one stored in the checkpoint)");
  ind_cmd->add_option("--out", out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return cmd_train(config_path, overrides, out, trajectories, quiet);
    if (*compare_cmd) return cmd_compare(dataset, opt_config, seeds, overrides, out, threads);
    if (*grad_cmd) return cmd_gradcheck(opt_config, overrides.seed, corrupt);
    if (*ind_cmd) return cmd_indicators(opt_config, checkpoint, out);
  } catch (const NonFiniteError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
