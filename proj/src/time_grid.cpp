#include "nodeadapt/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nodeadapt/errors.hpp"

namespace nodeadapt {

TimeGrid::TimeGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw InvalidArgument("TimeGrid needs at least two nodes");
  if (nodes_.front() != 0.0) throw InvalidArgument("TimeGrid must start at t_0 = 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1]) || !std::isfinite(nodes_[i])) {
      throw InvalidArgument("TimeGrid nodes must be finite and strictly increasing");
    }
  }
}

TimeGrid TimeGrid::uniform(int intervals, double final_time) {
  if (intervals < 1) throw InvalidArgument("uniform grid needs K >= 1");
  if (!(final_time > 0.0)) throw InvalidArgument("uniform grid needs T > 0");
  std::vector<double> nodes(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) {
    nodes[static_cast<std::size_t>(k)] = final_time * static_cast<double>(k) / intervals;
  }
  nodes.back() = final_time;
  return TimeGrid(std::move(nodes));
}

double TimeGrid::step(int k) const {
  if (k == 0 || k == intervals() + 1) return 0.0;
  if (k < 0 || k > intervals() + 1) {
    throw IndexOutOfRange("interval index " + std::to_string(k) + " out of range");
  }
  return nodes_[static_cast<std::size_t>(k)] - nodes_[static_cast<std::size_t>(k) - 1];
}

double TimeGrid::midpoint(int k) const {
  if (k < 1 || k > intervals()) {
    throw IndexOutOfRange("interval index " + std::to_string(k) + " out of range");
  }
  return 0.5 * (nodes_[static_cast<std::size_t>(k) - 1] + nodes_[static_cast<std::size_t>(k)]);
}

double TimeGrid::max_step() const {
  double out = 0.0;
  for (int k = 1; k <= intervals(); ++k) out = std::max(out, step(k));
  return out;
}

TimeGrid TimeGrid::insert_midpoint(int k) const {
  if (k < 1 || k > intervals()) {
    throw IndexOutOfRange("cannot insert into interval " + std::to_string(k) + " of a " +
                          std::to_string(intervals()) + "-interval grid");
  }
  std::vector<double> nodes = nodes_;
  nodes.insert(nodes.begin() + k, midpoint(k));
  return TimeGrid(std::move(nodes));
}

TimeGrid TimeGrid::refined(int factor) const {
  if (factor < 1) throw InvalidArgument("refinement factor must be >= 1");
  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(intervals() * factor + 1));
  nodes.push_back(nodes_.front());
  for (int k = 1; k <= intervals(); ++k) {
    const double left = node(k - 1);
    const double tau = step(k);
    for (int j = 1; j < factor; ++j) nodes.push_back(left + tau * j / factor);
    nodes.push_back(node(k));
  }
  return TimeGrid(std::move(nodes));
}

}  // namespace nodeadapt
