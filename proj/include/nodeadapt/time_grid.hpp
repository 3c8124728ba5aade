#pragma once

#include <vector>

namespace nodeadapt {

/// Partition 0 = t_0 < t_1 < ... < t_K = T of the depth axis.
///
/// Intervals are numbered 1..K: interval k is [t_{k-1}, t_k] with length
/// step(k). step(0) and step(K+1) return 0 so boundary formulas can be
/// written uniformly.
class TimeGrid {
 public:
  /// Validates strict monotonicity and t_0 = 0.
  explicit TimeGrid(std::vector<double> nodes);

  static TimeGrid uniform(int intervals, double final_time);

  int intervals() const { return static_cast<int>(nodes_.size()) - 1; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  double final_time() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }

  double node(int k) const { return nodes_.at(static_cast<std::size_t>(k)); }
  double step(int k) const;
  double midpoint(int k) const;
  double max_step() const;

  /// Bisects interval k; every other node is kept unchanged.
  TimeGrid insert_midpoint(int k) const;

  /// Grid with every interval split into `factor` equal pieces.
  TimeGrid refined(int factor) const;

  bool operator==(const TimeGrid& other) const = default;

 private:
  std::vector<double> nodes_;
};

}  // namespace nodeadapt
