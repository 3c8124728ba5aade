#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nodeadapt/objective.hpp"

namespace nodeadapt {

/// Small random problem for derivative checks.
struct RandomInstance {
  Problem problem;
  ControlPath theta;
};

struct InstanceSpec {
  int width = 3;
  int samples = 4;
  int intervals = 6;
  double final_time = 1.0;
  bool nonuniform = true;
  HeadKind head = HeadKind::BinarySigmoid;
  double lambda = 1e-2;
};

RandomInstance make_random_instance(const InstanceSpec& shape, SeededRng& rng);

/// max_i |a_i - b_i| / max(|b_i|, floor * max_j |b_j|)
double componentwise_relative_error(const Vector& a, const Vector& b, double floor = 1e-3);

/// max_i |a_i - b_i| / max_j |b_j|
double normwise_relative_error(const Vector& a, const Vector& b);

/// Relative error of the directional derivative predicted by the H1
/// gradient, delta^T (B (x) I) g, against central differences of J + R,
/// pooled over the directions: sum |pred - fd| / sum |fd|.
/// Controls and directions are continuous piecewise-linear functions defined
/// on `theta.grid` and sampled on `grid` so that refined grids see the same
/// functions.
double h1_consistency_error(const Problem& problem, const ControlPath& theta,
                            const std::vector<ControlPath>& directions, const TimeGrid& grid);

struct H1Consistency {
  std::vector<int> intervals;
  std::vector<double> errors;
  std::vector<double> ratios;  // errors[i] / errors[i + 1]
};

/// Errors on `theta.grid` and `levels - 1` successive uniform bisections.
H1Consistency h1_consistency_study(const Problem& problem, const ControlPath& theta,
                                   int directions, int levels, SeededRng& rng);

struct GradcheckOptions {
  InstanceSpec instance;
  std::uint64_t seed = 0;
  bool corrupt_vjp = false;  // negative control: perturbs the analytic vjp_state
  double tolerance = 1e-5;
  double min_ratio = 1.8;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string criterion;
};

struct GradcheckReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

GradcheckReport run_gradcheck(const GradcheckOptions& options);

void print_report(std::ostream& out, const GradcheckReport& report);

}  // namespace nodeadapt
