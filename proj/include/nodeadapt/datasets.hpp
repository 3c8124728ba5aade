#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>

#include "nodeadapt/linalg.hpp"
#include "nodeadapt/loss_head.hpp"

namespace nodeadapt {

/// Inputs (d_in x m) and labels (1 x m binary or d_out x m one-hot).
struct LabeledSet {
  DenseMatrix inputs;
  DenseMatrix labels;

  Eigen::Index size() const { return inputs.cols(); }
};

struct DatasetSplits {
  HeadKind head = HeadKind::BinarySigmoid;
  LabeledSet train;
  LabeledSet validation;

  Eigen::Index input_dim() const { return train.inputs.rows(); }
  Eigen::Index output_dim() const { return train.labels.rows(); }
};

/// Two interleaved spirals, 513 points each, r = s and phi = 4 pi s for
/// s = j / 512. The blue spiral (label 0) is r (cos phi, sin phi), the red one
/// (label 1) is (r + 0.2)(cos phi, sin phi). Walking blue then red, even
/// positions go to training and odd positions to validation: 513 + 513.
DatasetSplits swiss_roll();

/// The standard Peaks function
/// 3(1-x)^2 e^{-x^2-(y+1)^2} - 10(x/5 - x^3 - y^5) e^{-x^2-y^2} - e^{-(x+1)^2-y^2}/3.
double peaks_function(double x1, double x2);

inline constexpr std::array<double, 4> kPeaksThresholds{-2.2, 0.55, 1.75, 3.2};

/// Class index 0..4 of a Peaks value against the thresholds.
int peaks_class(double value);

/// Five level-set classes of the Peaks function on a 256 x 256 grid over
/// [-3, 3]^2; 1000 points sampled per class without replacement, 800 for
/// training and 200 for validation. One-hot labels in R^5.
DatasetSplits peaks(SeededRng& rng);

/// x1,x2,label rows (label is the class index for one-hot sets).
void write_dataset_csv(std::ostream& out, const LabeledSet& set);

}  // namespace nodeadapt
