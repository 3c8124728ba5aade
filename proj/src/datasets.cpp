#include "nodeadapt/datasets.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <vector>

#include "nodeadapt/errors.hpp"

namespace nodeadapt {

namespace {

constexpr int kSpiralPoints = 513;
constexpr int kPeaksResolution = 256;
constexpr int kPeaksPerClass = 1000;
constexpr int kPeaksTrainPerClass = 800;
constexpr int kPeaksClasses = 5;

}  // namespace

DatasetSplits swiss_roll() {
  std::vector<std::array<double, 3>> points;  // x1, x2, label
  points.reserve(2 * kSpiralPoints);
  for (int spiral = 0; spiral < 2; ++spiral) {
    const double offset = spiral == 0 ? 0.0 : 0.2;
    for (int j = 0; j < kSpiralPoints; ++j) {
      const double s = static_cast<double>(j) / (kSpiralPoints - 1);
      const double r = s + offset;
      const double phi = 4.0 * std::numbers::pi * s;
      points.push_back({r * std::cos(phi), r * std::sin(phi), static_cast<double>(spiral)});
    }
  }
  DatasetSplits out;
  out.head = HeadKind::BinarySigmoid;
  const auto half = static_cast<Eigen::Index>(points.size() / 2);
  for (LabeledSet* set : {&out.train, &out.validation}) {
    set->inputs.resize(2, half);
    set->labels.resize(1, half);
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    LabeledSet& set = i % 2 == 0 ? out.train : out.validation;
    const auto col = static_cast<Eigen::Index>(i / 2);
    set.inputs(0, col) = points[i][0];
    set.inputs(1, col) = points[i][1];
    set.labels(0, col) = points[i][2];
  }
  return out;
}

double peaks_function(double x1, double x2) {
  return 3.0 * (1.0 - x1) * (1.0 - x1) * std::exp(-x1 * x1 - (x2 + 1.0) * (x2 + 1.0)) -
         10.0 * (x1 / 5.0 - x1 * x1 * x1 - std::pow(x2, 5)) * std::exp(-x1 * x1 - x2 * x2) -
         std::exp(-(x1 + 1.0) * (x1 + 1.0) - x2 * x2) / 3.0;
}

int peaks_class(double value) {
  int cls = 0;
  while (cls < static_cast<int>(kPeaksThresholds.size()) &&
         value >= kPeaksThresholds[static_cast<std::size_t>(cls)]) {
    ++cls;
  }
  return cls;
}

DatasetSplits peaks(SeededRng& rng) {
  std::array<std::vector<std::array<double, 2>>, kPeaksClasses> members;
  for (int i = 0; i < kPeaksResolution; ++i) {
    const double x2 = -3.0 + 6.0 * i / (kPeaksResolution - 1);
    for (int j = 0; j < kPeaksResolution; ++j) {
      const double x1 = -3.0 + 6.0 * j / (kPeaksResolution - 1);
      members[static_cast<std::size_t>(peaks_class(peaks_function(x1, x2)))].push_back({x1, x2});
    }
  }

  DatasetSplits out;
  out.head = HeadKind::MulticlassSoftmax;
  const Eigen::Index train_size = kPeaksClasses * kPeaksTrainPerClass;
  const Eigen::Index val_size = kPeaksClasses * (kPeaksPerClass - kPeaksTrainPerClass);
  out.train.inputs.resize(2, train_size);
  out.train.labels = DenseMatrix::Zero(kPeaksClasses, train_size);
  out.validation.inputs.resize(2, val_size);
  out.validation.labels = DenseMatrix::Zero(kPeaksClasses, val_size);

  Eigen::Index train_col = 0;
  Eigen::Index val_col = 0;
  for (int cls = 0; cls < kPeaksClasses; ++cls) {
    auto& pool = members[static_cast<std::size_t>(cls)];
    if (static_cast<int>(pool.size()) < kPeaksPerClass) {
      throw DatasetError("peaks class " + std::to_string(cls + 1) + " has only " +
                         std::to_string(pool.size()) + " grid points");
    }
    // Partial Fisher-Yates: the first kPeaksPerClass entries become the sample.
    for (int i = 0; i < kPeaksPerClass; ++i) {
      const std::size_t pick = static_cast<std::size_t>(i) + rng.uniform_index(pool.size() - static_cast<std::size_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[pick]);
    }
    for (int i = 0; i < kPeaksPerClass; ++i) {
      const auto& point = pool[static_cast<std::size_t>(i)];
      LabeledSet& set = i < kPeaksTrainPerClass ? out.train : out.validation;
      Eigen::Index& col = i < kPeaksTrainPerClass ? train_col : val_col;
      set.inputs(0, col) = point[0];
      set.inputs(1, col) = point[1];
      set.labels(cls, col) = 1.0;
      ++col;
    }
  }
  return out;
}

void write_dataset_csv(std::ostream& out, const LabeledSet& set) {
  const auto precision = out.precision(17);
  out << "x1,x2,label\n";
  for (Eigen::Index i = 0; i < set.size(); ++i) {
    Eigen::Index label = 0;
    if (set.labels.rows() == 1) {
      label = static_cast<Eigen::Index>(set.labels(0, i));
    } else {
      set.labels.col(i).maxCoeff(&label);
    }
    out << set.inputs(0, i) << ',' << set.inputs(1, i) << ',' << label << '\n';
  }
  out.precision(precision);
}

}  // namespace nodeadapt
