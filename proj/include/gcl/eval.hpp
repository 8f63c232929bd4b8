// Copyright 2026 The gcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gcl/common.hpp"

namespace gcl {

/// Lower-triangular task accuracies in percent; entry (i, j) is the accuracy
/// on task j after training through task i (both 0-based).
class AccuracyMatrix {
 public:
  explicit AccuracyMatrix(int num_tasks = 0);

  int num_tasks() const { return num_tasks_; }
  void set(int i, int j, double value);
  std::optional<double> get(int i, int j) const;
  double at(int i, int j) const;
  bool row_complete(int i) const;

  std::vector<std::vector<double>> rows() const;
  static AccuracyMatrix from_rows(const std::vector<std::vector<double>>& rows);

  bool operator==(const AccuracyMatrix&) const = default;

 private:
  int num_tasks_ = 0;
  std::vector<std::optional<double>> cells_;
};

/// Mean of the final row. Throws if that row is incomplete.
double pm(const AccuracyMatrix& a);
/// Mean drop from the diagonal to the final row over all but the last task;
/// nullopt for a single task.
std::optional<double> fm(const AccuracyMatrix& a);

/// Mean pairwise distance of the buffer rows over that of the training rows.
std::optional<double> buff_div(const Matrix& buffer_points, const Matrix& train_points);
/// Mean distance to `center` of correctly predicted rows over that of all test rows.
std::optional<double> corr_div(const Matrix& correct_points, const Matrix& test_points,
                               const Eigen::RowVectorXd& center);
/// Mean distance of buffer rows to the training mean over the mean pairwise
/// training distance.
std::optional<double> dist_from_center(const Matrix& buffer_points, const Matrix& train_points);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population
};
MeanStd mean_std(std::span<const double> values);

}  // namespace gcl
