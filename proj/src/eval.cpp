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

#include "gcl/eval.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gcl/replay.hpp"

namespace gcl {

AccuracyMatrix::AccuracyMatrix(int num_tasks)
    : num_tasks_(num_tasks), cells_(static_cast<std::size_t>(num_tasks * num_tasks)) {
  if (num_tasks < 0) throw std::invalid_argument("negative task count");
}

void AccuracyMatrix::set(int i, int j, double value) {
  if (i < 0 || i >= num_tasks_ || j < 0 || j > i) {
    throw std::out_of_range("accuracy cell (" + std::to_string(i) + "," + std::to_string(j) +
                            ") outside the lower triangle");
  }
  cells_[static_cast<std::size_t>(i * num_tasks_ + j)] = value;
}

std::optional<double> AccuracyMatrix::get(int i, int j) const {
  if (i < 0 || i >= num_tasks_ || j < 0 || j >= num_tasks_) throw std::out_of_range("accuracy cell");
  return cells_[static_cast<std::size_t>(i * num_tasks_ + j)];
}

double AccuracyMatrix::at(int i, int j) const {
  auto v = get(i, j);
  if (!v) throw std::out_of_range("accuracy cell not filled");
  return *v;
}

bool AccuracyMatrix::row_complete(int i) const {
  for (int j = 0; j <= i; ++j) {
    if (!get(i, j)) return false;
  }
  return true;
}

std::vector<std::vector<double>> AccuracyMatrix::rows() const {
  std::vector<std::vector<double>> out;
  for (int i = 0; i < num_tasks_; ++i) {
    std::vector<double> row;
    for (int j = 0; j <= i; ++j) {
      auto v = get(i, j);
      if (!v) break;
      row.push_back(*v);
    }
    out.push_back(std::move(row));
  }
  return out;
}

AccuracyMatrix AccuracyMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  AccuracyMatrix a(static_cast<int>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() > i + 1) throw std::invalid_argument("row longer than the lower triangle");
    for (std::size_t j = 0; j < rows[i].size(); ++j) a.set(static_cast<int>(i), static_cast<int>(j), rows[i][j]);
  }
  return a;
}

double pm(const AccuracyMatrix& a) {
  const int t = a.num_tasks();
  if (t == 0 || !a.row_complete(t - 1)) throw std::invalid_argument("final accuracy row incomplete");
  double sum = 0.0;
  for (int j = 0; j < t; ++j) sum += a.at(t - 1, j);
  return sum / t;
}

std::optional<double> fm(const AccuracyMatrix& a) {
  const int t = a.num_tasks();
  if (t < 2) return std::nullopt;
  if (!a.row_complete(t - 1)) throw std::invalid_argument("final accuracy row incomplete");
  double sum = 0.0;
  for (int i = 0; i < t - 1; ++i) sum += a.at(i, i) - a.at(t - 1, i);
  return sum / (t - 1);
}

std::optional<double> buff_div(const Matrix& buffer_points, const Matrix& train_points) {
  if (buffer_points.rows() < 2 || train_points.rows() < 2) return std::nullopt;
  const double train = class_pair_mean_distance(train_points);
  if (train == 0.0) return std::nullopt;
  return class_pair_mean_distance(buffer_points) / train;
}

namespace {

double mean_distance_to(const Matrix& points, const Eigen::RowVectorXd& center) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) sum += (points.row(i) - center).norm();
  return sum / static_cast<double>(points.rows());
}

}  // namespace

std::optional<double> corr_div(const Matrix& correct_points, const Matrix& test_points,
                               const Eigen::RowVectorXd& center) {
  if (correct_points.rows() == 0 || test_points.rows() == 0) return std::nullopt;
  const double all = mean_distance_to(test_points, center);
  if (all == 0.0) return std::nullopt;
  return mean_distance_to(correct_points, center) / all;
}

std::optional<double> dist_from_center(const Matrix& buffer_points, const Matrix& train_points) {
  if (buffer_points.rows() == 0 || train_points.rows() < 2) return std::nullopt;
  const double pair = class_pair_mean_distance(train_points);
  if (pair == 0.0) return std::nullopt;
  const Eigen::RowVectorXd center = train_points.colwise().mean();
  return mean_distance_to(buffer_points, center) / pair;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - out.mean) * (v - out.mean);
  out.stddev = std::sqrt(var / static_cast<double>(values.size()));
  return out;
}

}  // namespace gcl
