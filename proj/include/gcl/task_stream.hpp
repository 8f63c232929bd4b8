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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gcl/graph.hpp"

namespace gcl {

struct SplitSpec {
  double train_frac = 0.6;
  double val_frac = 0.2;
  double test_frac = 0.2;
  std::uint64_t seed = 0;

  /// Throws ConfigError unless each fraction is in (0,1) and they sum to 1.
  void validate() const;
};

/// One class-incremental task: the classes it introduces, the evolving-graph
/// snapshot visible while it is trained, and the split of its own classes.
struct Task {
  std::vector<int> classes;
  Graph graph;
  std::vector<GlobalId> train;
  std::vector<GlobalId> val;
  std::vector<GlobalId> test;
};

class TaskStream {
 public:
  TaskStream(std::vector<Task> tasks, std::vector<int> class_order);

  int num_tasks() const { return static_cast<int>(tasks_.size()); }
  const Task& task(int t) const { return tasks_.at(static_cast<std::size_t>(t)); }
  std::span<const Task> tasks() const { return tasks_; }

  /// All classes of the stream in task order; a label's position here is its
  /// output column in the classifier.
  std::span<const int> class_order() const { return class_order_; }
  int num_classes() const { return static_cast<int>(class_order_.size()); }
  /// Output column of `label`; throws std::out_of_range if not in the stream.
  int column_of(int label) const;
  /// Number of classes introduced in tasks 0..t.
  int num_seen_classes(int t) const;
  /// Training nodes of class `label` (global ids, ascending).
  std::vector<GlobalId> train_of_class(int label) const;
  /// Task that introduces `label`.
  int task_of_class(int label) const;

 private:
  std::vector<Task> tasks_;
  std::vector<int> class_order_;
};

/// Evolving-graph snapshots without any split: snapshot t is the subgraph of
/// `full` induced by nodes whose label belongs to tasks 0..t. Classes are
/// assigned to tasks in ascending label order unless `class_order` is given.
std::vector<Graph> build_snapshots(const Graph& full, int classes_per_task,
                                   int num_tasks,
                                   std::optional<std::vector<int>> class_order = {});

/// Snapshots plus a per-class stratified train/val/test split.
/// Throws ConfigError when there are too few classes and DatasetError when a
/// class cannot place at least one node in every split.
TaskStream build_task_stream(const Graph& full, int classes_per_task, int num_tasks,
                             const SplitSpec& split,
                             std::optional<std::vector<int>> class_order = {});

}  // namespace gcl
