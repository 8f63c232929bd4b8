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

#include "gcl/task_stream.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

namespace gcl {

void SplitSpec::validate() const {
  for (double f : {train_frac, val_frac, test_frac}) {
    if (!(f > 0.0 && f < 1.0)) throw ConfigError("split fractions must lie in (0,1)");
  }
  if (std::abs(train_frac + val_frac + test_frac - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
}

TaskStream::TaskStream(std::vector<Task> tasks, std::vector<int> class_order)
    : tasks_(std::move(tasks)), class_order_(std::move(class_order)) {}

int TaskStream::column_of(int label) const {
  auto it = std::find(class_order_.begin(), class_order_.end(), label);
  if (it == class_order_.end()) throw std::out_of_range("label not in stream");
  return static_cast<int>(it - class_order_.begin());
}

int TaskStream::num_seen_classes(int t) const {
  int seen = 0;
  for (int s = 0; s <= t && s < num_tasks(); ++s) {
    seen += static_cast<int>(task(s).classes.size());
  }
  return seen;
}

int TaskStream::task_of_class(int label) const {
  for (int t = 0; t < num_tasks(); ++t) {
    const auto& cls = task(t).classes;
    if (std::find(cls.begin(), cls.end(), label) != cls.end()) return t;
  }
  throw std::out_of_range("label not in stream");
}

std::vector<GlobalId> TaskStream::train_of_class(int label) const {
  const Task& owner = task(task_of_class(label));
  std::vector<GlobalId> out;
  for (GlobalId id : owner.train) {
    if (owner.graph.label(owner.graph.require_local(id)) == label) out.push_back(id);
  }
  return out;
}

namespace {

std::vector<int> resolve_class_order(const Graph& full, int classes_per_task, int num_tasks,
                                     std::optional<std::vector<int>> class_order) {
  if (classes_per_task < 1 || num_tasks < 1) {
    throw ConfigError("classes_per_task and num_tasks must be positive");
  }
  const auto labels = full.distinct_labels();
  std::vector<int> order = class_order ? *class_order : labels;
  const std::size_t needed = static_cast<std::size_t>(classes_per_task) * num_tasks;
  if (order.size() < needed) {
    throw ConfigError("need " + std::to_string(needed) + " classes, dataset has " +
                      std::to_string(order.size()));
  }
  std::set<int> known(labels.begin(), labels.end());
  std::set<int> used;
  for (std::size_t i = 0; i < needed; ++i) {
    if (!known.contains(order[i])) throw ConfigError("class order names unknown label");
    if (!used.insert(order[i]).second) throw ConfigError("class order repeats a label");
  }
  order.resize(needed);
  return order;
}

}  // namespace

std::vector<Graph> build_snapshots(const Graph& full, int classes_per_task, int num_tasks,
                                   std::optional<std::vector<int>> class_order) {
  const auto order = resolve_class_order(full, classes_per_task, num_tasks, std::move(class_order));
  std::vector<Graph> snapshots;
  std::set<int> seen;
  for (int t = 0; t < num_tasks; ++t) {
    for (int c = 0; c < classes_per_task; ++c) {
      seen.insert(order[static_cast<std::size_t>(t * classes_per_task + c)]);
    }
    std::vector<int> nodes;
    for (int v = 0; v < full.num_nodes(); ++v) {
      if (seen.contains(full.label(v))) nodes.push_back(v);
    }
    snapshots.push_back(full.induced_subgraph(nodes));
  }
  return snapshots;
}

TaskStream build_task_stream(const Graph& full, int classes_per_task, int num_tasks,
                             const SplitSpec& split, std::optional<std::vector<int>> class_order) {
  split.validate();
  const auto order = resolve_class_order(full, classes_per_task, num_tasks, class_order);
  auto snapshots = build_snapshots(full, classes_per_task, num_tasks, order);

  std::map<int, std::vector<GlobalId>> members;
  for (int v = 0; v < full.num_nodes(); ++v) members[full.label(v)].push_back(full.global_id(v));

  std::vector<Task> tasks;
  for (int t = 0; t < num_tasks; ++t) {
    Task task;
    task.graph = std::move(snapshots[static_cast<std::size_t>(t)]);
    for (int c = 0; c < classes_per_task; ++c) {
      const int label = order[static_cast<std::size_t>(t * classes_per_task + c)];
      task.classes.push_back(label);
      auto nodes = members[label];
      const int n = static_cast<int>(nodes.size());
      const int n_test = std::max(1, static_cast<int>(std::lround(split.test_frac * n)));
      const int n_val = std::max(1, static_cast<int>(std::lround(split.val_frac * n)));
      const int n_train = n - n_test - n_val;
      if (n_train < 1) {
        throw DatasetError("class " + std::to_string(label) + " has " + std::to_string(n) +
                           " nodes, too few for a train/val/test split");
      }
      Rng rng = make_rng(split.seed, "split/" + std::to_string(label));
      std::shuffle(nodes.begin(), nodes.end(), rng);
      auto first = nodes.begin();
      task.train.insert(task.train.end(), first, first + n_train);
      task.val.insert(task.val.end(), first + n_train, first + n_train + n_val);
      task.test.insert(task.test.end(), first + n_train + n_val, nodes.end());
    }
    std::sort(task.train.begin(), task.train.end());
    std::sort(task.val.begin(), task.val.end());
    std::sort(task.test.begin(), task.test.end());
    tasks.push_back(std::move(task));
  }
  return TaskStream(std::move(tasks), order);
}

}  // namespace gcl
