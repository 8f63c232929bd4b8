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

// Flat key=value experiment configuration.
//
//   # comment
//   dataset = data/cora
//   method = dslr
//   beta = 0.1
//
// Keys: dataset, method, buffer_size, beta, lambda, n_add, k_cand, tau, r,
// sl_ratio, epochs_cls, epochs_lp, learning_rate, hidden_dim, num_layers,
// embedding, mean_space, classes_per_task, num_tasks, train_frac, val_frac, test_frac,
// seeds, seed_base, threads, output.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gcl/graph.hpp"
#include "gcl/trainer.hpp"

namespace gcl {

struct ExperimentConfig {
  std::string dataset = "synthetic:cora";
  std::string method = "dslr";
  ContinualConfig train;
  StreamSpec stream;
  int seeds = 1;
  std::uint64_t seed_base = 0;
  int threads = 1;
  std::string output = "report.json";

  /// Sets one key from its text value. Throws ConfigError on unknown keys
  /// or unparsable values; ranges are checked by validate().
  void set(const std::string& key, const std::string& value);
  /// Every key with its current value, formatted so that set() restores it.
  std::map<std::string, std::string> values() const;
  std::string to_text() const;
  void validate() const;

  std::vector<std::uint64_t> seed_list() const;

  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  static std::vector<std::string> keys();

  bool operator==(const ExperimentConfig& other) const { return values() == other.values(); }
};

struct ResolvedDataset {
  std::string name;
  std::string source;  // "directory <path>" or "synthetic <preset>"
  Graph graph;
  std::vector<std::string> warnings;
};

/// "synthetic:cora" / "synthetic:citeseer" generate the built-in stand-ins;
/// anything else is a dataset directory.
ResolvedDataset resolve_dataset(const std::string& spec);

}  // namespace gcl
