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

// JSON run reports.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gcl/config.hpp"
#include "gcl/trainer.hpp"

namespace gcl {

inline constexpr int kReportSchemaVersion = 1;

struct DatasetInfo {
  std::string name;
  std::string source;
  int num_nodes = 0;
  std::size_t num_edges = 0;
  int num_features = 0;
  int num_classes = 0;

  static DatasetInfo of(const ResolvedDataset& d);
};

nlohmann::json seed_json(const SeedResult& r);
nlohmann::json experiment_json(const ExperimentResult& r);

/// Full report: schema version, creation time, config echo, dataset facts,
/// per-seed results and aggregates.
nlohmann::json run_report(const ExperimentConfig& config, const DatasetInfo& dataset,
                          const ExperimentResult& result);

struct AblationRow {
  std::string label;  // e.g. "(4)-1"
  std::string description;
  ExperimentResult result;
};

/// The seven-row component grid: mf, cd_only, sl_only, lambda = 1,
/// lambda = 0, full method, homophily boost.
std::vector<AblationRow> ablation_grid(const ExperimentConfig& config);

nlohmann::json ablation_report(const ExperimentConfig& config, const DatasetInfo& dataset,
                               const std::vector<AblationRow>& rows);

/// Plain-text table of PM/FM per row.
std::string summary_table(const std::vector<std::pair<std::string, const ExperimentResult*>>& rows);

}  // namespace gcl
