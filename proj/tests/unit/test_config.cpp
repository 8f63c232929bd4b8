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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gcl/config.hpp"
#include "gcl/report.hpp"

using namespace gcl;

TEST_CASE("config text round-trips") {
  ExperimentConfig c;
  c.set("beta", "0.25");
  c.set("method", "cm");
  c.set("buffer_size", "40");
  c.set("embedding", "hidden");
  c.set("seed_base", "17");
  const ExperimentConfig back = ExperimentConfig::parse(c.to_text());
  CHECK(back == c);
  CHECK(back.train.beta == 0.25);
  CHECK(back.train.embedding == EmbeddingLayer::hidden);
  CHECK(ExperimentConfig::parse(back.to_text()).to_text() == c.to_text());
  CHECK(ExperimentConfig{}.values().at("beta") == "0.1");
  CHECK(ExperimentConfig::keys().size() == ExperimentConfig{}.values().size());
}

TEST_CASE("config parsing") {
  const auto c = ExperimentConfig::parse("# comment\n\n  dataset = data/cora  \nseeds=3\nseed_base = 5\n");
  CHECK(c.dataset == "data/cora");
  CHECK(c.seed_list() == std::vector<std::uint64_t>{5, 6, 7});
  CHECK_THROWS_AS(ExperimentConfig::parse("colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("beta\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("beta = high\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("beta = 2\n").validate(), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("method = magic\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("seeds = 0\n").validate(), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("train_frac = 0.9\n").validate(), ConfigError);
  CHECK_NOTHROW(c.validate());
  CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/gcl.cfg"), ConfigError);
}

TEST_CASE("config file loading") {
  const auto path = std::filesystem::temp_directory_path() / "gcl_test.cfg";
  {
    std::ofstream out(path);
    out << "tau = 0.7\nn_add = 3\n";
  }
  const auto c = ExperimentConfig::load(path);
  CHECK(c.train.tau == 0.7);
  CHECK(c.train.n_add == 3);
  std::filesystem::remove(path);
}

TEST_CASE("reports are reproducible apart from the timestamp") {
  ExperimentConfig c = ExperimentConfig::parse(
      "dataset = synthetic:citeseer\nepochs_cls = 3\nepochs_lp = 2\nhidden_dim = 8\nbuffer_size = 12\n"
      "k_cand = 5\nn_add = 2\nseed_base = 7\n");
  const ResolvedDataset data = resolve_dataset(c.dataset);
  auto once = [&] {
    auto result = run_experiment(data.graph, c.stream,
                                 c.train, MethodSpec::named(c.method), c.seed_list());
    auto report = run_report(c, DatasetInfo::of(data), result);
    report.erase("created_at");
    for (auto& seed : report["result"]["seeds"]) seed.erase("seconds");
    for (auto& seed : report["result"]["seeds"]) {
      for (auto& task : seed["tasks"]) task.erase("seconds");
    }
    return report;
  };
  const auto a = once();
  CHECK(a == once());
  CHECK(a["schema_version"] == kReportSchemaVersion);
  CHECK(a["dataset"]["num_nodes"] == 3312);
  CHECK(a["result"]["seeds"].size() == 1);
}

TEST_CASE("ablation grid has seven rows") {
  ExperimentConfig c;
  c.set("epochs_cls", "1");
  const auto rows = ablation_grid(c);
  REQUIRE(rows.size() == 7);
  CHECK(rows[3].result.config.lambda == 1.0);
  CHECK(rows[4].result.config.lambda == 0.0);
  CHECK(rows[5].result.method.name == "dslr");
  CHECK(rows[6].result.method.structure == Structure::boost);
}
