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

#include <algorithm>
#include <cmath>

#include "gcl/dataset.hpp"
#include "gcl/trainer.hpp"

using namespace gcl;

namespace {

const Graph& small_graph() {
  static const Graph g = [] {
    SyntheticSpec spec;
    spec.class_sizes = {40, 40, 40, 40, 40, 40};
    spec.num_edges = 360;
    spec.num_features = 60;
    spec.words_per_node = 8.0;
    spec.topic_words_per_class = 12;
    spec.topic_words_per_subcluster = 5;
    spec.seed = 3;
    return generate_synthetic(spec);
  }();
  return g;
}

ContinualConfig quick_config() {
  ContinualConfig c;
  c.hidden_dim = 16;
  c.epochs_cls = 15;
  c.epochs_lp = 8;
  c.buffer_size = 12;
  c.k_cand = 10;
  c.n_add = 2;
  return c;
}

TaskStream quick_stream(std::uint64_t seed) { return stream_for_seed(small_graph(), StreamSpec{}, seed); }

}  // namespace

TEST_CASE("a continual run fills the accuracy matrix row by row") {
  const TaskStream stream = quick_stream(0);
  ContinualState state(stream, quick_config(), MethodSpec::named("dslr"), 0);
  for (int t = 0; t < stream.num_tasks(); ++t) {
    run_task(state);
    for (int j = 0; j <= t; ++j) {
      REQUIRE(state.accuracy.get(t, j).has_value());
      CHECK(*state.accuracy.get(t, j) >= 0.0);
      CHECK(*state.accuracy.get(t, j) <= 100.0);
    }
    CHECK(state.accuracy.row_complete(t));
    CHECK(state.buffer.size() <= 12);
    CHECK(state.buffer.classes().size() == static_cast<std::size_t>(2 * (t + 1)));
    int quota_total = 0;
    for (const auto& [cls, e] : state.records.back().quota) {
      CHECK(state.buffer.bucket(cls).size() == static_cast<std::size_t>(e));
      quota_total += e;
    }
    CHECK(quota_total == 12);
  }
  CHECK_THROWS_AS(run_task(state), std::logic_error);

  // The first task trains only the classifier.
  CHECK(state.records[0].lp_losses.empty());
  CHECK(state.records[0].edges_added == 0);
  CHECK(state.records[0].cls_losses.size() == 15);
  CHECK(state.records[1].lp_losses.size() == 8);
  CHECK(state.records[1].edges_added > 0);

  // Buffered nodes are training nodes of the class they are filed under.
  for (int cls : state.buffer.classes()) {
    const auto train = stream.train_of_class(cls);
    for (GlobalId id : state.buffer.bucket(cls)) {
      CHECK(std::find(train.begin(), train.end(), id) != train.end());
    }
  }
}

TEST_CASE("coverage-only replay equals the full method without refinement") {
  const TaskStream stream = quick_stream(1);
  ContinualConfig no_sl = quick_config();
  no_sl.sl_ratio = 0.0;
  const SeedResult a = run_continual(stream, quick_config(), MethodSpec::named("cd_only"), 1);
  const SeedResult b = run_continual(stream, no_sl, MethodSpec::named("dslr"), 1);
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.buffer == b.buffer);
  CHECK(b.edges_added == 0);
  CHECK(b.edges_deleted == 0);
}

TEST_CASE("runs are deterministic in the seed") {
  const TaskStream stream = quick_stream(2);
  const SeedResult a = run_continual(stream, quick_config(), MethodSpec::named("dslr"), 2);
  const SeedResult b = run_continual(stream, quick_config(), MethodSpec::named("dslr"), 2);
  CHECK(a.accuracy == b.accuracy);
  CHECK(a.buffer == b.buffer);
  CHECK(a.tasks.back().cls_losses == b.tasks.back().cls_losses);
  CHECK(a.delta_log.size() == b.delta_log.size());
}

TEST_CASE("every sampler yields a valid buffer") {
  const TaskStream stream = quick_stream(3);
  for (const std::string& name : MethodSpec::known_names()) {
    CAPTURE(name);
    const SeedResult r = run_continual(stream, quick_config(), MethodSpec::named(name), 3);
    std::size_t total = 0;
    for (const auto& [cls, nodes] : r.buffer) total += nodes.size();
    CHECK(total == 12);
    CHECK(std::isfinite(r.pm));
    REQUIRE(r.fm.has_value());
  }
  CHECK_THROWS_AS(MethodSpec::named("nope"), ConfigError);
}

TEST_CASE("mean-feature order can use the selection embedding") {
  const TaskStream stream = quick_stream(3);
  ContinualConfig cfg = quick_config();
  cfg.mean_space = MeanSpace::embedding;
  const SeedResult a = run_continual(stream, cfg, MethodSpec::named("mf"), 4);
  const SeedResult b = run_continual(stream, quick_config(), MethodSpec::named("mf"), 4);
  std::size_t total = 0;
  for (const auto& [cls, nodes] : a.buffer) total += nodes.size();
  CHECK(total == 12);
  // The first task trains identically, so the two buffers differ only in
  // which nodes are picked.
  CHECK(a.accuracy.at(0, 0) == b.accuracy.at(0, 0));
  CHECK(a.buffer != b.buffer);
  CHECK(parse_mean_space("embedding") == MeanSpace::embedding);
  CHECK_THROWS_AS(parse_mean_space("hidden"), ConfigError);
}

TEST_CASE("aggregates ignore seed order and a single seed has zero spread") {
  ContinualConfig cfg = quick_config();
  const std::vector<std::uint64_t> fwd = {4, 5, 6}, rev = {6, 5, 4};
  const auto a = run_experiment(small_graph(), StreamSpec{}, cfg, MethodSpec::named("mf"), fwd);
  const auto b = run_experiment(small_graph(), StreamSpec{}, cfg, MethodSpec::named("mf"), rev, 2);
  CHECK(a.pm.mean == doctest::Approx(b.pm.mean).epsilon(1e-12));
  CHECK(a.pm.stddev == doctest::Approx(b.pm.stddev).epsilon(1e-12));
  CHECK(a.seeds.front().accuracy == b.seeds.back().accuracy);
  const auto one = run_experiment(small_graph(), StreamSpec{}, cfg, MethodSpec::named("mf"), {4});
  CHECK(one.pm.stddev == 0.0);
  CHECK(one.fm->stddev == 0.0);
}

TEST_CASE("homophily buckets partition the class training set") {
  ContinualConfig cfg = quick_config();
  const TaskStream stream = quick_stream(7);
  const int label = stream.task(0).classes.front();
  const auto train = stream.train_of_class(label);
  const auto exp = homophily_bucket_experiment(small_graph(), StreamSpec{}, cfg, label, {7}, {0});
  std::map<int, int> sizes;
  for (int cls : stream.task(0).classes) sizes[cls] = static_cast<int>(stream.train_of_class(cls).size());
  const int quota = buffer_quota(sizes, cfg.buffer_size).at(label);
  CHECK(exp.quota == quota);
  CHECK(exp.num_buckets == static_cast<int>((static_cast<int>(train.size()) + quota - 1) / quota));
  REQUIRE(exp.buckets.size() == 1);
  CHECK(exp.buckets[0].forgetting.size() == 1);
  CHECK(exp.buckets[0].mean_homophily >= 0.0);
  CHECK(exp.buckets[0].mean_homophily <= 1.0);
}

TEST_CASE("configuration is validated") {
  ContinualConfig c;
  c.beta = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ContinualConfig{};
  c.n_add = 60;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ContinualConfig{};
  c.sl_ratio = -0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  CHECK_NOTHROW(ContinualConfig{}.validate());
}
