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

// Class-incremental training loop with replay and structure refinement.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcl/eval.hpp"
#include "gcl/gsl.hpp"
#include "gcl/nn.hpp"
#include "gcl/replay.hpp"
#include "gcl/task_stream.hpp"

namespace gcl {

enum class Sampler { cd, mf, cm, random, clustering };
enum class Structure { none, learned, boost };
/// Representation used for buffer selection, candidate search and the
/// diversity statistics: the classifier output (seen-class columns) or the
/// last hidden layer.
enum class EmbeddingLayer { output, hidden };

/// Space in which the mean-feature order is computed (MF sampler and the CD
/// fill): raw node features or the selection embedding.
enum class MeanSpace { features, embedding };

std::string_view to_string(Sampler s);
std::string_view to_string(Structure s);
std::string_view to_string(EmbeddingLayer e);
std::string_view to_string(MeanSpace m);
EmbeddingLayer parse_embedding_layer(std::string_view name);
MeanSpace parse_mean_space(std::string_view name);

struct MethodSpec {
  std::string name = "dslr";
  Sampler sampler = Sampler::cd;
  Structure structure = Structure::learned;
  /// Fixed buckets by class label; the sampler is bypassed for these classes.
  std::map<int, std::vector<GlobalId>> pinned;

  /// dslr, cd_only, sl_only, mf, cm, random, clustering, homophily_boost.
  static MethodSpec named(std::string_view name);
  static std::vector<std::string> known_names();
};

struct ContinualConfig {
  int hidden_dim = 64;
  int num_layers = 2;
  int epochs_cls = 200;
  int epochs_lp = 100;
  double learning_rate = 0.005;
  double beta = 0.1;
  double lambda = 0.5;
  int buffer_size = 100;
  int n_add = 5;
  int k_cand = 50;
  double tau = 0.8;
  double r = 0.3;
  double sl_ratio = 1.0;
  double link_eps = 1e-7;
  EmbeddingLayer embedding = EmbeddingLayer::output;
  MeanSpace mean_space = MeanSpace::features;

  void validate() const;
};

struct TaskRecord {
  int task = 0;
  double seconds = 0.0;
  std::vector<double> cls_losses;  // one per epoch
  std::vector<double> lp_losses;
  int edges_added = 0;
  int edges_deleted = 0;
  int refined_nodes = 0;
  /// Mean over classes of bucket homophily on this task's graph, before and
  /// after rewiring (only when the structure step ran).
  std::optional<double> homophily_before;
  std::optional<double> homophily_after;
  std::map<int, int> quota;
};

struct ContinualState {
  ContinualState(const TaskStream& stream, const ContinualConfig& config, MethodSpec method,
                 std::uint64_t seed);

  const TaskStream* stream;
  ContinualConfig config;
  MethodSpec method;
  std::uint64_t seed;

  int next_task = 0;
  GatEncoder classifier;
  ParamStore theta;
  GatEncoder lp_encoder;
  LinearHead lp_head;
  ParamStore phi;

  ReplayBuffer buffer;
  CandidateSets candidates;
  RefinedAdjacency overrides;  // persisted edge changes, global ids
  AccuracyMatrix accuracy;
  /// Accuracy per class label after each task since the class appeared.
  std::map<int, std::vector<double>> class_accuracy;
  std::vector<TaskRecord> records;

  Graph graph;       // refined snapshot of the last completed task
  /// Training-node rows of each class in the embedding space it was
  /// sampled in (the model at the end of the class's own task).
  std::map<int, Matrix> selection_points;
  Matrix logits;      // classifier outputs on `graph`, seen-class columns
  Matrix embeddings;  // rows of `graph` in the configured embedding space
};

/// Runs task `state.next_task`. Throws std::logic_error when called past the
/// last task and NumericalError on non-finite losses.
void run_task(ContinualState& state);

struct DiversityStats {
  std::map<int, double> buff_div;
  std::map<int, double> corr_div;
  std::map<int, double> dist_from_center;
  std::optional<double> mean_buff_div;
  std::optional<double> mean_corr_div;
  std::optional<double> mean_dist_from_center;
};

/// Buffer diversity and distance from center are measured in each class's
/// selection space; correct-prediction diversity under the final model.
DiversityStats diversity_stats(const ContinualState& state);

struct SeedResult {
  std::uint64_t seed = 0;
  AccuracyMatrix accuracy;
  double pm = 0.0;
  std::optional<double> fm;
  std::map<int, std::vector<double>> class_accuracy;
  std::vector<TaskRecord> tasks;
  DiversityStats diversity;
  std::map<int, std::optional<HomophilyStat>> buffer_homophily;
  std::map<int, std::vector<GlobalId>> buffer;
  std::optional<double> homophily_uplift;  // mean after - before over refinements
  int edges_added = 0;
  int edges_deleted = 0;
  double seconds = 0.0;
  std::vector<EdgeDelta> delta_log;
  Matrix final_embeddings;
  std::vector<GlobalId> final_node_ids;
};

SeedResult run_continual(const TaskStream& stream, const ContinualConfig& config,
                         const MethodSpec& method, std::uint64_t seed);

struct StreamSpec {
  int classes_per_task = 2;
  int num_tasks = 3;
  SplitSpec split;  // seed ignored; derived per run seed
};

/// Builds the stream for `seed` (split drawn from the seed's "split" stream).
TaskStream stream_for_seed(const Graph& full, const StreamSpec& spec, std::uint64_t seed);

struct ExperimentResult {
  MethodSpec method;
  ContinualConfig config;
  std::vector<SeedResult> seeds;
  MeanStd pm;
  std::optional<MeanStd> fm;
  std::optional<MeanStd> buff_div;
  std::optional<MeanStd> corr_div;
  std::optional<MeanStd> dist_from_center;
  std::optional<MeanStd> homophily_uplift;
};

/// One continual run per seed (in parallel when threads > 1); seed results
/// keep the order of `seeds`.
ExperimentResult run_experiment(const Graph& full, const StreamSpec& stream_spec,
                                const ContinualConfig& config, const MethodSpec& method,
                                const std::vector<std::uint64_t>& seeds, int threads = 1);

struct BucketOutcome {
  int bucket = 0;
  double mean_homophily = 0.0;
  std::vector<double> forgetting;  // per seed
  MeanStd summary;
};

struct BucketExperiment {
  int label = 0;
  int quota = 0;
  int num_buckets = 0;
  std::vector<BucketOutcome> buckets;
};

/// Sorts the training nodes of `label` (a first-task class) by homophily on
/// the first snapshot and replays each consecutive quota-sized slice in turn;
/// other classes use random buffers and no rewiring. Forgetting is the drop
/// in that class's accuracy from the end of the first task to the end of the
/// stream. `only_buckets`, when non-empty, restricts which slices are run.
BucketExperiment homophily_bucket_experiment(const Graph& full, const StreamSpec& stream_spec,
                                             const ContinualConfig& config, int label,
                                             const std::vector<std::uint64_t>& seeds,
                                             const std::vector<int>& only_buckets = {});

}  // namespace gcl
