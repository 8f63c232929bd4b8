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

#include "gcl/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace gcl {

std::string_view to_string(Sampler s) {
  switch (s) {
    case Sampler::cd: return "cd";
    case Sampler::mf: return "mf";
    case Sampler::cm: return "cm";
    case Sampler::random: return "random";
    case Sampler::clustering: return "clustering";
  }
  return "?";
}

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::none: return "none";
    case Structure::learned: return "learned";
    case Structure::boost: return "boost";
  }
  return "?";
}

std::string_view to_string(EmbeddingLayer e) {
  return e == EmbeddingLayer::output ? "output" : "hidden";
}

EmbeddingLayer parse_embedding_layer(std::string_view name) {
  if (name == "output") return EmbeddingLayer::output;
  if (name == "hidden") return EmbeddingLayer::hidden;
  throw ConfigError("embedding layer must be 'output' or 'hidden', got '" + std::string(name) + "'");
}

std::string_view to_string(MeanSpace m) {
  return m == MeanSpace::features ? "features" : "embedding";
}

MeanSpace parse_mean_space(std::string_view name) {
  if (name == "features") return MeanSpace::features;
  if (name == "embedding") return MeanSpace::embedding;
  throw ConfigError("mean space must be 'features' or 'embedding', got '" + std::string(name) + "'");
}

MethodSpec MethodSpec::named(std::string_view name) {
  MethodSpec m;
  m.name = std::string(name);
  if (name == "dslr") {
    m.sampler = Sampler::cd;
    m.structure = Structure::learned;
  } else if (name == "cd_only") {
    m.sampler = Sampler::cd;
    m.structure = Structure::none;
  } else if (name == "sl_only") {
    m.sampler = Sampler::mf;
    m.structure = Structure::learned;
  } else if (name == "mf") {
    m.sampler = Sampler::mf;
    m.structure = Structure::none;
  } else if (name == "cm") {
    m.sampler = Sampler::cm;
    m.structure = Structure::none;
  } else if (name == "random") {
    m.sampler = Sampler::random;
    m.structure = Structure::none;
  } else if (name == "clustering") {
    m.sampler = Sampler::clustering;
    m.structure = Structure::none;
  } else if (name == "homophily_boost") {
    m.sampler = Sampler::cd;
    m.structure = Structure::boost;
  } else {
    throw ConfigError("unknown method '" + std::string(name) + "'");
  }
  return m;
}

std::vector<std::string> MethodSpec::known_names() {
  return {"dslr", "cd_only", "sl_only", "mf", "cm", "random", "clustering", "homophily_boost"};
}

void ContinualConfig::validate() const {
  if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
  if (num_layers < 1) throw ConfigError("num_layers must be >= 1");
  if (epochs_cls < 1) throw ConfigError("epochs_cls must be >= 1");
  if (epochs_lp < 0) throw ConfigError("epochs_lp must be >= 0");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta must lie in [0,1]");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must lie in [0,1]");
  if (buffer_size < 0) throw ConfigError("buffer_size must be >= 0");
  if (n_add < 0) throw ConfigError("n_add must be >= 0");
  if (k_cand < 0) throw ConfigError("k_cand must be >= 0");
  if (n_add > k_cand) throw ConfigError("n_add must not exceed k_cand");
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau must lie in [0,1]");
  if (!(r > 0.0)) throw ConfigError("r must be > 0");
  if (!(sl_ratio >= 0.0 && sl_ratio <= 1.0)) throw ConfigError("sl_ratio must lie in [0,1]");
  if (!(link_eps > 0.0 && link_eps < 0.5)) throw ConfigError("link_eps must lie in (0,0.5)");
}

ContinualState::ContinualState(const TaskStream& s, const ContinualConfig& c, MethodSpec m,
                               std::uint64_t sd)
    : stream(&s), config(c), method(std::move(m)), seed(sd), buffer(c.buffer_size),
      accuracy(s.num_tasks()) {
  config.validate();
  if (s.num_tasks() == 0) throw ConfigError("empty task stream");
  const int in_dim = s.task(0).graph.num_features();
  GatConfig gc{in_dim, c.hidden_dim, s.num_classes(), c.num_layers, 0.2};
  classifier = GatEncoder(gc, "theta");
  Rng init = make_rng(seed, "init/theta");
  classifier.init(theta, init);

  GatConfig lc{in_dim, c.hidden_dim, c.hidden_dim, c.num_layers, 0.2};
  lp_encoder = GatEncoder(lc, "phi");
  lp_head = LinearHead(c.hidden_dim, s.num_classes(), "phi.head");
  Rng lp_init = make_rng(seed, "init/phi");
  lp_encoder.init(phi, lp_init);
  lp_head.init(phi, lp_init);
}

namespace {

using Clock = std::chrono::steady_clock;

struct NodeSet {
  std::vector<int> rows;     // local indices in the task graph
  std::vector<int> columns;  // classifier output columns
};

NodeSet node_set(const Graph& g, const TaskStream& stream, std::span<const GlobalId> ids) {
  NodeSet s;
  for (GlobalId id : ids) {
    const int local = g.require_local(id);
    s.rows.push_back(local);
    s.columns.push_back(stream.column_of(g.label(local)));
  }
  return s;
}

/// beta * CE(current) + (1 - beta) * CE(buffer), dropping an empty term's share.
Var replay_loss(Tape& tape, Var logits, const NodeSet& current, const NodeSet& replay, double beta,
                int num_active) {
  const bool has_current = !current.rows.empty();
  const bool has_replay = !replay.rows.empty();
  if (has_current && has_replay) {
    Var a = ops::cross_entropy(tape, logits, current.rows, current.columns, num_active);
    Var b = ops::cross_entropy(tape, logits, replay.rows, replay.columns, num_active);
    return ops::weighted_sum(tape, {{a, beta}, {b, 1.0 - beta}});
  }
  if (has_current) {
    Var a = ops::cross_entropy(tape, logits, current.rows, current.columns, num_active);
    return ops::weighted_sum(tape, {{a, beta}});
  }
  if (has_replay) {
    Var b = ops::cross_entropy(tape, logits, replay.rows, replay.columns, num_active);
    return ops::weighted_sum(tape, {{b, 1.0 - beta}});
  }
  throw std::invalid_argument("node loss needs a current or replay node");
}

void check_loss(double loss, const std::string& what, int task, int epoch) {
  if (!std::isfinite(loss)) {
    throw NumericalError(what + " loss became non-finite at task " + std::to_string(task) +
                         ", epoch " + std::to_string(epoch));
  }
}

std::optional<double> mean_bucket_homophily(const Graph& g, const ReplayBuffer& buffer) {
  const auto table = buffer_homophily_table(g, buffer);
  double sum = 0.0;
  int n = 0;
  for (const auto& [cls, stat] : table) {
    if (!stat) continue;
    sum += stat->mean;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::vector<std::pair<int, int>> sample_non_edges(const Graph& g, std::size_t count, Rng& rng) {
  std::vector<std::pair<int, int>> out;
  const int n = g.num_nodes();
  if (n < 2) return out;
  const double max_pairs = static_cast<double>(n) * (n - 1) / 2.0 - static_cast<double>(g.num_edges());
  if (max_pairs < static_cast<double>(count)) count = static_cast<std::size_t>(std::max(0.0, max_pairs));
  std::uniform_int_distribution<int> pick(0, n - 1);
  out.reserve(count);
  while (out.size() < count) {
    const int u = pick(rng);
    const int v = pick(rng);
    if (u == v || g.has_edge(u, v)) continue;
    out.emplace_back(u, v);
  }
  return out;
}

Matrix train_link_predictor(ContinualState& s, const Graph& g, const MessageGraph& mg,
                            const NodeSet& current, const NodeSet& replay, int num_active,
                            TaskRecord& record) {
  const int t = s.next_task;
  Rng init = make_rng(s.seed, "init/phi/" + std::to_string(t));
  s.lp_encoder.reinit(s.phi, init);
  s.lp_head.reinit(s.phi, init);
  s.phi.reset_optimizer();
  s.phi.zero_grad();
  Rng neg = make_rng(s.seed, "negatives/" + std::to_string(t));
  const AdamConfig adam{s.config.learning_rate};

  std::vector<std::pair<int, int>> positives;
  for (const Edge& e : g.edges()) positives.emplace_back(e.u, e.v);

  for (int epoch = 0; epoch < s.config.epochs_lp; ++epoch) {
    std::vector<std::pair<int, int>> pairs = positives;
    std::vector<int> targets(positives.size(), 1);
    for (const auto& p : sample_non_edges(g, positives.size(), neg)) {
      pairs.push_back(p);
      targets.push_back(0);
    }
    Tape tape;
    Var z = s.lp_encoder.forward(tape, s.phi, g.features(), mg);
    Var logits = s.lp_head.forward(tape, s.phi, z);
    Var node = replay_loss(tape, logits, current, replay, s.config.beta, num_active);
    Var loss = node;
    if (!pairs.empty()) {
      Var link = ops::link_bce(tape, z, pairs, targets, s.config.link_eps);
      loss = ops::weighted_sum(tape, {{link, s.config.lambda}, {node, 1.0 - s.config.lambda}});
    }
    const double value = tape.scalar(loss);
    check_loss(value, "link predictor", t, epoch);
    record.lp_losses.push_back(value);
    tape.backward(loss);
    adam_step(s.phi, adam);
  }
  return s.lp_encoder.infer(s.phi, g.features(), mg);
}

std::vector<GlobalId> select_for_class(const ContinualState& s, const Graph& g, int label,
                                       int quota, const std::vector<GlobalId>& task_train) {
  const TaskStream& stream = *s.stream;
  const auto members = stream.train_of_class(label);
  quota = std::min(quota, static_cast<int>(members.size()));
  if (auto it = s.method.pinned.find(label); it != s.method.pinned.end()) {
    std::vector<GlobalId> pinned = it->second;
    if (static_cast<int>(pinned.size()) > quota) pinned.resize(static_cast<std::size_t>(quota));
    return pinned;
  }
  Rng rng = make_rng(s.seed, "sampler/" + std::to_string(s.next_task) + "/" + std::to_string(label));
  const CoverageSpec spec{s.config.r};
  auto mean_points = [&] {
    return s.config.mean_space == MeanSpace::features ? gather_features(g, members)
                                                      : gather_rows(g, s.embeddings, members);
  };
  switch (s.method.sampler) {
    case Sampler::cd:
      return select_buffer_cd(gather_rows(g, s.embeddings, members), members, quota, spec,
                              mean_feature_order(mean_points(), members));
    case Sampler::mf:
      return select_buffer_mf(mean_points(), members, quota);
    case Sampler::cm: {
      std::vector<GlobalId> others;
      for (GlobalId id : task_train) {
        if (g.label(g.require_local(id)) != label) others.push_back(id);
      }
      return select_buffer_cm(gather_rows(g, s.embeddings, members), members,
                              gather_rows(g, s.embeddings, others), quota, spec);
    }
    case Sampler::random:
      return select_buffer_random(members, quota, rng);
    case Sampler::clustering:
      return select_buffer_clustering(gather_rows(g, s.embeddings, members), members, quota, rng);
  }
  throw std::logic_error("unhandled sampler");
}

}  // namespace

void run_task(ContinualState& s) {
  const TaskStream& stream = *s.stream;
  const int t = s.next_task;
  if (t >= stream.num_tasks()) throw std::logic_error("all tasks already completed");
  const auto start = Clock::now();
  const Task& task = stream.task(t);
  const int num_active = stream.num_seen_classes(t);
  TaskRecord record;
  record.task = t;

  Graph g = apply_delta(task.graph, s.overrides);
  auto mg = std::make_unique<MessageGraph>(MessageGraph::with_self_loops(g));
  const NodeSet current = node_set(g, stream, task.train);
  const auto replayed = s.buffer.all_nodes();
  const NodeSet replay = node_set(g, stream, replayed);

  if (t > 0 && s.method.structure != Structure::none && !replayed.empty()) {
    record.homophily_before = mean_bucket_homophily(g, s.buffer);
    RefinedAdjacency delta;
    if (s.method.structure == Structure::learned) {
      const Matrix z = train_link_predictor(s, g, *mg, current, replay, num_active, record);
      const LinkScorer scorer(g, z);
      Rng mask = make_rng(s.seed, "sl_mask/" + std::to_string(t));
      RefineResult refined = refine_structure(g, replayed, s.candidates, scorer, s.config.n_add,
                                              s.config.tau, s.config.sl_ratio, mask, t);
      record.refined_nodes = static_cast<int>(refined.refined_nodes.size());
      delta = std::move(refined.delta);
    } else {
      std::map<int, std::vector<GlobalId>> pool;
      for (int cls : s.buffer.classes()) pool[cls] = stream.train_of_class(cls);
      Rng rng = make_rng(s.seed, "boost/" + std::to_string(t));
      delta = homophily_boost_edges(g, s.buffer, pool, s.config.n_add, rng, t);
      record.refined_nodes = static_cast<int>(replayed.size());
    }
    record.edges_added = static_cast<int>(delta.added.size());
    record.edges_deleted = static_cast<int>(delta.deleted.size());
    g = apply_delta(g, delta);
    s.overrides.merge(delta);
    mg = std::make_unique<MessageGraph>(MessageGraph::with_self_loops(g));
    record.homophily_after = mean_bucket_homophily(g, s.buffer);
  }

  // Classifier: warm start, fresh optimizer moments per task.
  s.theta.reset_optimizer();
  s.theta.zero_grad();
  const AdamConfig adam{s.config.learning_rate};
  for (int epoch = 0; epoch < s.config.epochs_cls; ++epoch) {
    Tape tape;
    Var logits = s.classifier.forward(tape, s.theta, g.features(), *mg);
    Var loss = replay_loss(tape, logits, current, replay, s.config.beta, num_active);
    const double value = tape.scalar(loss);
    check_loss(value, "classifier", t, epoch);
    record.cls_losses.push_back(value);
    tape.backward(loss);
    adam_step(s.theta, adam);
  }

  const auto layers = s.classifier.infer_layers(s.theta, g.features(), *mg);
  s.logits = layers.back().leftCols(num_active);
  s.embeddings = s.config.embedding == EmbeddingLayer::hidden && layers.size() > 1
                     ? layers[layers.size() - 2]
                     : s.logits;
  auto predicted = [&](int local) {
    Eigen::Index col = 0;
    s.logits.row(local).maxCoeff(&col);
    return static_cast<int>(col);
  };
  for (int j = 0; j <= t; ++j) {
    const auto& test = stream.task(j).test;
    int correct = 0;
    std::map<int, std::pair<int, int>> per_class;  // label -> (correct, total)
    for (GlobalId id : test) {
      const int local = g.require_local(id);
      const int label = g.label(local);
      const bool ok = predicted(local) == stream.column_of(label);
      correct += ok ? 1 : 0;
      auto& pc = per_class[label];
      pc.first += ok ? 1 : 0;
      pc.second += 1;
    }
    s.accuracy.set(t, j, test.empty() ? 0.0 : 100.0 * correct / static_cast<double>(test.size()));
    for (const auto& [label, pc] : per_class) {
      s.class_accuracy[label].push_back(100.0 * pc.first / static_cast<double>(pc.second));
    }
  }

  // Buffer: recompute quotas over all seen classes, shrink old buckets to
  // their earliest picks, fill the new classes.
  std::map<int, int> sizes;
  for (int u = 0; u <= t; ++u) {
    for (int label : stream.task(u).classes) {
      sizes[label] = static_cast<int>(stream.train_of_class(label).size());
    }
  }
  if (s.config.buffer_size > 0) {
    record.quota = buffer_quota(sizes, s.config.buffer_size);
    for (int label : s.buffer.classes()) s.buffer.truncate(label, record.quota.at(label));
    for (int label : task.classes) {
      s.selection_points[label] = gather_rows(g, s.embeddings, stream.train_of_class(label));
      s.buffer.set_bucket(label, select_for_class(s, g, label, record.quota.at(label), task.train));
    }
  }
  const auto buffered = s.buffer.all_nodes();
  s.candidates = build_candidates(g, s.embeddings, buffered, s.config.k_cand);

  s.graph = std::move(g);
  record.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  s.records.push_back(std::move(record));
  s.next_task = t + 1;
}

DiversityStats diversity_stats(const ContinualState& s) {
  DiversityStats out;
  const TaskStream& stream = *s.stream;
  const Graph& g = s.graph;
  if (s.embeddings.rows() != g.num_nodes()) return out;
  std::vector<double> bd;
  std::vector<double> cd;
  std::vector<double> dc;
  for (int label : s.buffer.classes()) {
    const auto train = stream.train_of_class(label);
    const Matrix& selected_in = s.selection_points.at(label);
    std::vector<int> buffer_rows;
    for (GlobalId id : s.buffer.bucket(label)) {
      buffer_rows.push_back(static_cast<int>(std::lower_bound(train.begin(), train.end(), id) - train.begin()));
    }
    const Matrix buf_pts = selected_in(buffer_rows, Eigen::all);
    if (auto v = buff_div(buf_pts, selected_in)) {
      out.buff_div[label] = *v;
      bd.push_back(*v);
    }
    if (auto v = dist_from_center(buf_pts, selected_in)) {
      out.dist_from_center[label] = *v;
      dc.push_back(*v);
    }
    std::vector<GlobalId> test;
    std::vector<GlobalId> correct;
    for (GlobalId id : stream.task(stream.task_of_class(label)).test) {
      const int local = g.require_local(id);
      if (g.label(local) != label) continue;
      test.push_back(id);
      Eigen::Index col = 0;
      s.logits.row(local).maxCoeff(&col);
      if (static_cast<int>(col) == stream.column_of(label)) correct.push_back(id);
    }
    const Eigen::RowVectorXd center = gather_rows(g, s.embeddings, train).colwise().mean();
    if (auto v = corr_div(gather_rows(g, s.embeddings, correct), gather_rows(g, s.embeddings, test), center)) {
      out.corr_div[label] = *v;
      cd.push_back(*v);
    }
  }
  if (!bd.empty()) out.mean_buff_div = mean_std(bd).mean;
  if (!cd.empty()) out.mean_corr_div = mean_std(cd).mean;
  if (!dc.empty()) out.mean_dist_from_center = mean_std(dc).mean;
  return out;
}

SeedResult run_continual(const TaskStream& stream, const ContinualConfig& config,
                         const MethodSpec& method, std::uint64_t seed) {
  const auto start = Clock::now();
  ContinualState state(stream, config, method, seed);
  while (state.next_task < stream.num_tasks()) run_task(state);

  SeedResult r;
  r.seed = seed;
  r.accuracy = state.accuracy;
  r.pm = pm(state.accuracy);
  r.fm = fm(state.accuracy);
  r.class_accuracy = state.class_accuracy;
  r.diversity = diversity_stats(state);
  r.buffer_homophily = buffer_homophily_table(state.graph, state.buffer);
  for (int label : state.buffer.classes()) r.buffer[label] = state.buffer.bucket(label);
  std::vector<double> uplifts;
  for (const auto& rec : state.records) {
    r.edges_added += rec.edges_added;
    r.edges_deleted += rec.edges_deleted;
    if (rec.homophily_before && rec.homophily_after) {
      uplifts.push_back(*rec.homophily_after - *rec.homophily_before);
    }
  }
  if (!uplifts.empty()) r.homophily_uplift = mean_std(uplifts).mean;
  r.tasks = std::move(state.records);
  r.delta_log = state.overrides.log;
  r.final_embeddings = state.embeddings;
  const auto ids = state.graph.node_ids();
  r.final_node_ids.assign(ids.begin(), ids.end());
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

TaskStream stream_for_seed(const Graph& full, const StreamSpec& spec, std::uint64_t seed) {
  SplitSpec split = spec.split;
  split.seed = derive_seed(seed, "split");
  return build_task_stream(full, spec.classes_per_task, spec.num_tasks, split);
}

namespace {

std::optional<MeanStd> optional_mean_std(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return mean_std(v);
}

}  // namespace

ExperimentResult run_experiment(const Graph& full, const StreamSpec& stream_spec,
                                const ContinualConfig& config, const MethodSpec& method,
                                const std::vector<std::uint64_t>& seeds, int threads) {
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  config.validate();
  ExperimentResult out;
  out.method = method;
  out.config = config;
  out.seeds.resize(seeds.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        const TaskStream stream = stream_for_seed(full, stream_spec, seeds[i]);
        out.seeds[i] = run_continual(stream, config, method, seeds[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n_threads = std::clamp(threads, 1, static_cast<int>(seeds.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> pms, fms, bds, cds, dcs, ups;
  for (const auto& r : out.seeds) {
    pms.push_back(r.pm);
    if (r.fm) fms.push_back(*r.fm);
    if (r.diversity.mean_buff_div) bds.push_back(*r.diversity.mean_buff_div);
    if (r.diversity.mean_corr_div) cds.push_back(*r.diversity.mean_corr_div);
    if (r.diversity.mean_dist_from_center) dcs.push_back(*r.diversity.mean_dist_from_center);
    if (r.homophily_uplift) ups.push_back(*r.homophily_uplift);
  }
  out.pm = mean_std(pms);
  out.fm = optional_mean_std(fms);
  out.buff_div = optional_mean_std(bds);
  out.corr_div = optional_mean_std(cds);
  out.dist_from_center = optional_mean_std(dcs);
  out.homophily_uplift = optional_mean_std(ups);
  return out;
}

BucketExperiment homophily_bucket_experiment(const Graph& full, const StreamSpec& stream_spec,
                                             const ContinualConfig& config, int label,
                                             const std::vector<std::uint64_t>& seeds,
                                             const std::vector<int>& only_buckets) {
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  BucketExperiment out;
  out.label = label;
  std::map<int, BucketOutcome> outcomes;
  std::map<int, std::vector<double>> homophily;
  for (std::uint64_t seed : seeds) {
    const TaskStream stream = stream_for_seed(full, stream_spec, seed);
    if (stream.task_of_class(label) != 0) throw ConfigError("bucket class must belong to the first task");
    const Task& first = stream.task(0);
    std::map<int, int> sizes;
    for (int c : first.classes) sizes[c] = static_cast<int>(stream.train_of_class(c).size());
    const int quota = buffer_quota(sizes, config.buffer_size).at(label);
    auto members = stream.train_of_class(label);
    if (static_cast<int>(members.size()) < quota) throw ConfigError("class too small for one bucket");
    std::vector<double> ratio(members.size());
    for (std::size_t k = 0; k < members.size(); ++k) {
      ratio[k] = homophily_ratio(first.graph, first.graph.require_local(members[k]));
    }
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (ratio[a] != ratio[b]) return ratio[a] < ratio[b];
      return members[a] < members[b];
    });
    const int num_buckets = static_cast<int>((members.size() + static_cast<std::size_t>(quota) - 1) /
                                             static_cast<std::size_t>(quota));
    out.quota = quota;
    out.num_buckets = num_buckets;
    for (int b = 0; b < num_buckets; ++b) {
      if (!only_buckets.empty() &&
          std::find(only_buckets.begin(), only_buckets.end(), b) == only_buckets.end()) {
        continue;
      }
      MethodSpec method = MethodSpec::named("random");
      method.name = "bucket" + std::to_string(b);
      std::vector<GlobalId> bucket;
      double h = 0.0;
      for (std::size_t k = static_cast<std::size_t>(b) * quota;
           k < std::min(members.size(), static_cast<std::size_t>(b + 1) * quota); ++k) {
        bucket.push_back(members[order[k]]);
        h += ratio[order[k]];
      }
      homophily[b].push_back(h / static_cast<double>(bucket.size()));
      method.pinned[label] = std::move(bucket);
      const SeedResult r = run_continual(stream, config, method, seed);
      const auto& acc = r.class_accuracy.at(label);
      outcomes[b].bucket = b;
      outcomes[b].forgetting.push_back(acc.front() - acc.back());
    }
  }
  for (auto& [b, outcome] : outcomes) {
    outcome.mean_homophily = mean_std(homophily[b]).mean;
    outcome.summary = mean_std(outcome.forgetting);
    out.buckets.push_back(std::move(outcome));
  }
  return out;
}

}  // namespace gcl
