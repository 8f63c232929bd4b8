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

// gcl: continual graph learning experiments from the command line.
//
// Exit codes: 0 ok, 1 unexpected error, 2 configuration error, 3 dataset
// error, 4 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gcl/config.hpp"
#include "gcl/dataset.hpp"
#include "gcl/io.hpp"
#include "gcl/report.hpp"

namespace fs = std::filesystem;
using namespace gcl;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDataset = 3;
constexpr int kExitNumerical = 4;

// Flag name -> config key. Every flag has a config-file equivalent.
const std::pair<const char*, const char*> kFlagKeys[] = {
    {"--dataset", "dataset"},
    {"--method", "method"},
    {"--buffer", "buffer_size"},
    {"--beta", "beta"},
    {"--lambda", "lambda"},
    {"--n-add", "n_add"},
    {"--k-cand", "k_cand"},
    {"--tau", "tau"},
    {"--r", "r"},
    {"--sl-ratio", "sl_ratio"},
    {"--epochs-cls", "epochs_cls"},
    {"--epochs-lp", "epochs_lp"},
    {"--lr", "learning_rate"},
    {"--hidden", "hidden_dim"},
    {"--layers", "num_layers"},
    {"--embedding", "embedding"},
    {"--mean-space", "mean_space"},
    {"--classes-per-task", "classes_per_task"},
    {"--tasks", "num_tasks"},
    {"--train-frac", "train_frac"},
    {"--val-frac", "val_frac"},
    {"--test-frac", "test_frac"},
    {"--seeds", "seeds"},
    {"--seed-base", "seed_base"},
    {"--threads", "threads"},
    {"--output", "output"},
};

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file; flags override it");
    for (const auto& [flag, key] : kFlagKeys) {
      cmd->add_option(flag, values[key], std::string("config key ") + key);
    }
  }

  ExperimentConfig resolve(CLI::App* cmd) const {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : ExperimentConfig::load(config_path);
    for (const auto& [flag, key] : kFlagKeys) {
      if (cmd->count(flag) > 0) cfg.set(key, values.at(key));
    }
    cfg.validate();
    return cfg;
  }
};

void print_warnings(const ResolvedDataset& d) {
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
}

void dump_seed(const fs::path& dir, const SeedResult& r, const std::string& method) {
  fs::create_directories(dir);
  const std::string tag = "seed" + std::to_string(r.seed);
  int total = 0;
  for (const auto& [cls, ids] : r.buffer) total += static_cast<int>(ids.size());
  ReplayBuffer buffer(total);
  for (const auto& [cls, ids] : r.buffer) buffer.set_bucket(cls, ids);
  write_buffer_csv(dir / ("buffer_" + tag + ".csv"), buffer, method);
  write_delta_csv(dir / ("deltas_" + tag + ".csv"), r.delta_log);
  write_embeddings_csv(dir / ("embeddings_" + tag + ".csv"), r.final_embeddings, r.final_node_ids);
}

int cmd_run(CLI::App* cmd, const ConfigFlags& flags, const std::string& dump_dir) {
  const ExperimentConfig cfg = flags.resolve(cmd);
  const ResolvedDataset data = resolve_dataset(cfg.dataset);
  print_warnings(data);
  const MethodSpec method = MethodSpec::named(cfg.method);
  const ExperimentResult result =
      run_experiment(data.graph, cfg.stream, cfg.train, method, cfg.seed_list(), cfg.threads);
  write_file_atomic(cfg.output, run_report(cfg, DatasetInfo::of(data), result).dump(2) + "\n");
  if (!dump_dir.empty()) {
    for (const auto& s : result.seeds) dump_seed(dump_dir, s, cfg.method);
  }
  std::cout << "dataset: " << data.name << " (" << data.source << ")\n";
  std::cout << summary_table({{cfg.method, &result}});
  std::cout << "report: " << cfg.output << '\n';
  return 0;
}

int cmd_ablate(CLI::App* cmd, const ConfigFlags& flags) {
  const ExperimentConfig cfg = flags.resolve(cmd);
  const ResolvedDataset data = resolve_dataset(cfg.dataset);
  print_warnings(data);
  auto rows = ablation_grid(cfg);
  std::vector<std::pair<std::string, const ExperimentResult*>> table;
  for (auto& row : rows) {
    std::cerr << "running " << row.label << " " << row.description << '\n';
    row.result = run_experiment(data.graph, cfg.stream, row.result.config, row.result.method,
                                cfg.seed_list(), cfg.threads);
  }
  for (const auto& row : rows) table.emplace_back(row.label + " " + row.result.method.name, &row.result);
  write_file_atomic(cfg.output, ablation_report(cfg, DatasetInfo::of(data), rows).dump(2) + "\n");
  std::cout << "dataset: " << data.name << " (" << data.source << ")\n";
  std::cout << summary_table(table);
  std::cout << "report: " << cfg.output << '\n';
  return 0;
}

int cmd_buckets(CLI::App* cmd, const ConfigFlags& flags, int label, const std::vector<int>& buckets) {
  const ExperimentConfig cfg = flags.resolve(cmd);
  const ResolvedDataset data = resolve_dataset(cfg.dataset);
  print_warnings(data);
  const BucketExperiment exp =
      homophily_bucket_experiment(data.graph, cfg.stream, cfg.train, label, cfg.seed_list(), buckets);
  nlohmann::json rows = nlohmann::json::array();
  std::printf("class %d, bucket size %d, %d buckets\n", exp.label, exp.quota, exp.num_buckets);
  std::printf("%-8s %12s %22s\n", "bucket", "homophily", "forgetting");
  for (const auto& b : exp.buckets) {
    std::printf("%-8d %12.4f %12.2f +- %6.2f\n", b.bucket, b.mean_homophily, b.summary.mean, b.summary.stddev);
    rows.push_back({{"bucket", b.bucket},
                    {"mean_homophily", b.mean_homophily},
                    {"forgetting", b.forgetting},
                    {"forgetting_mean", b.summary.mean},
                    {"forgetting_std", b.summary.stddev}});
  }
  nlohmann::json report = {{"schema_version", kReportSchemaVersion},
                           {"config", cfg.values()},
                           {"dataset", {{"name", data.name}, {"source", data.source}}},
                           {"label", exp.label},
                           {"bucket_size", exp.quota},
                           {"num_buckets", exp.num_buckets},
                           {"buckets", rows}};
  write_file_atomic(cfg.output, report.dump(2) + "\n");
  std::cout << "report: " << cfg.output << '\n';
  return 0;
}

int cmd_validate(const std::string& path) {
  const LoadedDataset d = load_dataset(path);
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << "name:      " << d.manifest.name << '\n'
            << "nodes:     " << d.graph.num_nodes() << '\n'
            << "edges:     " << d.graph.num_edges() << '\n'
            << "features:  " << d.graph.num_features() << '\n'
            << "classes:   " << d.graph.distinct_labels().size() << '\n'
            << "isolated:  " << d.graph.num_isolated() << '\n'
            << "homophily: " << mean_homophily(d.graph) << '\n';
  if (d.duplicate_edges > 0 || d.self_loops > 0) {
    std::cout << "edge rows: " << d.raw_edge_rows << " (" << d.duplicate_edges << " duplicates, "
              << d.self_loops << " self-loops dropped)\n";
  }
  return 0;
}

int cmd_synth(const std::string& preset, const std::string& out, std::uint64_t seed) {
  SyntheticSpec spec;
  if (preset == "cora") {
    spec = SyntheticSpec::cora_like(seed);
  } else if (preset == "citeseer") {
    spec = SyntheticSpec::citeseer_like(seed);
  } else {
    throw ConfigError("unknown preset '" + preset + "' (cora, citeseer)");
  }
  const Graph g = generate_synthetic(spec);
  save_dataset(out, spec.name, g);
  std::cout << "wrote " << out << ": " << g.num_nodes() << " nodes, " << g.num_edges() << " edges, "
            << g.num_features() << " features, homophily " << mean_homophily(g) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continual graph learning with replay and structure refinement"};
  app.require_subcommand(1);

  ConfigFlags run_flags;
  std::string dump_dir;
  CLI::App* run = app.add_subcommand("run", "train over a task stream and write a JSON report");
  run_flags.attach(run);
  run->add_option("--dump-dir", dump_dir, "also write buffer, edge-delta and embedding CSVs here");

  ConfigFlags ablate_flags;
  CLI::App* ablate = app.add_subcommand("ablate", "run the seven-row component ablation grid");
  ablate_flags.attach(ablate);

  ConfigFlags bucket_flags;
  int bucket_label = 0;
  std::vector<int> bucket_ids;
  CLI::App* buckets = app.add_subcommand("homophily-buckets",
                                         "forgetting when replaying homophily-sorted slices of one class");
  bucket_flags.attach(buckets);
  buckets->add_option("--label", bucket_label, "class of the first task to slice")->required();
  buckets->add_option("--buckets", bucket_ids, "restrict to these slice indices");

  std::string validate_path;
  CLI::App* validate = app.add_subcommand("validate-dataset", "check a dataset directory and print its counts");
  validate->add_option("path", validate_path, "dataset directory")->required();

  std::string preset = "cora";
  std::string synth_out;
  std::uint64_t synth_seed = 0;
  CLI::App* synth = app.add_subcommand("synth", "write a synthetic citation-style dataset directory");
  synth->add_option("--preset", preset, "cora or citeseer");
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--seed", synth_seed, "generator seed");

  ConfigFlags show_flags;
  CLI::App* show = app.add_subcommand("config", "print the effective configuration");
  show_flags.attach(show);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run, run_flags, dump_dir);
    if (*ablate) return cmd_ablate(ablate, ablate_flags);
    if (*buckets) return cmd_buckets(buckets, bucket_flags, bucket_label, bucket_ids);
    if (*validate) return cmd_validate(validate_path);
    if (*synth) return cmd_synth(preset, synth_out, synth_seed);
    if (*show) {
      std::cout << show_flags.resolve(show).to_text();
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << '\n';
    return kExitDataset;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
