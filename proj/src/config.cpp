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

#include "gcl/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gcl/dataset.hpp"

namespace gcl {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected a number, got '" + value + "'");
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return out;
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::vector<std::string> ExperimentConfig::keys() {
  return {"dataset", "method", "buffer_size", "beta", "lambda", "n_add", "k_cand", "tau", "r",
          "sl_ratio", "epochs_cls", "epochs_lp", "learning_rate", "hidden_dim", "num_layers",
          "embedding", "mean_space", "classes_per_task", "num_tasks", "train_frac", "val_frac", "test_frac",
          "seeds", "seed_base", "threads", "output"};
}

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  auto as_int = [&] { return static_cast<int>(parse_int(key, value)); };
  auto as_double = [&] { return parse_double(key, value); };
  if (key == "dataset") {
    if (value.empty()) throw ConfigError("dataset must not be empty");
    dataset = value;
  } else if (key == "method") {
    MethodSpec::named(value);
    method = value;
  } else if (key == "buffer_size") {
    train.buffer_size = as_int();
  } else if (key == "beta") {
    train.beta = as_double();
  } else if (key == "lambda") {
    train.lambda = as_double();
  } else if (key == "n_add") {
    train.n_add = as_int();
  } else if (key == "k_cand") {
    train.k_cand = as_int();
  } else if (key == "tau") {
    train.tau = as_double();
  } else if (key == "r") {
    train.r = as_double();
  } else if (key == "sl_ratio") {
    train.sl_ratio = as_double();
  } else if (key == "epochs_cls") {
    train.epochs_cls = as_int();
  } else if (key == "epochs_lp") {
    train.epochs_lp = as_int();
  } else if (key == "learning_rate") {
    train.learning_rate = as_double();
  } else if (key == "hidden_dim") {
    train.hidden_dim = as_int();
  } else if (key == "num_layers") {
    train.num_layers = as_int();
  } else if (key == "embedding") {
    train.embedding = parse_embedding_layer(value);
  } else if (key == "mean_space") {
    train.mean_space = parse_mean_space(value);
  } else if (key == "classes_per_task") {
    stream.classes_per_task = as_int();
  } else if (key == "num_tasks") {
    stream.num_tasks = as_int();
  } else if (key == "train_frac") {
    stream.split.train_frac = as_double();
  } else if (key == "val_frac") {
    stream.split.val_frac = as_double();
  } else if (key == "test_frac") {
    stream.split.test_frac = as_double();
  } else if (key == "seeds") {
    seeds = as_int();
  } else if (key == "seed_base") {
    const long long v = parse_int(key, value);
    if (v < 0) throw ConfigError("seed_base must be non-negative");
    seed_base = static_cast<std::uint64_t>(v);
  } else if (key == "threads") {
    threads = as_int();
  } else if (key == "output") {
    output = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

std::map<std::string, std::string> ExperimentConfig::values() const {
  return {
      {"dataset", dataset},
      {"method", method},
      {"buffer_size", std::to_string(train.buffer_size)},
      {"beta", format_double(train.beta)},
      {"lambda", format_double(train.lambda)},
      {"n_add", std::to_string(train.n_add)},
      {"k_cand", std::to_string(train.k_cand)},
      {"tau", format_double(train.tau)},
      {"r", format_double(train.r)},
      {"sl_ratio", format_double(train.sl_ratio)},
      {"epochs_cls", std::to_string(train.epochs_cls)},
      {"epochs_lp", std::to_string(train.epochs_lp)},
      {"learning_rate", format_double(train.learning_rate)},
      {"hidden_dim", std::to_string(train.hidden_dim)},
      {"num_layers", std::to_string(train.num_layers)},
      {"embedding", std::string(to_string(train.embedding))},
      {"mean_space", std::string(to_string(train.mean_space))},
      {"classes_per_task", std::to_string(stream.classes_per_task)},
      {"num_tasks", std::to_string(stream.num_tasks)},
      {"train_frac", format_double(stream.split.train_frac)},
      {"val_frac", format_double(stream.split.val_frac)},
      {"test_frac", format_double(stream.split.test_frac)},
      {"seeds", std::to_string(seeds)},
      {"seed_base", std::to_string(seed_base)},
      {"threads", std::to_string(threads)},
      {"output", output},
  };
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream out;
  for (const auto& [k, v] : values()) out << k << " = " << v << '\n';
  return out.str();
}

void ExperimentConfig::validate() const {
  train.validate();
  stream.split.validate();
  if (stream.classes_per_task < 1 || stream.num_tasks < 1) {
    throw ConfigError("classes_per_task and num_tasks must be >= 1");
  }
  if (seeds < 1) throw ConfigError("seeds must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
  MethodSpec::named(method);
}

std::vector<std::uint64_t> ExperimentConfig::seed_list() const {
  std::vector<std::uint64_t> out;
  for (int i = 0; i < seeds; ++i) out.push_back(seed_base + static_cast<std::uint64_t>(i));
  return out;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    cfg.set(trim(body.substr(0, eq)), body.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

ResolvedDataset resolve_dataset(const std::string& spec) {
  ResolvedDataset out;
  const std::string prefix = "synthetic:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string preset = spec.substr(prefix.size());
    SyntheticSpec s;
    if (preset == "cora") {
      s = SyntheticSpec::cora_like(0);
    } else if (preset == "citeseer") {
      s = SyntheticSpec::citeseer_like(0);
    } else {
      throw ConfigError("unknown synthetic preset '" + preset + "' (cora, citeseer)");
    }
    out.name = s.name;
    out.source = "synthetic " + preset;
    out.graph = generate_synthetic(s);
    return out;
  }
  LoadedDataset loaded = load_dataset(spec);
  out.name = loaded.manifest.name;
  out.source = "directory " + spec;
  out.graph = std::move(loaded.graph);
  out.warnings = std::move(loaded.warnings);
  return out;
}

}  // namespace gcl
