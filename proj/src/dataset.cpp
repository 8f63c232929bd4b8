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

#include "gcl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <string_view>

#include <json.hpp>

#include "gcl/io.hpp"

namespace gcl {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits `text` into non-empty lines, calling fn(line_number, line).
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto pos = text.find('\n');
    auto line = trim(text.substr(0, pos));
    ++line_no;
    if (!line.empty()) fn(line_no, line);
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
}

template <typename T>
T parse_number(std::string_view token, const std::string& where) {
  token = trim(token);
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw DatasetError(where + ": cannot parse '" + std::string(token) + "'");
  }
  return value;
}

template <typename Fn>
void for_each_field(std::string_view line, Fn&& fn) {
  std::size_t col = 0;
  while (true) {
    const auto pos = line.find(',');
    fn(col++, line.substr(0, pos));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

LoadedDataset load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DatasetError("not a directory: " + dir.string());
  LoadedDataset out;

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
    out.manifest.name = manifest.value("name", dir.filename().string());
    out.manifest.num_nodes = manifest.at("num_nodes").get<int>();
    out.manifest.num_features = manifest.at("num_features").get<int>();
    out.manifest.num_classes = manifest.at("num_classes").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(std::string("manifest.json: ") + e.what());
  }
  const auto& m = out.manifest;
  if (m.num_nodes <= 0 || m.num_features <= 0 || m.num_classes <= 0) {
    throw DatasetError("manifest.json: counts must be positive");
  }

  std::vector<int> labels;
  for_each_line(read_file(dir / "labels.csv"), [&](std::size_t line_no, std::string_view line) {
    labels.push_back(parse_number<int>(line, "labels.csv:" + std::to_string(line_no)));
  });
  if (static_cast<int>(labels.size()) != m.num_nodes) {
    throw DatasetError("labels.csv has " + std::to_string(labels.size()) + " rows, manifest says " +
                       std::to_string(m.num_nodes));
  }
  for (int y : labels) {
    if (y < 0 || y >= m.num_classes) {
      throw DatasetError("labels.csv: label " + std::to_string(y) + " outside [0, num_classes)");
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  int feature_rows = 0;
  for_each_line(read_file(dir / "features.csv"), [&](std::size_t line_no, std::string_view line) {
    const std::string where = "features.csv:" + std::to_string(line_no);
    std::size_t cols = 0;
    for_each_field(line, [&](std::size_t col, std::string_view tok) {
      const double v = parse_number<double>(tok, where);
      if (!std::isfinite(v)) throw DatasetError(where + ": non-finite value");
      if (static_cast<int>(col) < m.num_features && v != 0.0) {
        triplets.emplace_back(feature_rows, static_cast<int>(col), v);
      }
      cols = col + 1;
    });
    if (static_cast<int>(cols) != m.num_features) {
      throw DatasetError(where + ": expected " + std::to_string(m.num_features) + " columns, got " +
                         std::to_string(cols));
    }
    ++feature_rows;
  });
  if (feature_rows != m.num_nodes) {
    throw DatasetError("features.csv has " + std::to_string(feature_rows) + " rows, manifest says " +
                       std::to_string(m.num_nodes));
  }
  SparseMatrix features(m.num_nodes, m.num_features);
  features.setFromTriplets(triplets.begin(), triplets.end());

  std::vector<Edge> edges;
  std::set<Edge> seen;
  for_each_line(read_file(dir / "edges.csv"), [&](std::size_t line_no, std::string_view line) {
    const std::string where = "edges.csv:" + std::to_string(line_no);
    int endpoints[2] = {0, 0};
    std::size_t cols = 0;
    for_each_field(line, [&](std::size_t col, std::string_view tok) {
      if (col < 2) endpoints[col] = parse_number<int>(tok, where);
      cols = col + 1;
    });
    if (cols != 2) throw DatasetError(where + ": expected 2 columns");
    for (int e : endpoints) {
      if (e < 0 || e >= m.num_nodes) {
        throw DatasetError(where + ": endpoint " + std::to_string(e) + " outside [0, num_nodes)");
      }
    }
    ++out.raw_edge_rows;
    if (endpoints[0] == endpoints[1]) {
      ++out.self_loops;
      return;
    }
    const Edge e = Edge::canonical(endpoints[0], endpoints[1]);
    if (!seen.insert(e).second) {
      ++out.duplicate_edges;
      return;
    }
    edges.push_back(e);
  });
  if (out.raw_edge_rows == 0) out.warnings.push_back("edges.csv is empty; graph has no edges");
  if (out.self_loops > 0) {
    out.warnings.push_back(std::to_string(out.self_loops) + " self-loop rows dropped");
  }
  if (out.duplicate_edges > 0) {
    out.warnings.push_back(std::to_string(out.duplicate_edges) + " duplicate edge rows merged");
  }

  out.graph = Graph(m.num_nodes, std::move(edges), std::move(features), std::move(labels));
  return out;
}

void save_dataset(const fs::path& dir, const std::string& name, const Graph& graph) {
  fs::create_directories(dir);
  const auto labels = graph.labels();
  const int num_classes = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  nlohmann::json manifest = {{"name", name},
                             {"num_nodes", graph.num_nodes()},
                             {"num_features", graph.num_features()},
                             {"num_classes", num_classes}};
  write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

  std::string edges;
  for (const Edge& e : graph.edges()) edges += std::to_string(e.u) + "," + std::to_string(e.v) + "\n";
  write_file_atomic(dir / "edges.csv", edges);

  std::string labels_csv;
  for (int y : labels) labels_csv += std::to_string(y) + "\n";
  write_file_atomic(dir / "labels.csv", labels_csv);

  std::string feats;
  std::vector<double> row(static_cast<std::size_t>(graph.num_features()));
  for (int v = 0; v < graph.num_nodes(); ++v) {
    std::fill(row.begin(), row.end(), 0.0);
    for (SparseMatrix::InnerIterator it(graph.features(), v); it; ++it) {
      row[static_cast<std::size_t>(it.col())] = it.value();
    }
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) feats += ',';
      feats += row[j] == 0.0 ? std::string("0") : format_double(row[j]);
    }
    feats += '\n';
  }
  write_file_atomic(dir / "features.csv", feats);
}

// ---------------------------------------------------------------------------
// Synthetic Planetoid-like graphs.

SyntheticSpec SyntheticSpec::cora_like(std::uint64_t seed) {
  SyntheticSpec s;
  s.name = "cora-like";
  s.class_sizes = {351, 217, 418, 818, 426, 298, 180};
  s.num_edges = 5429;
  s.num_features = 1433;
  s.homophily = 0.81;
  s.words_per_node = 18.2;
  s.seed = seed;
  return s;
}

SyntheticSpec SyntheticSpec::citeseer_like(std::uint64_t seed) {
  SyntheticSpec s;
  s.name = "citeseer-like";
  s.class_sizes = {263, 587, 665, 698, 593, 506};
  s.num_edges = 4732;
  s.num_features = 3703;
  s.homophily = 0.74;
  s.words_per_node = 31.7;
  s.topic_words_per_class = 120;
  s.topic_words_per_subcluster = 50;
  s.seed = seed;
  return s;
}

namespace {

// Sampler over a fixed set of items with probability proportional to weight.
class WeightedPicker {
 public:
  WeightedPicker() = default;
  WeightedPicker(std::vector<int> items, const std::vector<double>& weight_of)
      : items_(std::move(items)) {
    cumulative_.reserve(items_.size());
    double total = 0.0;
    for (int i : items_) {
      total += weight_of[static_cast<std::size_t>(i)];
      cumulative_.push_back(total);
    }
  }
  bool empty() const { return items_.empty(); }
  int pick(Rng& rng) const {
    std::uniform_real_distribution<double> u(0.0, cumulative_.back());
    const double x = u(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
    if (it == cumulative_.end()) --it;
    return items_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<int> items_;
  std::vector<double> cumulative_;
};

}  // namespace

Graph generate_synthetic(const SyntheticSpec& spec) {
  if (spec.class_sizes.empty()) throw ConfigError("synthetic spec needs class sizes");
  if (spec.num_features < 1) throw ConfigError("synthetic spec needs features");
  const int num_classes = static_cast<int>(spec.class_sizes.size());
  const int subclusters = std::max(1, spec.subclusters_per_class);
  const int n = std::accumulate(spec.class_sizes.begin(), spec.class_sizes.end(), 0);
  Rng rng(derive_seed(spec.seed, "synthetic/" + spec.name));

  std::vector<int> labels;
  for (int c = 0; c < num_classes; ++c) {
    labels.insert(labels.end(), static_cast<std::size_t>(spec.class_sizes[static_cast<std::size_t>(c)]), c);
  }
  std::shuffle(labels.begin(), labels.end(), rng);

  std::vector<int> subcluster(static_cast<std::size_t>(n));
  std::vector<double> propensity(static_cast<std::size_t>(n));
  std::uniform_int_distribution<int> pick_sub(0, subclusters - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int v = 0; v < n; ++v) {
    subcluster[static_cast<std::size_t>(v)] = pick_sub(rng);
    const double u = unit(rng);
    propensity[static_cast<std::size_t>(v)] =
        std::min(60.0, std::pow(1.0 - u, -1.0 / (spec.degree_exponent - 1.0)));
  }

  // Pickers: all nodes, per class, per (class, subcluster).
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  WeightedPicker any_node(all, propensity);
  std::vector<WeightedPicker> by_class(static_cast<std::size_t>(num_classes));
  std::vector<WeightedPicker> by_sub(static_cast<std::size_t>(num_classes * subclusters));
  {
    std::vector<std::vector<int>> cls(static_cast<std::size_t>(num_classes));
    std::vector<std::vector<int>> sub(static_cast<std::size_t>(num_classes * subclusters));
    for (int v = 0; v < n; ++v) {
      const int c = labels[static_cast<std::size_t>(v)];
      cls[static_cast<std::size_t>(c)].push_back(v);
      sub[static_cast<std::size_t>(c * subclusters + subcluster[static_cast<std::size_t>(v)])].push_back(v);
    }
    for (int c = 0; c < num_classes; ++c) by_class[static_cast<std::size_t>(c)] = WeightedPicker(cls[static_cast<std::size_t>(c)], propensity);
    for (std::size_t k = 0; k < sub.size(); ++k) {
      if (!sub[k].empty()) by_sub[k] = WeightedPicker(sub[k], propensity);
    }
  }

  auto partner_of = [&](int u) {
    const int c = labels[static_cast<std::size_t>(u)];
    if (unit(rng) < spec.homophily) {
      const auto& sub = by_sub[static_cast<std::size_t>(c * subclusters + subcluster[static_cast<std::size_t>(u)])];
      if (!sub.empty() && unit(rng) < spec.subcluster_affinity) return sub.pick(rng);
      return by_class[static_cast<std::size_t>(c)].pick(rng);
    }
    if (num_classes == 1) return any_node.pick(rng);
    for (;;) {
      const int v = any_node.pick(rng);
      if (labels[static_cast<std::size_t>(v)] != c) return v;
    }
  };

  std::set<Edge> edges;
  const std::size_t target = static_cast<std::size_t>(std::max(0, spec.num_edges));
  // Every node first receives one edge so the graph has no isolated nodes.
  std::vector<int> order = all;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<char> touched(static_cast<std::size_t>(n), 0);
  for (int u : order) {
    if (edges.size() >= target) break;
    if (touched[static_cast<std::size_t>(u)]) continue;
    for (int attempt = 0; attempt < 100; ++attempt) {
      const int v = partner_of(u);
      if (v == u) continue;
      if (edges.insert(Edge::canonical(u, v)).second) {
        touched[static_cast<std::size_t>(u)] = touched[static_cast<std::size_t>(v)] = 1;
        break;
      }
    }
  }
  std::size_t stall = 0;
  while (edges.size() < target && stall < 100 * target + 1000) {
    const int u = any_node.pick(rng);
    const int v = partner_of(u);
    if (u == v || !edges.insert(Edge::canonical(u, v)).second) ++stall;
  }

  // Bag-of-words features: class topic, subcluster topic, Zipf background.
  const int d = spec.num_features;
  std::vector<int> vocab(static_cast<std::size_t>(d));
  std::iota(vocab.begin(), vocab.end(), 0);
  auto draw_topic = [&](int size) {
    std::vector<int> words = vocab;
    std::shuffle(words.begin(), words.end(), rng);
    words.resize(static_cast<std::size_t>(std::clamp(size, 1, d)));
    return words;
  };
  std::vector<std::vector<int>> class_topic;
  std::vector<std::vector<int>> sub_topic;
  for (int c = 0; c < num_classes; ++c) {
    class_topic.push_back(draw_topic(spec.topic_words_per_class));
    for (int s = 0; s < subclusters; ++s) sub_topic.push_back(draw_topic(spec.topic_words_per_subcluster));
  }
  std::vector<double> zipf(static_cast<std::size_t>(d));
  {
    std::vector<int> rank = vocab;
    std::shuffle(rank.begin(), rank.end(), rng);
    for (int i = 0; i < d; ++i) zipf[static_cast<std::size_t>(rank[static_cast<std::size_t>(i)])] = 1.0 / (1.0 + i);
  }
  WeightedPicker background(vocab, zipf);
  std::poisson_distribution<int> length(spec.words_per_node);

  std::vector<Eigen::Triplet<double>> triplets;
  for (int v = 0; v < n; ++v) {
    const int c = labels[static_cast<std::size_t>(v)];
    const auto& ct = class_topic[static_cast<std::size_t>(c)];
    const auto& st = sub_topic[static_cast<std::size_t>(c * subclusters + subcluster[static_cast<std::size_t>(v)])];
    std::set<int> words;
    const int len = std::max(1, length(rng));
    for (int w = 0; w < len; ++w) {
      const double x = unit(rng);
      if (x < spec.class_topic_prob) {
        words.insert(ct[std::uniform_int_distribution<std::size_t>(0, ct.size() - 1)(rng)]);
      } else if (x < spec.class_topic_prob + spec.subcluster_topic_prob) {
        words.insert(st[std::uniform_int_distribution<std::size_t>(0, st.size() - 1)(rng)]);
      } else {
        words.insert(background.pick(rng));
      }
    }
    for (int w : words) triplets.emplace_back(v, w, 1.0);
  }
  SparseMatrix features(n, d);
  features.setFromTriplets(triplets.begin(), triplets.end());
  return Graph(n, std::vector<Edge>(edges.begin(), edges.end()), std::move(features),
               std::move(labels));
}

}  // namespace gcl
