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

#include "gcl/replay.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <stdexcept>

namespace gcl {

ReplayBuffer::ReplayBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 0) throw ConfigError("buffer capacity must be non-negative");
}

void ReplayBuffer::set_bucket(int label, std::vector<GlobalId> nodes) {
  std::set<GlobalId> unique(nodes.begin(), nodes.end());
  if (unique.size() != nodes.size()) throw std::invalid_argument("bucket repeats a node");
  std::size_t others = 0;
  for (const auto& [cls, bucket] : buckets_) {
    if (cls == label) continue;
    others += bucket.size();
    for (GlobalId id : bucket) {
      if (unique.contains(id)) throw std::invalid_argument("node already buffered in another class");
    }
  }
  if (others + nodes.size() > static_cast<std::size_t>(capacity_)) {
    throw std::invalid_argument("buffer capacity exceeded");
  }
  buckets_[label] = std::move(nodes);
}

void ReplayBuffer::truncate(int label, int size) {
  auto& b = buckets_.at(label);
  if (size < 0) throw std::invalid_argument("negative bucket size");
  if (static_cast<std::size_t>(size) < b.size()) b.resize(static_cast<std::size_t>(size));
}

const std::vector<GlobalId>& ReplayBuffer::bucket(int label) const {
  auto it = buckets_.find(label);
  if (it == buckets_.end()) throw std::out_of_range("no bucket for class " + std::to_string(label));
  return it->second;
}

std::vector<int> ReplayBuffer::classes() const {
  std::vector<int> out;
  for (const auto& kv : buckets_) out.push_back(kv.first);
  return out;
}

std::vector<GlobalId> ReplayBuffer::all_nodes() const {
  std::vector<GlobalId> out;
  for (const auto& kv : buckets_) out.insert(out.end(), kv.second.begin(), kv.second.end());
  return out;
}

std::size_t ReplayBuffer::size() const {
  std::size_t n = 0;
  for (const auto& kv : buckets_) n += kv.second.size();
  return n;
}

bool ReplayBuffer::contains(GlobalId id) const { return class_of(id).has_value(); }

std::optional<int> ReplayBuffer::class_of(GlobalId id) const {
  for (const auto& [cls, bucket] : buckets_) {
    if (std::find(bucket.begin(), bucket.end(), id) != bucket.end()) return cls;
  }
  return std::nullopt;
}

void CoverageSpec::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("coverage radius factor r must be > 0");
}

namespace {

void check_selection(const Matrix& points, std::span<const GlobalId> ids, int quota) {
  if (points.rows() != static_cast<Eigen::Index>(ids.size())) {
    throw std::invalid_argument("point rows != id count");
  }
  if (quota < 0) throw std::invalid_argument("negative quota");
  if (quota > static_cast<int>(ids.size())) {
    throw std::invalid_argument("quota " + std::to_string(quota) + " exceeds class size " +
                                std::to_string(ids.size()));
  }
}

Matrix pairwise_distances(const Matrix& points) {
  const Eigen::Index n = points.rows();
  Matrix d(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = (points.row(i) - points.row(j)).norm();
    }
  }
  return d;
}

std::vector<GlobalId> to_ids(std::span<const int> rows, std::span<const GlobalId> ids) {
  std::vector<GlobalId> out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(ids[static_cast<std::size_t>(r)]);
  return out;
}

}  // namespace

double class_pair_mean_distance(const Matrix& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw std::invalid_argument("pair mean distance needs at least two points");
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) total += (points.row(i) - points.row(j)).norm();
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

std::vector<int> coverage(const Matrix& points, int i, double radius) {
  if (i < 0 || i >= points.rows()) throw std::out_of_range("coverage row out of range");
  std::vector<int> out;
  for (int j = 0; j < points.rows(); ++j) {
    if (j == i || (points.row(i) - points.row(j)).norm() < radius) out.push_back(j);
  }
  return out;
}

std::map<int, int> buffer_quota(const std::map<int, int>& class_sizes, int capacity) {
  if (class_sizes.empty()) return {};
  if (capacity < static_cast<int>(class_sizes.size())) {
    throw ConfigError("buffer capacity " + std::to_string(capacity) + " is smaller than " +
                      std::to_string(class_sizes.size()) + " seen classes");
  }
  long total = 0;
  for (const auto& [label, size] : class_sizes) {
    if (size < 1) throw std::invalid_argument("class sizes must be positive");
    total += size;
  }
  struct Share {
    int label;
    int size;
    int quota;
    double remainder;
  };
  std::vector<Share> shares;
  int assigned = 0;
  for (const auto& [label, size] : class_sizes) {
    const double exact = static_cast<double>(capacity) * size / static_cast<double>(total);
    const int floor = static_cast<int>(std::floor(exact));
    shares.push_back({label, size, floor, exact - floor});
    assigned += floor;
  }
  std::vector<std::size_t> order(shares.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (shares[a].remainder != shares[b].remainder) return shares[a].remainder > shares[b].remainder;
    if (shares[a].size != shares[b].size) return shares[a].size > shares[b].size;
    return shares[a].label < shares[b].label;
  });
  for (std::size_t k = 0; assigned < capacity; k = (k + 1) % order.size()) {
    ++shares[order[k]].quota;
    ++assigned;
  }
  // Every class keeps at least one slot, taken from the currently largest quota.
  for (auto& s : shares) {
    if (s.quota > 0) continue;
    auto donor = std::max_element(shares.begin(), shares.end(), [](const Share& a, const Share& b) {
      if (a.quota != b.quota) return a.quota < b.quota;
      return a.label > b.label;
    });
    --donor->quota;
    s.quota = 1;
  }
  std::map<int, int> out;
  for (const auto& s : shares) out[s.label] = s.quota;
  return out;
}

std::vector<int> mean_feature_order(const Matrix& points, std::span<const GlobalId> ids) {
  if (points.rows() != static_cast<Eigen::Index>(ids.size())) {
    throw std::invalid_argument("point rows != id count");
  }
  std::vector<int> order(ids.size());
  std::iota(order.begin(), order.end(), 0);
  if (ids.empty()) return order;
  const Eigen::RowVectorXd mean = points.colwise().mean();
  std::vector<double> dist(ids.size());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    dist[k] = (points.row(static_cast<Eigen::Index>(k)) - mean).norm();
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (dist[static_cast<std::size_t>(a)] != dist[static_cast<std::size_t>(b)]) {
      return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
    }
    return ids[static_cast<std::size_t>(a)] < ids[static_cast<std::size_t>(b)];
  });
  return order;
}

std::vector<GlobalId> select_buffer_cd(const Matrix& points, std::span<const GlobalId> ids,
                                       int quota, const CoverageSpec& spec,
                                       std::span<const int> fill_order) {
  check_selection(points, ids, quota);
  spec.validate();
  const int n = static_cast<int>(ids.size());
  if (quota == 0) return {};
  if (n == 1) return {ids[0]};

  const Matrix dist = pairwise_distances(points);
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) e += dist(i, j);
  }
  e /= static_cast<double>(n) * (n - 1) / 2.0;
  const double radius = spec.r * e;

  std::vector<std::vector<int>> cover_sets(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i || dist(i, j) < radius) cover_sets[static_cast<std::size_t>(i)].push_back(j);
    }
  }

  std::vector<char> covered(static_cast<std::size_t>(n), 0);
  std::vector<char> candidate(static_cast<std::size_t>(n), 1);
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  std::vector<int> picks;
  while (static_cast<int>(picks.size()) < quota) {
    int best = -1;
    int best_gain = -1;
    for (int v = 0; v < n; ++v) {
      if (!candidate[static_cast<std::size_t>(v)]) continue;
      int gain = 0;
      for (int j : cover_sets[static_cast<std::size_t>(v)]) gain += covered[static_cast<std::size_t>(j)] ? 0 : 1;
      if (gain > best_gain ||
          (gain == best_gain && ids[static_cast<std::size_t>(v)] < ids[static_cast<std::size_t>(best)])) {
        best = v;
        best_gain = gain;
      }
    }
    if (best < 0) break;
    picks.push_back(best);
    chosen[static_cast<std::size_t>(best)] = 1;
    for (int j : cover_sets[static_cast<std::size_t>(best)]) {
      covered[static_cast<std::size_t>(j)] = 1;
      candidate[static_cast<std::size_t>(j)] = 0;
    }
  }

  if (static_cast<int>(picks.size()) < quota) {
    std::vector<int> fallback;
    if (fill_order.empty()) {
      fallback = mean_feature_order(points, ids);
      fill_order = fallback;
    }
    if (fill_order.size() != ids.size()) throw std::invalid_argument("fill order size mismatch");
    for (int r : fill_order) {
      if (static_cast<int>(picks.size()) == quota) break;
      if (!chosen[static_cast<std::size_t>(r)]) {
        chosen[static_cast<std::size_t>(r)] = 1;
        picks.push_back(r);
      }
    }
  }
  return to_ids(picks, ids);
}

std::vector<GlobalId> select_buffer_mf(const Matrix& points, std::span<const GlobalId> ids,
                                       int quota) {
  check_selection(points, ids, quota);
  auto order = mean_feature_order(points, ids);
  order.resize(static_cast<std::size_t>(quota));
  return to_ids(order, ids);
}

std::vector<GlobalId> select_buffer_cm(const Matrix& points, std::span<const GlobalId> ids,
                                       const Matrix& others, int quota, const CoverageSpec& spec) {
  check_selection(points, ids, quota);
  spec.validate();
  const int n = static_cast<int>(ids.size());
  if (quota == 0) return {};
  if (n == 1) return {ids[0]};
  if (others.rows() > 0 && others.cols() != points.cols()) {
    throw std::invalid_argument("other-class points have a different width");
  }
  const double radius = spec.r * class_pair_mean_distance(points);
  std::vector<int> count(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < others.rows(); ++j) {
      if ((points.row(i) - others.row(j)).norm() < radius) ++count[static_cast<std::size_t>(i)];
    }
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (count[static_cast<std::size_t>(a)] != count[static_cast<std::size_t>(b)]) {
      return count[static_cast<std::size_t>(a)] < count[static_cast<std::size_t>(b)];
    }
    return ids[static_cast<std::size_t>(a)] < ids[static_cast<std::size_t>(b)];
  });
  order.resize(static_cast<std::size_t>(quota));
  return to_ids(order, ids);
}

std::vector<GlobalId> select_buffer_random(std::span<const GlobalId> ids, int quota, Rng& rng) {
  if (quota < 0 || quota > static_cast<int>(ids.size())) throw std::invalid_argument("bad quota");
  std::vector<GlobalId> pool(ids.begin(), ids.end());
  std::sort(pool.begin(), pool.end());
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(static_cast<std::size_t>(quota));
  return pool;
}

KMeansResult kmeans(const Matrix& points, int k, int iterations, Rng& rng) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k > n) throw std::invalid_argument("k must lie in [1, number of points]");
  std::vector<int> rows(static_cast<std::size_t>(n));
  std::iota(rows.begin(), rows.end(), 0);
  std::shuffle(rows.begin(), rows.end(), rng);
  KMeansResult res;
  res.centroids.resize(k, points.cols());
  for (int c = 0; c < k; ++c) res.centroids.row(c) = points.row(rows[static_cast<std::size_t>(c)]);
  res.assignment.assign(static_cast<std::size_t>(n), 0);
  for (int it = 0; it < iterations; ++it) {
    bool changed = it == 0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (points.row(i) - res.centroids.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (res.assignment[static_cast<std::size_t>(i)] != best) changed = true;
      res.assignment[static_cast<std::size_t>(i)] = best;
    }
    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < n; ++i) {
      sums.row(res.assignment[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(res.assignment[static_cast<std::size_t>(i)])];
    }
    for (int c = 0; c < k; ++c) {
      // An emptied cluster keeps its previous centroid.
      if (counts[static_cast<std::size_t>(c)] > 0) {
        res.centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
      }
    }
    if (!changed) break;
  }
  return res;
}

std::vector<GlobalId> select_buffer_clustering(const Matrix& points, std::span<const GlobalId> ids,
                                               int quota, Rng& rng, int max_clusters,
                                               int iterations) {
  check_selection(points, ids, quota);
  if (quota == 0) return {};
  const int k = std::min(max_clusters, quota);
  const KMeansResult km = kmeans(points, k, iterations, rng);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
  std::vector<double> dist(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int c = km.assignment[i];
    members[static_cast<std::size_t>(c)].push_back(static_cast<int>(i));
    dist[i] = (points.row(static_cast<Eigen::Index>(i)) - km.centroids.row(c)).norm();
  }
  for (auto& m : members) {
    std::sort(m.begin(), m.end(), [&](int a, int b) {
      if (dist[static_cast<std::size_t>(a)] != dist[static_cast<std::size_t>(b)]) {
        return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
      }
      return ids[static_cast<std::size_t>(a)] < ids[static_cast<std::size_t>(b)];
    });
  }
  std::vector<int> picks;
  for (std::size_t rank = 0; static_cast<int>(picks.size()) < quota; ++rank) {
    for (const auto& m : members) {
      if (rank < m.size() && static_cast<int>(picks.size()) < quota) picks.push_back(m[rank]);
    }
  }
  return to_ids(picks, ids);
}

void write_buffer_csv(const std::filesystem::path& path, const ReplayBuffer& buffer,
                      const std::string& method) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (int cls : buffer.classes()) {
    for (GlobalId id : buffer.bucket(cls)) out << cls << ',' << id << ',' << method << '\n';
  }
}

std::map<int, std::optional<HomophilyStat>> buffer_homophily_table(const Graph& graph,
                                                                   const ReplayBuffer& buffer) {
  std::map<int, std::optional<HomophilyStat>> out;
  for (int cls : buffer.classes()) {
    const auto& bucket = buffer.bucket(cls);
    if (bucket.empty()) {
      out[cls] = std::nullopt;
      continue;
    }
    std::vector<double> ratios;
    for (GlobalId id : bucket) ratios.push_back(homophily_ratio(graph, graph.require_local(id)));
    HomophilyStat s;
    s.count = static_cast<int>(ratios.size());
    s.mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / s.count;
    double var = 0.0;
    for (double r : ratios) var += (r - s.mean) * (r - s.mean);
    s.stddev = std::sqrt(var / s.count);
    out[cls] = s;
  }
  return out;
}

Matrix gather_features(const Graph& graph, std::span<const GlobalId> ids) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(ids.size()), graph.num_features());
  const SparseMatrix& x = graph.features();
  for (std::size_t k = 0; k < ids.size(); ++k) {
    for (SparseMatrix::InnerIterator it(x, graph.require_local(ids[k])); it; ++it) {
      out(static_cast<Eigen::Index>(k), it.col()) = it.value();
    }
  }
  return out;
}

Matrix gather_rows(const Graph& graph, const Matrix& embeddings, std::span<const GlobalId> ids) {
  if (embeddings.rows() != graph.num_nodes()) throw std::invalid_argument("embedding rows != graph nodes");
  Matrix out(static_cast<Eigen::Index>(ids.size()), embeddings.cols());
  for (std::size_t k = 0; k < ids.size(); ++k) {
    out.row(static_cast<Eigen::Index>(k)) = embeddings.row(graph.require_local(ids[k]));
  }
  return out;
}

}  // namespace gcl
