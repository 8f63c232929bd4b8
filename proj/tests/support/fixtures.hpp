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

// Shared test fixtures and oracles.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "gcl/autodiff.hpp"
#include "gcl/graph.hpp"
#include "gcl/nn.hpp"

namespace gcl::testing {

/// Erdos-Renyi style graph with dense random features (some zeroed).
inline Graph random_graph(int n, int num_features, int num_classes, double edge_prob, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> cls(0, num_classes - 1);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (unit(rng) < edge_prob) edges.push_back({i, j});
    }
  }
  std::vector<Eigen::Triplet<double>> triplets;
  for (int i = 0; i < n; ++i) {
    for (int f = 0; f < num_features; ++f) {
      if (unit(rng) < 0.8) triplets.emplace_back(i, f, unit(rng) * 2.0 - 1.0);
    }
  }
  SparseMatrix x(n, num_features);
  x.setFromTriplets(triplets.begin(), triplets.end());
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (auto& l : labels) l = cls(rng);
  return Graph(n, std::move(edges), std::move(x), std::move(labels));
}

inline SparseMatrix dense_to_sparse(const Matrix& m) {
  SparseMatrix s = m.sparseView();
  s.makeCompressed();
  return s;
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::string worst;
  int checked = 0;
};

/// Compares the tape gradient of `build` (a scalar loss) w.r.t. every entry
/// of every tensor in `store` with central differences at `step`. The
/// relative error is |a - n| / max(|a|, |n|, floor * max(1, |loss|)); the
/// loss-scaled floor matches the round-off of the central difference, so
/// structurally zero entries are not judged on noise.
inline GradCheck check_gradients(ParamStore& store, const std::function<Var(Tape&)>& build,
                                 double step = 1e-5, double floor = 1e-5) {
  store.zero_grad();
  double scale = 1.0;
  {
    Tape tape;
    Var loss = build(tape);
    scale = std::max(1.0, std::abs(tape.scalar(loss)));
    tape.backward(loss);
  }
  auto eval = [&] {
    Tape tape;
    return tape.scalar(build(tape));
  };
  GradCheck out;
  for (auto& p : store.params()) {
    const Matrix analytic = p.grad;
    for (Eigen::Index k = 0; k < p.value.size(); ++k) {
      const double orig = p.value.data()[k];
      p.value.data()[k] = orig + step;
      const double up = eval();
      p.value.data()[k] = orig - step;
      const double down = eval();
      p.value.data()[k] = orig;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic.data()[k];
      const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor * scale});
      ++out.checked;
      if (err > out.max_rel_error) {
        out.max_rel_error = err;
        out.worst = p.name + "[" + std::to_string(k) + "] analytic " + std::to_string(a) +
                    " numeric " + std::to_string(numeric);
      }
    }
  }
  store.zero_grad();
  return out;
}

/// Size of the union of coverage sets over the best `k`-subset of rows, by
/// exhaustive search.
inline int brute_force_max_coverage(const std::vector<std::vector<int>>& cover, int k) {
  const int n = static_cast<int>(cover.size());
  int best = 0;
  std::vector<int> pick(static_cast<std::size_t>(k));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      std::set<int> u;
      for (int v : pick) u.insert(cover[static_cast<std::size_t>(v)].begin(), cover[static_cast<std::size_t>(v)].end());
      best = std::max(best, static_cast<int>(u.size()));
      return;
    }
    for (int v = start; v < n; ++v) {
      pick[static_cast<std::size_t>(depth)] = v;
      rec(v + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

inline int union_size(const std::vector<std::vector<int>>& cover, const std::vector<int>& picks) {
  std::set<int> u;
  for (int v : picks) u.insert(cover[static_cast<std::size_t>(v)].begin(), cover[static_cast<std::size_t>(v)].end());
  return static_cast<int>(u.size());
}

}  // namespace gcl::testing
