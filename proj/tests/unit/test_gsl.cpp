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
#include <numbers>

#include "fixtures.hpp"
#include "gcl/gsl.hpp"

using namespace gcl;

namespace {

// 2-D unit vector whose cosine link score against (1, 0) equals `s`.
Eigen::RowVector2d at_score(double s) {
  const double angle = std::acos(2.0 * s - 1.0);
  return {std::cos(angle), std::sin(angle)};
}

Graph edgeless(int n, std::vector<int> labels, std::vector<Edge> edges = {}) {
  return Graph(n, std::move(edges), testing::dense_to_sparse(Matrix::Zero(n, 1)), std::move(labels));
}

std::vector<GlobalEdge> global_edges(const Graph& g) {
  std::vector<GlobalEdge> out;
  for (const Edge& e : g.edges()) out.push_back(global_edge(g.global_id(e.u), g.global_id(e.v)));
  std::sort(out.begin(), out.end());
  return out;
}

struct RandomCase {
  Graph graph;
  Matrix emb;
  Matrix z;
  std::vector<GlobalId> replayed;
};

RandomCase random_case(std::uint64_t seed) {
  Rng rng(seed);
  RandomCase c;
  c.graph = testing::random_graph(25, 3, 3, 0.15, rng);
  c.emb = glorot_uniform(25, 4, rng);
  c.z = glorot_uniform(25, 4, rng);
  std::vector<GlobalId> ids(25);
  std::iota(ids.begin(), ids.end(), 0);
  std::shuffle(ids.begin(), ids.end(), rng);
  c.replayed.assign(ids.begin(), ids.begin() + 6);
  std::sort(c.replayed.begin(), c.replayed.end());
  return c;
}

}  // namespace

TEST_CASE("candidate sets") {
  Matrix emb(4, 1);
  emb << 0.0, 0.1, 0.2, 5.0;
  const Graph g = edgeless(4, {0, 0, 0, 0});
  const std::vector<GlobalId> b = {0};
  const auto two = build_candidates(g, emb, b, 2);
  REQUIRE(two.at(0).size() == 2);
  CHECK(two.at(0)[0].id == 1);
  CHECK(two.at(0)[1].id == 2);
  CHECK(two.at(0)[0].distance == doctest::Approx(0.1));
  const auto all = build_candidates(g, emb, b, 10);
  CHECK(all.at(0).size() == 3);
  for (const auto& c : all.at(0)) CHECK(c.id != 0);
  const std::vector<GlobalId> missing = {42};
  CHECK(build_candidates(g, emb, missing, 2).empty());
}

TEST_CASE("edge addition picks the top-scoring candidates") {
  const Graph g = edgeless(4, {0, 0, 0, 0});
  Matrix z(4, 2);
  z.row(0) << 1.0, 0.0;
  z.row(1) = at_score(0.9);
  z.row(2) = at_score(0.7);
  z.row(3) = at_score(0.2);
  const LinkScorer scorer(g, z);
  CHECK(scorer.score(0, 1) == doctest::Approx(0.9));
  CandidateSets cands{{0, {{3, 0.1}, {2, 0.2}, {1, 0.3}}}};
  const std::vector<GlobalId> b = {0};
  const auto top2 = add_edges(g, b, cands, scorer, 2);
  CHECK(top2.added == std::set<GlobalEdge>{{0, 1}, {0, 2}});
  CHECK(add_edges(g, b, cands, scorer, 0).added.empty());
  CandidateSets empty{{0, {}}};
  CHECK(add_edges(g, b, empty, scorer, 2).added.empty());

  // Existing edges stay and are not logged again.
  const Graph linked = edgeless(4, {0, 0, 0, 0}, {{0, 1}});
  const auto again = add_edges(linked, b, cands, LinkScorer(linked, z), 2);
  CHECK(again.added == std::set<GlobalEdge>{{0, 2}});
  CHECK(again.protected_edges.contains({0, 1}));
}

TEST_CASE("edge deletion keeps neighbours scoring above the threshold") {
  const Graph g = edgeless(3, {0, 0, 0}, {{0, 1}, {0, 2}});
  Matrix z(3, 2);
  z.row(0) << 1.0, 0.0;
  z.row(1) = at_score(0.9);
  z.row(2) = at_score(0.5);
  const LinkScorer scorer(g, z);
  const std::vector<GlobalId> b = {0};
  CHECK(delete_edges(g, b, scorer, 0.8).deleted == std::set<GlobalEdge>{{0, 2}});
  CHECK(delete_edges(g, b, scorer, 0.0).deleted.empty());
  CHECK(delete_edges(g, b, scorer, 0.8, {{0, 2}}).deleted.empty());
  CHECK_THROWS_AS(delete_edges(g, b, scorer, 1.5), ConfigError);
}

TEST_CASE("structure refinement no-op settings") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomCase c = random_case(seed);
    const auto cands = build_candidates(c.graph, c.emb, c.replayed, 5);
    const LinkScorer scorer(c.graph, c.z);
    Rng rng(seed);
    const auto none = refine_structure(c.graph, c.replayed, cands, scorer, 5, 0.8, 0.0, rng);
    CHECK(global_edges(none.graph) == global_edges(c.graph));
    CHECK(none.refined_nodes.empty());
    const auto zero = refine_structure(c.graph, c.replayed, cands, scorer, 0, 0.0, 1.0, rng);
    CHECK(global_edges(zero.graph) == global_edges(c.graph));
    CHECK(zero.delta.log.empty());
  }
}

TEST_CASE("structure refinement properties on random graphs") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    RandomCase c = random_case(seed + 50);
    const auto cands = build_candidates(c.graph, c.emb, c.replayed, 6);
    const LinkScorer scorer(c.graph, c.z);
    Rng rng(seed);
    const auto res = refine_structure(c.graph, c.replayed, cands, scorer, 3, 0.6, 1.0, rng);
    const std::set<GlobalId> replayed(c.replayed.begin(), c.replayed.end());

    // Edges away from replayed nodes are untouched.
    for (int u = 0; u < c.graph.num_nodes(); ++u) {
      for (int v = u + 1; v < c.graph.num_nodes(); ++v) {
        if (replayed.contains(u) || replayed.contains(v)) continue;
        CHECK(c.graph.has_edge(u, v) == res.graph.has_edge(u, v));
      }
    }
    for (const auto& e : res.delta.added) CHECK_FALSE(res.delta.deleted.contains(e));

    // Oracle top-N sets; every addition comes from one, and each replayed node
    // gains at most N edges beyond those other replayed nodes chose for it.
    std::map<GlobalId, std::set<GlobalId>> top;
    for (GlobalId b : c.replayed) {
      std::vector<std::pair<double, GlobalId>> scored;
      for (const Candidate& x : cands.at(b)) scored.emplace_back(-scorer.score(b, x.id), x.id);
      std::sort(scored.begin(), scored.end());
      for (std::size_t k = 0; k < std::min<std::size_t>(3, scored.size()); ++k) top[b].insert(scored[k].second);
    }
    for (const auto& [u, v] : res.delta.added) {
      CHECK(((top.contains(u) && top[u].contains(v)) || (top.contains(v) && top[v].contains(u))));
    }
    for (GlobalId b : c.replayed) {
      int chosen_by_others = 0;
      for (const auto& [other, set] : top) chosen_by_others += other != b && set.contains(b) ? 1 : 0;
      const int gained = res.graph.degree(static_cast<int>(b)) - c.graph.degree(static_cast<int>(b));
      CHECK(gained <= 3 + chosen_by_others);
    }

    // Determinism.
    Rng rng2(seed);
    CHECK(global_edges(refine_structure(c.graph, c.replayed, cands, scorer, 3, 0.6, 1.0, rng2).graph) ==
          global_edges(res.graph));
  }
}

TEST_CASE("a single replayed node gains at most N edges") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomCase c = random_case(seed + 200);
    const std::vector<GlobalId> one = {c.replayed.front()};
    const auto cands = build_candidates(c.graph, c.emb, one, 8);
    Rng rng(seed);
    const auto res = refine_structure(c.graph, one, cands, LinkScorer(c.graph, c.z), 4, 0.5, 1.0, rng);
    const int b = static_cast<int>(one.front());
    CHECK(res.graph.degree(b) <= c.graph.degree(b) + 4);
  }
}

TEST_CASE("deletion is monotone in the threshold") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomCase c = random_case(seed + 100);
    const LinkScorer scorer(c.graph, c.z);
    std::set<GlobalEdge> prev;
    for (double tau : {0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0}) {
      const auto del = delete_edges(c.graph, c.replayed, scorer, tau).deleted;
      CHECK(std::includes(del.begin(), del.end(), prev.begin(), prev.end()));
      prev = del;
    }
  }
}

TEST_CASE("refinement raises buffer homophily on a separable fixture") {
  // Replayed node 0 (class 0) links only to class-1 nodes 3,4; class-0 nodes 1,2 are unlinked.
  const Graph g = edgeless(5, {0, 0, 0, 1, 1}, {{0, 3}, {0, 4}});
  Matrix emb(5, 1);
  emb << 0.0, 0.1, 0.2, 1.0, 1.1;
  Matrix z(5, 2);
  z.row(0) << 1.0, 0.0;
  z.row(1) = at_score(0.95);
  z.row(2) = at_score(0.9);
  z.row(3) = at_score(0.3);
  z.row(4) = at_score(0.2);
  const std::vector<GlobalId> b = {0};
  const auto cands = build_candidates(g, emb, b, 2);
  Rng rng(0);
  const auto res = refine_structure(g, b, cands, LinkScorer(g, z), 2, 0.8, 1.0, rng);
  CHECK(homophily_ratio(g, 0) == 0.0);
  CHECK(homophily_ratio(res.graph, 0) == 1.0);
  CHECK(res.delta.added.size() == 2);
  CHECK(res.delta.deleted.size() == 2);
}

TEST_CASE("merged overrides and delta application") {
  const Graph g = edgeless(4, {0, 0, 1, 1}, {{0, 1}, {2, 3}});
  RefinedAdjacency first;
  first.added = {{0, 2}};
  first.deleted = {{2, 3}};
  RefinedAdjacency second;
  second.added = {{2, 3}};
  second.deleted = {{0, 2}};
  RefinedAdjacency total = first;
  total.merge(second);
  CHECK(total.added == std::set<GlobalEdge>{{2, 3}});
  CHECK(total.deleted == std::set<GlobalEdge>{{0, 2}});
  CHECK(global_edges(apply_delta(g, first)) == std::vector<GlobalEdge>{{0, 1}, {0, 2}});

  RefinedAdjacency outside;
  outside.added = {{0, 99}};
  CHECK(global_edges(apply_delta(g, outside)) == global_edges(g));
}

TEST_CASE("homophily boost adds only same-class edges") {
  Rng grng(9);
  const Graph g = testing::random_graph(30, 2, 3, 0.1, grng);
  ReplayBuffer buffer(6);
  std::map<int, std::vector<GlobalId>> pool;
  for (int v = 0; v < g.num_nodes(); ++v) pool[g.label(v)].push_back(g.global_id(v));
  for (const auto& [cls, members] : pool) buffer.set_bucket(cls, {members.front(), members.back()});
  Rng rng(1);
  CHECK(homophily_boost_edges(g, buffer, pool, 0, rng).added.empty());
  const auto boost = homophily_boost_edges(g, buffer, pool, 3, rng);
  for (const auto& [u, v] : boost.added) CHECK(g.label(static_cast<int>(u)) == g.label(static_cast<int>(v)));
  const Graph boosted = apply_delta(g, boost);
  for (GlobalId b : buffer.all_nodes()) {
    CHECK(homophily_ratio(boosted, static_cast<int>(b)) >= homophily_ratio(g, static_cast<int>(b)));
  }
  // A class with fewer than N other nodes links to all of them.
  const Graph small = edgeless(3, {0, 0, 0});
  ReplayBuffer one(1);
  one.set_bucket(0, {0});
  const auto all = homophily_boost_edges(small, one, {{0, {0, 1, 2}}}, 5, rng);
  CHECK(all.added == std::set<GlobalEdge>{{0, 1}, {0, 2}});
}
