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
#include <numeric>
#include <set>

#include "fixtures.hpp"
#include "gcl/replay.hpp"

using namespace gcl;

namespace {

Matrix column(std::initializer_list<double> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

std::vector<GlobalId> iota_ids(int n, GlobalId start = 0) {
  std::vector<GlobalId> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), start);
  return ids;
}

std::vector<std::vector<int>> cover_sets(const Matrix& points, double r) {
  const double radius = r * class_pair_mean_distance(points);
  std::vector<std::vector<int>> out;
  for (int i = 0; i < points.rows(); ++i) out.push_back(coverage(points, i, radius));
  return out;
}

std::vector<int> rows_of(const std::vector<GlobalId>& picked, const std::vector<GlobalId>& ids) {
  std::vector<int> rows;
  for (GlobalId id : picked) {
    rows.push_back(static_cast<int>(std::find(ids.begin(), ids.end(), id) - ids.begin()));
  }
  return rows;
}

}  // namespace

TEST_CASE("class pair mean distance") {
  CHECK(class_pair_mean_distance(column({0.0, 0.1, 1.0})) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(class_pair_mean_distance(column({0.4, 0.4})) == 0.0);
  Rng rng(3);
  for (int k = 0; k < 20; ++k) {
    Matrix p = Matrix::Random(6, 3);
    const double c = 0.1 + 5.0 * std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(class_pair_mean_distance(c * p) == doctest::Approx(c * class_pair_mean_distance(p)).epsilon(1e-12));
  }
  CHECK_THROWS(class_pair_mean_distance(column({1.0})));
}

TEST_CASE("coverage uses a strict radius and always contains the node") {
  const Matrix p = column({0.0, 0.1, 0.2, 0.5});
  CHECK(coverage(p, 0, 0.2) == std::vector<int>{0, 1});
  CHECK(coverage(p, 1, 0.15) == std::vector<int>{0, 1, 2});
  CHECK(coverage(p, 3, 1e-12) == std::vector<int>{3});
  const Matrix dup = column({0.3, 0.3, 0.9});
  CHECK(coverage(dup, 0, 1e-12) == std::vector<int>{0, 1});
}

TEST_CASE("buffer quota") {
  CHECK(buffer_quota({{0, 30}, {1, 70}}, 100) == std::map<int, int>{{0, 30}, {1, 70}});
  CHECK(buffer_quota({{0, 5}, {1, 5}}, 10) == std::map<int, int>{{0, 5}, {1, 5}});
  CHECK(buffer_quota({{0, 25}, {1, 35}, {2, 40}}, 10) == std::map<int, int>{{0, 2}, {1, 4}, {2, 4}});
  // Equal remainders go to the smaller label.
  CHECK(buffer_quota({{3, 10}, {5, 10}, {7, 10}}, 10) == std::map<int, int>{{3, 4}, {5, 3}, {7, 3}});
  // A tiny class still keeps one slot.
  auto q = buffer_quota({{0, 1}, {1, 1000}}, 10);
  CHECK(q.at(0) == 1);
  CHECK(q.at(1) == 9);
  CHECK_THROWS_AS(buffer_quota({{0, 1}, {1, 1}, {2, 1}}, 2), ConfigError);

  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<int, int> sizes;
    const int classes = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int c = 0; c < classes; ++c) sizes[c] = std::uniform_int_distribution<int>(1, 300)(rng);
    const int cap = std::uniform_int_distribution<int>(classes, 400)(rng);
    const auto quota = buffer_quota(sizes, cap);
    int total = 0;
    for (const auto& [c, e] : quota) {
      CHECK(e >= 1);
      total += e;
    }
    CHECK(total == cap);
  }
}

TEST_CASE("coverage-based selection") {
  SUBCASE("five points on a line") {
    const Matrix p = column({0.0, 0.1, 0.5, 0.9, 1.0});
    const auto ids = iota_ids(5);
    const double r = 0.15 / class_pair_mean_distance(p);
    const auto picked = select_buffer_cd(p, ids, 2, CoverageSpec{r});
    REQUIRE(picked.size() == 2);
    CHECK((picked[0] == 0 || picked[0] == 1));
    CHECK((picked[1] == 3 || picked[1] == 4));
    const auto covers = cover_sets(p, r);
    CHECK(testing::union_size(covers, rows_of(picked, ids)) == 4);
    CHECK(testing::brute_force_max_coverage(covers, 2) == 4);
  }
  SUBCASE("full quota with a tiny radius returns the whole class") {
    const Matrix p = Matrix::Random(7, 2);
    const auto ids = iota_ids(7, 100);
    auto picked = select_buffer_cd(p, ids, 7, CoverageSpec{1e-9});
    std::sort(picked.begin(), picked.end());
    CHECK(picked == ids);
  }
  SUBCASE("singleton class") {
    const Matrix p = column({2.0});
    const std::vector<GlobalId> ids = {9};
    CHECK(select_buffer_cd(p, ids, 1, CoverageSpec{0.3}) == ids);
  }
  SUBCASE("greedy coverage against the exhaustive optimum") {
    Rng rng(2024);
    int below_bound = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = std::uniform_int_distribution<int>(3, 12)(rng);
      const int quota = std::uniform_int_distribution<int>(1, std::min(4, n))(rng);
      Matrix p(n, 2);
      std::normal_distribution<double> g(0.0, 1.0);
      for (int i = 0; i < n; ++i) p.row(i) << g(rng), g(rng);
      const double r = std::uniform_real_distribution<double>(0.2, 0.8)(rng);
      const auto ids = iota_ids(n);
      const auto covers = cover_sets(p, r);
      const int got = testing::union_size(covers, rows_of(select_buffer_cd(p, ids, quota, CoverageSpec{r}), ids));
      const int best = testing::brute_force_max_coverage(covers, quota);
      if (got < (1.0 - 1.0 / std::exp(1.0)) * best) ++below_bound;
    }
    CHECK(below_bound == 0);
  }
  SUBCASE("selection is invariant to uniform scaling") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix p = Matrix::Random(10, 3);
      const auto ids = iota_ids(10);
      CHECK(select_buffer_cd(p, ids, 4, CoverageSpec{0.3}) ==
            select_buffer_cd(3.7 * p, ids, 4, CoverageSpec{0.3}));
    }
  }
  SUBCASE("larger quotas extend smaller ones and sizes are exact") {
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix p = Matrix::Random(12, 2);
      const auto ids = iota_ids(12, 50);
      std::vector<GlobalId> prev;
      for (int q = 0; q <= 12; ++q) {
        const auto cur = select_buffer_cd(p, ids, q, CoverageSpec{0.3});
        REQUIRE(static_cast<int>(cur.size()) == q);
        CHECK(std::set<GlobalId>(cur.begin(), cur.end()).size() == cur.size());
        CHECK(std::equal(prev.begin(), prev.end(), cur.begin()));
        for (GlobalId id : cur) CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
        prev = cur;
      }
    }
  }
  SUBCASE("quota above class size is rejected") {
    CHECK_THROWS(select_buffer_cd(column({0.0, 1.0}), iota_ids(2), 3, CoverageSpec{0.3}));
  }
}

TEST_CASE("mean-feature selection") {
  CHECK(select_buffer_mf(column({0.0, 1.0, 2.0, 9.0}), iota_ids(4), 2) == std::vector<GlobalId>{2, 1});
  CHECK(select_buffer_mf(column({-1.0, 1.0}), std::vector<GlobalId>{8, 3}, 1) == std::vector<GlobalId>{3});
  auto all = select_buffer_mf(column({4.0, 1.0, 3.0}), iota_ids(3), 3);
  std::sort(all.begin(), all.end());
  CHECK(all == iota_ids(3));
}

TEST_CASE("coverage-maximisation baseline") {
  const Matrix own = column({0.0, 0.1, 0.2, 0.3});
  const auto ids = iota_ids(4);
  SUBCASE("far-away classes fall back to smallest ids") {
    CHECK(select_buffer_cm(own, ids, column({100.0, 101.0}), 2, CoverageSpec{0.3}) ==
          std::vector<GlobalId>{0, 1});
  }
  SUBCASE("node next to another class is chosen last") {
    // Radius = 0.3 * (1/6 * 1.0) = 0.05; only node 0 sits within it of an other-class node.
    const Matrix others = column({-0.01, -0.02});
    const auto picked = select_buffer_cm(own, ids, others, 4, CoverageSpec{0.3});
    CHECK(picked.back() == 0);
    CHECK(select_buffer_cm(own, ids, others, 3, CoverageSpec{0.3}) == std::vector<GlobalId>{1, 2, 3});
  }
}

TEST_CASE("random selection is reproducible") {
  const auto ids = iota_ids(30, 7);
  Rng a = make_rng(1, "sampler"), b = make_rng(1, "sampler"), c = make_rng(2, "sampler");
  const auto x = select_buffer_random(ids, 10, a);
  CHECK(x == select_buffer_random(ids, 10, b));
  CHECK(x != select_buffer_random(ids, 10, c));
  CHECK(std::set<GlobalId>(x.begin(), x.end()).size() == 10);
}

TEST_CASE("clustering selection on two blobs") {
  Rng rng(8);
  std::normal_distribution<double> g(0.0, 0.1);
  Matrix p(20, 2);
  for (int i = 0; i < 20; ++i) {
    const double cx = i < 10 ? 0.0 : 5.0;
    p.row(i) << cx + g(rng), g(rng);
  }
  const auto ids = iota_ids(20);
  // Oracle: the point nearest each blob mean.
  auto nearest = [&](int first) {
    const Eigen::RowVectorXd mean = p.middleRows(first, 10).colwise().mean();
    int best = first;
    for (int i = first; i < first + 10; ++i) {
      if ((p.row(i) - mean).norm() < (p.row(best) - mean).norm()) best = i;
    }
    return static_cast<GlobalId>(best);
  };
  Rng km = make_rng(3, "kmeans");
  auto picked = select_buffer_clustering(p, ids, 2, km);
  std::sort(picked.begin(), picked.end());
  CHECK(picked == std::vector<GlobalId>{nearest(0), nearest(10)});
}

TEST_CASE("replay buffer bookkeeping") {
  ReplayBuffer b(5);
  b.set_bucket(0, {1, 2});
  b.set_bucket(1, {3, 4, 5});
  CHECK(b.size() == 5);
  CHECK(b.class_of(4) == 1);
  CHECK_FALSE(b.contains(9));
  CHECK_THROWS(b.set_bucket(2, {9}));
  CHECK_THROWS(b.set_bucket(0, {3}));
  b.truncate(1, 1);
  CHECK(b.bucket(1) == std::vector<GlobalId>{3});
  CHECK_THROWS(b.set_bucket(2, {9, 10, 11}));
  b.set_bucket(2, {9, 10});
  CHECK(b.all_nodes() == std::vector<GlobalId>{1, 2, 3, 9, 10});
  CHECK(b.classes() == std::vector<int>{0, 1, 2});
}

TEST_CASE("buffer homophily table") {
  // Node 0 (class 0): neighbours 1 (0), 2 (0) -> 1.0; node 3 (class 0): neighbours 1 (0), 4 (1) -> 0.5.
  Matrix x = Matrix::Zero(5, 1);
  Graph g(5, {{0, 1}, {0, 2}, {3, 1}, {3, 4}}, testing::dense_to_sparse(x), {0, 0, 0, 0, 1});
  ReplayBuffer b(4);
  b.set_bucket(0, {0, 3});
  b.set_bucket(1, {4});
  b.set_bucket(2, {});
  const auto table = buffer_homophily_table(g, b);
  REQUIRE(table.at(0).has_value());
  CHECK(table.at(0)->mean == doctest::Approx(0.75));
  CHECK(table.at(0)->stddev == doctest::Approx(0.25));
  CHECK(table.at(1)->stddev == 0.0);
  CHECK_FALSE(table.at(2).has_value());
}
