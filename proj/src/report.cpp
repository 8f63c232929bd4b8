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

#include "gcl/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace gcl {

namespace {

using nlohmann::json;

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json mean_std_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.stddev}}; }

json optional_mean_std(const std::optional<MeanStd>& m) {
  return m ? mean_std_json(*m) : json(nullptr);
}

template <typename V>
json int_keyed(const std::map<int, V>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

DatasetInfo DatasetInfo::of(const ResolvedDataset& d) {
  DatasetInfo info;
  info.name = d.name;
  info.source = d.source;
  info.num_nodes = d.graph.num_nodes();
  info.num_edges = d.graph.num_edges();
  info.num_features = d.graph.num_features();
  info.num_classes = static_cast<int>(d.graph.distinct_labels().size());
  return info;
}

json seed_json(const SeedResult& r) {
  json tasks = json::array();
  for (const auto& t : r.tasks) {
    tasks.push_back({
        {"task", t.task},
        {"seconds", t.seconds},
        {"final_cls_loss", t.cls_losses.empty() ? json(nullptr) : json(t.cls_losses.back())},
        {"final_lp_loss", t.lp_losses.empty() ? json(nullptr) : json(t.lp_losses.back())},
        {"edges_added", t.edges_added},
        {"edges_deleted", t.edges_deleted},
        {"refined_nodes", t.refined_nodes},
        {"buffer_homophily_before", optional_json(t.homophily_before)},
        {"buffer_homophily_after", optional_json(t.homophily_after)},
        {"quota", int_keyed(t.quota)},
    });
  }
  json homophily = json::object();
  for (const auto& [cls, stat] : r.buffer_homophily) {
    homophily[std::to_string(cls)] =
        stat ? json{{"mean", stat->mean}, {"std", stat->stddev}, {"count", stat->count}} : json(nullptr);
  }
  return {
      {"seed", r.seed},
      {"accuracy", r.accuracy.rows()},
      {"pm", r.pm},
      {"fm", optional_json(r.fm)},
      {"class_accuracy", int_keyed(r.class_accuracy)},
      {"buffer", int_keyed(r.buffer)},
      {"buffer_homophily", homophily},
      {"diversity",
       {{"buff_div", int_keyed(r.diversity.buff_div)},
        {"corr_div", int_keyed(r.diversity.corr_div)},
        {"dist_from_center", int_keyed(r.diversity.dist_from_center)},
        {"mean_buff_div", optional_json(r.diversity.mean_buff_div)},
        {"mean_corr_div", optional_json(r.diversity.mean_corr_div)},
        {"mean_dist_from_center", optional_json(r.diversity.mean_dist_from_center)}}},
      {"homophily_uplift", optional_json(r.homophily_uplift)},
      {"edges_added", r.edges_added},
      {"edges_deleted", r.edges_deleted},
      {"seconds", r.seconds},
      {"tasks", tasks},
  };
}

json experiment_json(const ExperimentResult& r) {
  json seeds = json::array();
  for (const auto& s : r.seeds) seeds.push_back(seed_json(s));
  return {
      {"method",
       {{"name", r.method.name},
        {"sampler", std::string(to_string(r.method.sampler))},
        {"structure", std::string(to_string(r.method.structure))}}},
      {"aggregate",
       {{"pm", mean_std_json(r.pm)},
        {"fm", optional_mean_std(r.fm)},
        {"buff_div", optional_mean_std(r.buff_div)},
        {"corr_div", optional_mean_std(r.corr_div)},
        {"dist_from_center", optional_mean_std(r.dist_from_center)},
        {"homophily_uplift", optional_mean_std(r.homophily_uplift)}}},
      {"seeds", seeds},
  };
}

namespace {

json dataset_json(const DatasetInfo& d) {
  return {{"name", d.name},           {"source", d.source},
          {"num_nodes", d.num_nodes}, {"num_edges", d.num_edges},
          {"num_features", d.num_features}, {"num_classes", d.num_classes}};
}

json header(const ExperimentConfig& config, const DatasetInfo& dataset) {
  return {
      {"schema_version", kReportSchemaVersion},
      {"created_at", utc_now()},
      {"config", config.values()},
      {"dataset", dataset_json(dataset)},
      {"evaluation",
       {{"label_space", "class-incremental, all seen classes"},
        {"accuracy_graph", "refined snapshot of the row task"},
        {"units", "percent"}}},
  };
}

}  // namespace

json run_report(const ExperimentConfig& config, const DatasetInfo& dataset,
                const ExperimentResult& result) {
  json out = header(config, dataset);
  out["result"] = experiment_json(result);
  return out;
}

std::vector<AblationRow> ablation_grid(const ExperimentConfig& config) {
  struct Spec {
    const char* label;
    const char* description;
    const char* method;
    std::optional<double> lambda;
  };
  const Spec specs[] = {
      {"(1)", "mean-feature sampler", "mf", std::nullopt},
      {"(2)", "coverage sampler", "cd_only", std::nullopt},
      {"(3)", "structure learning on mean-feature buffer", "sl_only", std::nullopt},
      {"(4)-1", "full method, link loss only", "dslr", 1.0},
      {"(4)-2", "full method, node loss only", "dslr", 0.0},
      {"(4)-3", "full method", "dslr", std::nullopt},
      {"(5)", "same-class edges instead of learned structure", "homophily_boost", std::nullopt},
  };
  std::vector<AblationRow> rows;
  for (const auto& s : specs) {
    AblationRow row;
    row.label = s.label;
    row.description = s.description;
    ContinualConfig train = config.train;
    if (s.lambda) train.lambda = *s.lambda;
    MethodSpec method = MethodSpec::named(s.method);
    row.result.method = method;
    row.result.config = train;
    rows.push_back(std::move(row));
  }
  return rows;
}

json ablation_report(const ExperimentConfig& config, const DatasetInfo& dataset,
                     const std::vector<AblationRow>& rows) {
  json out = header(config, dataset);
  json list = json::array();
  for (const auto& row : rows) {
    json entry = experiment_json(row.result);
    entry["label"] = row.label;
    entry["description"] = row.description;
    entry["lambda"] = row.result.config.lambda;
    list.push_back(std::move(entry));
  }
  out["rows"] = list;
  return out;
}

std::string summary_table(const std::vector<std::pair<std::string, const ExperimentResult*>>& rows) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-28s %16s %16s\n", "method", "PM", "FM");
  out << line;
  for (const auto& [label, r] : rows) {
    char pm[40];
    char fm[40] = "n/a";
    std::snprintf(pm, sizeof pm, "%.2f +- %.2f", r->pm.mean, r->pm.stddev);
    if (r->fm) std::snprintf(fm, sizeof fm, "%.2f +- %.2f", r->fm->mean, r->fm->stddev);
    std::snprintf(line, sizeof line, "%-28s %16s %16s\n", label.c_str(), pm, fm);
    out << line;
  }
  return out.str();
}

}  // namespace gcl
