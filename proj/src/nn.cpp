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

#include "gcl/nn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace gcl {

void GatConfig::validate() const {
  if (in_dim < 1 || out_dim < 1 || hidden_dim < 1) throw ConfigError("GAT dimensions must be positive");
  if (num_layers < 1) throw ConfigError("GAT needs at least one layer");
  if (!(negative_slope >= 0.0 && negative_slope < 1.0)) throw ConfigError("negative slope outside [0,1)");
}

GatEncoder::GatEncoder(GatConfig config, std::string prefix)
    : config_(config), prefix_(std::move(prefix)) {
  config_.validate();
}

std::string GatEncoder::weight_name(int layer) const {
  return prefix_ + ".layer" + std::to_string(layer) + ".weight";
}
std::string GatEncoder::att_src_name(int layer) const {
  return prefix_ + ".layer" + std::to_string(layer) + ".att_src";
}
std::string GatEncoder::att_dst_name(int layer) const {
  return prefix_ + ".layer" + std::to_string(layer) + ".att_dst";
}

Matrix glorot_uniform(int rows, int cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  return m;
}

namespace {

int layer_in(const GatConfig& c, int l) { return l == 0 ? c.in_dim : c.hidden_dim; }
int layer_out(const GatConfig& c, int l) { return l == c.num_layers - 1 ? c.out_dim : c.hidden_dim; }

void check_finite(const Matrix& m, const std::string& what) {
  if (!m.allFinite()) throw NumericalError("non-finite activations in " + what);
}

}  // namespace

void GatEncoder::init(ParamStore& store, Rng& rng) const {
  for (int l = 0; l < config_.num_layers; ++l) {
    const int in = layer_in(config_, l);
    const int out = layer_out(config_, l);
    store.add(weight_name(l), glorot_uniform(in, out, rng));
    store.add(att_src_name(l), glorot_uniform(out, 1, rng));
    store.add(att_dst_name(l), glorot_uniform(out, 1, rng));
  }
}

void GatEncoder::reinit(ParamStore& store, Rng& rng) const {
  for (int l = 0; l < config_.num_layers; ++l) {
    const int in = layer_in(config_, l);
    const int out = layer_out(config_, l);
    store.get(weight_name(l)).value = glorot_uniform(in, out, rng);
    store.get(att_src_name(l)).value = glorot_uniform(out, 1, rng);
    store.get(att_dst_name(l)).value = glorot_uniform(out, 1, rng);
  }
}

Var GatEncoder::forward(Tape& tape, ParamStore& store, const SparseMatrix& x,
                        const MessageGraph& graph) const {
  if (x.cols() != config_.in_dim) {
    throw std::invalid_argument("feature dim " + std::to_string(x.cols()) + " != encoder input " +
                                std::to_string(config_.in_dim));
  }
  if (x.rows() != graph.num_nodes) throw std::invalid_argument("feature rows != graph nodes");
  Var h;
  for (int l = 0; l < config_.num_layers; ++l) {
    Var w = tape.parameter(store.get(weight_name(l)));
    Var proj = l == 0 ? ops::sparse_matmul(tape, x, w) : ops::matmul(tape, h, w);
    h = ops::gat_attention(tape, proj, tape.parameter(store.get(att_src_name(l))),
                           tape.parameter(store.get(att_dst_name(l))), graph, config_.negative_slope);
    if (l + 1 < config_.num_layers) h = ops::elu(tape, h);
    check_finite(tape.value(h), prefix_ + " layer " + std::to_string(l));
  }
  return h;
}

Matrix GatEncoder::infer(const ParamStore& store, const SparseMatrix& x,
                         const MessageGraph& graph) const {
  return infer_layers(store, x, graph).back();
}

std::vector<Matrix> GatEncoder::infer_layers(const ParamStore& store, const SparseMatrix& x,
                                             const MessageGraph& graph) const {
  if (x.cols() != config_.in_dim) throw std::invalid_argument("feature dim mismatch");
  std::vector<Matrix> out;
  for (int l = 0; l < config_.num_layers; ++l) {
    const Matrix& w = store.get(weight_name(l)).value;
    const Matrix proj = l == 0 ? Matrix(x * w) : Matrix(out.back() * w);
    const auto alpha = ops::attention_coefficients(proj, store.get(att_src_name(l)).value,
                                                   store.get(att_dst_name(l)).value, graph,
                                                   config_.negative_slope);
    Matrix h = Matrix::Zero(proj.rows(), proj.cols());
    for (int i = 0; i < graph.num_nodes; ++i) {
      for (auto k = graph.offsets[static_cast<std::size_t>(i)];
           k < graph.offsets[static_cast<std::size_t>(i) + 1]; ++k) {
        h.row(i).noalias() += alpha[k] * proj.row(graph.sources[k]);
      }
    }
    if (l + 1 < config_.num_layers) {
      h = h.unaryExpr([](double v) { return v > 0.0 ? v : std::expm1(v); });
    }
    check_finite(h, prefix_ + " layer " + std::to_string(l));
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<std::vector<double>> GatEncoder::attention(const ParamStore& store,
                                                       const SparseMatrix& x,
                                                       const MessageGraph& graph) const {
  std::vector<std::vector<double>> out;
  Matrix h;
  for (int l = 0; l < config_.num_layers; ++l) {
    const Matrix& w = store.get(weight_name(l)).value;
    const Matrix proj = l == 0 ? Matrix(x * w) : Matrix(h * w);
    out.push_back(ops::attention_coefficients(proj, store.get(att_src_name(l)).value,
                                              store.get(att_dst_name(l)).value, graph,
                                              config_.negative_slope));
    const auto& alpha = out.back();
    h = Matrix::Zero(proj.rows(), proj.cols());
    for (int i = 0; i < graph.num_nodes; ++i) {
      for (auto k = graph.offsets[static_cast<std::size_t>(i)];
           k < graph.offsets[static_cast<std::size_t>(i) + 1]; ++k) {
        h.row(i).noalias() += alpha[k] * proj.row(graph.sources[k]);
      }
    }
    h = h.unaryExpr([](double v) { return v > 0.0 ? v : std::expm1(v); });
  }
  return out;
}

LinearHead::LinearHead(int in_dim, int out_dim, std::string prefix)
    : in_dim_(in_dim), out_dim_(out_dim), prefix_(std::move(prefix)) {
  if (in_dim < 1 || out_dim < 1) throw ConfigError("linear head dimensions must be positive");
}

void LinearHead::init(ParamStore& store, Rng& rng) const {
  store.add(prefix_ + ".weight", glorot_uniform(in_dim_, out_dim_, rng));
  store.add(prefix_ + ".bias", Matrix::Zero(1, out_dim_));
}

void LinearHead::reinit(ParamStore& store, Rng& rng) const {
  store.get(prefix_ + ".weight").value = glorot_uniform(in_dim_, out_dim_, rng);
  store.get(prefix_ + ".bias").value.setZero();
}

Var LinearHead::forward(Tape& tape, ParamStore& store, Var input) const {
  Var w = tape.parameter(store.get(prefix_ + ".weight"));
  Var b = tape.parameter(store.get(prefix_ + ".bias"));
  return ops::add_row(tape, ops::matmul(tape, input, w), b);
}

double cosine_link_score(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("embedding width mismatch");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.5;
  return (dot / (std::sqrt(na) * std::sqrt(nb)) + 1.0) / 2.0;
}

double cosine_link_score(const Matrix& z, int i, int j) {
  return cosine_link_score(std::span<const double>(z.row(i).data(), static_cast<std::size_t>(z.cols())),
                           std::span<const double>(z.row(j).data(), static_cast<std::size_t>(z.cols())));
}

double link_loss(std::span<const double> scores, std::span<const int> targets, double eps) {
  if (scores.empty()) throw std::invalid_argument("link loss over an empty sample");
  if (scores.size() != targets.size()) throw std::invalid_argument("scores/targets size mismatch");
  double loss = 0.0;
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const double s = std::clamp(scores[k], eps, 1.0 - eps);
    loss -= targets[k] == 1 ? std::log(s) : std::log(1.0 - s);
  }
  return loss;
}

double node_loss(std::optional<double> current, std::optional<double> buffer, double beta) {
  if (!current && !buffer) throw std::invalid_argument("node loss needs at least one term");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("beta outside [0,1]");
  double loss = 0.0;
  if (current) loss += beta * *current;
  if (buffer) loss += (1.0 - beta) * *buffer;
  return loss;
}

double combine_lp_loss(double link, double node, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda outside [0,1]");
  return lambda * link + (1.0 - lambda) * node;
}

double cross_entropy_value(const Matrix& logits, std::span<const int> rows,
                           std::span<const int> targets, int num_active) {
  Tape tape;
  Var z = tape.constant(logits);
  return tape.scalar(ops::cross_entropy(tape, z, rows, targets, num_active));
}

void adam_step(ParamStore& store, const AdamConfig& config) {
  for (const auto& p : store.params()) {
    if (!p.grad.allFinite()) throw NumericalError("non-finite gradient in " + p.name);
  }
  store.steps += 1;
  const double t = static_cast<double>(store.steps);
  const double bias1 = 1.0 - std::pow(config.beta1, t);
  const double bias2 = 1.0 - std::pow(config.beta2, t);
  for (auto& p : store.params()) {
    p.adam_m = config.beta1 * p.adam_m + (1.0 - config.beta1) * p.grad;
    p.adam_v = config.beta2 * p.adam_v + (1.0 - config.beta2) * p.grad.cwiseProduct(p.grad);
    const Matrix m_hat = p.adam_m / bias1;
    const Matrix v_hat = p.adam_v / bias2;
    p.value.array() -= config.learning_rate * m_hat.array() / (v_hat.array().sqrt() + config.eps);
    p.grad.setZero();
  }
  if (!store.all_finite()) throw NumericalError("parameters became non-finite after an update");
}

void save_checkpoint(const ParamStore& store, const std::filesystem::path& path) {
  std::ofstream bin(path.string() + ".bin", std::ios::binary);
  std::ofstream index(path.string() + ".index");
  if (!bin || !index) throw std::runtime_error("cannot write checkpoint " + path.string());
  std::size_t offset = 0;
  for (const auto& p : store.params()) {
    index << p.name << ' ' << p.value.rows() << ' ' << p.value.cols() << ' ' << offset << '\n';
    bin.write(reinterpret_cast<const char*>(p.value.data()),
              static_cast<std::streamsize>(p.value.size() * sizeof(double)));
    offset += static_cast<std::size_t>(p.value.size());
  }
}

ParamStore load_checkpoint(const std::filesystem::path& path) {
  std::ifstream bin(path.string() + ".bin", std::ios::binary);
  std::ifstream index(path.string() + ".index");
  if (!bin || !index) throw std::runtime_error("cannot read checkpoint " + path.string());
  ParamStore store;
  std::string line;
  while (std::getline(index, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string name;
    long rows = 0;
    long cols = 0;
    std::size_t offset = 0;
    if (!(fields >> name >> rows >> cols >> offset)) throw std::runtime_error("bad index line: " + line);
    Matrix value(rows, cols);
    bin.seekg(static_cast<std::streamoff>(offset * sizeof(double)));
    bin.read(reinterpret_cast<char*>(value.data()),
             static_cast<std::streamsize>(value.size() * sizeof(double)));
    if (!bin) throw std::runtime_error("checkpoint data truncated at " + name);
    store.add(name, std::move(value));
  }
  return store;
}

void write_embeddings_csv(const std::filesystem::path& path, const Matrix& embeddings,
                          std::span<const GlobalId> node_ids) {
  if (static_cast<Eigen::Index>(node_ids.size()) != embeddings.rows()) {
    throw std::invalid_argument("node id count != embedding rows");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  for (Eigen::Index i = 0; i < embeddings.rows(); ++i) {
    out << node_ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < embeddings.cols(); ++j) out << ',' << embeddings(i, j);
    out << '\n';
  }
}

}  // namespace gcl
