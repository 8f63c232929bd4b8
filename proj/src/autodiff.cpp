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

#include "gcl/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gcl {

// ---------------------------------------------------------------------------
// ParamStore

Parameter& ParamStore::add(const std::string& name, Matrix value) {
  if (index_.contains(name)) throw std::invalid_argument("duplicate parameter " + name);
  Parameter p;
  p.name = name;
  p.grad = Matrix::Zero(value.rows(), value.cols());
  p.adam_m = Matrix::Zero(value.rows(), value.cols());
  p.adam_v = Matrix::Zero(value.rows(), value.cols());
  p.value = std::move(value);
  index_.emplace(name, params_.size());
  params_.push_back(std::move(p));
  return params_.back();
}

Parameter& ParamStore::get(std::string_view name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("no parameter " + std::string(name));
  return params_[it->second];
}

const Parameter& ParamStore::get(std::string_view name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("no parameter " + std::string(name));
  return params_[it->second];
}

bool ParamStore::contains(std::string_view name) const { return index_.find(name) != index_.end(); }

std::size_t ParamStore::num_scalars() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p.value.size());
  return n;
}

void ParamStore::zero_grad() {
  for (auto& p : params_) p.grad.setZero();
}

bool ParamStore::all_finite() const {
  return std::all_of(params_.begin(), params_.end(),
                     [](const Parameter& p) { return p.value.allFinite(); });
}

void ParamStore::reset_optimizer() {
  for (auto& p : params_) {
    p.adam_m.setZero();
    p.adam_v.setZero();
  }
  steps = 0;
}

// ---------------------------------------------------------------------------
// Tape

Var Tape::parameter(Parameter& p) {
  Node node;
  node.requires_grad = true;
  node.param = &p;
  node.value = p.value;
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::constant(Matrix value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

double Tape::scalar(Var v) const {
  const Matrix& m = value(v);
  if (m.rows() != 1 || m.cols() != 1) throw std::invalid_argument("not a scalar node");
  return m(0, 0);
}

Var Tape::record(Matrix value, bool requires_grad, Backward backward) {
  Node node;
  node.value = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

void Tape::backward(Var loss) {
  if (scalar(loss) != scalar(loss)) throw NumericalError("loss is NaN");
  for (auto& node : nodes_) {
    if (node.requires_grad) node.grad = Matrix::Zero(node.value.rows(), node.value.cols());
  }
  if (!requires_grad(loss)) return;
  grad(loss)(0, 0) = 1.0;
  for (int i = loss.id; i >= 0; --i) {
    Node& node = nodes_[static_cast<std::size_t>(i)];
    if (!node.requires_grad) continue;
    if (node.backward) node.backward(*this, Var{i});
    if (node.param != nullptr) node.param->grad += node.grad;
  }
}

// ---------------------------------------------------------------------------
// MessageGraph

MessageGraph MessageGraph::with_self_loops(const Graph& graph) {
  MessageGraph mg;
  mg.num_nodes = graph.num_nodes();
  mg.offsets.reserve(static_cast<std::size_t>(mg.num_nodes) + 1);
  mg.sources.reserve(2 * graph.num_edges() + static_cast<std::size_t>(mg.num_nodes));
  mg.offsets.push_back(0);
  for (int i = 0; i < mg.num_nodes; ++i) {
    mg.sources.push_back(i);
    for (int j : graph.neighbors(i)) mg.sources.push_back(j);
    mg.offsets.push_back(mg.sources.size());
  }
  return mg;
}

namespace ops {
namespace {

bool any_grad(const Tape& t, std::initializer_list<Var> vars) {
  return std::any_of(vars.begin(), vars.end(), [&](Var v) { return t.requires_grad(v); });
}

double leaky(double x, double slope) { return x > 0.0 ? x : slope * x; }

// Per-message pre-activation scores and attention weights for one layer.
struct Attention {
  std::vector<double> preact;
  std::vector<double> alpha;
};

Attention compute_attention(const Matrix& proj, const Matrix& att_src, const Matrix& att_dst,
                            const MessageGraph& graph, double slope) {
  if (proj.rows() != graph.num_nodes) throw std::invalid_argument("attention: row mismatch");
  if (att_src.rows() != proj.cols() || att_dst.rows() != proj.cols() || att_src.cols() != 1 ||
      att_dst.cols() != 1) {
    throw std::invalid_argument("attention: vector shape mismatch");
  }
  const Vector s_src = proj * att_src;
  const Vector s_dst = proj * att_dst;
  Attention a;
  a.preact.resize(graph.num_messages());
  a.alpha.resize(graph.num_messages());
  for (int i = 0; i < graph.num_nodes; ++i) {
    const auto begin = graph.offsets[static_cast<std::size_t>(i)];
    const auto end = graph.offsets[static_cast<std::size_t>(i) + 1];
    double max_e = -std::numeric_limits<double>::infinity();
    for (auto k = begin; k < end; ++k) {
      const double z = s_dst(i) + s_src(graph.sources[k]);
      a.preact[k] = z;
      max_e = std::max(max_e, leaky(z, slope));
    }
    double total = 0.0;
    for (auto k = begin; k < end; ++k) {
      a.alpha[k] = std::exp(leaky(a.preact[k], slope) - max_e);
      total += a.alpha[k];
    }
    for (auto k = begin; k < end; ++k) a.alpha[k] /= total;
  }
  return a;
}

}  // namespace

Var matmul(Tape& tape, Var a, Var b) {
  const Matrix& av = tape.value(a);
  const Matrix& bv = tape.value(b);
  if (av.cols() != bv.rows()) throw std::invalid_argument("matmul shape mismatch");
  return tape.record(av * bv, any_grad(tape, {a, b}), [a, b](Tape& t, Var self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a)) t.grad(a).noalias() += g * t.value(b).transpose();
    if (t.requires_grad(b)) t.grad(b).noalias() += t.value(a).transpose() * g;
  });
}

Var sparse_matmul(Tape& tape, const SparseMatrix& x, Var w) {
  const Matrix& wv = tape.value(w);
  if (x.cols() != wv.rows()) throw std::invalid_argument("sparse_matmul shape mismatch");
  Matrix out = x * wv;
  return tape.record(std::move(out), tape.requires_grad(w), [&x, w](Tape& t, Var self) {
    t.grad(w).noalias() += x.transpose() * t.grad(self);
  });
}

Var add_row(Tape& tape, Var a, Var bias) {
  const Matrix& av = tape.value(a);
  const Matrix& bv = tape.value(bias);
  if (bv.rows() != 1 || bv.cols() != av.cols()) throw std::invalid_argument("add_row shape mismatch");
  Matrix out = av.rowwise() + bv.row(0);
  return tape.record(std::move(out), any_grad(tape, {a, bias}), [a, bias](Tape& t, Var self) {
    const Matrix& g = t.grad(self);
    if (t.requires_grad(a)) t.grad(a) += g;
    if (t.requires_grad(bias)) t.grad(bias) += g.colwise().sum();
  });
}

Var elu(Tape& tape, Var a) {
  const Matrix& av = tape.value(a);
  Matrix out = av.unaryExpr([](double x) { return x > 0.0 ? x : std::expm1(x); });
  return tape.record(std::move(out), tape.requires_grad(a), [a](Tape& t, Var self) {
    const Matrix& x = t.value(a);
    const Matrix slope = x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : std::exp(v); });
    t.grad(a) += t.grad(self).cwiseProduct(slope);
  });
}

Var weighted_sum(Tape& tape, std::initializer_list<std::pair<Var, double>> terms) {
  if (terms.size() == 0) throw std::invalid_argument("weighted_sum of nothing");
  std::vector<std::pair<Var, double>> items(terms);
  const Matrix& first = tape.value(items.front().first);
  Matrix out = Matrix::Zero(first.rows(), first.cols());
  bool needs_grad = false;
  for (const auto& [v, w] : items) {
    const Matrix& val = tape.value(v);
    if (val.rows() != out.rows() || val.cols() != out.cols()) {
      throw std::invalid_argument("weighted_sum shape mismatch");
    }
    out += w * val;
    needs_grad = needs_grad || tape.requires_grad(v);
  }
  return tape.record(std::move(out), needs_grad, [items](Tape& t, Var self) {
    for (const auto& [v, w] : items) {
      if (t.requires_grad(v)) t.grad(v) += w * t.grad(self);
    }
  });
}

std::vector<double> attention_coefficients(const Matrix& proj, const Matrix& att_src,
                                           const Matrix& att_dst, const MessageGraph& graph,
                                           double negative_slope) {
  return compute_attention(proj, att_src, att_dst, graph, negative_slope).alpha;
}

Var gat_attention(Tape& tape, Var proj, Var att_src, Var att_dst, const MessageGraph& graph,
                  double negative_slope) {
  const Matrix& p = tape.value(proj);
  Attention att = compute_attention(p, tape.value(att_src), tape.value(att_dst), graph, negative_slope);
  Matrix out = Matrix::Zero(p.rows(), p.cols());
  for (int i = 0; i < graph.num_nodes; ++i) {
    for (auto k = graph.offsets[static_cast<std::size_t>(i)]; k < graph.offsets[static_cast<std::size_t>(i) + 1]; ++k) {
      out.row(i).noalias() += att.alpha[k] * p.row(graph.sources[k]);
    }
  }
  return tape.record(
      std::move(out), any_grad(tape, {proj, att_src, att_dst}),
      [proj, att_src, att_dst, &graph, negative_slope, att = std::move(att)](Tape& t, Var self) {
        const Matrix& g = t.grad(self);
        const Matrix& p = t.value(proj);
        const Matrix& a_src = t.value(att_src);
        const Matrix& a_dst = t.value(att_dst);
        Matrix d_proj = Matrix::Zero(p.rows(), p.cols());
        Vector d_src = Vector::Zero(p.rows());
        Vector d_dst = Vector::Zero(p.rows());
        std::vector<double> d_alpha;
        for (int i = 0; i < graph.num_nodes; ++i) {
          const auto begin = graph.offsets[static_cast<std::size_t>(i)];
          const auto end = graph.offsets[static_cast<std::size_t>(i) + 1];
          d_alpha.assign(end - begin, 0.0);
          double weighted = 0.0;
          for (auto k = begin; k < end; ++k) {
            const int j = graph.sources[k];
            const double da = g.row(i).dot(p.row(j));
            d_alpha[k - begin] = da;
            weighted += att.alpha[k] * da;
            d_proj.row(j).noalias() += att.alpha[k] * g.row(i);
          }
          for (auto k = begin; k < end; ++k) {
            const double de = att.alpha[k] * (d_alpha[k - begin] - weighted);
            const double dz = de * (att.preact[k] > 0.0 ? 1.0 : negative_slope);
            d_dst(i) += dz;
            d_src(graph.sources[k]) += dz;
          }
        }
        if (t.requires_grad(proj)) {
          d_proj.noalias() += d_dst * a_dst.transpose();
          d_proj.noalias() += d_src * a_src.transpose();
          t.grad(proj) += d_proj;
        }
        if (t.requires_grad(att_src)) t.grad(att_src).noalias() += p.transpose() * d_src;
        if (t.requires_grad(att_dst)) t.grad(att_dst).noalias() += p.transpose() * d_dst;
      });
}

Var cross_entropy(Tape& tape, Var logits, std::span<const int> rows, std::span<const int> targets,
                  int num_active) {
  if (rows.empty()) throw std::invalid_argument("cross_entropy over an empty node set");
  if (rows.size() != targets.size()) throw std::invalid_argument("rows/targets size mismatch");
  const Matrix& z = tape.value(logits);
  if (num_active < 1 || num_active > z.cols()) throw std::invalid_argument("bad active class count");
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  Matrix probs(static_cast<Eigen::Index>(rows.size()), num_active);
  double loss = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int row = rows[r];
    const int y = targets[r];
    if (row < 0 || row >= z.rows()) throw std::out_of_range("cross_entropy row out of range");
    if (y < 0 || y >= num_active) throw std::out_of_range("cross_entropy target outside active classes");
    const auto logit = z.row(row).head(num_active);
    const double m = logit.maxCoeff();
    const auto shifted = (logit.array() - m).exp();
    const double total = shifted.sum();
    probs.row(static_cast<Eigen::Index>(r)) = shifted / total;
    loss += (m + std::log(total)) - logit(y);
  }
  Matrix out(1, 1);
  out(0, 0) = loss * inv_n;
  std::vector<int> row_copy(rows.begin(), rows.end());
  std::vector<int> target_copy(targets.begin(), targets.end());
  return tape.record(std::move(out), tape.requires_grad(logits),
                     [logits, probs = std::move(probs), row_copy = std::move(row_copy),
                      target_copy = std::move(target_copy), num_active, inv_n](Tape& t, Var self) {
                       const double g = t.grad(self)(0, 0) * inv_n;
                       Matrix& dz = t.grad(logits);
                       for (std::size_t r = 0; r < row_copy.size(); ++r) {
                         auto row = dz.row(row_copy[r]).head(num_active);
                         row += g * probs.row(static_cast<Eigen::Index>(r));
                         row(target_copy[r]) -= g;
                       }
                     });
}

Var link_bce(Tape& tape, Var z, std::span<const std::pair<int, int>> pairs,
             std::span<const int> targets, double eps) {
  if (pairs.empty()) throw std::invalid_argument("link loss over an empty sample");
  if (pairs.size() != targets.size()) throw std::invalid_argument("pairs/targets size mismatch");
  const Matrix& zv = tape.value(z);
  const Vector norms = zv.rowwise().norm();
  // Per pair: cosine and dL/dcos (0 when the score is clamped or undefined).
  std::vector<double> cosines(pairs.size());
  std::vector<double> d_cos(pairs.size());
  double loss = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [i, j] = pairs[k];
    if (i < 0 || j < 0 || i >= zv.rows() || j >= zv.rows()) throw std::out_of_range("link pair out of range");
    const int y = targets[k];
    if (y != 0 && y != 1) throw std::invalid_argument("link targets must be 0 or 1");
    double cos = 0.0;
    bool defined = norms(i) > 0.0 && norms(j) > 0.0;
    if (defined) cos = zv.row(i).dot(zv.row(j)) / (norms(i) * norms(j));
    const double raw = (cos + 1.0) / 2.0;
    const double s = std::clamp(raw, eps, 1.0 - eps);
    loss -= y == 1 ? std::log(s) : std::log(1.0 - s);
    cosines[k] = cos;
    const bool clamped = raw < eps || raw > 1.0 - eps;
    d_cos[k] = (defined && !clamped) ? 0.5 * (y == 1 ? -1.0 / s : 1.0 / (1.0 - s)) : 0.0;
  }
  Matrix out(1, 1);
  out(0, 0) = loss;
  std::vector<std::pair<int, int>> pair_copy(pairs.begin(), pairs.end());
  return tape.record(std::move(out), tape.requires_grad(z),
                     [z, pair_copy = std::move(pair_copy), cosines = std::move(cosines),
                      d_cos = std::move(d_cos), norms](Tape& t, Var self) {
                       const double g = t.grad(self)(0, 0);
                       const Matrix& zv = t.value(z);
                       Matrix& dz = t.grad(z);
                       for (std::size_t k = 0; k < pair_copy.size(); ++k) {
                         if (d_cos[k] == 0.0) continue;
                         const auto [i, j] = pair_copy[k];
                         const double c = g * d_cos[k];
                         const double ni = norms(i);
                         const double nj = norms(j);
                         dz.row(i) += c * (zv.row(j) / (ni * nj) - cosines[k] * zv.row(i) / (ni * ni));
                         dz.row(j) += c * (zv.row(i) / (ni * nj) - cosines[k] * zv.row(j) / (nj * nj));
                       }
                     });
}

}  // namespace ops
}  // namespace gcl
