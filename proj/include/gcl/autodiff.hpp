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

// Minimal reverse-mode differentiation over dense matrices.
//
// A Tape records matrix-valued nodes in creation order; backward() walks them
// in reverse, each node pushing its output gradient to its inputs. Leaves
// created with Tape::parameter() accumulate their gradient into the bound
// Parameter::grad. Operations are free functions taking the tape explicitly.

#pragma once

#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gcl/common.hpp"
#include "gcl/graph.hpp"

namespace gcl {

/// A trainable tensor with its gradient slot and Adam moments.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix adam_m;
  Matrix adam_v;
};

/// Named trainable tensors of one model. Addresses are stable only while no
/// parameter is added, so build the model fully before recording a tape.
class ParamStore {
 public:
  Parameter& add(const std::string& name, Matrix value);
  Parameter& get(std::string_view name);
  const Parameter& get(std::string_view name) const;
  bool contains(std::string_view name) const;

  std::span<Parameter> params() { return params_; }
  std::span<const Parameter> params() const { return params_; }
  std::size_t num_scalars() const;

  void zero_grad();
  bool all_finite() const;

  /// Number of optimizer steps taken since the moments were last reset.
  long steps = 0;
  void reset_optimizer();

 private:
  std::vector<Parameter> params_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

class Tape {
 public:
  Var parameter(Parameter& p);
  Var constant(Matrix value);

  const Matrix& value(Var v) const { return nodes_.at(static_cast<std::size_t>(v.id)).value; }
  double scalar(Var v) const;
  bool requires_grad(Var v) const { return nodes_.at(static_cast<std::size_t>(v.id)).requires_grad; }
  /// Gradient buffer of `v`; only valid during backward().
  Matrix& grad(Var v) { return nodes_.at(static_cast<std::size_t>(v.id)).grad; }

  using Backward = std::function<void(Tape&, Var self)>;

  /// Records a derived node. `backward` runs once during backward() after the
  /// node's own gradient is complete and receives the node's own handle.
  Var record(Matrix value, bool requires_grad, Backward backward);

  /// Seeds d(loss)/d(loss) = 1 and propagates. `loss` must be 1x1.
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    Parameter* param = nullptr;
    Backward backward;
  };
  std::vector<Node> nodes_;
};

/// Incoming message structure for attention: for each target node i the
/// sources N(i) together with i itself (self-loop), in CSR form.
struct MessageGraph {
  int num_nodes = 0;
  std::vector<std::size_t> offsets;  // size num_nodes + 1
  std::vector<int> sources;

  static MessageGraph with_self_loops(const Graph& graph);
  std::size_t num_messages() const { return sources.size(); }
};

namespace ops {

Var matmul(Tape& tape, Var a, Var b);
/// x * w for a constant sparse x. `x` must outlive the tape.
Var sparse_matmul(Tape& tape, const SparseMatrix& x, Var w);
/// Adds the 1 x c row `bias` to every row of `a`.
Var add_row(Tape& tape, Var a, Var bias);
Var elu(Tape& tape, Var a);
/// Sum of weight * term; all terms share one shape.
Var weighted_sum(Tape& tape, std::initializer_list<std::pair<Var, double>> terms);

/// Single-head graph attention aggregation over `graph` (self-loops included):
///   e_ij = LeakyReLU(att_dst . p_i + att_src . p_j)
///   alpha_ij = softmax_j(e_ij),  out_i = sum_j alpha_ij p_j
/// `proj` is n x h, the attention vectors are h x 1. `graph` must outlive the tape.
Var gat_attention(Tape& tape, Var proj, Var att_src, Var att_dst, const MessageGraph& graph,
                  double negative_slope);

/// Attention coefficients alpha in CSR order of `graph` (no tape).
std::vector<double> attention_coefficients(const Matrix& proj, const Matrix& att_src,
                                           const Matrix& att_dst, const MessageGraph& graph,
                                           double negative_slope);

/// Mean over `rows` of -log softmax(logits_r[0:num_active])[target_r].
Var cross_entropy(Tape& tape, Var logits, std::span<const int> rows, std::span<const int> targets,
                  int num_active);

/// Summed binary cross-entropy of cosine link scores S_ij = (cos(z_i,z_j)+1)/2
/// clamped to [eps, 1-eps], over `pairs` with 0/1 `targets`.
Var link_bce(Tape& tape, Var z, std::span<const std::pair<int, int>> pairs,
             std::span<const int> targets, double eps);

}  // namespace ops
}  // namespace gcl
