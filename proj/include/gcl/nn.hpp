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

#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcl/autodiff.hpp"

namespace gcl {

struct GatConfig {
  int in_dim = 0;
  int hidden_dim = 64;
  int out_dim = 0;
  int num_layers = 2;
  double negative_slope = 0.2;

  void validate() const;
};

/// Single-head GAT stack. Layer l owns `{prefix}.layer{l}.weight` (in x out),
/// `.att_src` and `.att_dst` (out x 1). ELU between layers, none after the
/// last. The encoder itself is stateless; tensors live in a ParamStore.
class GatEncoder {
 public:
  GatEncoder() = default;
  GatEncoder(GatConfig config, std::string prefix);

  const GatConfig& config() const { return config_; }
  const std::string& prefix() const { return prefix_; }

  /// Registers Glorot-uniform initialised tensors in `store`.
  void init(ParamStore& store, Rng& rng) const;
  /// Re-draws existing tensors in place (keeps their addresses).
  void reinit(ParamStore& store, Rng& rng) const;

  /// Records the forward pass on `tape`; `x` and `graph` must outlive it.
  Var forward(Tape& tape, ParamStore& store, const SparseMatrix& x,
              const MessageGraph& graph) const;

  /// Forward pass without gradient bookkeeping. Throws NumericalError on
  /// non-finite activations.
  Matrix infer(const ParamStore& store, const SparseMatrix& x, const MessageGraph& graph) const;
  /// Output of every layer (post-activation for hidden layers).
  std::vector<Matrix> infer_layers(const ParamStore& store, const SparseMatrix& x,
                                   const MessageGraph& graph) const;

  /// Attention coefficients of every layer, CSR order of `graph`.
  std::vector<std::vector<double>> attention(const ParamStore& store, const SparseMatrix& x,
                                             const MessageGraph& graph) const;

  std::string weight_name(int layer) const;
  std::string att_src_name(int layer) const;
  std::string att_dst_name(int layer) const;

 private:
  GatConfig config_;
  std::string prefix_;
};

/// Affine map `{prefix}.weight` (in x out) plus `{prefix}.bias` (1 x out).
class LinearHead {
 public:
  LinearHead() = default;
  LinearHead(int in_dim, int out_dim, std::string prefix);

  void init(ParamStore& store, Rng& rng) const;
  void reinit(ParamStore& store, Rng& rng) const;
  Var forward(Tape& tape, ParamStore& store, Var input) const;

 private:
  int in_dim_ = 0;
  int out_dim_ = 0;
  std::string prefix_;
};

Matrix glorot_uniform(int rows, int cols, Rng& rng);

// Value-level loss helpers. The trainer builds the same quantities on a tape.

/// (cos(a, b) + 1) / 2; 0.5 if either row has zero norm.
double cosine_link_score(std::span<const double> a, std::span<const double> b);
double cosine_link_score(const Matrix& z, int i, int j);

/// Summed binary cross-entropy with scores clamped to [eps, 1 - eps].
double link_loss(std::span<const double> scores, std::span<const int> targets, double eps = 1e-7);

/// beta * current + (1 - beta) * buffer. A missing buffer term drops its
/// share; a missing current term leaves (1 - beta) * buffer.
double node_loss(std::optional<double> current, std::optional<double> buffer, double beta);

double combine_lp_loss(double link, double node, double lambda);

/// Mean cross-entropy of `logits` rows restricted to the first `num_active`
/// columns.
double cross_entropy_value(const Matrix& logits, std::span<const int> rows,
                           std::span<const int> targets, int num_active);

struct AdamConfig {
  double learning_rate = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// One Adam update of every tensor in `store`, then zeroes the gradients.
/// A non-finite gradient leaves every value untouched and throws
/// NumericalError naming the tensor.
void adam_step(ParamStore& store, const AdamConfig& config);

/// Writes `{path}.bin` (raw little-endian doubles, row-major) and
/// `{path}.index` (lines "name rows cols offset").
void save_checkpoint(const ParamStore& store, const std::filesystem::path& path);
ParamStore load_checkpoint(const std::filesystem::path& path);

/// One CSV line per row: node id followed by the embedding values.
void write_embeddings_csv(const std::filesystem::path& path, const Matrix& embeddings,
                          std::span<const GlobalId> node_ids);

}  // namespace gcl
