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

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gcl {

// Row-major so that per-node rows are contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Stable node identity across task snapshots (row index in the full dataset).
using GlobalId = std::int32_t;

using Rng = std::mt19937_64;

// Raised for malformed configuration values. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for dataset format violations. The CLI maps it to exit code 3.
class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a loss, activation or gradient becomes non-finite. Exit code 4.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Derives an independent seed for the named stream `name` from `master`.
/// Each component (split, init, negative sampling, sampler, SL mask) draws
/// from its own stream so ablations only differ where intended.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

inline Rng make_rng(std::uint64_t master, std::string_view name) {
  return Rng(derive_seed(master, name));
}

}  // namespace gcl
