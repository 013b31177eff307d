// Copyright 2026-present the cbvrp project
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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbvrp/datamodel.hpp"
#include "cbvrp/rng.hpp"

namespace cbvrp {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    }

    static Matrix
    identity(std::size_t n);

    std::size_t
    rows() const noexcept {
        return rows_;
    }

    std::size_t
    cols() const noexcept {
        return cols_;
    }

    double&
    operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }

    double
    operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    std::span<double>
    row(std::size_t r) {
        return std::span<double>(data_).subspan(r * cols_, cols_);
    }

    std::span<const double>
    row(std::size_t r) const {
        return std::span<const double>(data_).subspan(r * cols_, cols_);
    }

    std::span<double>
    data() noexcept {
        return data_;
    }

    std::span<const double>
    data() const noexcept {
        return data_;
    }

    /// Frobenius norm.
    double
    norm() const;

    friend bool
    operator==(const Matrix&, const Matrix&) = default;

 private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct TrainConfig {
    std::size_t embed_dim = 64;
    double margin = 1.0;
    double learning_rate = 0.01;
    std::size_t epochs = 4;
    std::size_t triplets_per_anchor = 5;
    std::size_t batch_size = 128;
    std::uint64_t seed = 0;

    /// Throws cbvrp::Error on a zero dimension/batch/P, a negative margin or
    /// a non-positive learning rate. Zero epochs is allowed.
    void
    validate() const;
};

struct TrainMeta {
    double margin = 1.0;
    double learning_rate = 0.0;  // not persisted in .cbvm files
    std::uint32_t epochs = 0;
    std::uint64_t seed = 0;
};

/// Linear embedding f(x) = W x with W of shape embed_dim x input_dim.
struct EmbeddingModel {
    Matrix weight;
    TrainMeta meta;

    std::size_t
    input_dim() const noexcept {
        return weight.cols();
    }

    std::size_t
    embed_dim() const noexcept {
        return weight.rows();
    }

    friend bool
    operator==(const EmbeddingModel& a, const EmbeddingModel& b) {
        return a.weight == b.weight && a.meta.margin == b.meta.margin &&
               a.meta.epochs == b.meta.epochs && a.meta.seed == b.meta.seed;
    }
};

/// Indices into a pooled FeatureSet.
struct Triplet {
    std::size_t anchor;
    std::size_t positive;
    std::size_t negative;

    friend bool
    operator==(const Triplet&, const Triplet&) = default;
};

struct TripletBatch {
    std::vector<Triplet> triples;
    /// Anchors with a non-empty list but no admissible negative.
    std::size_t skipped_anchors = 0;
};

/// Draws min(P, |o^a|) triples per anchor: positives from o^a and negatives
/// from C \ ({a} ∪ o^a), both uniformly without replacement, the i-th
/// positive paired with the i-th negative. Ids without a feature vector are
/// left out of both pools; a query without one is an error.
TripletBatch
sample_triplets(const RelevanceTable& table,
                const FeatureSet& features,
                const TrainConfig& config,
                Rng& rng);

/// Sum over triples of max(0, m + |W(xa - xp)|^2 - |W(xa - xn)|^2).
double
triplet_loss(std::span<const Triplet> triples,
             const FeatureSet& features,
             const Matrix& weight,
             double margin);

/// dL/dW. Triples whose hinge argument is <= 0 contribute nothing.
Matrix
loss_gradient(std::span<const Triplet> triples,
              const FeatureSet& features,
              const Matrix& weight,
              double margin);

struct LossAndGradient {
    double loss = 0.0;
    Matrix gradient;
    std::size_t active = 0;
};

LossAndGradient
loss_and_gradient(std::span<const Triplet> triples,
                  const FeatureSet& features,
                  const Matrix& weight,
                  double margin);

struct TrainResult {
    EmbeddingModel model;
    /// Mean loss over a fixed monitoring batch: entry 0 before the first
    /// epoch, entry e after epoch e. Empty when epochs == 0.
    std::vector<double> loss_history;
    std::size_t skipped_anchors = 0;
};

/// Mini-batch SGD on the triplet loss. Weights start uniform on [-s, s] with
/// s = sqrt(6 / (input_dim + embed_dim)); triplets are resampled each epoch.
/// Final weights are rounded to float so the saved model matches memory.
TrainResult
train(const RelevanceTable& table, const FeatureSet& features, const TrainConfig& config);

/// Replaces every vector x by W x.
FeatureSet
embed(const EmbeddingModel& model, const FeatureSet& set);

std::string
encode_model(const EmbeddingModel& model);

EmbeddingModel
decode_model(std::string_view bytes);

void
save_model(const EmbeddingModel& model, const std::filesystem::path& path);

EmbeddingModel
load_model(const std::filesystem::path& path);

}  // namespace cbvrp
