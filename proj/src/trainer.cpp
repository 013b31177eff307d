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

#include "cbvrp/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cbvrp/error.hpp"
#include "cbvrp/kernels.hpp"

namespace cbvrp {

namespace {

// Separate stream for the loss monitor so tracking never perturbs training.
constexpr std::uint64_t kMonitorSeedMix = 0x9E3779B97F4A7C15ULL;

void
check_pooled(const FeatureSet& features) {
    if (!features.pooled()) {
        throw Error("training requires a pooled feature set; run mean_pool first");
    }
}

void
check_dims(const FeatureSet& features, const Matrix& weight) {
    if (weight.cols() != features.dim()) {
        throw DimensionError("model input dim " + std::to_string(weight.cols()) +
                             " does not match feature dim " + std::to_string(features.dim()));
    }
}

// Per-call scratch for one triple.
struct TripleWork {
    explicit TripleWork(const Matrix& weight)
        : dp(weight.cols()), dn(weight.cols()), up(weight.rows()), un(weight.rows()) {
    }

    std::vector<double> dp, dn, up, un;

    // Returns the hinge argument m + |W dp|^2 - |W dn|^2 and leaves W dp,
    // W dn in up/un.
    double
    evaluate(const Triplet& t, const FeatureSet& features, const Matrix& weight, double margin) {
        auto xa = features.vector(t.anchor);
        auto xp = features.vector(t.positive);
        auto xn = features.vector(t.negative);
        for (std::size_t j = 0; j < dp.size(); ++j) {
            const double a = xa[j];
            dp[j] = a - static_cast<double>(xp[j]);
            dn[j] = a - static_cast<double>(xn[j]);
        }
        double pos = 0.0;
        double neg = 0.0;
        for (std::size_t i = 0; i < weight.rows(); ++i) {
            up[i] = kernels::dot(weight.row(i), dp);
            un[i] = kernels::dot(weight.row(i), dn);
            pos += up[i] * up[i];
            neg += un[i] * un[i];
        }
        return margin + pos - neg;
    }
};

double
mean_loss(std::span<const Triplet> triples,
          const FeatureSet& features,
          const Matrix& weight,
          double margin) {
    if (triples.empty()) {
        return 0.0;
    }
    return triplet_loss(triples, features, weight, margin) / static_cast<double>(triples.size());
}

}  // namespace

Matrix
Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

double
Matrix::norm() const {
    double acc = 0.0;
    for (double v : data_) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

void
TrainConfig::validate() const {
    if (embed_dim == 0) {
        throw Error("embedding dimension must be positive");
    }
    if (!(margin >= 0.0) || !std::isfinite(margin)) {
        throw Error("margin must be finite and >= 0");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw Error("learning rate must be finite and > 0");
    }
    if (triplets_per_anchor == 0) {
        throw Error("triplets per anchor must be positive");
    }
    if (batch_size == 0) {
        throw Error("batch size must be positive");
    }
}

TripletBatch
sample_triplets(const RelevanceTable& table,
                const FeatureSet& features,
                const TrainConfig& config,
                Rng& rng) {
    check_pooled(features);
    std::vector<std::size_t> pool;
    pool.reserve(table.candidate_ids.size());
    for (const auto& id : table.candidate_ids) {
        if (auto idx = features.find(id)) {
            pool.push_back(*idx);
        }
    }

    TripletBatch batch;
    std::vector<std::size_t> positives;
    std::vector<std::size_t> negatives;
    std::unordered_set<std::size_t> excluded;
    for (const auto& [query, list] : table.lists.entries()) {
        if (list.empty()) {
            continue;
        }
        const auto anchor = features.find(query);
        if (!anchor) {
            throw Error("query " + query + " has no feature vector");
        }
        positives.clear();
        excluded.clear();
        excluded.insert(*anchor);
        for (const auto& id : list) {
            if (auto idx = features.find(id)) {
                positives.push_back(*idx);
                excluded.insert(*idx);
            }
        }
        if (positives.empty()) {
            continue;
        }
        negatives.clear();
        for (auto idx : pool) {
            if (excluded.count(idx) == 0) {
                negatives.push_back(idx);
            }
        }
        if (negatives.empty()) {
            ++batch.skipped_anchors;
            continue;
        }
        const std::size_t n =
            std::min({config.triplets_per_anchor, positives.size(), negatives.size()});
        const auto pos_pick = rng.sample_indices(positives.size(), n);
        const auto neg_pick = rng.sample_indices(negatives.size(), n);
        for (std::size_t i = 0; i < n; ++i) {
            batch.triples.push_back(
                Triplet{*anchor, positives[pos_pick[i]], negatives[neg_pick[i]]});
        }
    }
    return batch;
}

LossAndGradient
loss_and_gradient(std::span<const Triplet> triples,
                  const FeatureSet& features,
                  const Matrix& weight,
                  double margin) {
    check_dims(features, weight);
    LossAndGradient out{0.0, Matrix(weight.rows(), weight.cols()), 0};
    TripleWork work(weight);
    for (const auto& t : triples) {
        const double hinge = work.evaluate(t, features, weight, margin);
        if (!(hinge > 0.0)) {
            continue;
        }
        out.loss += hinge;
        ++out.active;
        // d/dW |W d|^2 = 2 (W d) d^T
        for (std::size_t i = 0; i < weight.rows(); ++i) {
            auto g = out.gradient.row(i);
            kernels::axpy(2.0 * work.up[i], work.dp, g);
            kernels::axpy(-2.0 * work.un[i], work.dn, g);
        }
    }
    return out;
}

double
triplet_loss(std::span<const Triplet> triples,
             const FeatureSet& features,
             const Matrix& weight,
             double margin) {
    check_dims(features, weight);
    TripleWork work(weight);
    double loss = 0.0;
    for (const auto& t : triples) {
        loss += std::max(0.0, work.evaluate(t, features, weight, margin));
    }
    return loss;
}

Matrix
loss_gradient(std::span<const Triplet> triples,
              const FeatureSet& features,
              const Matrix& weight,
              double margin) {
    return loss_and_gradient(triples, features, weight, margin).gradient;
}

TrainResult
train(const RelevanceTable& table, const FeatureSet& features, const TrainConfig& config) {
    config.validate();
    check_pooled(features);
    const std::size_t in = features.dim();
    const std::size_t d = config.embed_dim;

    Rng rng(config.seed);
    TrainResult result;
    result.model.weight = Matrix(d, in);
    const double scale = std::sqrt(6.0 / static_cast<double>(in + d));
    for (double& w : result.model.weight.data()) {
        w = rng.uniform(-scale, scale);
    }
    result.model.meta =
        TrainMeta{config.margin, config.learning_rate, static_cast<std::uint32_t>(config.epochs),
                  config.seed};

    Matrix& weight = result.model.weight;
    if (config.epochs > 0) {
        Rng monitor_rng(config.seed ^ kMonitorSeedMix);
        const auto monitor = sample_triplets(table, features, config, monitor_rng);
        if (monitor.triples.empty()) {
            throw Error("no training signal: no query yields a valid triplet");
        }
        result.loss_history.push_back(mean_loss(monitor.triples, features, weight, config.margin));

        for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
            auto batch = sample_triplets(table, features, config, rng);
            result.skipped_anchors = batch.skipped_anchors;
            rng.shuffle(batch.triples);
            std::span<const Triplet> all(batch.triples);
            for (std::size_t start = 0; start < all.size(); start += config.batch_size) {
                const auto mini = all.subspan(start, std::min(config.batch_size, all.size() - start));
                const auto step = loss_and_gradient(mini, features, weight, config.margin);
                if (step.active == 0) {
                    continue;
                }
                kernels::axpy(-config.learning_rate / static_cast<double>(mini.size()),
                              step.gradient.data(), weight.data());
            }
            for (double w : weight.data()) {
                if (!std::isfinite(w)) {
                    throw Error("training diverged at epoch " + std::to_string(epoch + 1) +
                                "; lower the learning rate");
                }
            }
            result.loss_history.push_back(
                mean_loss(monitor.triples, features, weight, config.margin));
        }
    }

    for (double& w : weight.data()) {
        w = static_cast<double>(static_cast<float>(w));
    }
    return result;
}

FeatureSet
embed(const EmbeddingModel& model, const FeatureSet& set) {
    check_pooled(set);
    check_dims(set, model.weight);
    FeatureSet out(model.embed_dim());
    std::vector<double> x(set.dim());
    for (std::size_t i = 0; i < set.size(); ++i) {
        auto v = set.vector(i);
        std::copy(v.begin(), v.end(), x.begin());
        std::vector<float> y(model.embed_dim());
        for (std::size_t r = 0; r < y.size(); ++r) {
            y[r] = static_cast<float>(kernels::dot(model.weight.row(r), x));
        }
        out.add(set.id(i), std::move(y));
    }
    return out;
}

}  // namespace cbvrp
