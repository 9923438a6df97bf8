#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "seek/dataset.hpp"
#include "seek/model.hpp"
#include "seek/scoring.hpp"

namespace seek {

/// Hyperparameters of one training run.
struct TrainConfig {
    int k = 4;
    int d = 400;
    double lambda = 0.01;  // L2 coefficient, applied as (lambda/d)*theta
    int eta = 100;         // negatives per true triple
    double lr = 0.1;       // initial learning rate, adapted by AdaGrad
    int epochs = 100;
    std::uint64_t seed = 1;
    int workers = 1;             // >1 selects lock-free asynchronous mode
    bool filter_negatives = false;  // resample corrupted triples that are known true

    ModelConfig model_config() const { return {d, k, seed}; }
    void validate() const;
};

/// Per-parameter AdaGrad accumulators; coordinates only ever grow.
struct OptimizerState {
    Matrix accum_entities;
    Matrix accum_relations;
    double epsilon = 1e-8;

    OptimizerState() = default;
    OptimizerState(std::size_t num_entities, std::size_t num_relations, int d)
        : accum_entities(num_entities, d), accum_relations(num_relations, d) {}
};

/// Fills `out` with `eta` corrupted copies of `pos`, label -1. Each differs
/// from `pos` in exactly one of {h, t}: the side is a fair coin and the
/// replacement is uniform over all other entities. When `avoid` is given,
/// corruptions that are known true triples are redrawn (bounded attempts).
void sample_negatives(const Triple& pos, int eta, std::size_t num_entities,
                      std::mt19937_64& rng, std::vector<LabeledTriple>& out,
                      const FilterIndex* avoid = nullptr);

std::vector<LabeledTriple> sample_negatives(const Triple& pos, int eta,
                                            std::size_t num_entities,
                                            std::mt19937_64& rng,
                                            const FilterIndex* avoid = nullptr);

/// -log sigmoid(label * score), evaluated in softplus form so large scores
/// neither overflow nor round to a negative loss.
double loss_term(double score, int label);

/// One AdaGrad step on the three embedding rows of `example`; returns the
/// example's pre-update loss. Throws on a non-finite score or update.
double sgd_step(const LabeledTriple& example, EmbeddingTable& table,
                OptimizerState& opt, const TrainConfig& cfg);

struct EpochStats {
    int epoch = 0;
    double mean_loss = 0.0;  // mean over all positive and negative examples
    double seconds = 0.0;
};

/// Called after each epoch with fresh stats and the current table
/// (checkpoint-at-interval hooks in the CLI use this).
using EpochCallback = std::function<void(const EpochStats&, const EmbeddingTable&)>;

struct TrainResult {
    EmbeddingTable table;
    OptimizerState optimizer;
    std::vector<EpochStats> trace;
};

/// Runs cfg.epochs full passes of negative-sampling SGD over `train`.
/// Each pass shuffles the positives with a per-epoch seed (seed xor epoch)
/// and applies one sgd_step per positive plus one per sampled negative.
/// workers == 1 is deterministic and bit-reproducible; workers > 1 update
/// the shared table lock-free, so torn or lost updates are tolerated and
/// only statistical convergence is promised.
TrainResult train(const TripleSet& train, std::size_t num_entities,
                  std::size_t num_relations, const TrainConfig& cfg,
                  const FilterIndex* filter = nullptr,
                  const EpochCallback& on_epoch = {});

}  // namespace seek
