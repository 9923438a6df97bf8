#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "seek/vocabulary.hpp"

namespace seek {

/// Embedding geometry: dimension d split into k contiguous segments.
/// k must divide d exactly; segment x of a vector v is v[x*d/k, (x+1)*d/k).
struct ModelConfig {
    int d = 400;
    int k = 4;
    std::uint64_t seed = 1;

    int segment_width() const { return d / k; }

    /// Throws std::invalid_argument unless d >= 1, k >= 1 and k divides d.
    void validate() const;
};

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    std::span<double> row(std::size_t i) {
        return {data.data() + i * cols, cols};
    }
    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * cols, cols};
    }
};

struct EmbeddingTable {
    Matrix entities;   // [num_entities x d]
    Matrix relations;  // [num_relations x d]

    int dim() const { return static_cast<int>(entities.cols); }
};

/// Fresh table with every value i.i.d. uniform on [-6/sqrt(d), +6/sqrt(d)].
/// Bit-identical for the same seed (the generator maps raw 64-bit draws to
/// doubles directly, independent of libstdc++ distribution internals).
EmbeddingTable init_embeddings(std::size_t num_entities, std::size_t num_relations,
                               const ModelConfig& cfg, std::uint64_t seed);

/// Text checkpoint, versioned:
///   seek-checkpoint v1 d=<d> k=<k> entities=<n> relations=<m>
///   E <name> <d space-separated decimals>   (one line per entity)
///   R <name> <d decimals>                   (one line per relation)
/// Decimals use 17 significant digits so a save/load round trip is lossless.
void save_checkpoint(const std::filesystem::path& path, const EmbeddingTable& table,
                     const Vocabulary& vocab, const ModelConfig& cfg);

struct Checkpoint {
    EmbeddingTable table;
    Vocabulary vocab;
    ModelConfig config;
};

Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace seek
