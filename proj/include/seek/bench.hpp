#pragma once

#include <cstdint>
#include <vector>

namespace seek {

struct BenchResult {
    int k = 0;
    double seconds = 0.0;
};

/// Times `ops` score_f4 + grad_f4 evaluations at dimension d for each k,
/// over a randomly initialized table and random id sequences. Each k is
/// measured `repeats` times after one warmup pass; the median is reported.
std::vector<BenchResult> bench_scoring(const std::vector<int>& ks, int d,
                                       std::size_t ops, std::uint64_t seed,
                                       std::size_t num_entities = 1000,
                                       std::size_t num_relations = 32,
                                       int repeats = 3);

}  // namespace seek
