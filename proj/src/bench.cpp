#include "seek/bench.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <stdexcept>

#include "seek/model.hpp"
#include "seek/scoring.hpp"

namespace seek {

std::vector<BenchResult> bench_scoring(const std::vector<int>& ks, int d,
                                       std::size_t ops, std::uint64_t seed,
                                       std::size_t num_entities,
                                       std::size_t num_relations, int repeats) {
    if (ks.empty()) throw std::invalid_argument("no k values to benchmark");
    if (ops == 0) throw std::invalid_argument("ops must be positive");
    if (repeats < 1) throw std::invalid_argument("repeats must be positive");

    std::mt19937_64 rng(seed);
    std::vector<Triple> batch(ops);
    for (auto& x : batch) {
        x.h = static_cast<EntityId>(rng() % num_entities);
        x.r = static_cast<RelationId>(rng() % num_relations);
        x.t = static_cast<EntityId>(rng() % num_entities);
    }

    std::vector<BenchResult> results;
    results.reserve(ks.size());
    // Keeps the optimizer from discarding the timed loops.
    volatile double sink = 0.0;

    for (int k : ks) {
        ModelConfig cfg{.d = d, .k = k, .seed = seed};
        cfg.validate();
        EmbeddingTable table = init_embeddings(num_entities, num_relations, cfg, seed);

        TripleGradient grad;
        grad.assign_zero(static_cast<std::size_t>(d));
        auto pass = [&] {
            double acc = 0.0;
            for (const Triple& x : batch) {
                auto h = table.entities.row(static_cast<std::size_t>(x.h));
                auto r = table.relations.row(static_cast<std::size_t>(x.r));
                auto t = table.entities.row(static_cast<std::size_t>(x.t));
                acc += score_f4(h, r, t, k);
                grad_f4(h, r, t, k, grad);
                acc += grad.d_r[0];
            }
            sink = sink + acc;
        };

        pass();  // warmup
        std::vector<double> times(static_cast<std::size_t>(repeats));
        for (auto& seconds : times) {
            auto start = std::chrono::steady_clock::now();
            pass();
            std::chrono::duration<double> elapsed =
                std::chrono::steady_clock::now() - start;
            seconds = elapsed.count();
        }
        std::sort(times.begin(), times.end());
        results.push_back({k, times[times.size() / 2]});
    }
    return results;
}

}  // namespace seek
