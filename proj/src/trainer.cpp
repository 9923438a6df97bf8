#include "seek/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace seek {

void TrainConfig::validate() const {
    model_config().validate();
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (eta < 1) throw std::invalid_argument("eta must be >= 1");
    if (!(lr > 0.0)) throw std::invalid_argument("lr must be > 0");
    if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
    if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

void sample_negatives(const Triple& pos, int eta, std::size_t num_entities,
                      std::mt19937_64& rng, std::vector<LabeledTriple>& out,
                      const FilterIndex* avoid) {
    if (eta < 1) throw std::invalid_argument("eta must be >= 1");
    if (num_entities < 2)
        throw std::invalid_argument("cannot corrupt triples with fewer than 2 entities");

    out.clear();
    out.reserve(static_cast<std::size_t>(eta));
    for (int j = 0; j < eta; ++j) {
        Triple neg = pos;
        // Known-true corruptions are redrawn a bounded number of times; a
        // dense corruption space keeps the last draw rather than spinning.
        for (int attempt = 0; attempt < 16; ++attempt) {
            neg = pos;
            bool replace_head = (rng() & 1ull) != 0;
            EntityId replaced = replace_head ? pos.h : pos.t;
            // Uniform over all entities except the replaced one. The modulo
            // bias of a 64-bit draw is immaterial at vocabulary scale.
            auto e = static_cast<EntityId>(rng() % (num_entities - 1));
            if (e >= replaced) ++e;
            (replace_head ? neg.h : neg.t) = e;
            if (!avoid || !avoid->contains(neg)) break;
        }
        out.push_back({neg, -1});
    }
}

std::vector<LabeledTriple> sample_negatives(const Triple& pos, int eta,
                                            std::size_t num_entities,
                                            std::mt19937_64& rng,
                                            const FilterIndex* avoid) {
    std::vector<LabeledTriple> out;
    sample_negatives(pos, eta, num_entities, rng, out, avoid);
    return out;
}

double loss_term(double score, int label) {
    double z = static_cast<double>(label) * score;
    if (z > 0.0) return std::log1p(std::exp(-z));
    return -z + std::log1p(std::exp(z));
}

double sgd_step(const LabeledTriple& example, EmbeddingTable& table,
                OptimizerState& opt, const TrainConfig& cfg) {
    const Triple& x = example.triple;
    auto h_row = table.entities.row(static_cast<std::size_t>(x.h));
    auto r_row = table.relations.row(static_cast<std::size_t>(x.r));
    auto t_row = table.entities.row(static_cast<std::size_t>(x.t));

    double score = score_f4(h_row, r_row, t_row, cfg.k);
    double label = static_cast<double>(example.label);
    double loss = loss_term(score, example.label);
    double dldf = (probability(label * score) - 1.0) * label;

    thread_local TripleGradient grad;
    grad_f4(h_row, r_row, t_row, cfg.k, grad);

    double reg = cfg.lambda / static_cast<double>(cfg.d);
    auto apply = [&](std::span<double> theta, std::span<double> accum,
                     const std::vector<double>& df) {
        double moved = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) {
            double g = dldf * df[i] + reg * theta[i];
            accum[i] += g * g;
            double step = cfg.lr * g / std::sqrt(accum[i] + opt.epsilon);
            theta[i] -= step;
            moved += step;
        }
        if (!std::isfinite(moved))
            throw std::runtime_error("non-finite update on triple (" +
                                     std::to_string(x.h) + ", " + std::to_string(x.r) +
                                     ", " + std::to_string(x.t) + ")");
    };

    apply(r_row, opt.accum_relations.row(static_cast<std::size_t>(x.r)), grad.d_r);
    if (x.h == x.t) {
        // Self-loop: the row carries both roles, so the two entity gradients
        // combine into one update (and one regularization pull).
        for (std::size_t i = 0; i < grad.d_h.size(); ++i) grad.d_h[i] += grad.d_t[i];
        apply(h_row, opt.accum_entities.row(static_cast<std::size_t>(x.h)), grad.d_h);
    } else {
        apply(h_row, opt.accum_entities.row(static_cast<std::size_t>(x.h)), grad.d_h);
        apply(t_row, opt.accum_entities.row(static_cast<std::size_t>(x.t)), grad.d_t);
    }
    return loss;
}

TrainResult train(const TripleSet& train_set, std::size_t num_entities,
                  std::size_t num_relations, const TrainConfig& cfg,
                  const FilterIndex* filter, const EpochCallback& on_epoch) {
    cfg.validate();
    if (train_set.triples.empty()) throw std::invalid_argument("empty train set");

    TrainResult result;
    result.table = init_embeddings(num_entities, num_relations, cfg.model_config(), cfg.seed);
    result.optimizer = OptimizerState(num_entities, num_relations, cfg.d);

    const FilterIndex* avoid = cfg.filter_negatives ? filter : nullptr;
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    auto run_slice = [&](std::size_t begin, std::size_t end, std::uint64_t rng_seed) {
        std::mt19937_64 rng(rng_seed);
        std::vector<LabeledTriple> negatives;
        double local = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const Triple& pos = train_set.triples[order[i]];
            local += sgd_step({pos, +1}, result.table, result.optimizer, cfg);
            sample_negatives(pos, cfg.eta, num_entities, rng, negatives, avoid);
            for (const LabeledTriple& neg : negatives)
                local += sgd_step(neg, result.table, result.optimizer, cfg);
        }
        return local;
    };

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        auto start = std::chrono::steady_clock::now();
        std::uint64_t epoch_seed = cfg.seed ^ static_cast<std::uint64_t>(epoch);
        std::mt19937_64 shuffle_rng(epoch_seed);
        std::shuffle(order.begin(), order.end(), shuffle_rng);

        double loss_sum = 0.0;
        try {
            if (cfg.workers == 1) {
                loss_sum = run_slice(0, order.size(), mix_seed(epoch_seed, 0));
            } else {
                // Lock-free asynchronous mode: workers share the table and
                // optimizer state; racing writes are tolerated by contract.
                std::size_t n = order.size();
                std::size_t w = static_cast<std::size_t>(cfg.workers);
                std::vector<double> sums(w, 0.0);
                std::vector<std::exception_ptr> errors(w);
                std::vector<std::thread> threads;
                threads.reserve(w);
                for (std::size_t i = 0; i < w; ++i) {
                    std::size_t begin = n * i / w;
                    std::size_t end = n * (i + 1) / w;
                    threads.emplace_back([&, i, begin, end] {
                        try {
                            sums[i] = run_slice(begin, end, mix_seed(epoch_seed, i));
                        } catch (...) {
                            errors[i] = std::current_exception();
                        }
                    });
                }
                for (auto& th : threads) th.join();
                for (auto& err : errors)
                    if (err) std::rethrow_exception(err);
                for (double s : sums) loss_sum += s;
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("epoch " + std::to_string(epoch + 1) + ": " + e.what());
        }

        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        double examples = static_cast<double>(order.size()) * (1.0 + cfg.eta);
        EpochStats stats{epoch + 1, loss_sum / examples, seconds};
        result.trace.push_back(stats);
        if (on_epoch) on_epoch(stats, result.table);
    }
    return result;
}

}  // namespace seek
