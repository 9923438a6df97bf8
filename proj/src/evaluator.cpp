#include "seek/evaluator.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace seek {

const char* score_fn_name(ScoreFn fn) {
    switch (fn) {
        case ScoreFn::f1: return "f1";
        case ScoreFn::f2: return "f2";
        case ScoreFn::f4: return "f4";
    }
    return "?";
}

double score_triple(ScoreFn fn, const Triple& triple, const EmbeddingTable& table,
                    const ModelConfig& cfg) {
    auto h = table.entities.row(static_cast<std::size_t>(triple.h));
    auto r = table.relations.row(static_cast<std::size_t>(triple.r));
    auto t = table.entities.row(static_cast<std::size_t>(triple.t));
    switch (fn) {
        case ScoreFn::f1: return score_f1(h, r, t);
        case ScoreFn::f2: return score_f2(h, r, t, cfg.k);
        case ScoreFn::f4: return score_f4(h, r, t, cfg.k);
    }
    throw std::invalid_argument("unknown scoring function");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Ranking a side scores every entity against a fixed query vector q, with
// score(candidate) = <q, embedding(candidate)>; one O(kd) build then O(d)
// per candidate instead of O(kd) per candidate.
//
// Tail side: q[w*seg+i] = sum over (x,y) with w(x,y)==w of s * r_x[i]*h_y[i].
// Head side: q[y*seg+i] = sum over x of s * r_x[i]*t_w[i].
// For f1 and f2 the same shape holds with their (simpler) interactions.
std::vector<double> candidate_query(ScoreFn fn, Side side, const Triple& test,
                                    const EmbeddingTable& table, const ModelConfig& cfg) {
    auto r = table.relations.row(static_cast<std::size_t>(test.r));
    auto fixed = side == Side::tail
                     ? table.entities.row(static_cast<std::size_t>(test.h))
                     : table.entities.row(static_cast<std::size_t>(test.t));
    std::size_t d = r.size();
    std::vector<double> q(d, 0.0);

    switch (fn) {
        case ScoreFn::f1:
            for (std::size_t i = 0; i < d; ++i) q[i] = r[i] * fixed[i];
            return q;
        case ScoreFn::f2: {
            std::size_t seg = d / static_cast<std::size_t>(cfg.k);
            for (std::size_t i = 0; i < seg; ++i) {
                double rs = 0.0, fs = 0.0;
                for (int x = 0; x < cfg.k; ++x) {
                    rs += r[static_cast<std::size_t>(x) * seg + i];
                    fs += fixed[static_cast<std::size_t>(x) * seg + i];
                }
                double v = rs * fs;
                for (int x = 0; x < cfg.k; ++x) q[static_cast<std::size_t>(x) * seg + i] = v;
            }
            return q;
        }
        case ScoreFn::f4: {
            int k = cfg.k;
            std::size_t seg = d / static_cast<std::size_t>(k);
            for (int x = 0; x < k; ++x) {
                std::size_t xo = static_cast<std::size_t>(x) * seg;
                for (int y = 0; y < k; ++y) {
                    std::size_t yo = static_cast<std::size_t>(y) * seg;
                    std::size_t wo = static_cast<std::size_t>(tail_index(x, y, k)) * seg;
                    double s = static_cast<double>(sign_coeff(x, y, k));
                    if (side == Side::tail) {
                        // fixed = head embedding
                        for (std::size_t i = 0; i < seg; ++i)
                            q[wo + i] += s * (r[xo + i] * fixed[yo + i]);
                    } else {
                        // fixed = tail embedding
                        for (std::size_t i = 0; i < seg; ++i)
                            q[yo + i] += s * (r[xo + i] * fixed[wo + i]);
                    }
                }
            }
            return q;
        }
    }
    throw std::invalid_argument("unknown scoring function");
}

}  // namespace

int rank_triple(const Triple& test, Side side, const EmbeddingTable& table,
                const ModelConfig& cfg, const FilterIndex* filter, ScoreFn fn) {
    std::vector<double> q = candidate_query(fn, side, test, table, cfg);
    EntityId truth = side == Side::tail ? test.t : test.h;
    double true_score = dot(q, table.entities.row(static_cast<std::size_t>(truth)));

    int higher = 0;
    auto n = static_cast<EntityId>(table.entities.rows);
    for (EntityId c = 0; c < n; ++c) {
        if (c == truth) continue;
        if (filter) {
            Triple candidate = test;
            (side == Side::tail ? candidate.t : candidate.h) = c;
            if (filter->contains(candidate)) continue;
        }
        if (dot(q, table.entities.row(static_cast<std::size_t>(c))) > true_score) ++higher;
    }
    return 1 + higher;
}

RankingReport aggregate_ranks(const std::vector<int>& ranks, std::string side) {
    RankingReport rep;
    rep.side = std::move(side);
    rep.count = ranks.size();
    if (ranks.empty()) return rep;

    double inv_sum = 0.0;
    std::size_t h1 = 0, h3 = 0, h10 = 0;
    for (int r : ranks) {
        inv_sum += 1.0 / static_cast<double>(r);
        if (r <= 1) ++h1;
        if (r <= 3) ++h3;
        if (r <= 10) ++h10;
    }
    auto n = static_cast<double>(ranks.size());
    rep.mrr = inv_sum / n;
    rep.hits1 = 100.0 * static_cast<double>(h1) / n;
    rep.hits3 = 100.0 * static_cast<double>(h3) / n;
    rep.hits10 = 100.0 * static_cast<double>(h10) / n;
    return rep;
}

EvalReport evaluate(const TripleSet& test, const EmbeddingTable& table,
                    const ModelConfig& cfg, const FilterIndex* filter, ScoreFn fn,
                    int workers) {
    if (test.triples.empty()) throw std::invalid_argument("empty test set");
    std::size_t n = test.size();
    std::vector<int> head_ranks(n), tail_ranks(n);

    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            head_ranks[i] = rank_triple(test.triples[i], Side::head, table, cfg, filter, fn);
            tail_ranks[i] = rank_triple(test.triples[i], Side::tail, table, cfg, filter, fn);
        }
    };

    if (workers <= 1) {
        run(0, n);
    } else {
        auto w = static_cast<std::size_t>(workers);
        std::vector<std::thread> threads;
        threads.reserve(w);
        for (std::size_t i = 0; i < w; ++i)
            threads.emplace_back([&, i] { run(n * i / w, n * (i + 1) / w); });
        for (auto& th : threads) th.join();
    }

    EvalReport report;
    report.head = aggregate_ranks(head_ranks, "head");
    report.tail = aggregate_ranks(tail_ranks, "tail");
    std::vector<int> all;
    all.reserve(2 * n);
    all.insert(all.end(), head_ranks.begin(), head_ranks.end());
    all.insert(all.end(), tail_ranks.begin(), tail_ranks.end());
    report.both = aggregate_ranks(all, "both");
    return report;
}

std::vector<CaseStudyRow> case_study(const std::vector<Triple>& triples,
                                     const EmbeddingTable& table,
                                     const ModelConfig& cfg, ScoreFn fn,
                                     const Vocabulary& vocab) {
    std::vector<CaseStudyRow> rows;
    rows.reserve(triples.size());
    for (const Triple& x : triples) {
        CaseStudyRow row;
        row.triple = vocab.entity_name(x.h) + " " + vocab.relation_name(x.r) + " " +
                     vocab.entity_name(x.t);
        row.fn = fn;
        row.p_forward = probability(score_triple(fn, x, table, cfg));
        // Reverse reuses the same relation embedding; only h and t swap.
        row.p_reverse = probability(score_triple(fn, {x.t, x.r, x.h}, table, cfg));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace seek
