#pragma once

#include <string>
#include <vector>

#include "seek/dataset.hpp"
#include "seek/model.hpp"
#include "seek/scoring.hpp"

namespace seek {

enum class ScoreFn { f1, f2, f4 };

const char* score_fn_name(ScoreFn fn);

/// Which entity of the test triple gets replaced by candidates.
enum class Side { head, tail };

/// Filtered link-prediction metrics for one ranking side (or both averaged).
struct RankingReport {
    double mrr = 0.0;
    double hits1 = 0.0;   // percentages
    double hits3 = 0.0;
    double hits10 = 0.0;
    std::size_t count = 0;  // number of rankings aggregated
    std::string side;       // "head", "tail" or "both"
};

struct EvalReport {
    RankingReport head;
    RankingReport tail;
    RankingReport both;
};

/// Scores every candidate replacement of the chosen side over the full
/// entity vocabulary. Candidates other than the true entity that appear in
/// `filter` are discarded; rank = 1 + count of survivors scoring strictly
/// higher than the true triple. Pass filter = nullptr for the raw setting.
int rank_triple(const Triple& test, Side side, const EmbeddingTable& table,
                const ModelConfig& cfg, const FilterIndex* filter,
                ScoreFn fn = ScoreFn::f4);

/// Head-side and tail-side ranks for every test triple; MRR is the mean of
/// 1/rank over all 2*|test| rankings, Hits@N the percentage with rank <= N.
EvalReport evaluate(const TripleSet& test, const EmbeddingTable& table,
                    const ModelConfig& cfg, const FilterIndex* filter,
                    ScoreFn fn = ScoreFn::f4, int workers = 1);

/// Metric aggregation over a rank multiset (exposed for tests).
RankingReport aggregate_ranks(const std::vector<int>& ranks, std::string side);

/// sigmoid(score) of each triple and of its reverse under one scoring
/// function; the probe behind the symmetry/antisymmetry reports.
struct CaseStudyRow {
    std::string triple;  // "head relation tail" in string form
    double p_forward = 0.0;
    double p_reverse = 0.0;
    ScoreFn fn = ScoreFn::f4;
};

std::vector<CaseStudyRow> case_study(const std::vector<Triple>& triples,
                                     const EmbeddingTable& table,
                                     const ModelConfig& cfg, ScoreFn fn,
                                     const Vocabulary& vocab);

/// Generic scorer used by ranking and the case study.
double score_triple(ScoreFn fn, const Triple& triple, const EmbeddingTable& table,
                    const ModelConfig& cfg);

}  // namespace seek
