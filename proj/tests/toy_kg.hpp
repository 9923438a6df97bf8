// Small synthetic KG with one symmetric and one antisymmetric relation,
// sized so training converges in seconds.
#pragma once

#include <filesystem>
#include <vector>

#include "seek/dataset.hpp"

namespace toy {

/// 60 entities in 10 clusters of 6. Relation "sym" asserts every ordered
/// same-cluster pair (i != j). Relation "anti" asserts the member-index
/// order m_i < m_j between all cluster pairs, forward direction only.
/// Per cluster the held-out triples are
///   test:  (m0 sym m1)  and (m0 anti m3)
///   valid: (m2 sym m3)  and (m1 anti m4)
/// so each held-out sym edge keeps its reverse in train, while a held-out
/// anti edge keeps every cross-cluster edge of the same rank pair in train.
struct ToyKG {
    seek::Vocabulary vocab;
    seek::TripleSet train;
    seek::TripleSet valid;
    seek::TripleSet test;
    seek::FilterIndex filter;
    std::vector<seek::Triple> sym_test;   // the 10 held-out symmetric triples
    std::vector<seek::Triple> anti_test;  // the 10 held-out antisymmetric triples
    seek::RelationId sym = 0;
    seek::RelationId anti = 0;
};

ToyKG make_toy_kg();

/// Writes train.txt / valid.txt / test.txt into `dir` (created if missing).
void write_toy_dataset(const std::filesystem::path& dir, const ToyKG& kg);

}  // namespace toy
