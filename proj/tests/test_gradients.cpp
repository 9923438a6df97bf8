#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "oracles.hpp"
#include "seek/scoring.hpp"

using namespace seek;

namespace {

// |a - b| / max(1, |a|, |b|): floors the denominator so coordinates that
// happen to vanish do not blow up the ratio on rounding noise.
double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

double max_rel_err(const TripleGradient& a, const TripleGradient& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.d_h.size(); ++i) {
        worst = std::max(worst, rel_err(a.d_h[i], b.d_h[i]));
        worst = std::max(worst, rel_err(a.d_r[i], b.d_r[i]));
        worst = std::max(worst, rel_err(a.d_t[i], b.d_t[i]));
    }
    return worst;
}

double max_abs_err(const TripleGradient& a, const TripleGradient& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.d_h.size(); ++i) {
        worst = std::max(worst, std::fabs(a.d_h[i] - b.d_h[i]));
        worst = std::max(worst, std::fabs(a.d_r[i] - b.d_r[i]));
        worst = std::max(worst, std::fabs(a.d_t[i] - b.d_t[i]));
    }
    return worst;
}

}  // namespace

TEST_CASE("grad_f4 matches central differences at d=16, k=4") {
    oracle::OracleTolerance tol;
    int k = 4;
    oracle::ScoreFunction f4 = [k](std::span<const double> h, std::span<const double> r,
                                   std::span<const double> t) {
        return score_f4(h, r, t, k);
    };
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 100; ++rep) {
        auto h = oracle::random_vector(rng, 16);
        auto r = oracle::random_vector(rng, 16);
        auto t = oracle::random_vector(rng, 16);
        TripleGradient analytic;
        grad_f4(h, r, t, k, analytic);
        TripleGradient numeric = oracle::numeric_gradient(f4, h, r, t, tol.fd_step);
        CHECK(max_rel_err(analytic, numeric) <= tol.grad_rel_tol);
    }
}

TEST_CASE("k=1 gradient is the DistMult gradient, bitwise") {
    std::mt19937_64 rng(78);
    auto h = oracle::random_vector(rng, 8);
    auto r = oracle::random_vector(rng, 8);
    auto t = oracle::random_vector(rng, 8);
    TripleGradient g;
    grad_f4(h, r, t, 1, g);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(g.d_r[i] == h[i] * t[i]);
        CHECK(g.d_h[i] == r[i] * t[i]);
        CHECK(g.d_t[i] == r[i] * h[i]);
    }
}

TEST_CASE("zero tail kills d_r and d_h but not d_t") {
    std::mt19937_64 rng(79);
    auto h = oracle::random_vector(rng, 16);
    auto r = oracle::random_vector(rng, 16);
    std::vector<double> t(16, 0.0);
    TripleGradient g;
    grad_f4(h, r, t, 4, g);
    double t_norm = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(g.d_r[i] == 0.0);
        CHECK(g.d_h[i] == 0.0);
        t_norm += std::fabs(g.d_t[i]);
    }
    CHECK(t_norm > 0.1);
}

TEST_CASE("gradient of a table triple routes through the rows") {
    ModelConfig cfg{.d = 8, .k = 2, .seed = 5};
    EmbeddingTable table = init_embeddings(3, 2, cfg, 5);
    TripleGradient via_ids = grad_f4({0, 1, 2}, table, cfg);
    TripleGradient direct;
    grad_f4(table.entities.row(0), table.relations.row(1), table.entities.row(2),
            cfg.k, direct);
    CHECK(via_ids.d_h == direct.d_h);
    CHECK(via_ids.d_r == direct.d_r);
    CHECK(via_ids.d_t == direct.d_t);
    CHECK_THROWS_AS(grad_f4({0, 5, 2}, table, cfg), std::out_of_range);
}

TEST_CASE("central differences: exact on a coordinate-linear function") {
    oracle::ScoreFunction linear = [](std::span<const double> h, std::span<const double>,
                                      std::span<const double>) {
        double s = 0.0;
        for (double v : h) s += 2.0 * v;
        return s;
    };
    std::mt19937_64 rng(80);
    auto h = oracle::random_vector(rng, 6);
    auto r = oracle::random_vector(rng, 6);
    auto t = oracle::random_vector(rng, 6);
    TripleGradient g = oracle::numeric_gradient(linear, h, r, t, 1e-5);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(g.d_h[i] == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(g.d_r[i] == 0.0);
        CHECK(g.d_t[i] == 0.0);
    }
}

TEST_CASE("central differences converge quadratically on a curved function") {
    // f4 itself is multilinear, so central differences have no truncation
    // error on it; the oracle's convergence order is checked on a curved
    // function where the O(step^2) term is real.
    oracle::ScoreFunction curved = [](std::span<const double> h, std::span<const double> r,
                                      std::span<const double> t) {
        double s = 0.0;
        for (std::size_t i = 0; i < h.size(); ++i)
            s += std::sin(h[i]) * std::sin(r[i]) * std::sin(t[i]);
        return s;
    };
    std::mt19937_64 rng(81);
    auto h = oracle::random_vector(rng, 8);
    auto r = oracle::random_vector(rng, 8);
    auto t = oracle::random_vector(rng, 8);

    TripleGradient analytic;
    analytic.assign_zero(8);
    for (std::size_t i = 0; i < 8; ++i) {
        analytic.d_h[i] = std::cos(h[i]) * std::sin(r[i]) * std::sin(t[i]);
        analytic.d_r[i] = std::sin(h[i]) * std::cos(r[i]) * std::sin(t[i]);
        analytic.d_t[i] = std::sin(h[i]) * std::sin(r[i]) * std::cos(t[i]);
    }

    double coarse = max_abs_err(oracle::numeric_gradient(curved, h, r, t, 1e-3), analytic);
    double fine = max_abs_err(oracle::numeric_gradient(curved, h, r, t, 5e-4), analytic);
    CHECK(coarse > 0.0);
    double ratio = coarse / fine;  // halving the step should quarter the error
    CHECK(ratio > 2.5);
    CHECK(ratio < 6.0);
}

TEST_CASE("on multilinear f4 central differences are already exact") {
    int k = 4;
    oracle::ScoreFunction f4 = [k](std::span<const double> h, std::span<const double> r,
                                   std::span<const double> t) {
        return score_f4(h, r, t, k);
    };
    std::mt19937_64 rng(82);
    auto h = oracle::random_vector(rng, 16);
    auto r = oracle::random_vector(rng, 16);
    auto t = oracle::random_vector(rng, 16);
    TripleGradient analytic;
    grad_f4(h, r, t, k, analytic);
    // no truncation term at either step; only rounding noise remains
    CHECK(max_abs_err(oracle::numeric_gradient(f4, h, r, t, 1e-5), analytic) <= 1e-8);
    CHECK(max_abs_err(oracle::numeric_gradient(f4, h, r, t, 5e-6), analytic) <= 1e-8);
}
