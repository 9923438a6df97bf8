// Brute-force references used only by tests. Everything here recomputes the
// definitions from scratch (own sign/index logic, literal loops, library
// complex arithmetic) and shares no code with the main scoring path.
#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "seek/dataset.hpp"
#include "seek/evaluator.hpp"
#include "seek/model.hpp"
#include "seek/scoring.hpp"

namespace oracle {

struct OracleTolerance {
    double abs_tol = 1e-12;
    double grad_rel_tol = 1e-4;
    double fd_step = 1e-5;
};

/// Literal triple loop over (x, y, w) with the sign rule inlined.
double naive_f3(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, int k);

/// Literal double loop over (x, y) with sign and tail-pairing rules inlined.
double naive_f4(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, int k);

/// Re(<h, r, conj(t)>) via std::complex; first half of each vector holds the
/// real parts, second half the imaginary parts. Requires even dimension.
double complex_reference(std::span<const double> h, std::span<const double> r,
                         std::span<const double> t);

using ScoreFunction = std::function<double(
    std::span<const double>, std::span<const double>, std::span<const double>)>;

/// Central differences (f(x+e) - f(x-e)) / 2e per coordinate of h, r and t.
seek::TripleGradient numeric_gradient(const ScoreFunction& f,
                                      std::span<const double> h,
                                      std::span<const double> r,
                                      std::span<const double> t, double fd_step);

/// Straightforward full scan: scores the test triple and every candidate
/// replacement with naive_f4, applies the filter rule, counts strictly
/// greater. Small KGs only.
int exhaustive_rank(const seek::Triple& test, seek::Side side,
                    const seek::EmbeddingTable& table, const seek::ModelConfig& cfg,
                    const seek::FilterIndex* filter);

/// Uniform values in [-1, 1]: keeps products well-conditioned for the
/// 1e-12 absolute comparisons.
std::vector<double> random_vector(std::mt19937_64& rng, std::size_t d);

}  // namespace oracle
