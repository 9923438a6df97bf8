#pragma once

#include <cassert>
#include <span>
#include <vector>

#include "seek/model.hpp"
#include "seek/triple.hpp"

namespace seek {

/// Sign of the (x, y) dot-product group: -1 iff x is odd and x + y >= k.
/// Even segments of r keep one sign either way round (symmetry); odd
/// segments flip it (antisymmetry).
inline int sign_coeff(int x, int y, int k) {
    assert(x >= 0 && x < k && y >= 0 && y < k);
    return (x % 2 == 1 && x + y >= k) ? -1 : 1;
}

/// Tail segment paired with (r_x, h_y): y for even x, (x + y) mod k for odd x.
inline int tail_index(int x, int y, int k) {
    assert(x >= 0 && x < k && y >= 0 && y < k);
    return (x % 2 == 0) ? y : (x + y) % k;
}

/// Multi-linear dot product sum_i r_i * h_i * t_i.
/// Each term multiplies h*t first, so the value is bit-exact under h <-> t.
double score_f1(std::span<const double> h, std::span<const double> r,
                std::span<const double> t);

/// Full segment interaction: sum over all (x, y, w) of <r_x, h_y, t_w>.
double score_f2(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, int k);

/// Signed segment interaction: sum over (x, y, w) of s_{x,y} <r_x, h_y, t_w>.
double score_f3(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, int k);

/// Reduced signed interaction: sum over (x, y) of s_{x,y} <r_x, h_y, t_w(x,y)>,
/// k^2 dot products of width d/k, O(kd) total. Terms accumulate x-major,
/// then y, then by within-segment index, so results are deterministic.
double score_f4(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, int k);

double score_f4(const Triple& triple, const EmbeddingTable& table,
                const ModelConfig& cfg);

/// Exact partial derivatives of score_f4 with respect to h, r and t.
struct TripleGradient {
    std::vector<double> d_h;
    std::vector<double> d_r;
    std::vector<double> d_t;

    void assign_zero(std::size_t d) {
        d_h.assign(d, 0.0);
        d_r.assign(d, 0.0);
        d_t.assign(d, 0.0);
    }
};

/// Writes the three gradients into `out` (resized here; every coordinate
/// is overwritten, so the buffer may be reused across calls).
///   df/dr_x = sum_y s_{x,y} (h_y ⊙ t_w),
///   df/dh_y = sum_x s_{x,y} (r_x ⊙ t_w),
///   df/dt_w = sum over (x,y) with w(x,y) == w of s_{x,y} (r_x ⊙ h_y).
void grad_f4(std::span<const double> h, std::span<const double> r,
             std::span<const double> t, int k, TripleGradient& out);

TripleGradient grad_f4(const Triple& triple, const EmbeddingTable& table,
                       const ModelConfig& cfg);

/// Numerically stable sigmoid; never overflows, saturates cleanly.
double probability(double score);

}  // namespace seek
