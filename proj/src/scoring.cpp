#include "seek/scoring.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace seek {

namespace {

void check_segments(std::size_t d, int k) {
    if (k < 1 || d % static_cast<std::size_t>(k) != 0)
        throw std::invalid_argument("k must divide dim: k=" + std::to_string(k) +
                                    ", dim=" + std::to_string(d));
}

void check_entity(const Matrix& m, EntityId id) {
    if (id < 0 || static_cast<std::size_t>(id) >= m.rows)
        throw std::out_of_range("entity id " + std::to_string(id) + " out of range");
}

void check_relation(const Matrix& m, RelationId id) {
    if (id < 0 || static_cast<std::size_t>(id) >= m.rows)
        throw std::out_of_range("relation id " + std::to_string(id) + " out of range");
}

}  // namespace

// Each term groups h*t first; the product is then bit-exact under swapping
// h and t, which the reversal-identity contracts rely on.
double score_f1(std::span<const double> h, std::span<const double> r,
                std::span<const double> t) {
    assert(h.size() == r.size() && r.size() == t.size());
    double score = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) score += r[i] * (h[i] * t[i]);
    return score;
}

// The unsigned triple sum factorizes through per-index segment sums:
// sum_{x,y,w} <r_x, h_y, t_w> = sum_i R(i) * H(i) * T(i) with
// R(i) = sum_x r_x[i] etc., which drops the cost from O(k^2 d) to O(d).
double score_f2(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, int k) {
    assert(h.size() == r.size() && r.size() == t.size());
    check_segments(r.size(), k);
    std::size_t seg = r.size() / static_cast<std::size_t>(k);

    double score = 0.0;
    for (std::size_t i = 0; i < seg; ++i) {
        double rs = 0.0, hs = 0.0, ts = 0.0;
        for (int x = 0; x < k; ++x) {
            std::size_t off = static_cast<std::size_t>(x) * seg + i;
            rs += r[off];
            hs += h[off];
            ts += t[off];
        }
        score += rs * (hs * ts);
    }
    return score;
}

// The tail index w is unconstrained in every term, so the sum over w is
// folded into a per-index tail presum; O(kd) instead of the literal O(k^2 d).
double score_f3(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, int k) {
    assert(h.size() == r.size() && r.size() == t.size());
    check_segments(r.size(), k);
    std::size_t seg = r.size() / static_cast<std::size_t>(k);

    std::vector<double> tail_sum(seg, 0.0);
    for (int w = 0; w < k; ++w) {
        const double* tw = t.data() + static_cast<std::size_t>(w) * seg;
        for (std::size_t i = 0; i < seg; ++i) tail_sum[i] += tw[i];
    }

    double score = 0.0;
    for (int x = 0; x < k; ++x) {
        const double* rx = r.data() + static_cast<std::size_t>(x) * seg;
        for (int y = 0; y < k; ++y) {
            const double* hy = h.data() + static_cast<std::size_t>(y) * seg;
            double s = static_cast<double>(sign_coeff(x, y, k));
            double dot = 0.0;
            for (std::size_t i = 0; i < seg; ++i) dot += rx[i] * (hy[i] * tail_sum[i]);
            score += s * dot;
        }
    }
    return score;
}

double score_f4(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, int k) {
    assert(h.size() == r.size() && r.size() == t.size());
    check_segments(r.size(), k);
    std::size_t seg = r.size() / static_cast<std::size_t>(k);

    // Fixed order: x-major, then y, then within-segment index.
    double score = 0.0;
    for (int x = 0; x < k; ++x) {
        const double* rx = r.data() + static_cast<std::size_t>(x) * seg;
        for (int y = 0; y < k; ++y) {
            const double* hy = h.data() + static_cast<std::size_t>(y) * seg;
            const double* tw = t.data() + static_cast<std::size_t>(tail_index(x, y, k)) * seg;
            double s = static_cast<double>(sign_coeff(x, y, k));
            double dot = 0.0;
            for (std::size_t i = 0; i < seg; ++i) dot += rx[i] * (hy[i] * tw[i]);
            score += s * dot;
        }
    }
    return score;
}

double score_f4(const Triple& triple, const EmbeddingTable& table,
                const ModelConfig& cfg) {
    check_entity(table.entities, triple.h);
    check_entity(table.entities, triple.t);
    check_relation(table.relations, triple.r);
    return score_f4(table.entities.row(static_cast<std::size_t>(triple.h)),
                    table.relations.row(static_cast<std::size_t>(triple.r)),
                    table.entities.row(static_cast<std::size_t>(triple.t)), cfg.k);
}

void grad_f4(std::span<const double> h, std::span<const double> r,
             std::span<const double> t, int k, TripleGradient& out) {
    assert(h.size() == r.size() && r.size() == t.size());
    check_segments(r.size(), k);
    std::size_t seg = r.size() / static_cast<std::size_t>(k);
    out.d_h.resize(r.size());
    out.d_r.resize(r.size());
    out.d_t.resize(r.size());

    // The x = 0 terms have w == y and s == +1, so that pass writes every
    // coordinate of d_h and d_t (and segment 0 of d_r) exactly once and
    // doubles as the initialization; no zero fill needed.
    for (int y = 0; y < k; ++y) {
        std::size_t yo = static_cast<std::size_t>(y) * seg;
        for (std::size_t i = 0; i < seg; ++i) {
            out.d_h[yo + i] = r[i] * t[yo + i];
            out.d_t[yo + i] = r[i] * h[yo + i];
            double pair = h[yo + i] * t[yo + i];
            if (y == 0)
                out.d_r[i] = pair;
            else
                out.d_r[i] += pair;
        }
    }

    for (int x = 1; x < k; ++x) {
        std::size_t xo = static_cast<std::size_t>(x) * seg;
        for (int y = 0; y < k; ++y) {
            std::size_t yo = static_cast<std::size_t>(y) * seg;
            std::size_t wo = static_cast<std::size_t>(tail_index(x, y, k)) * seg;
            double s = static_cast<double>(sign_coeff(x, y, k));
            for (std::size_t i = 0; i < seg; ++i) {
                double term = s * (h[yo + i] * t[wo + i]);
                if (y == 0)
                    out.d_r[xo + i] = term;
                else
                    out.d_r[xo + i] += term;
                out.d_h[yo + i] += s * (r[xo + i] * t[wo + i]);
                out.d_t[wo + i] += s * (r[xo + i] * h[yo + i]);
            }
        }
    }
}

TripleGradient grad_f4(const Triple& triple, const EmbeddingTable& table,
                       const ModelConfig& cfg) {
    check_entity(table.entities, triple.h);
    check_entity(table.entities, triple.t);
    check_relation(table.relations, triple.r);
    TripleGradient g;
    grad_f4(table.entities.row(static_cast<std::size_t>(triple.h)),
            table.relations.row(static_cast<std::size_t>(triple.r)),
            table.entities.row(static_cast<std::size_t>(triple.t)), cfg.k, g);
    return g;
}

double probability(double score) {
    if (score >= 0.0) {
        return 1.0 / (1.0 + std::exp(-score));
    }
    double e = std::exp(score);
    return e / (1.0 + e);
}

}  // namespace seek
