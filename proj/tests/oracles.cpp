#include "oracles.hpp"

#include <cassert>
#include <complex>
#include <stdexcept>

namespace oracle {

namespace {

// Own copies of the segment rules, written from the definitions.
int sign_of(int x, int y, int k) { return x % 2 == 1 && x + y >= k ? -1 : 1; }
int tail_of(int x, int y, int k) { return x % 2 == 0 ? y : (x + y) % k; }

// Deliberately associates (r*h)*t, unlike the main path's r*(h*t), so the
// two sides of every comparison take different rounding routes.
double dot3(const double* r, const double* h, const double* t, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (r[i] * h[i]) * t[i];
    return s;
}

std::size_t seg_width(std::size_t d, int k) {
    if (k < 1 || d % static_cast<std::size_t>(k) != 0)
        throw std::invalid_argument("oracle: k must divide dim");
    return d / static_cast<std::size_t>(k);
}

}  // namespace

double naive_f3(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, int k) {
    std::size_t seg = seg_width(r.size(), k);
    double score = 0.0;
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y)
            for (int w = 0; w < k; ++w)
                score += sign_of(x, y, k) * dot3(r.data() + x * seg, h.data() + y * seg,
                                                 t.data() + w * seg, seg);
    return score;
}

double naive_f4(std::span<const double> h, std::span<const double> r,
                std::span<const double> t, int k) {
    std::size_t seg = seg_width(r.size(), k);
    double score = 0.0;
    for (int x = 0; x < k; ++x)
        for (int y = 0; y < k; ++y)
            score += sign_of(x, y, k) *
                     dot3(r.data() + x * seg, h.data() + y * seg,
                          t.data() + tail_of(x, y, k) * seg, seg);
    return score;
}

double complex_reference(std::span<const double> h, std::span<const double> r,
                         std::span<const double> t) {
    if (h.size() % 2 != 0) throw std::invalid_argument("oracle: dimension must be even");
    std::size_t n = h.size() / 2;
    std::complex<double> sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        std::complex<double> hj(h[j], h[n + j]);
        std::complex<double> rj(r[j], r[n + j]);
        std::complex<double> tj(t[j], t[n + j]);
        sum += hj * rj * std::conj(tj);
    }
    return sum.real();
}

seek::TripleGradient numeric_gradient(const ScoreFunction& f,
                                      std::span<const double> h,
                                      std::span<const double> r,
                                      std::span<const double> t, double fd_step) {
    assert(fd_step > 0.0);
    std::vector<double> hv(h.begin(), h.end());
    std::vector<double> rv(r.begin(), r.end());
    std::vector<double> tv(t.begin(), t.end());

    seek::TripleGradient g;
    g.assign_zero(h.size());

    auto central = [&](std::vector<double>& vec, std::size_t i) {
        double saved = vec[i];
        vec[i] = saved + fd_step;
        double up = f(hv, rv, tv);
        vec[i] = saved - fd_step;
        double down = f(hv, rv, tv);
        vec[i] = saved;
        return (up - down) / (2.0 * fd_step);
    };

    for (std::size_t i = 0; i < h.size(); ++i) {
        g.d_h[i] = central(hv, i);
        g.d_r[i] = central(rv, i);
        g.d_t[i] = central(tv, i);
    }
    return g;
}

int exhaustive_rank(const seek::Triple& test, seek::Side side,
                    const seek::EmbeddingTable& table, const seek::ModelConfig& cfg,
                    const seek::FilterIndex* filter) {
    auto row = [&](seek::EntityId id) {
        return table.entities.row(static_cast<std::size_t>(id));
    };
    auto rel = table.relations.row(static_cast<std::size_t>(test.r));

    seek::EntityId truth = side == seek::Side::tail ? test.t : test.h;
    double true_score = side == seek::Side::tail
                            ? naive_f4(row(test.h), rel, row(truth), cfg.k)
                            : naive_f4(row(truth), rel, row(test.t), cfg.k);

    int rank = 1;
    for (seek::EntityId c = 0; c < static_cast<seek::EntityId>(table.entities.rows); ++c) {
        if (c == truth) continue;
        seek::Triple candidate = test;
        if (side == seek::Side::tail)
            candidate.t = c;
        else
            candidate.h = c;
        if (filter != nullptr && filter->contains(candidate)) continue;
        double score = naive_f4(row(candidate.h), rel, row(candidate.t), cfg.k);
        if (score > true_score) ++rank;
    }
    return rank;
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t d) {
    std::vector<double> v(d);
    for (double& x : v)
        x = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
    return v;
}

}  // namespace oracle
