#ifndef RDTK_MODEL_HPP
#define RDTK_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "rdtk/cache_config.hpp"
#include "rdtk/errors.hpp"
#include "rdtk/histogram.hpp"
#include "rdtk/profiler.hpp"

namespace rdtk {

/// Row-normalized view of a triangular count table: rows[i][j] is the
/// conditional probability of second index j given first index i. An empty
/// inner vector marks a row with no observations.
using NormalizedRows = std::vector<std::vector<double>>;

inline NormalizedRows normalize_rows(const TriangularCounts& t) {
    NormalizedRows rows(t.dim());
    for (std::size_t i = 0; i < t.dim(); ++i) {
        const std::uint64_t sum = t.row_sum(i);
        if (sum == 0) continue;
        rows[i].resize(i + 1);
        for (std::size_t j = 0; j <= i; ++j)
            rows[i][j] = static_cast<double>(t.at(i, j)) / static_cast<double>(sum);
    }
    return rows;
}

/// Whether an epoch whose intervening references all missed the first level
/// still contributes to the second-level histogram. Counting such epochs
/// conserves mass (every first-level miss lands in some bin); skipping them
/// drops that mass instead.
enum class ZeroHitEpochs { kCount, kSkip };

/// Expected histogram of first-level misses by reuse distance: each RDH bin
/// scaled by the probability that a reference at that reuse distance has a
/// stack distance at or beyond the associativity. First touches always miss
/// and carry over into the cold counter.
inline RealHistogram compute_miss_rdh(const CountHistogram& rdh, const NormalizedRows& prs,
                                      std::uint32_t associativity) {
    RealHistogram out(rdh.cutoff());
    out.cold() = static_cast<double>(rdh.cold());
    for (std::size_t rd = 0; rd <= rdh.cutoff(); ++rd) {
        if (rdh[rd] == 0) continue;
        double hit_prob = 0.0;
        if (rd < prs.size() && !prs[rd].empty()) {
            const std::size_t top = std::min<std::size_t>(associativity, prs[rd].size());
            for (std::size_t sd = 0; sd < top; ++sd) hit_prob += prs[rd][sd];
        }
        out[rd] = static_cast<double>(rdh[rd]) * (1.0 - hit_prob);
    }
    return out;
}

/// Second-level reuse histogram under the same-set-count assumption: an
/// epoch of reuse distance rd whose intervening references scored h
/// first-level hits shrinks to distance rd - h once those hits are filtered
/// out. The overflow bin keeps its mass unshifted since the true distance
/// behind it is unknown. First-touch mass stays cold: a line's first miss is
/// also its first second-level access.
inline RealHistogram compute_l2_rdh(const RealHistogram& miss_rdh,
                                    const NormalizedRows& p_nhit,
                                    ZeroHitEpochs zero_hit = ZeroHitEpochs::kCount) {
    const std::size_t cutoff = miss_rdh.cutoff();
    RealHistogram out(cutoff);
    out.cold() = miss_rdh.cold();
    for (std::size_t rd = 0; rd < cutoff; ++rd) {
        const double mass = miss_rdh[rd];
        if (mass == 0.0) continue;
        if (rd >= p_nhit.size() || p_nhit[rd].empty()) {
            out[rd] += mass; // no hit statistics for this distance
            continue;
        }
        const auto& row = p_nhit[rd];
        const std::size_t first = zero_hit == ZeroHitEpochs::kSkip ? 1 : 0;
        for (std::size_t h = first; h < row.size(); ++h)
            if (row[h] != 0.0) out[rd - h] += mass * row[h];
    }
    out[cutoff] += miss_rdh[cutoff];
    return out;
}

/// Probability that one second-level access maps to the same second-level
/// set as a given earlier access, when first-level distances were measured
/// per first-level set. With power-of-two set counts this is exact.
inline double same_set_probability(const CacheConfig& l1, const CacheConfig& l2) {
    if (l1.line_size != l2.line_size)
        throw ConfigError("line sizes must match between cache levels");
    if (l1.sets > l2.sets)
        throw ConfigError("second level must have at least as many sets as the first");
    return static_cast<double>(l1.sets) / static_cast<double>(l2.sets);
}

namespace detail {

// Binomial(n, p) probabilities for k = 0..n via the ratio recurrence.
// When (1-p)^n underflows, the recurrence is seeded at the mode from
// lgamma instead so the high-probability bins stay accurate.
inline std::vector<double> binomial_row(std::size_t n, double p) {
    std::vector<double> b(n + 1, 0.0);
    if (n == 0 || p >= 1.0) {
        b[n] = 1.0;
        return b;
    }
    if (p <= 0.0) {
        b[0] = 1.0;
        return b;
    }
    const double ratio = p / (1.0 - p);
    const double log_b0 = static_cast<double>(n) * std::log1p(-p);
    std::size_t anchor = 0;
    double seed;
    if (log_b0 > -700.0) {
        seed = std::exp(log_b0);
    } else {
        anchor = std::min<std::size_t>(
            static_cast<std::size_t>(static_cast<double>(n + 1) * p), n);
        seed = std::exp(std::lgamma(static_cast<double>(n) + 1.0) -
                        std::lgamma(static_cast<double>(anchor) + 1.0) -
                        std::lgamma(static_cast<double>(n - anchor) + 1.0) +
                        static_cast<double>(anchor) * std::log(p) +
                        static_cast<double>(n - anchor) * std::log1p(-p));
    }
    b[anchor] = seed;
    double acc = seed;
    for (std::size_t k = anchor; k < n; ++k) {
        acc *= ratio * (static_cast<double>(n - k) / static_cast<double>(k + 1));
        b[k + 1] = acc;
    }
    acc = seed;
    for (std::size_t k = anchor; k > 0; --k) {
        acc *= (static_cast<double>(k) / static_cast<double>(n - k + 1)) / ratio;
        b[k - 1] = acc;
    }
    return b;
}

} // namespace detail

/// Binomial thinning: each of the n intervening accesses behind a
/// distance-n bin lands in the observer's set independently with
/// probability p, so bin n spreads over 0..n binomially. Cold mass is
/// unaffected. p == 1 returns the input bit for bit.
inline RealHistogram thin_by_sets(const RealHistogram& h, double p) {
    if (p <= 0.0 || p > 1.0)
        throw ConfigError("thinning probability must be in (0, 1]");
    if (p == 1.0) return h;
    RealHistogram out(h.cutoff());
    out.cold() = h.cold();
    for (std::size_t n = 0; n <= h.cutoff(); ++n) {
        const double mass = h[n];
        if (mass == 0.0) continue;
        const auto row = detail::binomial_row(n, p);
        for (std::size_t k = 0; k <= n; ++k)
            if (row[k] != 0.0) out[k] += mass * row[k];
    }
    return out;
}

/// Everything derivable from the first-level profile alone; shared across
/// all second-level configurations in a sweep.
struct ModelTables {
    RealHistogram miss_rdh;   // expected L1 misses by L1 reuse distance
    RealHistogram l2_rdh;     // L2 reuse histogram, same-set-count view
    ZeroHitEpochs zero_hit = ZeroHitEpochs::kCount;
};

inline ModelTables build_model_tables(const LocalityProfile& profile,
                                      ZeroHitEpochs zero_hit = ZeroHitEpochs::kCount) {
    ModelTables t;
    t.zero_hit = zero_hit;
    const NormalizedRows prs = normalize_rows(profile.rst);
    const NormalizedRows p_nhit = normalize_rows(profile.hit_rdh);
    t.miss_rdh = compute_miss_rdh(profile.rdh, prs, profile.l1_config.associativity);
    t.l2_rdh = compute_l2_rdh(t.miss_rdh, p_nhit, zero_hit);
    return t;
}

struct PredictionResult {
    CacheConfig l1_config;
    CacheConfig l2_config;
    RealHistogram miss_rdh;
    RealHistogram l2_rdh;      // before set-count correction
    RealHistogram real_l2_rdh; // after set-count correction
    double p_same = 1.0;
    double predicted_l2_accesses = 0.0;
};

inline PredictionResult predict_from_tables(const ModelTables& tables,
                                            const CacheConfig& l1_config,
                                            const CacheConfig& l2_config) {
    PredictionResult r{l1_config,
                       l2_config,
                       tables.miss_rdh,
                       tables.l2_rdh,
                       RealHistogram(tables.l2_rdh.cutoff()),
                       same_set_probability(l1_config, l2_config),
                       tables.miss_rdh.total()};
    r.real_l2_rdh = thin_by_sets(tables.l2_rdh, r.p_same);
    return r;
}

/// Predicted second-level reuse histogram for one L1 profile and one L2
/// geometry.
inline PredictionResult predict(const LocalityProfile& profile, const CacheConfig& l2_config,
                                ZeroHitEpochs zero_hit = ZeroHitEpochs::kCount) {
    return predict_from_tables(build_model_tables(profile, zero_hit), profile.l1_config,
                               l2_config);
}

} // namespace rdtk

#endif // RDTK_MODEL_HPP
