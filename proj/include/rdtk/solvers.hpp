#ifndef RDTK_SOLVERS_HPP
#define RDTK_SOLVERS_HPP

#include <cmath>
#include <cstdint>
#include <string>

#include "rdtk/errors.hpp"
#include "rdtk/histogram.hpp"

namespace rdtk {

enum class MissRateMethod { kStatCache, kStatStack, kDirectSdh };

inline std::string to_string(MissRateMethod m) {
    switch (m) {
        case MissRateMethod::kStatCache: return "statcache";
        case MissRateMethod::kStatStack: return "statstack";
        case MissRateMethod::kDirectSdh: return "direct_sdh";
    }
    return "unknown";
}

struct MissRateReport {
    double miss_rate = 0.0;
    double misses = 0.0;
    double accesses = 0.0;
    MissRateMethod method = MissRateMethod::kDirectSdh;
    int solver_iterations = 0;
};

/// Miss rate of an LRU cache straight from a stack distance histogram:
/// a reference hits exactly when its stack distance is below the
/// associativity, and first touches always miss.
inline MissRateReport lru_miss_rate_from_sdh(const RealHistogram& sdh,
                                             std::uint32_t associativity,
                                             MissRateMethod method = MissRateMethod::kDirectSdh) {
    MissRateReport rep;
    rep.method = method;
    rep.accesses = sdh.total();
    if (rep.accesses <= 0.0) return rep;
    double misses = sdh.cold();
    for (std::size_t d = associativity; d <= sdh.cutoff(); ++d) misses += sdh[d];
    rep.misses = misses;
    rep.miss_rate = misses / rep.accesses;
    return rep;
}

/// Miss rate of a random-replacement cache from a reuse distance histogram.
/// With per-set distances, one set holds `associativity` lines and evicts a
/// uniformly random one on each miss, so a line survives an epoch of n
/// intervening misses with probability (1 - 1/A)^n. Writing R for the miss
/// rate and N for the references, the misses balance as
///
///   R * N = cold + sum_x rdh(x) * (1 - (1 - 1/A)^(x * R))
///
/// whose right side, divided by N, is a concave increasing map of R. The
/// fixed point is found by bisecting on the sign of (map(R) - R), which
/// keeps the bracket on the largest root.
inline MissRateReport statcache_miss_rate(const RealHistogram& rdh,
                                          std::uint32_t associativity,
                                          double tolerance = 1e-9, int max_iterations = 200) {
    if (associativity < 1) throw ConfigError("associativity must be at least 1");
    MissRateReport rep;
    rep.method = MissRateMethod::kStatCache;
    rep.accesses = rdh.total();
    if (rep.accesses <= 0.0) return rep;

    const double log_survive = std::log1p(-1.0 / static_cast<double>(associativity));
    auto expected_miss_fraction = [&](double r) {
        double misses = rdh.cold();
        for (std::size_t x = 1; x <= rdh.cutoff(); ++x) {
            if (rdh[x] == 0.0) continue;
            const double evict_prob =
                associativity == 1
                    ? (r > 0.0 ? 1.0 : 0.0)
                    : -std::expm1(static_cast<double>(x) * r * log_survive);
            misses += rdh[x] * evict_prob;
        }
        return misses / rep.accesses;
    };

    double lo = 0.0, hi = 1.0;
    int iterations = 0;
    while (hi - lo > tolerance && iterations < max_iterations) {
        const double mid = 0.5 * (lo + hi);
        if (expected_miss_fraction(mid) >= mid)
            lo = mid;
        else
            hi = mid;
        ++iterations;
    }
    rep.solver_iterations = iterations;
    rep.miss_rate = 0.5 * (lo + hi);
    rep.misses = rep.miss_rate * rep.accesses;
    return rep;
}

/// Expected stack distance histogram from a reuse distance histogram.
/// An intervening reference contributes a distinct line exactly when its
/// own next reuse lands past the end of the epoch, which happens with
/// probability P(reuse distance >= remaining span). Summing that survival
/// function over the epoch gives the expected number of distinct lines:
///
///   ES(r) = sum_{j=1..r} P(reuse distance >= j)
///
/// Each bin's mass moves to the integer bin containing its expected stack
/// distance. First touches stay first touches.
inline RealHistogram statstack_expected_sdh(const RealHistogram& rdh) {
    const std::size_t cutoff = rdh.cutoff();
    RealHistogram sdh(cutoff);
    sdh.cold() = rdh.cold();
    const double total = rdh.total();
    if (total <= 0.0) return sdh;

    // suffix[j] = mass with reuse distance >= j; cold counts as infinite.
    std::vector<double> suffix(cutoff + 2, 0.0);
    suffix[cutoff + 1] = rdh.cold();
    for (std::size_t j = cutoff + 1; j > 0; --j)
        suffix[j - 1] = suffix[j] + rdh[j - 1];

    double expected = 0.0;
    sdh.add(0, rdh[0]);
    for (std::size_t r = 1; r <= cutoff; ++r) {
        expected += suffix[r] / total;
        if (rdh[r] == 0.0) continue;
        const auto bin = static_cast<std::uint64_t>(std::floor(expected + 1e-9));
        sdh.add(bin, rdh[r]);
    }
    return sdh;
}

/// Miss rate of an LRU cache from a reuse distance histogram, via the
/// expected stack distance transform.
inline MissRateReport statstack_miss_rate(const RealHistogram& rdh,
                                          std::uint32_t associativity) {
    return lru_miss_rate_from_sdh(statstack_expected_sdh(rdh), associativity,
                                  MissRateMethod::kStatStack);
}

} // namespace rdtk

#endif // RDTK_SOLVERS_HPP
