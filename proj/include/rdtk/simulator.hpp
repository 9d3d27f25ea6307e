#ifndef RDTK_SIMULATOR_HPP
#define RDTK_SIMULATOR_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <ranges>
#include <unordered_map>
#include <vector>

#include "rdtk/cache_config.hpp"
#include "rdtk/errors.hpp"
#include "rdtk/histogram.hpp"
#include "rdtk/rng.hpp"
#include "rdtk/trace.hpp"

namespace rdtk {

/// Ground truth from the functional two-level simulation: hit/miss counts
/// per level plus the measured distance histograms (the L1 histograms over
/// the full reference stream, the L2 reuse histogram over the L1-miss
/// stream, per-L2-set).
struct SimResult {
    CacheConfig l1_config;
    CacheConfig l2_config;
    std::uint64_t l1_accesses = 0;
    std::uint64_t l1_misses = 0;
    std::uint64_t l2_accesses = 0;
    std::uint64_t l2_misses = 0;
    double l1_miss_rate = 0.0;
    double l2_miss_rate = 0.0;
    CountHistogram measured_l2_rdh;
    CountHistogram measured_l1_rdh;
    CountHistogram measured_l1_sdh;
    std::uint64_t seed = 0;
};

namespace detail {

struct NullSimObserver {
    void operator()(std::size_t, const TraceRecord&, bool) const {}
};

// One set of a set-associative cache; lines kept in recency order
// (front = MRU).
class CacheSet {
public:
    bool access(std::uint64_t line, ReplacementPolicy policy, std::uint32_t ways,
                SplitMix64& rng) {
        auto it = std::find(lines_.begin(), lines_.end(), line);
        if (it != lines_.end()) {
            if (policy == ReplacementPolicy::kLru)
                std::rotate(lines_.begin(), it, it + 1);
            return true;
        }
        if (lines_.size() < ways) {
            lines_.insert(lines_.begin(), line);
        } else if (policy == ReplacementPolicy::kLru) {
            lines_.pop_back();
            lines_.insert(lines_.begin(), line);
        } else {
            // Random evicts a uniformly chosen way; no recency to maintain.
            lines_[rng.next_below(ways)] = line;
        }
        return false;
    }

private:
    std::vector<std::uint64_t> lines_;
};

// Reuse/stack distance measurement, deliberately organized differently from
// the profiler (recency keyed by last-access time instead of an MRU list)
// so the two act as independent oracles for each other.
class DistanceMeter {
public:
    struct Sample {
        std::uint64_t reuse_distance = 0;
        std::uint64_t stack_distance = 0;
        bool cold = true;
    };

    Sample access(std::uint64_t line, std::size_t cutoff, bool want_stack) {
        Sample s;
        auto it = last_.find(line);
        if (it != last_.end()) {
            s.cold = false;
            s.reuse_distance = std::min<std::uint64_t>(refs_ - it->second - 1, cutoff);
            if (want_stack) {
                // Lines whose last access is newer than ours are exactly the
                // distinct lines touched in between.
                std::uint64_t depth = 0;
                for (auto r = recency_.upper_bound(it->second);
                     r != recency_.end() && depth < cutoff; ++r)
                    ++depth;
                s.stack_distance = depth;
                recency_.erase(it->second);
            }
            it->second = refs_;
        } else {
            last_.emplace(line, refs_);
        }
        if (want_stack) recency_.emplace(refs_, line);
        ++refs_;
        return s;
    }

private:
    std::unordered_map<std::uint64_t, std::uint64_t> last_;
    std::map<std::uint64_t, std::uint64_t> recency_;
    std::uint64_t refs_ = 0;
};

} // namespace detail

/// Functional (timing-free) simulation of an LRU L1 in front of an LRU or
/// Random L2. Non-inclusive non-exclusive: fills go to both levels, each
/// level evicts independently, and an L2 eviction never invalidates L1.
/// LRU runs are seed-independent; Random runs depend only on the seed.
///
/// References with index < warmup_refs update caches and distance tracking
/// but are excluded from all counts and histograms.
template <std::ranges::input_range R, class Observer = detail::NullSimObserver>
    requires std::convertible_to<std::ranges::range_value_t<R>, TraceRecord>
SimResult simulate(R&& trace, const CacheConfig& l1_config, const CacheConfig& l2_config,
                   std::uint64_t seed = 0, std::size_t cutoff = kDefaultCutoff,
                   std::uint64_t warmup_refs = 0, Observer&& observe = {}) {
    if (l1_config.policy != ReplacementPolicy::kLru)
        throw ConfigError("simulator requires an LRU L1 cache");
    if (l1_config.line_size != l2_config.line_size)
        throw ConfigError("L1 and L2 line sizes must match");

    SimResult res{l1_config,
                  l2_config,
                  0,
                  0,
                  0,
                  0,
                  0.0,
                  0.0,
                  CountHistogram(cutoff),
                  CountHistogram(cutoff),
                  CountHistogram(cutoff),
                  seed};

    const std::uint32_t line_bits = log2_exact(l1_config.line_size);
    const std::uint64_t l1_mask = l1_config.sets - 1;
    const std::uint64_t l2_mask = l2_config.sets - 1;

    std::vector<detail::CacheSet> l1_sets(l1_config.sets);
    std::vector<detail::CacheSet> l2_sets(l2_config.sets);
    std::vector<detail::DistanceMeter> l1_meter(l1_config.sets);
    std::vector<detail::DistanceMeter> l2_meter(l2_config.sets);
    SplitMix64 rng(seed);

    std::size_t index = 0;
    for (const TraceRecord& rec : trace) {
        const std::uint64_t line = rec.address >> line_bits;
        const bool record = index >= warmup_refs;

        const auto l1_sample = l1_meter[line & l1_mask].access(line, cutoff, true);
        const bool l1_hit = l1_sets[line & l1_mask].access(
            line, ReplacementPolicy::kLru, l1_config.associativity, rng);

        if (record) {
            ++res.l1_accesses;
            if (l1_sample.cold) {
                res.measured_l1_rdh.add_cold();
                res.measured_l1_sdh.add_cold();
            } else {
                res.measured_l1_rdh.add(l1_sample.reuse_distance);
                res.measured_l1_sdh.add(l1_sample.stack_distance);
            }
        }

        if (!l1_hit) {
            const auto l2_sample = l2_meter[line & l2_mask].access(line, cutoff, false);
            const bool l2_hit = l2_sets[line & l2_mask].access(
                line, l2_config.policy, l2_config.associativity, rng);
            if (record) {
                ++res.l1_misses;
                ++res.l2_accesses;
                if (!l2_hit) ++res.l2_misses;
                if (l2_sample.cold)
                    res.measured_l2_rdh.add_cold();
                else
                    res.measured_l2_rdh.add(l2_sample.reuse_distance);
            }
        }

        observe(index, rec, l1_hit);
        ++index;
    }

    res.l1_miss_rate =
        res.l1_accesses ? static_cast<double>(res.l1_misses) / res.l1_accesses : 0.0;
    res.l2_miss_rate =
        res.l2_accesses ? static_cast<double>(res.l2_misses) / res.l2_accesses : 0.0;
    return res;
}

/// Order-preserving subsequence of the trace containing exactly the
/// references that miss the L1.
template <std::ranges::input_range R>
    requires std::convertible_to<std::ranges::range_value_t<R>, TraceRecord>
std::vector<TraceRecord> l1_miss_stream(R&& trace, const CacheConfig& l1_config) {
    std::vector<TraceRecord> misses;
    // The L2 side is irrelevant here; a 1-set dummy keeps the plumbing happy.
    const CacheConfig dummy_l2 =
        CacheConfig::make(static_cast<std::uint64_t>(l1_config.line_size) *
                              l1_config.associativity,
                          l1_config.line_size, l1_config.associativity,
                          ReplacementPolicy::kLru);
    simulate(std::forward<R>(trace), l1_config, dummy_l2, 0, kDefaultCutoff, 0,
             [&](std::size_t, const TraceRecord& rec, bool l1_hit) {
                 if (!l1_hit) misses.push_back(rec);
             });
    return misses;
}

} // namespace rdtk

#endif // RDTK_SIMULATOR_HPP
