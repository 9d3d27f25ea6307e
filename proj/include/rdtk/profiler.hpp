#ifndef RDTK_PROFILER_HPP
#define RDTK_PROFILER_HPP

#include <algorithm>
#include <cstdint>
#include <ranges>
#include <string>
#include <unordered_map>
#include <vector>

#include "rdtk/cache_config.hpp"
#include "rdtk/errors.hpp"
#include "rdtk/histogram.hpp"
#include "rdtk/trace.hpp"

namespace rdtk {

/// One-pass profiling output for a fixed L1 geometry: reuse and stack
/// distance histograms, the reuse-to-stack transfer table and the per-epoch
/// hit-count table, all accumulated linearly across cache sets. Reusable
/// for any number of downstream cache configurations.
struct LocalityProfile {
    CacheConfig l1_config;
    std::size_t cutoff = kDefaultCutoff;
    CountHistogram rdh;
    CountHistogram sdh;
    RstTable rst;
    HitRdhTable hit_rdh;
    std::uint64_t total_refs = 0; // references inside the statistics window
};

/// Per-reference classification, exposed to observers for cross-validation
/// against a functional cache simulation. Distances are cutoff-clamped.
struct RefClassification {
    std::uint64_t reuse_distance = 0;
    std::uint64_t stack_distance = 0;
    bool cold = false;
    bool l1_hit = false;
};

namespace detail {

struct NullProfileObserver {
    void operator()(std::size_t, const RefClassification&) const {}
};

struct TagState {
    std::uint64_t last_time;     // per-set reference count at the previous access
    std::uint64_t hits_at_last;  // per-set hit counter right after that access
};

/// All tracking is per cache set: references mapping to other sets never
// influence a set's distances.
struct SetState {
    std::unordered_map<std::uint64_t, TagState> tags;
    std::vector<std::uint64_t> mru; // front = most recent; capped at cutoff
    std::uint64_t refs = 0;
    std::uint64_t hits = 0;
};

} // namespace detail

/// Profiles a trace against an LRU L1 geometry.
///
/// Per reference, with set = line mod sets and tag = line / sets:
///   - reuse distance  = references to that set since the previous access to
///     the same line,
///   - stack distance  = distinct lines referenced in that set in between,
///   - first touches count as cold,
///   - finite distances >= cutoff clamp into the cutoff bin.
/// The reference is an L1 hit exactly when its per-set stack distance is
/// below the associativity (exact for LRU). At each epoch close the table
/// of in-epoch hit counts is updated from a per-set monotone hit counter,
/// so closing an epoch costs O(1) beyond the distance extraction itself.
///
/// References with index < warmup_refs update all tracking state but are
/// excluded from the histograms; total_refs counts only recorded ones.
template <std::ranges::input_range R, class Observer = detail::NullProfileObserver>
    requires std::convertible_to<std::ranges::range_value_t<R>, TraceRecord>
LocalityProfile profile(R&& trace, const CacheConfig& l1_config,
                        std::size_t cutoff = kDefaultCutoff,
                        std::uint64_t warmup_refs = 0, Observer&& observe = {}) {
    if (l1_config.policy != ReplacementPolicy::kLru)
        throw ConfigError("profiling requires an LRU L1 cache");
    if (l1_config.associativity > cutoff)
        throw ConfigError("L1 associativity exceeds the distance cutoff");

    LocalityProfile p{l1_config, cutoff, CountHistogram(cutoff), CountHistogram(cutoff),
                      RstTable(cutoff), HitRdhTable(cutoff), 0};

    const std::uint32_t line_bits = log2_exact(l1_config.line_size);
    const std::uint64_t set_mask = l1_config.sets - 1;
    const std::uint32_t set_bits = log2_exact(l1_config.sets);
    const std::uint32_t assoc = l1_config.associativity;

    std::vector<detail::SetState> sets(l1_config.sets);

    std::size_t index = 0;
    for (const TraceRecord& rec : trace) {
        const std::uint64_t line = rec.address >> line_bits;
        auto& st = sets[line & set_mask];
        const std::uint64_t tag = line >> set_bits;
        const bool record = index >= warmup_refs;

        RefClassification cls;
        auto [it, first_touch] = st.tags.try_emplace(tag);
        if (first_touch) {
            cls.cold = true;
            if (record) {
                p.rdh.add_cold();
                p.sdh.add_cold();
                ++p.total_refs;
            }
        } else {
            const std::uint64_t rd =
                std::min<std::uint64_t>(st.refs - it->second.last_time - 1, cutoff);
            auto pos = std::find(st.mru.begin(), st.mru.end(), tag);
            // A tag absent from the capped recency list sits deeper than
            // cutoff distinct lines, which clamps anyway.
            const std::uint64_t sd =
                pos == st.mru.end()
                    ? cutoff
                    : static_cast<std::uint64_t>(pos - st.mru.begin());
            const std::uint64_t epoch_hits =
                std::min<std::uint64_t>(st.hits - it->second.hits_at_last, cutoff);
            cls.reuse_distance = rd;
            cls.stack_distance = sd;
            cls.l1_hit = sd < assoc;
            if (record) {
                p.rdh.add(rd);
                p.sdh.add(sd);
                p.rst.at(rd, sd) += 1;
                p.hit_rdh.at(rd, epoch_hits) += 1;
                ++p.total_refs;
            }
            if (pos != st.mru.end()) st.mru.erase(pos);
        }

        observe(index, cls);

        if (cls.l1_hit) ++st.hits;
        st.mru.insert(st.mru.begin(), tag);
        if (st.mru.size() > cutoff) st.mru.pop_back();
        it->second = {st.refs, st.hits};
        ++st.refs;
        ++index;
    }
    if (warmup_refs > index)
        throw ConfigError("warmup of " + std::to_string(warmup_refs) +
                          " references exceeds the trace length of " +
                          std::to_string(index));
    return p;
}

/// Checks every cross-structure invariant; throws IntegrityError on the
/// first violation. Used on load and by tests.
inline void validate(const LocalityProfile& p) {
    const std::size_t dim = p.cutoff + 1;
    if (p.rdh.bins().size() != dim || p.sdh.bins().size() != dim ||
        p.rst.dim() != dim || p.hit_rdh.dim() != dim)
        throw IntegrityError("profile structures disagree on cutoff");
    if (p.rdh.cold() != p.sdh.cold())
        throw IntegrityError("rdh and sdh disagree on the cold count");
    if (p.rdh.finite_total() != p.sdh.finite_total())
        throw IntegrityError("rdh and sdh disagree on total finite references");
    if (p.rdh.total() != p.total_refs)
        throw IntegrityError("total_refs does not match histogram mass");
    for (std::size_t i = 0; i < dim; ++i) {
        if (p.rst.row_sum(i) != p.rdh[i])
            throw IntegrityError("rst row " + std::to_string(i) +
                                 " does not sum to the rdh bin");
        if (p.hit_rdh.row_sum(i) != p.rdh[i])
            throw IntegrityError("hit_rdh row " + std::to_string(i) +
                                 " does not sum to the rdh bin");
        for (std::size_t j = i + 1; j < dim; ++j) {
            if (p.rst.at(i, j) != 0)
                throw IntegrityError("rst has mass above the diagonal at (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
            if (p.hit_rdh.at(i, j) != 0)
                throw IntegrityError("hit_rdh has mass above the diagonal at (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
}

} // namespace rdtk

#endif // RDTK_PROFILER_HPP
