#ifndef RDTK_CACHE_CONFIG_HPP
#define RDTK_CACHE_CONFIG_HPP

#include <cstdint>
#include <string>

#include "rdtk/errors.hpp"

namespace rdtk {

enum class ReplacementPolicy { kLru, kRandom };

inline std::string to_string(ReplacementPolicy p) {
    return p == ReplacementPolicy::kLru ? "lru" : "random";
}

inline ReplacementPolicy parse_policy(const std::string& s) {
    if (s == "lru") return ReplacementPolicy::kLru;
    if (s == "random") return ReplacementPolicy::kRandom;
    throw ConfigError("unknown replacement policy '" + s + "' (expected lru or random)");
}

constexpr bool is_power_of_two(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

inline std::uint32_t log2_exact(std::uint64_t v) {
    std::uint32_t bits = 0;
    while (v > 1) {
        v >>= 1;
        ++bits;
    }
    return bits;
}

struct CacheConfig {
    std::uint64_t capacity = 0;      // bytes
    std::uint32_t line_size = 64;    // bytes, power of two
    std::uint32_t associativity = 1; // ways
    std::uint64_t sets = 0;          // capacity / (line_size * associativity)
    ReplacementPolicy policy = ReplacementPolicy::kLru;

    /// Derives the set count and validates the geometry:
    /// capacity = sets * associativity * line_size exactly, with sets and
    /// line_size powers of two.
    static CacheConfig make(std::uint64_t capacity, std::uint32_t line_size,
                            std::uint32_t associativity,
                            ReplacementPolicy policy = ReplacementPolicy::kLru) {
        if (line_size == 0 || !is_power_of_two(line_size))
            throw ConfigError("line size must be a power of two, got " +
                              std::to_string(line_size));
        if (associativity == 0)
            throw ConfigError("associativity must be at least 1");
        const std::uint64_t way_bytes =
            static_cast<std::uint64_t>(line_size) * associativity;
        if (capacity == 0 || capacity % way_bytes != 0)
            throw ConfigError("capacity " + std::to_string(capacity) +
                              " is not a multiple of line_size*associativity (" +
                              std::to_string(way_bytes) + ")");
        CacheConfig c;
        c.capacity = capacity;
        c.line_size = line_size;
        c.associativity = associativity;
        c.sets = capacity / way_bytes;
        c.policy = policy;
        if (!is_power_of_two(c.sets))
            throw ConfigError("derived set count " + std::to_string(c.sets) +
                              " is not a power of two");
        return c;
    }

    std::string label() const {
        std::string s = std::to_string(capacity) + "B_" +
                        std::to_string(associativity) + "way_" + to_string(policy);
        if (capacity % (1024 * 1024) == 0)
            s = std::to_string(capacity / (1024 * 1024)) + "MB_" +
                std::to_string(associativity) + "way_" + to_string(policy);
        else if (capacity % 1024 == 0)
            s = std::to_string(capacity / 1024) + "KB_" +
                std::to_string(associativity) + "way_" + to_string(policy);
        return s;
    }

    bool operator==(const CacheConfig&) const = default;
};

} // namespace rdtk

#endif // RDTK_CACHE_CONFIG_HPP
