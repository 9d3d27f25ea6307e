#ifndef RDTK_JSON_IO_HPP
#define RDTK_JSON_IO_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "rdtk/cache_config.hpp"
#include "rdtk/errors.hpp"
#include "rdtk/histogram.hpp"
#include "rdtk/metrics.hpp"
#include "rdtk/model.hpp"
#include "rdtk/profiler.hpp"
#include "rdtk/simulator.hpp"
#include "rdtk/solvers.hpp"

namespace rdtk {

// nlohmann::json keeps keys sorted, which together with its shortest
// round-trip float encoding makes every dump byte-reproducible.
using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

inline json to_json(const CacheConfig& c) {
    return json{{"capacity", c.capacity},
                {"line_size", c.line_size},
                {"associativity", c.associativity},
                {"sets", c.sets},
                {"policy", to_string(c.policy)}};
}

inline CacheConfig cache_config_from_json(const json& j) {
    const CacheConfig c = CacheConfig::make(
        j.at("capacity").get<std::uint64_t>(), j.at("line_size").get<std::uint32_t>(),
        j.at("associativity").get<std::uint32_t>(),
        parse_policy(j.at("policy").get<std::string>()));
    if (j.contains("sets") && j.at("sets").get<std::uint64_t>() != c.sets)
        throw IntegrityError("stored set count disagrees with the cache geometry");
    return c;
}

template <class Count>
json to_json(const BasicHistogram<Count>& h) {
    return json{{"cold", h.cold()}, {"bins", h.bins()}};
}

template <class Count>
BasicHistogram<Count> histogram_from_json(const json& j) {
    const auto& bins = j.at("bins");
    if (!bins.is_array() || bins.empty())
        throw IntegrityError("histogram bins must be a non-empty array");
    BasicHistogram<Count> h(bins.size() - 1);
    h.bins() = bins.get<std::vector<Count>>();
    h.cold() = j.at("cold").get<Count>();
    return h;
}

// Sparse triplet encoding [first, second, count], sorted by (first, second)
// with zero cells omitted.
inline json triangular_to_json(const TriangularCounts& t) {
    json cells = json::array();
    for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (t.at(i, j) != 0) cells.push_back(json::array({i, j, t.at(i, j)}));
    return cells;
}

inline TriangularCounts triangular_from_json(const json& j, std::size_t cutoff) {
    TriangularCounts t(cutoff);
    for (const auto& cell : j) {
        if (!cell.is_array() || cell.size() != 3)
            throw IntegrityError("triplet cells must be [first, second, count]");
        const auto a = cell[0].get<std::uint64_t>();
        const auto b = cell[1].get<std::uint64_t>();
        if (a > cutoff || b > a)
            throw IntegrityError("triplet indices outside the lower triangle");
        t.at(a, b) = cell[2].get<std::uint64_t>();
    }
    return t;
}

inline json to_json(const LocalityProfile& p) {
    return json{{"version", kFormatVersion},
                {"l1_config", to_json(p.l1_config)},
                {"cutoff", p.cutoff},
                {"total_refs", p.total_refs},
                {"cold", p.rdh.cold()},
                {"rdh", p.rdh.bins()},
                {"sdh", p.sdh.bins()},
                {"rst", triangular_to_json(p.rst)},
                {"hit_rdh", triangular_to_json(p.hit_rdh)}};
}

inline LocalityProfile profile_from_json(const json& j) {
    if (j.at("version").get<int>() != kFormatVersion)
        throw VersionError("unsupported profile format version " +
                           j.at("version").dump());
    const auto cutoff = j.at("cutoff").get<std::size_t>();
    LocalityProfile p{cache_config_from_json(j.at("l1_config")), cutoff,
                      CountHistogram(cutoff), CountHistogram(cutoff),
                      RstTable(cutoff),       HitRdhTable(cutoff),
                      j.at("total_refs").get<std::uint64_t>()};
    const auto& rdh = j.at("rdh");
    const auto& sdh = j.at("sdh");
    if (rdh.size() != cutoff + 1 || sdh.size() != cutoff + 1)
        throw IntegrityError("histogram length disagrees with the stored cutoff");
    p.rdh.bins() = rdh.get<std::vector<std::uint64_t>>();
    p.sdh.bins() = sdh.get<std::vector<std::uint64_t>>();
    p.rdh.cold() = j.at("cold").get<std::uint64_t>();
    p.sdh.cold() = p.rdh.cold();
    p.rst = triangular_from_json(j.at("rst"), cutoff);
    p.hit_rdh = triangular_from_json(j.at("hit_rdh"), cutoff);
    validate(p);
    return p;
}

inline json to_json(const MissRateReport& r) {
    return json{{"method", to_string(r.method)},
                {"miss_rate", r.miss_rate},
                {"misses", r.misses},
                {"accesses", r.accesses},
                {"solver_iterations", r.solver_iterations}};
}

inline json to_json(const PredictionResult& r, const MissRateReport& l2_rate) {
    return json{{"version", kFormatVersion},
                {"l1_config", to_json(r.l1_config)},
                {"l2_config", to_json(r.l2_config)},
                {"cutoff", r.real_l2_rdh.cutoff()},
                {"p_same", r.p_same},
                {"predicted_l2_accesses", r.predicted_l2_accesses},
                {"miss_rdh", to_json(r.miss_rdh)},
                {"l2_rdh", to_json(r.l2_rdh)},
                {"real_l2_rdh", to_json(r.real_l2_rdh)},
                {"l2_miss_rate", to_json(l2_rate)}};
}

inline json to_json(const SimResult& r) {
    return json{{"version", kFormatVersion},
                {"l1_config", to_json(r.l1_config)},
                {"l2_config", to_json(r.l2_config)},
                {"cutoff", r.measured_l2_rdh.cutoff()},
                {"seed", r.seed},
                {"l1_accesses", r.l1_accesses},
                {"l1_misses", r.l1_misses},
                {"l2_accesses", r.l2_accesses},
                {"l2_misses", r.l2_misses},
                {"l1_miss_rate", r.l1_miss_rate},
                {"l2_miss_rate", r.l2_miss_rate},
                {"measured_l2_rdh", to_json(r.measured_l2_rdh)},
                {"measured_l1_rdh", to_json(r.measured_l1_rdh)},
                {"measured_l1_sdh", to_json(r.measured_l1_sdh)}};
}

inline json to_json(const ComparisonReport& r) {
    return json{{"histogram_error", r.histogram_error},
                {"model_miss_rate", r.model_miss_rate},
                {"oracle_miss_rate", r.oracle_miss_rate},
                {"miss_rate_error", r.miss_rate_error}};
}

inline json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

inline void save_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

inline void save_profile(const std::filesystem::path& path, const LocalityProfile& p) {
    save_json(path, to_json(p));
}

inline LocalityProfile load_profile(const std::filesystem::path& path) {
    try {
        return profile_from_json(load_json(path));
    } catch (const json::exception& e) {
        throw IntegrityError("malformed profile " + path.string() + ": " + e.what());
    }
}

} // namespace rdtk

#endif // RDTK_JSON_IO_HPP
