#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "rdtk/json_io.hpp"

using namespace rdtk;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "rdtk_json_tests";
    fs::create_directories(dir);
    return dir / name;
}

LocalityProfile sample_profile() {
    std::vector<TraceRecord> trace;
    for (std::uint64_t i = 0; i < 4000; ++i)
        trace.push_back({((i * 37 + (i % 5) * 11) % 512) * 64});
    return profile(trace, CacheConfig::make(8 * 1024, 64, 2), 64);
}

} // namespace

TEST_CASE("cache config round-trips") {
    const auto c = CacheConfig::make(64 * 1024, 64, 8, ReplacementPolicy::kRandom);
    const auto j = to_json(c);
    CHECK(j.at("sets") == 128);
    const auto back = cache_config_from_json(j);
    CHECK(back == c);

    auto bad = j;
    bad["sets"] = 64;
    CHECK_THROWS_AS(cache_config_from_json(bad), IntegrityError);
}

TEST_CASE("histograms round-trip through JSON") {
    CountHistogram h(16);
    h.add(3, 7);
    h.add(16, 2);
    h.add_cold(5);
    const auto back = histogram_from_json<std::uint64_t>(to_json(h));
    CHECK(back == h);

    RealHistogram r(4);
    r[2] = 0.125;
    r.cold() = 2.5;
    CHECK(histogram_from_json<double>(to_json(r)) == r);
}

TEST_CASE("triplet cells are sorted and zero-omitted") {
    TriangularCounts t(8);
    t.at(5, 2) = 9;
    t.at(1, 0) = 4;
    t.at(5, 0) = 1;
    const auto j = triangular_to_json(t);
    REQUIRE(j.size() == 3);
    CHECK(j[0] == json::array({1, 0, 4}));
    CHECK(j[1] == json::array({5, 0, 1}));
    CHECK(j[2] == json::array({5, 2, 9}));

    const auto back = triangular_from_json(j, 8);
    CHECK(back == t);
}

TEST_CASE("triplet validation rejects bad cells") {
    CHECK_THROWS_AS(triangular_from_json(json::array({json::array({1, 2})}), 8),
                    IntegrityError); // wrong arity
    CHECK_THROWS_AS(triangular_from_json(json::array({json::array({2, 3, 1})}), 8),
                    IntegrityError); // above the diagonal
    CHECK_THROWS_AS(triangular_from_json(json::array({json::array({9, 0, 1})}), 8),
                    IntegrityError); // beyond the cutoff
}

TEST_CASE("profile save and load round-trips exactly") {
    const auto p = sample_profile();
    const auto path = temp_file("profile.json");
    save_profile(path, p);
    const auto back = load_profile(path);
    CHECK(back.l1_config == p.l1_config);
    CHECK(back.cutoff == p.cutoff);
    CHECK(back.total_refs == p.total_refs);
    CHECK(back.rdh == p.rdh);
    CHECK(back.sdh == p.sdh);
    CHECK(back.rst == p.rst);
    CHECK(back.hit_rdh == p.hit_rdh);
}

TEST_CASE("loading validates integrity") {
    const auto p = sample_profile();
    const auto path = temp_file("tampered.json");

    SECTION("broken row sum") {
        auto j = to_json(p);
        j["rst"][0][2] = j["rst"][0][2].get<std::uint64_t>() + 1;
        save_json(path, j);
        CHECK_THROWS_AS(load_profile(path), IntegrityError);
    }
    SECTION("wrong version") {
        auto j = to_json(p);
        j["version"] = 2;
        save_json(path, j);
        CHECK_THROWS_AS(load_profile(path), VersionError);
    }
    SECTION("histogram length mismatch") {
        auto j = to_json(p);
        j["rdh"].push_back(0);
        save_json(path, j);
        CHECK_THROWS_AS(load_profile(path), IntegrityError);
    }
    SECTION("total_refs mismatch") {
        auto j = to_json(p);
        j["total_refs"] = j["total_refs"].get<std::uint64_t>() + 1;
        save_json(path, j);
        CHECK_THROWS_AS(load_profile(path), IntegrityError);
    }
    SECTION("missing field") {
        auto j = to_json(p);
        j.erase("sdh");
        save_json(path, j);
        CHECK_THROWS_AS(load_profile(path), IntegrityError);
    }
}

TEST_CASE("I/O failures surface as errors") {
    CHECK_THROWS_AS(load_json(temp_file("missing.json")), IoError);

    const auto path = temp_file("garbage.json");
    std::ofstream(path) << "{not json";
    CHECK_THROWS_AS(load_json(path), IoError);
}

TEST_CASE("identical inputs serialize to identical bytes") {
    const auto p = sample_profile();
    const auto a = temp_file("dump_a.json");
    const auto b = temp_file("dump_b.json");
    save_profile(a, p);
    save_profile(b, p);
    std::ifstream fa(a), fb(b);
    const std::string sa((std::istreambuf_iterator<char>(fa)), {});
    const std::string sb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(sa == sb);
    CHECK_FALSE(sa.empty());
}

TEST_CASE("prediction and simulation reports serialize with their schema fields") {
    const auto p = sample_profile();
    const auto l2 = CacheConfig::make(32 * 1024, 64, 8);
    const auto pred = predict(p, l2);
    const auto rate = statstack_miss_rate(pred.real_l2_rdh, l2.associativity);
    const auto pj = to_json(pred, rate);
    CHECK(pj.at("version") == kFormatVersion);
    CHECK(pj.at("p_same") == 1.0);
    CHECK(pj.at("real_l2_rdh").contains("bins"));
    CHECK(pj.at("l2_miss_rate").at("method") == "statstack");

    std::vector<TraceRecord> trace{{0}, {64}, {0}};
    const auto sim = simulate(trace, p.l1_config, l2);
    const auto sj = to_json(sim);
    CHECK(sj.at("l1_accesses") == 3);
    CHECK(sj.at("measured_l2_rdh").contains("cold"));
}
