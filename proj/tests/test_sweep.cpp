#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "rdtk/sweep.hpp"

using namespace rdtk;
namespace fs = std::filesystem;

namespace {

json small_plan() {
    return json{
        {"synthetic",
         {{"pattern", "random"}, {"length", 30000}, {"working_set", 64 * 1024}, {"seed", 3}}},
        {"l1", {{"capacity", 16 * 1024}, {"line_size", 64}, {"associativity", 2}, {"policy", "lru"}}},
        {"l2_configs",
         json::array({{{"capacity", 64 * 1024}, {"line_size", 64}, {"associativity", 8}, {"policy", "lru"}},
                      {{"capacity", 128 * 1024}, {"line_size", 64}, {"associativity", 8}, {"policy", "random"}}})},
        {"seed", 7}};
}

fs::path temp_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "rdtk_sweep_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("plan parsing applies defaults and validates") {
    const auto plan = sweep_plan_from_json(small_plan());
    CHECK(plan.synthetic.has_value());
    CHECK(plan.l1.sets == 128);
    CHECK(plan.l2_configs.size() == 2);
    CHECK(plan.cutoff == kDefaultCutoff);
    CHECK(plan.with_oracle);
    CHECK(plan.jobs == 1);
    CHECK(plan.sim_seed == 7);

    auto no_source = small_plan();
    no_source.erase("synthetic");
    CHECK_THROWS_AS(sweep_plan_from_json(no_source), ConfigError);

    auto no_configs = small_plan();
    no_configs["l2_configs"] = json::array();
    CHECK_THROWS_AS(sweep_plan_from_json(no_configs), ConfigError);

    auto bad_mode = small_plan();
    bad_mode["zero_hit_epochs"] = "sometimes";
    CHECK_THROWS_AS(sweep_plan_from_json(bad_mode), ConfigError);

    auto zero_jobs = small_plan();
    zero_jobs["jobs"] = 0;
    CHECK_THROWS_AS(sweep_plan_from_json(zero_jobs), ConfigError);

    auto skip = small_plan();
    skip["zero_hit_epochs"] = "skip";
    CHECK(sweep_plan_from_json(skip).zero_hit == ZeroHitEpochs::kSkip);
}

TEST_CASE("sweep profiles once and fans out per configuration") {
    const auto res = run_sweep(sweep_plan_from_json(small_plan()));
    CHECK(res.profile_passes == 1);
    REQUIRE(res.configs.size() == 2);

    const auto count = [&](const std::string& prefix) {
        return std::count_if(res.phases.begin(), res.phases.end(),
                             [&](const PhaseTiming& p) {
                                 return p.name.rfind(prefix, 0) == 0;
                             });
    };
    CHECK(count("profiling") == 1);
    CHECK(count("prediction:") == 2);
    CHECK(count("simulation:") == 2);

    for (const auto& cfg : res.configs) {
        REQUIRE(cfg.sim.has_value());
        REQUIRE(cfg.comparison.has_value());
        CHECK(cfg.model_l2_rate.miss_rate >= 0.0);
        CHECK(cfg.model_l2_rate.miss_rate <= 1.0);
    }
    CHECK(res.configs[0].model_l2_rate.method == MissRateMethod::kStatStack);
    CHECK(res.configs[1].model_l2_rate.method == MissRateMethod::kStatCache);
    CHECK(res.errors.per_config.size() == 2);
}

TEST_CASE("parallel sweep matches the serial one") {
    auto plan = sweep_plan_from_json(small_plan());
    const auto serial = run_sweep(plan);
    plan.jobs = 4;
    const auto parallel = run_sweep(plan);
    REQUIRE(parallel.configs.size() == serial.configs.size());
    for (std::size_t i = 0; i < serial.configs.size(); ++i) {
        CHECK(parallel.configs[i].prediction.real_l2_rdh ==
              serial.configs[i].prediction.real_l2_rdh);
        CHECK(parallel.configs[i].model_l2_rate.miss_rate ==
              serial.configs[i].model_l2_rate.miss_rate);
        CHECK(parallel.configs[i].sim->measured_l2_rdh ==
              serial.configs[i].sim->measured_l2_rdh);
    }
    CHECK(parallel.errors.per_config == serial.errors.per_config);
}

TEST_CASE("sweep without the oracle skips simulation") {
    auto j = small_plan();
    j["with_oracle"] = false;
    const auto res = run_sweep(sweep_plan_from_json(j));
    for (const auto& cfg : res.configs) {
        CHECK_FALSE(cfg.sim.has_value());
        CHECK_FALSE(cfg.comparison.has_value());
    }
    CHECK(res.errors.per_config.empty());
    const auto sim_phases =
        std::count_if(res.phases.begin(), res.phases.end(), [](const PhaseTiming& p) {
            return p.name.rfind("simulation:", 0) == 0;
        });
    CHECK(sim_phases == 0);
}

TEST_CASE("sweep outputs land on disk with stable bytes") {
    const auto dir_a = temp_dir("run_a");
    const auto dir_b = temp_dir("run_b");
    const auto res = run_sweep(sweep_plan_from_json(small_plan()));
    write_sweep_outputs(dir_a, res);
    write_sweep_outputs(dir_b, res);

    CHECK(fs::exists(dir_a / "profile.json"));
    CHECK(fs::exists(dir_a / "summary.json"));
    CHECK(fs::exists(dir_a / "summary.csv"));
    CHECK(fs::exists(dir_a / "phases.json"));
    for (const auto& cfg : res.configs) {
        const auto label = cfg.prediction.l2_config.label();
        CHECK(fs::exists(dir_a / ("prediction_" + label + ".json")));
        CHECK(fs::exists(dir_a / ("simulation_" + label + ".json")));
        CHECK(fs::exists(dir_a / ("comparison_" + label + ".json")));
    }

    for (const auto& entry : fs::directory_iterator(dir_a)) {
        std::ifstream fa(entry.path()), fb(dir_b / entry.path().filename());
        const std::string sa((std::istreambuf_iterator<char>(fa)), {});
        const std::string sb((std::istreambuf_iterator<char>(fb)), {});
        CHECK(sa == sb);
    }

    const auto phases = load_json(dir_a / "phases.json");
    const auto& names = phases.at("phases");
    CHECK(std::count_if(names.begin(), names.end(), [](const json& n) {
              return n.get<std::string>() == "profiling";
          }) == 1);

    std::ifstream csv(dir_a / "summary.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header ==
          "l2_config,policy,p_same,model_l2_miss_rate,oracle_l2_miss_rate,"
          "miss_rate_error,histogram_error");
    std::size_t rows = 0;
    for (std::string line; std::getline(csv, line);)
        if (!line.empty()) ++rows;
    CHECK(rows == res.configs.size());
}

TEST_CASE("trace-file plans read from disk") {
    const auto dir = temp_dir("trace_plan");
    const auto trace_path = dir / "t.bin";
    SyntheticSpec spec;
    spec.pattern = SyntheticPattern::kLoop;
    spec.length = 5000;
    spec.working_set = 24 * 1024;
    write_trace(trace_path, gen_synthetic(spec), TraceFormat::kBinaryU64Le);

    auto j = small_plan();
    j.erase("synthetic");
    j["trace"] = {{"path", trace_path.string()}, {"format", "bin"}};
    const auto res = run_sweep(sweep_plan_from_json(j));
    CHECK(res.profile.total_refs == 5000);
}
