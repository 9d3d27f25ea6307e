#ifndef RDTK_SWEEP_HPP
#define RDTK_SWEEP_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include "rdtk/cache_config.hpp"
#include "rdtk/errors.hpp"
#include "rdtk/json_io.hpp"
#include "rdtk/metrics.hpp"
#include "rdtk/model.hpp"
#include "rdtk/profiler.hpp"
#include "rdtk/simulator.hpp"
#include "rdtk/solvers.hpp"
#include "rdtk/trace.hpp"

namespace rdtk {

/// One profile pass fanned out over many second-level configurations.
struct SweepPlan {
    std::filesystem::path trace_path; // empty when synthetic
    TraceFormat trace_format = TraceFormat::kBinaryU64Le;
    std::optional<SyntheticSpec> synthetic;
    CacheConfig l1;
    std::vector<CacheConfig> l2_configs;
    std::size_t cutoff = kDefaultCutoff;
    std::uint64_t warmup_refs = 0;
    std::uint64_t sim_seed = 0;
    bool with_oracle = true;
    ZeroHitEpochs zero_hit = ZeroHitEpochs::kCount;
    std::size_t jobs = 1; // worker threads for the per-configuration phase
};

inline SweepPlan sweep_plan_from_json(const json& j) {
    SweepPlan plan;
    try {
        if (j.contains("trace")) {
            plan.trace_path = j.at("trace").at("path").get<std::string>();
            if (j.at("trace").contains("format"))
                plan.trace_format =
                    parse_trace_format(j.at("trace").at("format").get<std::string>());
        } else if (j.contains("synthetic")) {
            const auto& s = j.at("synthetic");
            SyntheticSpec spec;
            spec.pattern = parse_pattern(s.at("pattern").get<std::string>());
            spec.length = s.at("length").get<std::uint64_t>();
            if (s.contains("working_set"))
                spec.working_set = s.at("working_set").get<std::uint64_t>();
            if (s.contains("stride")) spec.stride = s.at("stride").get<std::uint64_t>();
            if (s.contains("nodes")) spec.nodes = s.at("nodes").get<std::uint64_t>();
            if (s.contains("seed")) spec.seed = s.at("seed").get<std::uint64_t>();
            plan.synthetic = spec;
        } else {
            throw ConfigError("sweep plan needs either a trace or a synthetic block");
        }
        plan.l1 = cache_config_from_json(j.at("l1"));
        for (const auto& c : j.at("l2_configs"))
            plan.l2_configs.push_back(cache_config_from_json(c));
        if (plan.l2_configs.empty())
            throw ConfigError("sweep plan lists no second-level configurations");
        if (j.contains("cutoff")) plan.cutoff = j.at("cutoff").get<std::size_t>();
        if (j.contains("warmup_refs"))
            plan.warmup_refs = j.at("warmup_refs").get<std::uint64_t>();
        if (j.contains("seed")) plan.sim_seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("with_oracle")) plan.with_oracle = j.at("with_oracle").get<bool>();
        if (j.contains("zero_hit_epochs")) {
            const auto mode = j.at("zero_hit_epochs").get<std::string>();
            if (mode == "count")
                plan.zero_hit = ZeroHitEpochs::kCount;
            else if (mode == "skip")
                plan.zero_hit = ZeroHitEpochs::kSkip;
            else
                throw ConfigError("zero_hit_epochs must be 'count' or 'skip'");
        }
        if (j.contains("jobs")) plan.jobs = j.at("jobs").get<std::size_t>();
        if (plan.jobs == 0) throw ConfigError("jobs must be at least 1");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed sweep plan: ") + e.what());
    }
    return plan;
}

struct PhaseTiming {
    std::string name;
    double seconds = 0.0;
};

struct SweepConfigResult {
    PredictionResult prediction;
    MissRateReport model_l2_rate;
    std::optional<SimResult> sim;
    std::optional<ComparisonReport> comparison;
};

struct SweepResult {
    LocalityProfile profile;
    std::vector<SweepConfigResult> configs;
    ErrorSummary errors; // empty unless the oracle ran
    std::vector<PhaseTiming> phases;
    std::uint64_t profile_passes = 0;
};

namespace detail {

class PhaseClock {
public:
    explicit PhaseClock(std::vector<PhaseTiming>& out) : out_(out) {}

    template <class F>
    auto run(const std::string& name, F&& f) {
        const auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            finish(name, start);
        } else {
            auto result = f();
            finish(name, start);
            return result;
        }
    }

private:
    void finish(const std::string& name,
                std::chrono::steady_clock::time_point start) {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        out_.push_back({name, secs});
    }

    std::vector<PhaseTiming>& out_;
};

} // namespace detail

/// Choose the analytical miss-rate estimator that matches the replacement
/// policy: the stack-distance transform for LRU, the random-replacement
/// fixed point for random.
inline MissRateReport model_miss_rate(const RealHistogram& rdh, const CacheConfig& cache) {
    return cache.policy == ReplacementPolicy::kLru
               ? statstack_miss_rate(rdh, cache.associativity)
               : statcache_miss_rate(rdh, cache.associativity);
}

/// Runs the plan: one trace load, one profiling pass, one table build, then
/// the per-configuration prediction (and optional simulation) fan-out. With
/// jobs > 1 only that fan-out is parallelized; results and phase order stay
/// deterministic because everything is merged back in configuration order.
inline SweepResult run_sweep(const SweepPlan& plan) {
    SweepResult res;
    detail::PhaseClock clock(res.phases);

    const std::vector<TraceRecord> trace = clock.run("load_trace", [&] {
        if (plan.synthetic) return gen_synthetic(*plan.synthetic);
        return read_trace(plan.trace_path, plan.trace_format);
    });

    res.profile = clock.run("profiling", [&] {
        return profile(trace, plan.l1, plan.cutoff, plan.warmup_refs);
    });
    res.profile_passes = 1;

    const ModelTables tables = clock.run("model_tables", [&] {
        return build_model_tables(res.profile, plan.zero_hit);
    });

    const std::size_t n = plan.l2_configs.size();
    res.configs.resize(n);
    std::vector<std::vector<PhaseTiming>> config_phases(n);

    auto run_config = [&](std::size_t i) {
        const CacheConfig& l2 = plan.l2_configs[i];
        SweepConfigResult& cfg = res.configs[i];
        detail::PhaseClock local(config_phases[i]);
        cfg.prediction = local.run("prediction:" + l2.label(), [&] {
            auto pred = predict_from_tables(tables, plan.l1, l2);
            cfg.model_l2_rate = model_miss_rate(pred.real_l2_rdh, l2);
            return pred;
        });
        if (plan.with_oracle) {
            cfg.sim = local.run("simulation:" + l2.label(), [&] {
                return simulate(trace, plan.l1, l2, plan.sim_seed, plan.cutoff,
                                plan.warmup_refs);
            });
            cfg.comparison = compare_prediction(
                cfg.prediction.real_l2_rdh, cfg.sim->measured_l2_rdh,
                cfg.model_l2_rate.miss_rate, cfg.sim->l2_miss_rate);
        }
    };

    const std::size_t workers = std::min(plan.jobs, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) run_config(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                    run_config(i);
            });
        for (auto& t : pool) t.join();
    }

    for (auto& phases : config_phases)
        for (auto& ph : phases) res.phases.push_back(std::move(ph));

    std::vector<std::pair<double, double>> rates;
    for (const auto& cfg : res.configs)
        if (cfg.sim) rates.emplace_back(cfg.model_l2_rate.miss_rate, cfg.sim->l2_miss_rate);
    if (!rates.empty()) res.errors = miss_rate_errors(rates);
    return res;
}

inline json sweep_summary_json(const SweepResult& res) {
    json rows = json::array();
    for (const auto& cfg : res.configs) {
        json row{{"l2_config", to_json(cfg.prediction.l2_config)},
                 {"p_same", cfg.prediction.p_same},
                 {"model_l2_miss_rate", cfg.model_l2_rate.miss_rate},
                 {"miss_rate_method", to_string(cfg.model_l2_rate.method)}};
        if (cfg.sim) {
            row["oracle_l2_miss_rate"] = cfg.sim->l2_miss_rate;
            row["oracle_l1_miss_rate"] = cfg.sim->l1_miss_rate;
        }
        if (cfg.comparison) {
            row["miss_rate_error"] = cfg.comparison->miss_rate_error;
            row["histogram_error"] = cfg.comparison->histogram_error;
        }
        rows.push_back(std::move(row));
    }
    json out{{"version", kFormatVersion},
             {"l1_config", to_json(res.profile.l1_config)},
             {"total_refs", res.profile.total_refs},
             {"profile_passes", res.profile_passes},
             {"configs", std::move(rows)}};
    if (!res.errors.per_config.empty()) {
        out["miss_rate_errors"] = res.errors.per_config;
        out["mean_miss_rate_error"] = res.errors.mean;
    }
    return out;
}

/// Writes profile.json, per-configuration prediction/simulation/comparison
/// files, summary.json, summary.csv, and phases.json under `dir`. Every
/// file is byte-reproducible for identical inputs; phases.json records the
/// phase sequence only, wall-clock durations stay on stdout.
inline void write_sweep_outputs(const std::filesystem::path& dir, const SweepResult& res) {
    std::filesystem::create_directories(dir);
    save_profile(dir / "profile.json", res.profile);

    std::ofstream csv(dir / "summary.csv");
    if (!csv) throw IoError("cannot open " + (dir / "summary.csv").string());
    csv << "l2_config,policy,p_same,model_l2_miss_rate,oracle_l2_miss_rate,"
           "miss_rate_error,histogram_error\n";

    for (const auto& cfg : res.configs) {
        const std::string label = cfg.prediction.l2_config.label();
        save_json(dir / ("prediction_" + label + ".json"),
                  to_json(cfg.prediction, cfg.model_l2_rate));
        if (cfg.sim) save_json(dir / ("simulation_" + label + ".json"), to_json(*cfg.sim));
        if (cfg.comparison)
            save_json(dir / ("comparison_" + label + ".json"), to_json(*cfg.comparison));

        csv << label << ',' << to_string(cfg.prediction.l2_config.policy) << ','
            << cfg.prediction.p_same << ',' << cfg.model_l2_rate.miss_rate;
        if (cfg.sim)
            csv << ',' << cfg.sim->l2_miss_rate;
        else
            csv << ',';
        if (cfg.comparison)
            csv << ',' << cfg.comparison->miss_rate_error << ','
                << cfg.comparison->histogram_error;
        else
            csv << ",,";
        csv << '\n';
    }
    csv.close();

    save_json(dir / "summary.json", sweep_summary_json(res));

    json phases = json::array();
    for (const auto& ph : res.phases) phases.push_back(ph.name);
    save_json(dir / "phases.json", json{{"phases", std::move(phases)}});
}

} // namespace rdtk

#endif // RDTK_SWEEP_HPP
