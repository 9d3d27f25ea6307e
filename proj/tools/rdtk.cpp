// Command-line front end: trace generation, profiling, prediction,
// simulation, comparison and sweeps. All file outputs are JSON/CSV; stdout
// carries short human-readable summaries.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rdtk/rdtk.hpp"

namespace {

rdtk::ZeroHitEpochs parse_zero_hit(const std::string& s) {
    if (s == "count") return rdtk::ZeroHitEpochs::kCount;
    if (s == "skip") return rdtk::ZeroHitEpochs::kSkip;
    throw rdtk::ConfigError("zero-hit-epochs must be 'count' or 'skip'");
}

struct GenArgs {
    std::string pattern;
    std::uint64_t length = 0;
    std::uint64_t working_set = 0;
    std::uint64_t stride = rdtk::kSyntheticLineBytes;
    std::uint64_t seed = 0;
    std::string format = "bin";
    std::string out;
};

void add_gen(CLI::App& app, GenArgs& a) {
    auto* cmd = app.add_subcommand("gen", "Generate a synthetic address trace");
    cmd->add_option("--pattern", a.pattern,
                    "sequential, strided, loop, random or chase")
        ->required();
    cmd->add_option("--length", a.length, "Number of references")->required();
    cmd->add_option("--working-set", a.working_set,
                    "Working set in bytes (loop, random, chase)")
        ->transform(CLI::AsSizeValue(false));
    cmd->add_option("--stride", a.stride, "Stride in bytes (strided)")
        ->transform(CLI::AsSizeValue(false));
    cmd->add_option("--seed", a.seed, "Generator seed (random, chase)");
    cmd->add_option("--format", a.format, "bin or hex")->default_str("bin");
    cmd->add_option("--out", a.out, "Output trace file")->required();
    cmd->callback([&a] {
        rdtk::SyntheticSpec spec;
        spec.pattern = rdtk::parse_pattern(a.pattern);
        spec.length = a.length;
        spec.working_set = a.working_set;
        spec.stride = a.stride;
        spec.seed = a.seed;
        if (spec.pattern == rdtk::SyntheticPattern::kPointerChase) {
            if (a.working_set < rdtk::kSyntheticLineBytes)
                throw rdtk::ConfigError(
                    "chase needs --working-set of at least one 64-byte line");
            spec.nodes = a.working_set / rdtk::kSyntheticLineBytes;
        }
        const auto records = rdtk::gen_synthetic(spec);
        rdtk::write_trace(a.out, records, rdtk::parse_trace_format(a.format));
        std::cout << "wrote " << records.size() << " records to " << a.out << '\n';
    });
}

struct ProfileArgs {
    std::string trace;
    std::string format = "bin";
    std::uint64_t l1_size = 0;
    std::uint32_t l1_assoc = 1;
    std::uint32_t line = 64;
    std::size_t cutoff = rdtk::kDefaultCutoff;
    std::uint64_t warmup = 0;
    std::string out;
};

void add_profile(CLI::App& app, ProfileArgs& a) {
    auto* cmd = app.add_subcommand("profile",
                                   "Profile a trace into locality histograms");
    cmd->add_option("--trace", a.trace, "Input trace file")->required();
    cmd->add_option("--format", a.format, "bin or hex")->default_str("bin");
    cmd->add_option("--l1-size", a.l1_size, "L1 capacity in bytes")
        ->required()
        ->transform(CLI::AsSizeValue(false));
    cmd->add_option("--l1-assoc", a.l1_assoc, "L1 associativity")->required();
    cmd->add_option("--line", a.line, "Cache line size in bytes")
        ->transform(CLI::AsSizeValue(false));
    cmd->add_option("--cutoff", a.cutoff, "Distance histogram cutoff");
    cmd->add_option("--warmup", a.warmup, "References excluded from statistics");
    cmd->add_option("--out", a.out, "Output profile JSON")->required();
    cmd->callback([&a] {
        const auto l1 = rdtk::CacheConfig::make(a.l1_size, a.line, a.l1_assoc,
                                                rdtk::ReplacementPolicy::kLru);
        rdtk::TraceFileReader reader(a.trace, rdtk::parse_trace_format(a.format));
        const auto profile = rdtk::profile(reader, l1, a.cutoff, a.warmup);
        rdtk::save_profile(a.out, profile);
        const auto l1_rate = rdtk::lru_miss_rate_from_sdh(rdtk::to_real(profile.sdh),
                                                          l1.associativity);
        std::cout << "profiled " << profile.total_refs << " refs, cold "
                  << profile.rdh.cold() << ", L1 miss rate " << l1_rate.miss_rate
                  << '\n';
    });
}

struct PredictArgs {
    std::string profile;
    std::uint64_t l2_size = 0;
    std::uint32_t l2_assoc = 1;
    std::string policy;
    std::string zero_hit = "count";
    std::string out;
};

void add_predict(CLI::App& app, PredictArgs& a) {
    auto* cmd = app.add_subcommand(
        "predict", "Predict L2 reuse histogram and miss rate from a profile");
    cmd->add_option("--profile", a.profile, "Input profile JSON")->required();
    cmd->add_option("--l2-size", a.l2_size, "L2 capacity in bytes")
        ->required()
        ->transform(CLI::AsSizeValue(false));
    cmd->add_option("--l2-assoc", a.l2_assoc, "L2 associativity")->required();
    cmd->add_option("--policy", a.policy, "L2 replacement policy: lru or random")
        ->required();
    cmd->add_option("--zero-hit-epochs", a.zero_hit,
                    "Histogram transfer for epochs without L1 hits: count or skip")
        ->default_str("count");
    cmd->add_option("--out", a.out, "Output prediction JSON")->required();
    cmd->callback([&a] {
        const auto profile = rdtk::load_profile(a.profile);
        const auto l2 =
            rdtk::CacheConfig::make(a.l2_size, profile.l1_config.line_size, a.l2_assoc,
                                    rdtk::parse_policy(a.policy));
        const auto pred = rdtk::predict(profile, l2, parse_zero_hit(a.zero_hit));
        const auto rate = rdtk::model_miss_rate(pred.real_l2_rdh, l2);
        rdtk::save_json(a.out, rdtk::to_json(pred, rate));
        std::cout << "p_same " << pred.p_same << ", predicted L2 accesses "
                  << pred.predicted_l2_accesses << ", L2 miss rate ("
                  << rdtk::to_string(rate.method) << ") " << rate.miss_rate << '\n';
    });
}

struct SimulateArgs {
    std::string trace;
    std::string format = "bin";
    std::uint64_t l1_size = 0;
    std::uint32_t l1_assoc = 1;
    std::uint32_t line = 64;
    std::uint64_t l2_size = 0;
    std::uint32_t l2_assoc = 1;
    std::string policy;
    std::uint64_t seed = 0;
    std::size_t cutoff = rdtk::kDefaultCutoff;
    std::uint64_t warmup = 0;
    std::string out;
};

void add_simulate(CLI::App& app, SimulateArgs& a) {
    auto* cmd =
        app.add_subcommand("simulate", "Run the two-level reference simulator");
    cmd->add_option("--trace", a.trace, "Input trace file")->required();
    cmd->add_option("--format", a.format, "bin or hex")->default_str("bin");
    cmd->add_option("--l1-size", a.l1_size, "L1 capacity in bytes")
        ->required()
        ->transform(CLI::AsSizeValue(false));
    cmd->add_option("--l1-assoc", a.l1_assoc, "L1 associativity")->required();
    cmd->add_option("--line", a.line, "Cache line size in bytes")
        ->transform(CLI::AsSizeValue(false));
    cmd->add_option("--l2-size", a.l2_size, "L2 capacity in bytes")
        ->required()
        ->transform(CLI::AsSizeValue(false));
    cmd->add_option("--l2-assoc", a.l2_assoc, "L2 associativity")->required();
    cmd->add_option("--policy", a.policy, "L2 replacement policy: lru or random")
        ->required();
    cmd->add_option("--seed", a.seed, "Replacement RNG seed");
    cmd->add_option("--cutoff", a.cutoff, "Distance histogram cutoff");
    cmd->add_option("--warmup", a.warmup, "References excluded from statistics");
    cmd->add_option("--out", a.out, "Output simulation JSON")->required();
    cmd->callback([&a] {
        const auto l1 = rdtk::CacheConfig::make(a.l1_size, a.line, a.l1_assoc,
                                                rdtk::ReplacementPolicy::kLru);
        const auto l2 = rdtk::CacheConfig::make(a.l2_size, a.line, a.l2_assoc,
                                                rdtk::parse_policy(a.policy));
        rdtk::TraceFileReader reader(a.trace, rdtk::parse_trace_format(a.format));
        const auto sim = rdtk::simulate(reader, l1, l2, a.seed, a.cutoff, a.warmup);
        rdtk::save_json(a.out, rdtk::to_json(sim));
        std::cout << "L1 miss rate " << sim.l1_miss_rate << " (" << sim.l1_misses
                  << '/' << sim.l1_accesses << "), L2 miss rate " << sim.l2_miss_rate
                  << " (" << sim.l2_misses << '/' << sim.l2_accesses << ")\n";
    });
}

struct CompareArgs {
    std::string pred;
    std::string sim;
    std::string out;
    std::string csv;
};

void add_compare(CLI::App& app, CompareArgs& a) {
    auto* cmd = app.add_subcommand(
        "compare", "Quantify agreement between a prediction and a simulation");
    cmd->add_option("--pred", a.pred, "Prediction JSON")->required();
    cmd->add_option("--sim", a.sim, "Simulation JSON")->required();
    cmd->add_option("--out", a.out, "Output comparison JSON")->required();
    cmd->add_option("--csv", a.csv, "Optional side-by-side histogram CSV");
    cmd->callback([&a] {
        const auto pj = rdtk::load_json(a.pred);
        const auto sj = rdtk::load_json(a.sim);
        try {
            if (pj.at("version").get<int>() != rdtk::kFormatVersion ||
                sj.at("version").get<int>() != rdtk::kFormatVersion)
                throw rdtk::VersionError("unsupported input format version");
            const auto model =
                rdtk::histogram_from_json<double>(pj.at("real_l2_rdh"));
            const auto truth =
                rdtk::histogram_from_json<std::uint64_t>(sj.at("measured_l2_rdh"));
            const auto rep = rdtk::compare_prediction(
                model, truth, pj.at("l2_miss_rate").at("miss_rate").get<double>(),
                sj.at("l2_miss_rate").get<double>());
            rdtk::save_json(a.out, rdtk::to_json(rep));
            if (!a.csv.empty()) {
                std::ofstream os(a.csv);
                if (!os) throw rdtk::IoError("cannot open " + a.csv);
                rdtk::write_histogram_csv(os, model, rdtk::to_real(truth));
            }
            std::cout << "histogram error " << rep.histogram_error
                      << ", model L2 miss rate " << rep.model_miss_rate
                      << ", simulated " << rep.oracle_miss_rate << ", |diff| "
                      << rep.miss_rate_error << '\n';
        } catch (const rdtk::json::exception& e) {
            throw rdtk::IntegrityError(std::string("malformed input: ") + e.what());
        }
    });
}

struct SweepArgs {
    std::string plan;
    std::string out;
    std::size_t jobs = 0; // 0 = take from the plan
};

void add_sweep(CLI::App& app, SweepArgs& a) {
    auto* cmd = app.add_subcommand(
        "sweep", "Profile once, predict and validate many L2 configurations");
    cmd->add_option("--plan", a.plan, "Sweep plan JSON")->required();
    cmd->add_option("--out", a.out, "Output directory")->required();
    cmd->add_option("--jobs", a.jobs, "Worker threads for the per-config phase");
    cmd->callback([&a] {
        auto plan = rdtk::sweep_plan_from_json(rdtk::load_json(a.plan));
        if (a.jobs > 0) plan.jobs = a.jobs;
        const auto res = rdtk::run_sweep(plan);
        rdtk::write_sweep_outputs(a.out, res);
        for (const auto& ph : res.phases)
            std::cout << "phase " << ph.name << ' ' << ph.seconds << "s\n";
        for (const auto& cfg : res.configs) {
            std::cout << cfg.prediction.l2_config.label() << ": model "
                      << cfg.model_l2_rate.miss_rate;
            if (cfg.sim) std::cout << ", simulated " << cfg.sim->l2_miss_rate;
            if (cfg.comparison)
                std::cout << ", |diff| " << cfg.comparison->miss_rate_error
                          << ", histogram error " << cfg.comparison->histogram_error;
            std::cout << '\n';
        }
        if (!res.errors.per_config.empty())
            std::cout << "mean |miss rate error| " << res.errors.mean << '\n';
        std::cout << "outputs in " << a.out << '\n';
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trace-driven cache locality profiling and prediction toolkit"};
    app.require_subcommand(1);

    GenArgs gen;
    ProfileArgs profile;
    PredictArgs predict;
    SimulateArgs simulate;
    CompareArgs compare;
    SweepArgs sweep;
    add_gen(app, gen);
    add_profile(app, profile);
    add_predict(app, predict);
    add_simulate(app, simulate);
    add_compare(app, compare);
    add_sweep(app, sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const rdtk::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const rdtk::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
