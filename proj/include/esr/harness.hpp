#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "esr/config.hpp"
#include "esr/core.hpp"
#include "esr/utility.hpp"

namespace esr {

/// Builds the environment named by `tag` (fishwood, stock, redeed, random-momdp,
/// momab, single-arm). Throws ConfigError for unknown tags or bad parameters.
std::unique_ptr<EnvironmentModel> make_environment(const std::string& tag, const ParamMap& params);

/// The utility each environment is evaluated with unless one is given explicitly.
UtilitySpec default_utility(const std::string& env_tag);

/// Utility named in the config (or the environment default), checked against the
/// environment's objective count. Throws ConfigError on an arity mismatch.
UtilitySpec resolve_utility(const RunConfig& config, const EnvironmentModel& model);

struct ExperimentResult {
    RunConfig config;
    UtilitySpec utility;
    std::vector<std::vector<double>> utilities;  // [run][episode]
    std::vector<double> mean;                    // per episode, over runs
    std::vector<double> stderr_;                 // standard error of `mean`
    std::vector<double> trailing_mean;           // trailing window over `mean`
    std::vector<double> run_seconds;
    double wall_seconds = 0.0;

    std::size_t runs() const { return utilities.size(); }
    std::size_t episodes() const { return mean.size(); }
};

/// Seeds derived for run `run` of an experiment with master seed `seed`.
struct RunSeeds {
    std::uint64_t planner;
    std::uint64_t environment;
};
RunSeeds run_seeds(std::uint64_t master_seed, std::size_t run);

/// Per-episode utilities of one independent run.
std::vector<double> run_single(const RunConfig& config, std::size_t run);

/// `config.runs` independent runs of `config.episodes` episodes each. Deterministic
/// given the master seed, whatever the thread count.
ExperimentResult run_experiment(const RunConfig& config);

/// Fills mean / stderr_ / trailing_mean from `utilities`.
void aggregate(ExperimentResult& result, std::size_t trailing_window);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

/// Mean of the last `window` values (all of them when shorter).
double tail_mean(std::span<const double> series, std::size_t window);
std::vector<double> trailing_means(std::span<const double> series, std::size_t window);

struct WindowStats {
    double mean = 0.0;
    double stddev = 0.0;
    double stderr_ = 0.0;  // over runs
};
/// Statistics of the final `window` episodes: mean and stddev of the run-averaged
/// curve, and the standard error of the per-run window means.
WindowStats final_window(const ExperimentResult& result, std::size_t window);

/// Header `episode,mean_utility,stderr,run_0..run_{k-1}` followed by a
/// `trailing_mean` column when the config's trailing window is non-zero.
void write_csv(const ExperimentResult& result, const std::filesystem::path& path);
std::string to_csv(const ExperimentResult& result);

struct CsvData {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvData read_csv(const std::filesystem::path& path);

// ---- ablations -------------------------------------------------------------

struct BtsRuntimeRow {
    std::size_t replicates = 0;
    double mean_seconds = 0.0;  // per `updates` updates
    double stddev_seconds = 0.0;
};

/// Wall time of `updates` BTS updates for each J, averaged over `repeats`.
std::vector<BtsRuntimeRow> ablation_bts_runtime(std::span<const std::size_t> replicate_counts,
                                                std::size_t updates = 1000, std::size_t repeats = 10,
                                                std::uint64_t seed = 0);

struct BanditCurve {
    std::size_t replicates = 0;
    std::vector<double> mean_utility;        // per trial, averaged over seeds
    std::vector<double> optimal_arm_rate;    // per trial, fraction of seeds pulling the best arm
    std::vector<double> seed_tail_means;     // trailing mean per seed
};

/// One BTS distribution per arm (no tree): sample every arm, pull the argmax,
/// update that arm with the utility of the pull.
std::vector<BanditCurve> ablation_momab(std::span<const std::size_t> replicate_counts, std::size_t trials = 10000,
                                        std::size_t seeds = 10, std::uint64_t seed = 0,
                                        std::size_t tail_window = 1000);

/// DMCTS curves on the seeded random MOMDP, one experiment per J.
std::vector<ExperimentResult> ablation_random_momdp(std::span<const std::size_t> replicate_counts,
                                                    const RunConfig& base);

}  // namespace esr
