#include "esr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "esr/bts.hpp"
#include "esr/envs/bandit.hpp"
#include "esr/envs/fishwood.hpp"
#include "esr/envs/random_momdp.hpp"
#include "esr/envs/redeed.hpp"
#include "esr/envs/stock.hpp"
#include "esr/planner.hpp"

namespace esr {

std::unique_ptr<EnvironmentModel> make_environment(const std::string& tag, const ParamMap& params) {
    if (tag == "fishwood") return std::make_unique<envs::Fishwood>(envs::FishwoodParams::from(params));
    if (tag == "stock") return std::make_unique<envs::StockMdp>(envs::StockMdpParams::from(params));
    if (tag == "redeed") return std::make_unique<envs::Redeed>(envs::RedeedParams::from(params));
    if (tag == "random-momdp") {
        return std::make_unique<envs::RandomMomdp>(envs::random_momdp_build(envs::RandomMomdpParams::from(params)));
    }
    if (tag == "momab") return std::make_unique<envs::Bandit>(envs::BanditParams::momab_from(params), "momab");
    if (tag == "single-arm") {
        if (!params.empty()) throw ConfigError("single-arm takes no environment parameters");
        return std::make_unique<envs::Bandit>(envs::BanditParams::single_arm_demo(), "single-arm");
    }
    throw ConfigError("unknown environment '" + tag +
                      "' (expected fishwood, stock, redeed, random-momdp, momab or single-arm)");
}

UtilitySpec default_utility(const std::string& env_tag) {
    if (env_tag == "fishwood") return parse_utility("fishwood_min");
    if (env_tag == "stock") return parse_utility("risk_seeking_sq");
    // -cost * -emissions * (-penalty - 1): the penalty term never zeroes the product.
    if (env_tag == "redeed") return parse_utility("product:offset2=-1");
    if (env_tag == "random-momdp") return parse_utility("quadratic_sum");
    if (env_tag == "momab") return parse_utility("momab_scaled_product");
    if (env_tag == "single-arm") return parse_utility("product");
    throw ConfigError("unknown environment '" + env_tag + "'");
}

UtilitySpec resolve_utility(const RunConfig& config, const EnvironmentModel& model) {
    UtilitySpec spec = config.utility.empty() ? default_utility(config.env) : parse_utility(config.utility);
    if (auto n = utility_arity(spec); n && *n != model.objectives()) {
        throw ConfigError("utility " + to_string(spec) + " expects " + std::to_string(*n) + " objectives but " +
                          model.name() + " has " + std::to_string(model.objectives()));
    }
    return spec;
}

RunSeeds run_seeds(std::uint64_t master_seed, std::size_t run) {
    const std::uint64_t base = derive_seed(master_seed, run);
    return {derive_seed(base, 1), derive_seed(base, 2)};
}

std::vector<double> run_single(const RunConfig& config, std::size_t run) {
    const auto model = make_environment(config.env, config.env_params);
    const UtilitySpec utility = resolve_utility(config, *model);
    const RunSeeds seeds = run_seeds(config.seed, run);
    Rng planner_rng(seeds.planner);
    Rng env_rng(seeds.environment);
    EpisodeRunner runner(*model, planner_kind_from(config), utility, config.n_exec, config.tree_persistence,
                         config.reward_tolerance);
    std::vector<double> utilities;
    utilities.reserve(config.episodes);
    for (std::size_t e = 0; e < config.episodes; ++e) {
        utilities.push_back(runner.run_episode(planner_rng, env_rng).utility);
    }
    return utilities;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) return 0.0;
    const double mean = compensated_sum(values) / static_cast<double>(values.size());
    std::vector<double> sq(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
    return std::sqrt(compensated_sum(sq) / static_cast<double>(values.size() - 1));
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& config) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    {
        const auto model = make_environment(config.env, config.env_params);
        result.utility = resolve_utility(config, *model);
    }
    result.utilities.assign(config.runs, {});
    result.run_seconds.assign(config.runs, 0.0);

    std::size_t threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
    threads = std::clamp<std::size_t>(threads, 1, config.runs);

    const auto start = Clock::now();
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t run = next.fetch_add(1);
            if (run >= config.runs) return;
            try {
                const auto run_start = Clock::now();
                result.utilities[run] = run_single(config, run);
                result.run_seconds[run] = seconds_since(run_start);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(config.runs);
                return;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    result.wall_seconds = seconds_since(start);
    aggregate(result, config.trailing_window);
    return result;
}

double compensated_sum(std::span<const double> values) {
    double sum = 0.0;
    double c = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    return sum + c;
}

double tail_mean(std::span<const double> series, std::size_t window) {
    if (series.empty()) throw UsageError("tail_mean of an empty series");
    const std::size_t n = std::min(window == 0 ? series.size() : window, series.size());
    return compensated_sum(series.subspan(series.size() - n)) / static_cast<double>(n);
}

std::vector<double> trailing_means(std::span<const double> series, std::size_t window) {
    std::vector<double> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) out.push_back(tail_mean(series.first(i + 1), window));
    return out;
}

void aggregate(ExperimentResult& result, std::size_t trailing_window) {
    const std::size_t runs = result.utilities.size();
    if (runs == 0) throw UsageError("aggregate needs at least one run");
    const std::size_t episodes = result.utilities.front().size();
    for (const auto& row : result.utilities) {
        if (row.size() != episodes) throw UsageError("runs have different episode counts");
    }
    result.mean.assign(episodes, 0.0);
    result.stderr_.assign(episodes, 0.0);
    std::vector<double> column(runs);
    for (std::size_t e = 0; e < episodes; ++e) {
        for (std::size_t r = 0; r < runs; ++r) column[r] = result.utilities[r][e];
        result.mean[e] = compensated_sum(column) / static_cast<double>(runs);
        result.stderr_[e] = sample_stddev(column) / std::sqrt(static_cast<double>(runs));
    }
    result.trailing_mean = trailing_window == 0 ? std::vector<double>{} : trailing_means(result.mean, trailing_window);
}

WindowStats final_window(const ExperimentResult& result, std::size_t window) {
    WindowStats stats;
    const std::size_t n = std::min(window, result.episodes());
    if (n == 0) throw UsageError("final_window over zero episodes");
    const auto tail = std::span<const double>(result.mean).subspan(result.episodes() - n);
    stats.mean = compensated_sum(tail) / static_cast<double>(n);
    stats.stddev = sample_stddev(tail);
    std::vector<double> per_run;
    for (const auto& row : result.utilities) per_run.push_back(tail_mean(row, n));
    stats.stderr_ = sample_stddev(per_run) / std::sqrt(static_cast<double>(per_run.size()));
    return stats;
}

std::string to_csv(const ExperimentResult& result) {
    std::ostringstream os;
    const bool trailing = !result.trailing_mean.empty();
    os << "episode,mean_utility,stderr";
    for (std::size_t r = 0; r < result.runs(); ++r) os << ",run_" << r;
    if (trailing) os << ",trailing_mean";
    os << '\n';
    for (std::size_t e = 0; e < result.episodes(); ++e) {
        os << e << ',' << format_double(result.mean[e]) << ',' << format_double(result.stderr_[e]);
        for (std::size_t r = 0; r < result.runs(); ++r) os << ',' << format_double(result.utilities[r][e]);
        if (trailing) os << ',' << format_double(result.trailing_mean[e]);
        os << '\n';
    }
    return os.str();
}

void write_csv(const ExperimentResult& result, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << to_csv(result);
    out.flush();
    if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

CsvData read_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    CsvData data;
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path.string() + ": empty CSV");
    {
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) data.header.push_back(cell);
    }
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            row.push_back(parse_double_strict(cell, path.string() + " line " + std::to_string(lineno)));
        }
        if (row.size() != data.header.size()) {
            throw ConfigError(path.string() + " line " + std::to_string(lineno) + ": expected " +
                              std::to_string(data.header.size()) + " cells, got " + std::to_string(row.size()));
        }
        data.rows.push_back(std::move(row));
    }
    return data;
}

std::vector<BtsRuntimeRow> ablation_bts_runtime(std::span<const std::size_t> replicate_counts, std::size_t updates,
                                                std::size_t repeats, std::uint64_t seed) {
    if (replicate_counts.empty()) throw UsageError("ablation_bts_runtime needs at least one J");
    if (updates == 0 || repeats == 0) throw UsageError("ablation_bts_runtime needs updates and repeats >= 1");
    volatile double sink = 0.0;
    Rng rng(seed);
    std::vector<double> utilities(updates);
    for (double& u : utilities) u = rng.uniform();
    // Repetitions are interleaved across J so a slow stretch of the machine lands on
    // every J alike instead of bending one part of the curve.
    std::vector<std::vector<double>> times(replicate_counts.size());
    for (std::size_t rep = 0; rep <= repeats; ++rep) {
        for (std::size_t k = 0; k < replicate_counts.size(); ++k) {
            // Fastest of five passes, since a single pass is short enough for one preemption to swamp it.
            double t = std::numeric_limits<double>::infinity();
            for (int pass = 0; pass < 5; ++pass) {
                BtsDistribution d(replicate_counts[k], 1.0, 1.0);
                const auto start = Clock::now();
                for (double u : utilities) d.update(u, rng);
                t = std::min(t, seconds_since(start));
                sink = sink + d.mean(0);
            }
            if (rep > 0) times[k].push_back(t * 1000.0 / static_cast<double>(updates));  // pass 0 warms caches
        }
    }
    std::vector<BtsRuntimeRow> table;
    for (std::size_t k = 0; k < replicate_counts.size(); ++k) {
        table.push_back({replicate_counts[k], compensated_sum(times[k]) / static_cast<double>(times[k].size()),
                         sample_stddev(times[k])});
    }
    return table;
}

std::vector<BanditCurve> ablation_momab(std::span<const std::size_t> replicate_counts, std::size_t trials,
                                        std::size_t seeds, std::uint64_t seed, std::size_t tail_window) {
    if (replicate_counts.empty() || trials == 0 || seeds == 0) {
        throw UsageError("ablation_momab needs J values, trials and seeds");
    }
    const envs::BanditParams params = envs::BanditParams::momab();
    const UtilitySpec utility = default_utility("momab");
    std::size_t best_arm = 0;
    {
        double best = -1.0;
        for (std::size_t a = 0; a < params.means.size(); ++a) {
            const double u = eval_utility(utility, params.means[a]);
            if (u > best) best = u, best_arm = a;
        }
    }
    std::vector<BanditCurve> curves;
    for (std::size_t J : replicate_counts) {
        BanditCurve curve;
        curve.replicates = J;
        curve.mean_utility.assign(trials, 0.0);
        curve.optimal_arm_rate.assign(trials, 0.0);
        for (std::size_t s = 0; s < seeds; ++s) {
            Rng rng(derive_seed(derive_seed(seed, J), s));
            std::vector<BtsDistribution> arms(params.means.size(), BtsDistribution(J, 1.0, 1.0));
            std::vector<double> seed_curve(trials);
            for (std::size_t t = 0; t < trials; ++t) {
                std::size_t pick = 0;
                double best = -std::numeric_limits<double>::infinity();
                for (std::size_t a = 0; a < arms.size(); ++a) {
                    const double sample = arms[a].sample_mean(rng);
                    if (sample > best) best = sample, pick = a;
                }
                const double u = eval_utility(utility, envs::bandit_pull(params, pick, rng));
                arms[pick].update(u, rng);
                seed_curve[t] = u;
                curve.mean_utility[t] += u / static_cast<double>(seeds);
                curve.optimal_arm_rate[t] += (pick == best_arm ? 1.0 : 0.0) / static_cast<double>(seeds);
            }
            curve.seed_tail_means.push_back(tail_mean(seed_curve, tail_window));
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

std::vector<ExperimentResult> ablation_random_momdp(std::span<const std::size_t> replicate_counts,
                                                    const RunConfig& base) {
    if (replicate_counts.empty()) throw UsageError("ablation_random_momdp needs at least one J");
    std::vector<ExperimentResult> out;
    for (std::size_t J : replicate_counts) {
        RunConfig config = base;
        config.env = "random-momdp";
        config.algorithm = Algorithm::dmcts;
        config.replicates = J;
        out.push_back(run_experiment(config));
    }
    return out;
}

}  // namespace esr
