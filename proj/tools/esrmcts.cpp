// esrmcts: run ESR planning experiments and ablations, writing CSV.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "esr/config.hpp"
#include "esr/envs/fishwood.hpp"
#include "esr/errors.hpp"
#include "esr/harness.hpp"
#include "esr/planner.hpp"

namespace {

struct Options {
    std::string env = "fishwood";
    std::string algo = "dmcts";
    std::string utility;
    std::size_t episodes = 100;
    std::size_t n_exec = 2;
    std::size_t runs = 10;
    std::uint64_t seed = 0;
    double C = 1.4142135623730951;
    std::size_t J = 100;
    double alpha_init = 1.0;
    double beta_init = 1.0;
    std::string tree_persist = "on";
    std::string out;
    std::string env_config;
    std::vector<std::string> env_param;
    std::size_t trailing_window = 100;
    std::size_t threads = 1;
};

esr::RunConfig to_run_config(const Options& o) {
    esr::RunConfig c;
    c.env = o.env;
    c.algorithm = esr::parse_algorithm(o.algo);
    c.utility = o.utility;
    c.episodes = o.episodes;
    c.n_exec = o.n_exec;
    c.runs = o.runs;
    c.seed = o.seed;
    c.exploration = o.C;
    c.replicates = o.J;
    c.alpha_init = o.alpha_init;
    c.beta_init = o.beta_init;
    c.tree_persistence = o.tree_persist == "on";
    c.trailing_window = o.trailing_window;
    c.threads = o.threads;
    if (!o.env_config.empty()) c.env_params = esr::load_key_values(o.env_config);
    for (const auto& kv : o.env_param) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) throw esr::ConfigError("--env-param expects key=value, got '" + kv + "'");
        c.env_params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    c.validate();
    return c;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out.flush()) throw std::runtime_error("write to " + path + " failed");
}

std::vector<std::size_t> parse_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const double v = esr::parse_double_strict(item, "J list");
        if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
            throw esr::ConfigError("J values must be positive integers, got '" + item + "'");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw esr::ConfigError("empty J list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expectimax MCTS planning for expected scalarised returns"};
    app.require_subcommand(0, 1);
    Options o;

    auto add_run_flags = [&o](CLI::App* a) {
        a->add_option("--env", o.env, "fishwood|stock|redeed|random-momdp|momab|single-arm")
            ->check(CLI::IsMember({"fishwood", "stock", "redeed", "random-momdp", "momab", "single-arm"}));
        a->add_option("--algo", o.algo, "nlu-mcts|dmcts")->check(CLI::IsMember({"nlu-mcts", "dmcts"}));
        a->add_option("--utility", o.utility, "<name>[:param=val,...]; default depends on --env");
        a->add_option("--episodes", o.episodes, "episodes per run");
        a->add_option("--n-exec", o.n_exec, "planning iterations per executed action");
        a->add_option("--runs", o.runs, "independent seeded runs");
        a->add_option("--seed", o.seed, "master seed");
        a->add_option("--C", o.C, "UCB exploration constant");
        a->add_option("--J", o.J, "bootstrap replicates");
        a->add_option("--alpha-init", o.alpha_init);
        a->add_option("--beta-init", o.beta_init);
        a->add_option("--tree-persist", o.tree_persist, "keep the tree across episodes")
            ->check(CLI::IsMember({"on", "off"}));
        a->add_option("--env-config", o.env_config, "key = value environment parameter file");
        a->add_option("--env-param", o.env_param, "key=value environment override (repeatable)");
        a->add_option("--trailing-window", o.trailing_window, "trailing-mean column window (0 drops it)");
        a->add_option("--threads", o.threads, "worker threads across runs (0 = all cores)");
    };
    add_run_flags(&app);
    app.add_option("--out", o.out, "CSV output path (stdout when omitted)");

    auto* bts = app.add_subcommand("ablation-bts", "seconds per 1000 BTS updates for each J");
    std::string bts_list = "10,100,200,300,400,500,600,700,800,900,1000";
    std::size_t bts_repeats = 10;
    bts->add_option("--J-list", bts_list);
    bts->add_option("--repeats", bts_repeats);
    bts->add_option("--seed", o.seed);
    bts->add_option("--out", o.out);

    auto* momab = app.add_subcommand("ablation-momab", "BTS-per-arm agent on the four-arm bandit");
    std::string momab_list = "10,100,500,1000";
    std::size_t trials = 10000;
    std::size_t seeds = 10;
    momab->add_option("--J-list", momab_list);
    momab->add_option("--trials", trials);
    momab->add_option("--seeds", seeds);
    momab->add_option("--seed", o.seed);
    momab->add_option("--out", o.out);

    auto* rmomdp = app.add_subcommand("ablation-random-momdp", "DMCTS on the random MOMDP for each J");
    std::string rmomdp_list = "1,2,10,100,500,1000";
    add_run_flags(rmomdp);
    rmomdp->add_option("--J-list", rmomdp_list);
    rmomdp->add_option("--out", o.out);

    auto* oracle = app.add_subcommand("fishwood-oracle", "exact optimal and uniform-random ESR on Fishwood");
    add_run_flags(oracle);

    auto* dump = app.add_subcommand("dump-tree", "run one episode and print the search tree");
    add_run_flags(dump);
    dump->add_option("--out", o.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*bts) {
            const auto js = parse_list(bts_list);
            std::ostringstream os;
            os << "J,seconds_per_1000_updates,stddev_seconds\n";
            for (const auto& row : esr::ablation_bts_runtime(js, 1000, bts_repeats, o.seed)) {
                os << row.replicates << ',' << esr::format_double(row.mean_seconds) << ','
                   << esr::format_double(row.stddev_seconds) << '\n';
            }
            emit(os.str(), o.out);
        } else if (*momab) {
            const auto js = parse_list(momab_list);
            const auto curves = esr::ablation_momab(js, trials, seeds, o.seed);
            std::ostringstream os;
            os << "trial";
            for (const auto& c : curves) os << ",mean_utility_J" << c.replicates;
            for (const auto& c : curves) os << ",optimal_arm_rate_J" << c.replicates;
            os << '\n';
            for (std::size_t t = 0; t < trials; ++t) {
                os << t;
                for (const auto& c : curves) os << ',' << esr::format_double(c.mean_utility[t]);
                for (const auto& c : curves) os << ',' << esr::format_double(c.optimal_arm_rate[t]);
                os << '\n';
            }
            emit(os.str(), o.out);
        } else if (*rmomdp) {
            o.env = "random-momdp";
            const auto js = parse_list(rmomdp_list);
            const auto results = esr::ablation_random_momdp(js, to_run_config(o));
            std::ostringstream os;
            os << "episode";
            for (const auto& r : results) os << ",mean_J" << r.config.replicates << ",stderr_J" << r.config.replicates;
            os << '\n';
            for (std::size_t e = 0; e < results.front().episodes(); ++e) {
                os << e;
                for (const auto& r : results) {
                    os << ',' << esr::format_double(r.mean[e]) << ',' << esr::format_double(r.stderr_[e]);
                }
                os << '\n';
            }
            emit(os.str(), o.out);
        } else if (*oracle) {
            o.env = "fishwood";
            const esr::RunConfig config = to_run_config(o);
            const esr::envs::FishwoodParams params = esr::envs::FishwoodParams::from(config.env_params);
            const auto model = esr::make_environment("fishwood", config.env_params);
            const esr::UtilitySpec spec = esr::resolve_utility(config, *model);
            std::cout << "utility " << esr::to_string(spec) << '\n'
                      << "optimal_esr " << esr::format_double(esr::envs::fishwood_optimal_esr(params, spec)) << '\n'
                      << "uniform_esr " << esr::format_double(esr::envs::fishwood_uniform_esr(params, spec)) << '\n';
        } else if (*dump) {
            const esr::RunConfig config = to_run_config(o);
            const auto model = esr::make_environment(config.env, config.env_params);
            const esr::UtilitySpec spec = esr::resolve_utility(config, *model);
            const esr::RunSeeds s = esr::run_seeds(config.seed, 0);
            esr::Rng planner_rng(s.planner);
            esr::Rng env_rng(s.environment);
            esr::EpisodeRunner runner(*model, esr::planner_kind_from(config), spec, config.n_exec,
                                      config.tree_persistence, config.reward_tolerance);
            const auto episode = runner.run_episode(planner_rng, env_rng);
            std::ostringstream os;
            os << "# utility " << esr::format_double(episode.utility) << " return " << episode.cumulative.to_string()
               << '\n';
            runner.tree().dump(os);
            emit(os.str(), o.out);
        } else {
            const esr::ExperimentResult result = esr::run_experiment(to_run_config(o));
            emit(esr::to_csv(result), o.out);
            std::fprintf(stderr, "%zu runs x %zu episodes in %.3f s; final mean %.6g\n", result.runs(),
                         result.episodes(), result.wall_seconds, result.mean.back());
        }
    } catch (const esr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const esr::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
