#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "esr/errors.hpp"
#include "esr/rng.hpp"

namespace esr {

/// Vector of per-objective returns. Storage is inline so rollouts never allocate.
class ReturnVector {
public:
    static constexpr std::size_t kMaxObjectives = 8;

    ReturnVector() = default;
    explicit ReturnVector(std::size_t n);
    ReturnVector(std::initializer_list<double> values);
    explicit ReturnVector(std::span<const double> values);

    static ReturnVector zeros(std::size_t n) { return ReturnVector(n); }

    std::size_t size() const { return size_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    std::span<const double> values() const { return {values_.data(), size_}; }

    /// Element-wise accumulate; throws UsageError on length mismatch.
    ReturnVector& operator+=(const ReturnVector& other);

    friend bool operator==(const ReturnVector& a, const ReturnVector& b);

    std::string to_string() const;

private:
    std::array<double, kMaxObjectives> values_{};
    std::size_t size_ = 0;
};

ReturnVector add_returns(const ReturnVector& a, const ReturnVector& b);
inline ReturnVector operator+(const ReturnVector& a, const ReturnVector& b) { return add_returns(a, b); }

/// True when every component differs by at most `tolerance` (0 means exact equality).
bool returns_match(const ReturnVector& a, const ReturnVector& b, double tolerance);

/// Returns already received this episode (accrued) and returns gathered below the
/// current decision point during one planning iteration (future).
struct ReturnLedger {
    ReturnVector accrued;
    ReturnVector future;
};

ReturnVector cumulative(const ReturnLedger& ledger);

using StateId = std::uint64_t;

struct StepResult {
    StateId next_state = 0;
    ReturnVector reward;
    bool terminal = false;
};

/// Generative finite-horizon (MO)MDP. Implementations encode everything the
/// dynamics need (timestep included) into the StateId, so `step` is a pure
/// function of (state, action, rng draws). Observations are states.
class EnvironmentModel {
public:
    virtual ~EnvironmentModel() = default;

    virtual std::string name() const = 0;
    virtual std::size_t objectives() const = 0;
    virtual int horizon() const = 0;
    virtual StateId initial_state() const = 0;
    virtual std::size_t num_actions(StateId state) const = 0;
    virtual bool is_terminal(StateId state) const = 0;
    virtual StepResult step(StateId state, std::size_t action, Rng& rng) const = 0;

    /// Whether every reward component is integer-valued; chance nodes then match
    /// outcomes by exact equality instead of a tolerance.
    virtual bool integer_rewards() const { return false; }

    virtual std::string describe_state(StateId state) const { return std::to_string(state); }
};

enum class Algorithm { nlu_mcts, dmcts };

std::string to_string(Algorithm algo);
Algorithm parse_algorithm(const std::string& tag);

struct RunConfig {
    Algorithm algorithm = Algorithm::dmcts;
    std::size_t n_exec = 2;
    std::size_t episodes = 100;
    std::size_t runs = 10;
    std::uint64_t seed = 0;
    double exploration = 1.4142135623730951;
    std::size_t replicates = 100;
    double alpha_init = 1.0;
    double beta_init = 1.0;
    std::string env = "fishwood";
    std::map<std::string, std::string> env_params;
    std::string utility;  // "<name>[:param=val,...]"; empty selects the environment default
    bool tree_persistence = true;
    double reward_tolerance = 1e-9;
    std::size_t trailing_window = 100;
    std::size_t threads = 0;  // 0 = hardware concurrency

    /// Throws ConfigError when any field is out of range.
    void validate() const;
};

}  // namespace esr
