#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "esr/rng.hpp"

namespace esr {

/// Online bootstrap approximation of the posterior over an expected utility.
///
/// Each replicate j keeps alpha_j (accumulated utility) and beta_j (accumulated
/// weight); alpha_j / beta_j is that replicate's expected-utility estimate. An update
/// flips an independent fair coin per replicate and, on heads, adds the utility to
/// alpha_j and 1 to beta_j ("double-or-nothing" reweighting).
class BtsDistribution {
public:
    /// Throws UsageError when replicates == 0 or beta_init <= 0.
    BtsDistribution(std::size_t replicates, double alpha_init, double beta_init);

    std::size_t size() const { return alpha_.size(); }
    double alpha(std::size_t j) const { return alpha_[j]; }
    double beta(std::size_t j) const { return beta_[j]; }
    double mean(std::size_t j) const { return alpha_[j] / beta_[j]; }
    double alpha_init() const { return alpha_init_; }
    double beta_init() const { return beta_init_; }

    /// Throws UsageError for a non-finite utility.
    void update(double utility, Rng& rng);

    /// Deterministic form of `update`: bit (j % 64) of coin_words[j / 64] is
    /// replicate j's coin. Requires coin_words.size() >= words_for(size()).
    void update_with_coins(double utility, std::span<const std::uint64_t> coin_words);

    /// alpha_j / beta_j for a uniformly drawn replicate j.
    double sample_mean(Rng& rng) const;

    double mean_of_means() const;

    /// The coin words `update` consumes from `rng` for a distribution of this size.
    static std::vector<std::uint64_t> draw_coin_words(Rng& rng, std::size_t replicates);
    static constexpr std::size_t words_for(std::size_t replicates) { return (replicates + 63) / 64; }

private:
    template <typename NextWord>
    void apply(double utility, NextWord&& next_word);

    std::vector<double> alpha_;
    std::vector<double> beta_;
    double alpha_init_;
    double beta_init_;
};

inline BtsDistribution bts_new(std::size_t replicates, double alpha_init, double beta_init) {
    return BtsDistribution(replicates, alpha_init, beta_init);
}
inline void bts_update(BtsDistribution& d, double utility, Rng& rng) { d.update(utility, rng); }
inline double bts_sample_mean(const BtsDistribution& d, Rng& rng) { return d.sample_mean(rng); }

}  // namespace esr
