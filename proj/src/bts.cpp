#include "esr/bts.hpp"

#include <cmath>
#include <string>

#include "esr/errors.hpp"

namespace esr {

BtsDistribution::BtsDistribution(std::size_t replicates, double alpha_init, double beta_init)
    : alpha_init_(alpha_init), beta_init_(beta_init) {
    if (replicates == 0) throw UsageError("BTS distribution needs at least one replicate");
    if (!(beta_init > 0.0)) throw UsageError("BTS beta_init must be > 0, got " + std::to_string(beta_init));
    if (!std::isfinite(alpha_init)) throw UsageError("BTS alpha_init must be finite");
    alpha_.assign(replicates, alpha_init);
    beta_.assign(replicates, beta_init);
}

template <typename NextWord>
void BtsDistribution::apply(double utility, NextWord&& next_word) {
    if (!std::isfinite(utility)) throw UsageError("BTS update with non-finite utility");
    const std::size_t n = alpha_.size();
    double* alpha = alpha_.data();
    double* beta = beta_.data();
    for (std::size_t base = 0; base < n; base += 64) {
        std::uint64_t word = next_word();
        const std::size_t end = base + 64 < n ? base + 64 : n;
        for (std::size_t j = base; j < end; ++j, word >>= 1) {
            // Branchless: a tails flip adds exactly zero.
            const double heads = static_cast<double>(word & 1U);
            alpha[j] += heads * utility;
            beta[j] += heads;
        }
    }
}

void BtsDistribution::update(double utility, Rng& rng) {
    apply(utility, [&rng] { return rng(); });
}

void BtsDistribution::update_with_coins(double utility, std::span<const std::uint64_t> coin_words) {
    if (coin_words.size() < words_for(size())) {
        throw UsageError("update_with_coins: need " + std::to_string(words_for(size())) + " coin words");
    }
    std::size_t next = 0;
    apply(utility, [&] { return coin_words[next++]; });
}

double BtsDistribution::sample_mean(Rng& rng) const {
    const auto j = static_cast<std::size_t>(rng.below(alpha_.size()));
    return alpha_[j] / beta_[j];
}

double BtsDistribution::mean_of_means() const {
    double sum = 0.0;
    for (std::size_t j = 0; j < alpha_.size(); ++j) sum += alpha_[j] / beta_[j];
    return sum / static_cast<double>(alpha_.size());
}

std::vector<std::uint64_t> BtsDistribution::draw_coin_words(Rng& rng, std::size_t replicates) {
    std::vector<std::uint64_t> words(words_for(replicates));
    for (auto& w : words) w = rng();
    return words;
}

}  // namespace esr
