#include "esr/envs/bandit.hpp"

#include <cmath>
#include <string>

namespace esr::envs {

BanditParams BanditParams::momab() {
    BanditParams p;
    p.means = {ReturnVector{0.0, 0.8}, ReturnVector{0.4, 0.4}, ReturnVector{0.8, 0.0}, ReturnVector{0.9, 0.1}};
    p.variance = 0.0005;
    p.noise = Noise::gaussian;
    return p;
}

BanditParams BanditParams::single_arm_demo() {
    BanditParams p;
    p.means = {ReturnVector{1.0, 1.0}};
    p.variance = 0.0;
    p.noise = Noise::bernoulli_half;
    return p;
}

BanditParams BanditParams::momab_from(const ParamMap& params) {
    BanditParams p = momab();
    const auto arms = get_int(params, "arms", static_cast<std::int64_t>(p.means.size()));
    if (arms < 1 || arms > static_cast<std::int64_t>(p.means.size())) {
        throw ConfigError("momab arms must lie in 1.." + std::to_string(p.means.size()));
    }
    p.means.resize(static_cast<std::size_t>(arms));
    p.variance = get_double(params, "variance", p.variance);
    p.validate();
    return p;
}

void BanditParams::validate() const {
    if (means.empty()) throw ConfigError("bandit needs at least one arm");
    for (const auto& m : means) {
        if (m.size() != means.front().size()) throw ConfigError("bandit arms must share one objective count");
    }
    if (!(variance >= 0.0)) throw ConfigError("bandit variance must be >= 0");
}

ReturnVector bandit_pull(const BanditParams& params, std::size_t arm, Rng& rng) {
    if (arm >= params.means.size()) throw UsageError("bandit arm " + std::to_string(arm) + " out of range");
    ReturnVector r = params.means[arm];
    if (params.noise == BanditParams::Noise::bernoulli_half) {
        if (!rng.bernoulli(0.5)) r = ReturnVector::zeros(r.size());
        return r;
    }
    if (params.variance > 0.0) {
        const double sd = std::sqrt(params.variance);
        for (std::size_t o = 0; o < r.size(); ++o) r[o] += sd * rng.normal();
    }
    return r;
}

Bandit::Bandit(BanditParams params, std::string name) : params_(std::move(params)), name_(std::move(name)) {
    params_.validate();
}

StepResult Bandit::step(StateId state, std::size_t action, Rng& rng) const {
    if (state != 0) throw UsageError("bandit stepped after its single pull");
    return StepResult{1, bandit_pull(params_, action, rng), true};
}

}  // namespace esr::envs
