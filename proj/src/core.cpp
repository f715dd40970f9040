#include "esr/core.hpp"

#include <cmath>
#include <sstream>

namespace esr {

ReturnVector::ReturnVector(std::size_t n) : size_(n) {
    if (n > kMaxObjectives) {
        throw UsageError("ReturnVector supports at most " + std::to_string(kMaxObjectives) +
                         " objectives, got " + std::to_string(n));
    }
}

ReturnVector::ReturnVector(std::initializer_list<double> values) : ReturnVector(values.size()) {
    std::size_t i = 0;
    for (double v : values) values_[i++] = v;
}

ReturnVector::ReturnVector(std::span<const double> values) : ReturnVector(values.size()) {
    for (std::size_t i = 0; i < values.size(); ++i) values_[i] = values[i];
}

ReturnVector& ReturnVector::operator+=(const ReturnVector& other) {
    if (other.size_ != size_) {
        throw UsageError("return vector length mismatch: " + std::to_string(size_) + " vs " +
                         std::to_string(other.size_));
    }
    for (std::size_t i = 0; i < size_; ++i) values_[i] += other.values_[i];
    return *this;
}

bool operator==(const ReturnVector& a, const ReturnVector& b) {
    if (a.size_ != b.size_) return false;
    for (std::size_t i = 0; i < a.size_; ++i) {
        if (a.values_[i] != b.values_[i]) return false;
    }
    return true;
}

std::string ReturnVector::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (std::size_t i = 0; i < size_; ++i) {
        if (i) os << ',';
        os << values_[i];
    }
    os << ']';
    return os.str();
}

ReturnVector add_returns(const ReturnVector& a, const ReturnVector& b) {
    ReturnVector out = a;
    out += b;
    return out;
}

bool returns_match(const ReturnVector& a, const ReturnVector& b, double tolerance) {
    if (a.size() != b.size()) return false;
    if (tolerance == 0.0) return a == b;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > tolerance) return false;
    }
    return true;
}

ReturnVector cumulative(const ReturnLedger& ledger) { return add_returns(ledger.accrued, ledger.future); }

std::string to_string(Algorithm algo) {
    switch (algo) {
        case Algorithm::nlu_mcts: return "nlu-mcts";
        case Algorithm::dmcts: return "dmcts";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string& tag) {
    if (tag == "nlu-mcts" || tag == "nlu_mcts") return Algorithm::nlu_mcts;
    if (tag == "dmcts") return Algorithm::dmcts;
    throw ConfigError("unknown algorithm '" + tag + "' (expected nlu-mcts or dmcts)");
}

void RunConfig::validate() const {
    if (n_exec < 1) throw ConfigError("n_exec must be >= 1");
    if (episodes < 1) throw ConfigError("episodes must be >= 1");
    if (runs < 1) throw ConfigError("runs must be >= 1");
    if (replicates < 1) throw ConfigError("J (replicates) must be >= 1");
    if (!(beta_init > 0.0)) throw ConfigError("beta_init must be > 0");
    if (!std::isfinite(alpha_init)) throw ConfigError("alpha_init must be finite");
    if (!(exploration >= 0.0) || !std::isfinite(exploration)) throw ConfigError("C must be a finite value >= 0");
    if (!(reward_tolerance >= 0.0)) throw ConfigError("reward tolerance must be >= 0");
}

}  // namespace esr
