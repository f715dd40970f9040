#include "esr/utility.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

namespace esr {
namespace {

constexpr std::array<std::pair<UtilityKind, const char*>, 10> kNames{{
    {UtilityKind::fishwood_min, "fishwood_min"},
    {UtilityKind::risk_seeking_sq, "risk_seeking_sq"},
    {UtilityKind::risk_averse_sqrt, "risk_averse_sqrt"},
    {UtilityKind::product, "product"},
    {UtilityKind::momab_scaled_product, "momab_scaled_product"},
    {UtilityKind::quadratic_sum, "quadratic_sum"},
    {UtilityKind::u1_halfmax, "u1_halfmax"},
    {UtilityKind::u2_quartic, "u2_quartic"},
    {UtilityKind::u3_min_quarter, "u3_min_quarter"},
    {UtilityKind::u4_quadratic_sum, "u4_quadratic_sum"},
}};

bool param_allowed(UtilityKind kind, const std::string& key) {
    switch (kind) {
        case UtilityKind::risk_averse_sqrt: return key == "shift";
        case UtilityKind::momab_scaled_product: return key == "scale";
        case UtilityKind::product:
            return key == "arity" || (key.rfind("offset", 0) == 0 && key.size() > 6 &&
                                      std::all_of(key.begin() + 6, key.end(), [](char c) {
                                          return c >= '0' && c <= '9';
                                      }));
        default: return false;
    }
}

double parse_double(const std::string& s, const std::string& context) {
    double value = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) throw ConfigError("bad numeric value '" + s + "' in " + context);
    return value;
}

void require_arity(const UtilitySpec& spec, const ReturnVector& r) {
    if (auto n = utility_arity(spec); n && *n != r.size()) {
        throw UsageError("utility " + to_string(spec.kind) + " expects " + std::to_string(*n) +
                         " objectives, got " + std::to_string(r.size()));
    }
    if (r.size() == 0) throw UsageError("utility applied to an empty return vector");
}

}  // namespace

double UtilitySpec::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

std::string to_string(UtilityKind kind) {
    for (auto [k, name] : kNames) {
        if (k == kind) return name;
    }
    return "unknown";
}

UtilityKind parse_utility_kind(const std::string& name) {
    std::string normalised = name;
    std::replace(normalised.begin(), normalised.end(), '-', '_');
    for (auto [k, n] : kNames) {
        if (normalised == n) return k;
    }
    std::string known;
    for (auto [k, n] : kNames) known += std::string(known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown utility '" + name + "' (known: " + known + ")");
}

UtilitySpec parse_utility(const std::string& text) {
    UtilitySpec spec;
    const auto colon = text.find(':');
    spec.kind = parse_utility_kind(text.substr(0, colon));
    if (colon == std::string::npos) return spec;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("utility parameter '" + item + "' is not key=value");
        std::string key = item.substr(0, eq);
        if (!param_allowed(spec.kind, key)) {
            throw ConfigError("utility " + to_string(spec.kind) + " has no parameter '" + key + "'");
        }
        spec.params[key] = parse_double(item.substr(eq + 1), "utility '" + text + "'");
    }
    return spec;
}

std::string to_string(const UtilitySpec& spec) {
    std::string out = to_string(spec.kind);
    char sep = ':';
    for (const auto& [k, v] : spec.params) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        out += sep + k + "=" + os.str();
        sep = ',';
    }
    return out;
}

std::optional<std::size_t> utility_arity(const UtilitySpec& spec) {
    switch (spec.kind) {
        case UtilityKind::risk_seeking_sq:
        case UtilityKind::risk_averse_sqrt: return 1;
        case UtilityKind::product:
            if (auto it = spec.params.find("arity"); it != spec.params.end()) {
                return static_cast<std::size_t>(it->second);
            }
            return std::nullopt;
        default: return 2;
    }
}

double eval_utility(const UtilitySpec& spec, const ReturnVector& r) {
    require_arity(spec, r);
    switch (spec.kind) {
        case UtilityKind::fishwood_min: return std::min(r[0], std::floor(r[1] / 2.0));
        case UtilityKind::risk_seeking_sq: {
            const double x = std::max(0.0, r[0]);
            return x * x;
        }
        case UtilityKind::risk_averse_sqrt: {
            const double shifted = r[0] + spec.param("shift", 150.0);
            if (shifted < 0.0) {
                throw DomainError("risk_averse_sqrt: shifted return " + std::to_string(shifted) +
                                  " is negative; the shift is too small for this environment");
            }
            return std::sqrt(shifted);
        }
        case UtilityKind::product: {
            double out = 1.0;
            for (std::size_t o = 0; o < r.size(); ++o) {
                out *= r[o] + spec.param("offset" + std::to_string(o), 0.0);
            }
            return out;
        }
        case UtilityKind::momab_scaled_product:
            return spec.param("scale", 6.25) * std::max(r[0], 0.0) * std::max(r[1], 0.0);
        case UtilityKind::quadratic_sum:
        case UtilityKind::u4_quadratic_sum: return r[0] * r[0] + r[1] * r[1];
        case UtilityKind::u1_halfmax: return std::max(r[0] / 2.0, r[1] / 2.0);
        case UtilityKind::u2_quartic: {
            const double sq = r[1] * r[1];
            return r[0] / 2.0 + sq * sq;
        }
        case UtilityKind::u3_min_quarter: return std::min(r[0] / 2.0, r[1] / 4.0);
    }
    throw ContractViolation("unhandled utility kind");
}

std::vector<double> min_max_scale(std::span<const double> series) {
    if (series.empty()) throw UsageError("min_max_scale on an empty series");
    const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    std::vector<double> out(series.size(), 0.5);
    if (hi == lo) return out;
    const double range = hi - lo;
    for (std::size_t i = 0; i < series.size(); ++i) {
        out[i] = std::clamp((series[i] - lo) / range, 0.0, 1.0);
    }
    return out;
}

}  // namespace esr
