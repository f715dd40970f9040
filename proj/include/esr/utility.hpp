#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "esr/core.hpp"

namespace esr {

enum class UtilityKind {
    fishwood_min,          // min(fish, floor(wood / 2))
    risk_seeking_sq,       // max(0, x)^2
    risk_averse_sqrt,      // sqrt(x + shift), shift defaults to 150
    product,               // prod_o (r_o + offset<o>)
    momab_scaled_product,  // scale * max(r0, 0) * max(r1, 0), scale defaults to 6.25
    quadratic_sum,         // r1^2 + r2^2
    u1_halfmax,            // max(r1 / 2, r2 / 2)
    u2_quartic,            // r1 / 2 + r2^4
    u3_min_quarter,        // min(r1 / 2, r2 / 4)
    u4_quadratic_sum,      // r1^2 + r2^2
};

struct UtilitySpec {
    UtilityKind kind = UtilityKind::fishwood_min;
    std::map<std::string, double> params;

    double param(const std::string& key, double fallback) const;
};

std::string to_string(UtilityKind kind);
UtilityKind parse_utility_kind(const std::string& name);

/// Parses "<name>[:key=value[,key=value...]]". Throws ConfigError on unknown names
/// or parameters.
UtilitySpec parse_utility(const std::string& text);
std::string to_string(const UtilitySpec& spec);

/// Required return-vector length, or nullopt when the kind accepts any arity
/// (product without an explicit `arity` parameter).
std::optional<std::size_t> utility_arity(const UtilitySpec& spec);

/// Scalarises a cumulative return vector. Throws UsageError on arity mismatch and
/// DomainError when risk_averse_sqrt sees a negative shifted return.
double eval_utility(const UtilitySpec& spec, const ReturnVector& r);

/// Affine map of a series onto [0, 1] (min -> 0, max -> 1). A constant series maps
/// to 0.5 everywhere. Throws UsageError on an empty series.
std::vector<double> min_max_scale(std::span<const double> series);

}  // namespace esr
