#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stockwise/csv.hpp"
#include "stockwise/demand.hpp"
#include "stockwise/profit.hpp"

namespace stockwise {

struct ConstraintSpec {
    enum class Relation { eq, le };
    Relation relation = Relation::le;
    std::vector<double> coeffs;
    double rhs = 0.0;
};

/// One product from a plan configuration. Demand is either fully
/// specified inline or deferred to a named column of a demand history
/// (kind "empirical").
struct ProductSpec {
    Product product;
    std::optional<DemandModel> demand;
    std::optional<std::string> csv_column;
};

struct PlanConfig {
    std::vector<ProductSpec> products;
    std::optional<ConstraintSpec> constraint;

    bool needs_history() const;
};

/// Parse and validate a JSON plan configuration. Syntax errors carry the
/// line and column; schema errors carry the path of the offending field.
/// Everything is thrown as ConfigError.
PlanConfig parse_plan_config(const std::string& json_text);

/// Resolve empirical demand columns against a history (may be null when
/// no product needs one) and assemble the validated catalog.
Catalog build_catalog(const PlanConfig& config, const DemandHistory* history);

}  // namespace stockwise
