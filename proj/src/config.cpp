#include "stockwise/config.hpp"

#include <charconv>
#include <map>
#include <utility>

#include <json.hpp>

#include "stockwise/errors.hpp"

namespace stockwise {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> as_number_array(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

/// Reject unknown keys so typos surface instead of silently taking
/// defaults.
void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) known = known || key == a;
        if (!known) fail(path, "unknown field '" + key + "'");
    }
}

std::int64_t parse_table_key(const std::string& key, const std::string& path) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), value);
    if (ec != std::errc() || ptr != key.data() + key.size() || value < 0) {
        fail(path, "table key '" + key + "' is not a nonnegative integer");
    }
    return value;
}

void parse_demand(const json& j, const std::string& path, ProductSpec& spec) {
    if (!j.is_object()) fail(path, "expected an object");
    std::string kind = as_string(field(j, "kind", path), path + ".kind");
    try {
        if (kind == "uniform") {
            check_keys(j, {"kind", "lo", "hi"}, path);
            spec.demand = ContinuousDemand::uniform(as_number(field(j, "lo", path), path + ".lo"),
                                                    as_number(field(j, "hi", path), path + ".hi"));
        } else if (kind == "exponential") {
            check_keys(j, {"kind", "rate"}, path);
            spec.demand =
                ContinuousDemand::exponential(as_number(field(j, "rate", path), path + ".rate"));
        } else if (kind == "truncated_normal") {
            check_keys(j, {"kind", "mean", "stddev", "lo"}, path);
            double lo = j.contains("lo") ? as_number(j["lo"], path + ".lo") : 0.0;
            spec.demand = ContinuousDemand::truncated_normal(
                as_number(field(j, "mean", path), path + ".mean"),
                as_number(field(j, "stddev", path), path + ".stddev"), lo);
        } else if (kind == "piecewise_empirical") {
            check_keys(j, {"kind", "breakpoints", "weights"}, path);
            spec.demand = ContinuousDemand::piecewise_empirical(
                as_number_array(field(j, "breakpoints", path), path + ".breakpoints"),
                as_number_array(field(j, "weights", path), path + ".weights"));
        } else if (kind == "poisson") {
            check_keys(j, {"kind", "lambda"}, path);
            spec.demand =
                DiscreteDemand::poisson(as_number(field(j, "lambda", path), path + ".lambda"));
        } else if (kind == "geometric") {
            check_keys(j, {"kind", "p"}, path);
            spec.demand = DiscreteDemand::geometric(as_number(field(j, "p", path), path + ".p"));
        } else if (kind == "table") {
            check_keys(j, {"kind", "mass"}, path);
            const json& mass = field(j, "mass", path);
            if (!mass.is_object()) fail(path + ".mass", "expected an object of key: probability");
            std::map<std::int64_t, double> table;
            for (const auto& [key, value] : mass.items()) {
                table[parse_table_key(key, path + ".mass")] =
                    as_number(value, path + ".mass['" + key + "']");
            }
            spec.demand = DiscreteDemand::table(table);
        } else if (kind == "empirical") {
            check_keys(j, {"kind", "csv_column"}, path);
            spec.csv_column =
                as_string(field(j, "csv_column", path), path + ".csv_column");
        } else {
            fail(path + ".kind", "unknown demand kind '" + kind + "'");
        }
    } catch (const DomainError& e) {
        fail(path, e.what());
    }
}

}  // namespace

bool PlanConfig::needs_history() const {
    for (const ProductSpec& p : products) {
        if (p.csv_column.has_value()) return true;
    }
    return false;
}

PlanConfig parse_plan_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        // nlohmann's message already carries "at line L, column C".
        throw ConfigError(e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config: expected a JSON object at the top level");
    }
    check_keys(root, {"products", "constraint"}, "config");

    PlanConfig config;
    const json& products = field(root, "products", "config");
    if (!products.is_array() || products.empty()) {
        throw ConfigError("config.products: expected a nonempty array");
    }
    for (std::size_t i = 0; i < products.size(); ++i) {
        std::string path = "products[" + std::to_string(i) + "]";
        const json& p = products[i];
        if (!p.is_object()) fail(path, "expected an object");
        check_keys(p, {"name", "unit_profit", "unit_loss", "demand"}, path);
        ProductSpec spec;
        spec.product.name = as_string(field(p, "name", path), path + ".name");
        spec.product.unit_profit =
            as_number(field(p, "unit_profit", path), path + ".unit_profit");
        spec.product.unit_loss = as_number(field(p, "unit_loss", path), path + ".unit_loss");
        parse_demand(field(p, "demand", path), path + ".demand", spec);
        config.products.push_back(std::move(spec));
    }

    if (root.contains("constraint") && !root["constraint"].is_null()) {
        const json& c = root["constraint"];
        std::string path = "constraint";
        if (!c.is_object()) fail(path, "expected an object");
        check_keys(c, {"relation", "coeffs", "rhs"}, path);
        ConstraintSpec spec;
        std::string relation = as_string(field(c, "relation", path), path + ".relation");
        if (relation == "eq") {
            spec.relation = ConstraintSpec::Relation::eq;
        } else if (relation == "le") {
            spec.relation = ConstraintSpec::Relation::le;
        } else {
            fail(path + ".relation", "expected \"eq\" or \"le\", got \"" + relation + "\"");
        }
        spec.coeffs = as_number_array(field(c, "coeffs", path), path + ".coeffs");
        if (spec.coeffs.size() != config.products.size()) {
            fail(path + ".coeffs", "expected " + std::to_string(config.products.size()) +
                                       " coefficients to match the products, got " +
                                       std::to_string(spec.coeffs.size()));
        }
        spec.rhs = as_number(field(c, "rhs", path), path + ".rhs");
        config.constraint = std::move(spec);
    }
    return config;
}

Catalog build_catalog(const PlanConfig& config, const DemandHistory* history) {
    std::vector<std::pair<Product, DemandModel>> items;
    items.reserve(config.products.size());
    for (std::size_t i = 0; i < config.products.size(); ++i) {
        const ProductSpec& spec = config.products[i];
        if (spec.demand.has_value()) {
            items.emplace_back(spec.product, *spec.demand);
            continue;
        }
        const std::string& column = spec.csv_column.value();
        if (history == nullptr) {
            throw ConfigError("product '" + spec.product.name +
                              "' uses empirical demand; a demand history CSV is required");
        }
        const std::vector<std::int64_t>* observations = history->find_column(column);
        if (observations == nullptr) {
            throw ConfigError("product '" + spec.product.name + "': column '" + column +
                              "' not found in the demand history");
        }
        try {
            items.emplace_back(spec.product, fit_empirical(*observations));
        } catch (const EmptySample&) {
            throw ConfigError("product '" + spec.product.name + "': column '" + column +
                              "' has no observations");
        }
    }
    try {
        return Catalog(std::move(items));
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace stockwise
