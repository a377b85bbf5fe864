#include "stockwise/profit.hpp"

#include <cmath>
#include <set>
#include <string>

#include "stockwise/numerics.hpp"

namespace stockwise {

namespace {

void check_plan_shape(const Catalog& catalog, const OrderPlan& plan) {
    if (plan.size() != catalog.size()) {
        throw LengthMismatch("plan has " + std::to_string(plan.size()) + " entries, catalog has " +
                             std::to_string(catalog.size()));
    }
    for (std::size_t k = 0; k < plan.size(); ++k) {
        if (!(plan[k] >= 0.0) || !std::isfinite(plan[k])) {
            throw DomainError("order quantity for '" + catalog.product(k).name +
                              "' must be finite and >= 0");
        }
    }
}

/// Realized profit of one product: the piecewise branch of the profit
/// function for a single demand outcome.
double piecewise_term(const Product& p, double n, double demand) {
    if (demand <= n) {
        return demand * p.unit_profit - (n - demand) * p.unit_loss;
    }
    return p.unit_profit * n;
}

std::int64_t as_integer_quantity(const Product& p, double n) {
    double r = std::round(n);
    if (std::abs(n - r) > 1e-9) {
        throw DomainError("order quantity for discrete-demand product '" + p.name +
                          "' must be an integer, got " + std::to_string(n));
    }
    return static_cast<std::int64_t>(r);
}

}  // namespace

Catalog::Catalog(std::vector<std::pair<Product, DemandModel>> items) : items_(std::move(items)) {
    if (items_.empty()) {
        throw DomainError("catalog must contain at least one product");
    }
    std::set<std::string> names;
    for (const auto& [product, demand] : items_) {
        if (product.name.empty()) {
            throw DomainError("product names must be nonempty");
        }
        if (!names.insert(product.name).second) {
            throw DomainError("duplicate product name '" + product.name + "'");
        }
        if (!std::isfinite(product.unit_profit) || product.unit_profit <= 0.0) {
            throw DomainError("product '" + product.name + "' needs unit_profit > 0");
        }
        if (!std::isfinite(product.unit_loss) || product.unit_loss < 0.0) {
            throw DomainError("product '" + product.name + "' needs unit_loss >= 0");
        }
    }
}

double realized_profit(const Catalog& catalog, const OrderPlan& plan,
                       const std::vector<double>& demand) {
    check_plan_shape(catalog, plan);
    if (demand.size() != catalog.size()) {
        throw LengthMismatch("demand vector has " + std::to_string(demand.size()) +
                             " entries, catalog has " + std::to_string(catalog.size()));
    }
    double total = 0.0;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        if (!(demand[k] >= 0.0)) {
            throw DomainError("demand for '" + catalog.product(k).name + "' must be >= 0");
        }
        total += piecewise_term(catalog.product(k), plan[k], demand[k]);
    }
    return total;
}

double expected_profit_term(const Product& p, const ContinuousDemand& d, double n) {
    if (!(n >= 0.0) || !std::isfinite(n)) {
        throw DomainError("order quantity must be finite and >= 0");
    }
    if (n == 0.0) return 0.0;

    const double c = p.unit_profit;
    const double s = p.unit_loss;

    switch (d.family()) {
        case ContinuousDemand::Family::uniform: {
            double lo = d.support_min();
            double hi = d.support_max();
            double shortfall;  // integral_0^n (x - n) f(x) dx, always <= 0
            if (n <= lo) {
                shortfall = 0.0;
            } else if (n <= hi) {
                shortfall = -(n - lo) * (n - lo) / (2.0 * (hi - lo));
            } else {
                shortfall = 0.5 * (lo + hi) - n;
            }
            return c * n + (c + s) * shortfall;
        }
        case ContinuousDemand::Family::exponential: {
            // integral_0^n (x - n) r e^{-rx} dx = (1 - e^{-rn})/r - n
            double r = d.exponential_rate();
            double shortfall = -std::expm1(-r * n) / r - n;
            return c * n + (c + s) * shortfall;
        }
        default: {
            auto integrand = [&](double x) { return (x - n) * d.pdf(x); };
            std::vector<double> splits = d.density_breakpoints();
            splits.push_back(n);
            double shortfall = integrate(integrand, 0.0, n, 1e-9, std::move(splits));
            return c * n + (c + s) * shortfall;
        }
    }
}

double expected_profit_term(const Product& p, const DiscreteDemand& d, std::int64_t n) {
    if (n < 0) {
        throw DomainError("order quantity must be >= 0");
    }
    if (n == 0) return 0.0;
    NeumaierSum shortfall;
    d.for_each_mass_up_to(n, [&](std::int64_t i, double mass) {
        shortfall.add(static_cast<double>(i - n) * mass);
    });
    return p.unit_profit * static_cast<double>(n) +
           (p.unit_profit + p.unit_loss) * shortfall.value();
}

double expected_profit(const Catalog& catalog, const OrderPlan& plan) {
    check_plan_shape(catalog, plan);
    NeumaierSum total;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        const Product& p = catalog.product(k);
        const DemandModel& d = catalog.demand(k);
        if (const auto* cont = std::get_if<ContinuousDemand>(&d)) {
            total.add(expected_profit_term(p, *cont, plan[k]));
        } else {
            total.add(expected_profit_term(p, std::get<DiscreteDemand>(d),
                                           as_integer_quantity(p, plan[k])));
        }
    }
    return total.value();
}

double expected_profit_joint(const Product& p1, const Product& p2,
                             const JointDiscreteDemand& joint, std::int64_t n1,
                             std::int64_t n2) {
    if (n1 < 0 || n2 < 0) {
        throw DomainError("order quantities must be >= 0");
    }
    // Double sum over the whole support; the summand takes one of four
    // forms depending on which products over- or under-shoot their order.
    NeumaierSum total;
    for (std::size_t i = 0; i < joint.rows(); ++i) {
        for (std::size_t j = 0; j < joint.cols(); ++j) {
            double mass = joint.pmf(i, j);
            if (mass == 0.0) continue;
            double h1 = piecewise_term(p1, static_cast<double>(n1), static_cast<double>(i));
            double h2 = piecewise_term(p2, static_cast<double>(n2), static_cast<double>(j));
            total.add((h1 + h2) * mass);
        }
    }
    return total.value();
}

double forward_difference(const Product& p, const DiscreteDemand& d, std::int64_t n) {
    if (n < 0) {
        throw DomainError("forward difference needs n >= 0");
    }
    return p.unit_profit - (p.unit_profit + p.unit_loss) * d.cdf(static_cast<double>(n));
}

}  // namespace stockwise
