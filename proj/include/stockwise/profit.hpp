#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "stockwise/demand.hpp"
#include "stockwise/errors.hpp"

namespace stockwise {

/// Per-unit economics of one product: each sold unit earns unit_profit,
/// each ordered-but-unsold unit costs unit_loss.
struct Product {
    std::string name;
    double unit_profit = 0.0;
    double unit_loss = 0.0;
};

/// Ordered list of products with their demand models.
/// Validates names are unique and economics are sane at construction;
/// immutable afterwards.
class Catalog {
public:
    explicit Catalog(std::vector<std::pair<Product, DemandModel>> items);

    std::size_t size() const { return items_.size(); }
    const Product& product(std::size_t k) const { return items_[k].first; }
    const DemandModel& demand(std::size_t k) const { return items_[k].second; }

private:
    std::vector<std::pair<Product, DemandModel>> items_;
};

/// Order quantities, one per catalog entry. Entries for discrete-demand
/// products must be (numerically) integers.
using OrderPlan = std::vector<double>;

/// Profit of one realized demand vector under a fixed plan: sold units
/// earn, leftover units lose, demand beyond the order is simply missed.
double realized_profit(const Catalog& catalog, const OrderPlan& plan,
                       const std::vector<double>& demand);

/// E[profit] of a single continuous-demand product at order quantity n:
/// c*n + (c+s) * integral_0^n (x - n) f(x) dx.
/// Closed forms for uniform and exponential demand; adaptive quadrature
/// (absolute tolerance 1e-9) otherwise.
double expected_profit_term(const Product& p, const ContinuousDemand& d, double n);

/// Discrete counterpart, an exact finite sum:
/// c*n + (c+s) * sum_{i=0}^{n} (i - n) pmf(i).
double expected_profit_term(const Product& p, const DiscreteDemand& d, std::int64_t n);

/// Total expected profit of a plan: the sum of per-product terms.
/// Expectation depends only on the marginal distributions, so this is
/// exact even when product demands are correlated.
double expected_profit(const Catalog& catalog, const OrderPlan& plan);

/// Expected profit of a two-product plan under an explicit joint pmf,
/// evaluated as the full double sum over the support (four branches of
/// the realized profit, one per over/under stocking combination).
/// Agrees with the sum of marginal terms to within accumulation error.
double expected_profit_joint(const Product& p1, const Product& p2,
                             const JointDiscreteDemand& joint, std::int64_t n1,
                             std::int64_t n2);

/// Gain in expected profit from ordering one more unit:
/// term(n+1) - term(n) = c - (c+s) * cdf(n).
/// Positive while n is below the optimal quantity, negative above.
double forward_difference(const Product& p, const DiscreteDemand& d, std::int64_t n);

}  // namespace stockwise
