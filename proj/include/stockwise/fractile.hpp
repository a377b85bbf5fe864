#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stockwise/profit.hpp"

namespace stockwise {

enum class SolveMethod { continuous_fractile, discrete_forward_difference };

/// Per-product diagnostics attached to a solved plan.
struct ProductReport {
    std::string name;
    double n_opt = 0.0;
    double fractile = 0.0;  // target CDF level c/(c+s)
    double cdf_at_n = 0.0;  // CDF actually reached at n_opt
    /// Marginal value of one more unit at n_opt, c - (c+s)*F(n_opt).
    /// Near zero at a continuous optimum; <= 0 at a discrete one.
    double stationarity_residual = 0.0;
    SolveMethod method = SolveMethod::continuous_fractile;
};

struct SolveReport {
    OrderPlan plan;
    std::vector<ProductReport> per_product;
    double expected_profit = 0.0;
};

/// The CDF level the optimal order quantity must reach: c/(c+s).
/// Lies in (0, 1]; equals 1 exactly when there is no overage cost.
double critical_fractile(const Product& p);

/// Profit-maximizing order quantity for one continuous-demand product:
/// the generalized inverse CDF at the critical fractile.
/// Throws UnboundedQuantile when unit_loss = 0 and support is unbounded.
double optimal_continuous(const Product& p, const ContinuousDemand& d);

/// Discrete counterpart: the smallest n with cdf(n) >= c/(c+s).
/// When the fractile is hit exactly at an atom, n and n+1 tie in expected
/// profit; the smaller order is returned.
std::int64_t optimal_discrete(const Product& p, const DiscreteDemand& d);

/// Solve every product independently (the expectation separates across
/// products) and assemble the plan with diagnostics.
SolveReport solve(const Catalog& catalog);

/// Leading principal minors of the profit Hessian at a two-product
/// continuous plan. Pattern (negative, positive) certifies strict
/// concavity, so a stationary plan there is the global maximum.
/// The certificate is inconclusive (verdict false) where a density
/// vanishes.
struct ConcavityCertificate {
    double delta1 = 0.0;
    double delta2 = 0.0;
    bool verdict = false;
};

/// Requires exactly two products, both with continuous demand
/// (NotContinuous otherwise).
ConcavityCertificate concavity_certificate(const Catalog& catalog, const OrderPlan& plan);

}  // namespace stockwise
