#pragma once

#include <cstdint>
#include <vector>

#include "stockwise/constrained.hpp"
#include "stockwise/profit.hpp"

namespace stockwise {

struct SimulationResult {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// Monte-Carlo estimate of expected profit at a fixed plan. Demand is
/// drawn by inverse-CDF sampling from a mersenne-twister stream, so equal
/// (seed, inputs) reproduce the result bit for bit on every platform.
/// Needs n_samples >= 2 (the standard error divides by n - 1).
SimulationResult simulate_profit(const Catalog& catalog, const OrderPlan& plan,
                                 std::int64_t n_samples, std::uint64_t seed);

/// Ground-truth argmax of expected profit over the full integer lattice
/// {0..bounds[0]} x ..., by plain enumeration. Deliberately artless: this
/// is the reference the fractile solver is judged against. Ties go to the
/// lexicographically smallest plan. Lattices past 10^7 points throw
/// BudgetExceeded.
OrderPlan brute_force_argmax_discrete(const Catalog& catalog,
                                      const std::vector<std::int64_t>& bounds);

/// Ground-truth argmax over a regular grid with the given per-coordinate
/// upper bounds and step, optionally restricted to a constraint. A linear
/// equality constraint removes one degree of freedom: the last coordinate
/// is solved from the others instead of being gridded. Accuracy is one
/// step per coordinate.
OrderPlan grid_argmax_continuous(const Catalog& catalog, const std::vector<double>& bounds,
                                 double step, const Constraint* cons = nullptr);

}  // namespace stockwise
