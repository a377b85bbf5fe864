#include "stockwise/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <variant>

#include "stockwise/numerics.hpp"

namespace stockwise {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kBudget = 10'000'000;

}  // namespace

SimulationResult simulate_profit(const Catalog& catalog, const OrderPlan& plan,
                                 std::int64_t n_samples, std::uint64_t seed) {
    if (n_samples < 2) {
        throw DomainError("simulation needs at least 2 samples, got " +
                          std::to_string(n_samples));
    }
    std::mt19937_64 rng(seed);
    std::vector<double> demand(catalog.size());

    // Welford's running mean and sum of squared deviations: numerically
    // stable and, being sequential, reproducible for a fixed seed.
    double mean = 0.0;
    double m2 = 0.0;
    for (std::int64_t i = 1; i <= n_samples; ++i) {
        for (std::size_t k = 0; k < catalog.size(); ++k) {
            // One draw per product per sample, products in catalog order.
            demand[k] = quantile_at(catalog.demand(k), uniform_open01(rng()));
        }
        double x = realized_profit(catalog, plan, demand);
        double delta = x - mean;
        mean += delta / static_cast<double>(i);
        m2 += delta * (x - mean);
    }

    SimulationResult result;
    result.mean = mean;
    result.std_error = std::sqrt(m2 / static_cast<double>(n_samples - 1)) /
                       std::sqrt(static_cast<double>(n_samples));
    result.n_samples = n_samples;
    result.seed = seed;
    return result;
}

OrderPlan brute_force_argmax_discrete(const Catalog& catalog,
                                      const std::vector<std::int64_t>& bounds) {
    if (bounds.size() != catalog.size()) {
        throw LengthMismatch("bounds vector has " + std::to_string(bounds.size()) +
                             " entries, catalog has " + std::to_string(catalog.size()) +
                             " products");
    }
    std::vector<const DiscreteDemand*> ds(catalog.size());
    std::int64_t points = 1;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        ds[k] = std::get_if<DiscreteDemand>(&catalog.demand(k));
        if (ds[k] == nullptr) {
            throw DomainError("brute force argmax needs discrete demand, but product '" +
                              catalog.product(k).name + "' is continuous");
        }
        if (bounds[k] < 0) {
            throw DomainError("bounds must be >= 0");
        }
        if (bounds[k] >= kBudget) {
            throw BudgetExceeded("lattice has more than 10^7 points");
        }
        points *= bounds[k] + 1;
        if (points > kBudget) {
            throw BudgetExceeded("lattice has more than 10^7 points");
        }
    }

    // Evaluate each candidate quantity independently through the public
    // expectation; no shortcuts shared with the solver under test.
    std::vector<std::vector<double>> term(catalog.size());
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        term[k].resize(static_cast<std::size_t>(bounds[k]) + 1);
        for (std::int64_t n = 0; n <= bounds[k]; ++n) {
            term[k][static_cast<std::size_t>(n)] =
                expected_profit_term(catalog.product(k), *ds[k], n);
        }
    }

    std::vector<std::int64_t> idx(catalog.size(), 0);
    OrderPlan best_plan;
    double best = -kInf;
    for (;;) {
        NeumaierSum profit;
        for (std::size_t k = 0; k < catalog.size(); ++k) {
            profit.add(term[k][static_cast<std::size_t>(idx[k])]);
        }
        if (profit.value() > best) {
            best = profit.value();
            best_plan.assign(idx.begin(), idx.end());
        }
        std::size_t d = catalog.size();
        while (d > 0) {
            --d;
            if (idx[d] < bounds[d]) {
                ++idx[d];
                break;
            }
            idx[d] = 0;
            if (d == 0) return best_plan;
        }
    }
}

OrderPlan grid_argmax_continuous(const Catalog& catalog, const std::vector<double>& bounds,
                                 double step, const Constraint* cons) {
    if (bounds.size() != catalog.size()) {
        throw LengthMismatch("bounds vector has " + std::to_string(bounds.size()) +
                             " entries, catalog has " + std::to_string(catalog.size()) +
                             " products");
    }
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        if (!std::holds_alternative<ContinuousDemand>(catalog.demand(k))) {
            throw DomainError("grid argmax needs continuous demand, but product '" +
                              catalog.product(k).name + "' is discrete");
        }
        if (!std::isfinite(bounds[k]) || bounds[k] < 0.0) {
            throw DomainError("grid bounds must be finite and >= 0");
        }
    }
    if (!std::isfinite(step) || step <= 0.0) {
        throw DomainError("grid step must be > 0");
    }

    bool eq = cons != nullptr && cons->form() == Constraint::Form::linear_eq;
    if (eq && cons->coeffs().size() != catalog.size()) {
        throw LengthMismatch("constraint coefficient count does not match the catalog");
    }

    // With a linear equality constraint the last coordinate is implied by
    // the others, so it is solved rather than gridded.
    std::size_t gridded = eq ? catalog.size() - 1 : catalog.size();
    std::vector<std::int64_t> counts(gridded);
    std::int64_t points = 1;
    for (std::size_t k = 0; k < gridded; ++k) {
        counts[k] = static_cast<std::int64_t>(std::floor(bounds[k] / step + 1e-9)) + 1;
        if (counts[k] > kBudget) {
            throw BudgetExceeded("grid has more than 10^7 points");
        }
        points *= counts[k];  // both factors <= 10^7, no overflow
        if (points > kBudget) {
            throw BudgetExceeded("grid has more than 10^7 points");
        }
    }

    std::vector<std::int64_t> idx(gridded, 0);
    OrderPlan plan(catalog.size(), 0.0);
    OrderPlan best_plan;
    double best = -kInf;
    bool any_feasible = false;
    for (;;) {
        for (std::size_t k = 0; k < gridded; ++k) {
            plan[k] = static_cast<double>(idx[k]) * step;
        }
        bool ok = true;
        if (eq) {
            NeumaierSum partial;
            for (std::size_t k = 0; k < gridded; ++k) {
                partial.add(cons->coeffs()[k] * plan[k]);
            }
            double last = (cons->rhs() - partial.value()) / cons->coeffs().back();
            if (last < -1e-9 || last > bounds.back() + 1e-9) {
                ok = false;
            } else {
                plan.back() = std::clamp(last, 0.0, bounds.back());
            }
        } else if (cons != nullptr) {
            ok = cons->feasible(plan);
        }
        if (ok) {
            any_feasible = true;
            double profit = expected_profit(catalog, plan);
            if (profit > best) {
                best = profit;
                best_plan = plan;
            }
        }
        if (gridded == 0) break;
        std::size_t d = gridded;
        bool done = false;
        while (d > 0) {
            --d;
            if (idx[d] + 1 < counts[d]) {
                ++idx[d];
                break;
            }
            idx[d] = 0;
            if (d == 0) done = true;
        }
        if (done) break;
    }
    if (!any_feasible) {
        throw InfeasibleWithinBounds("no grid point satisfies the constraint");
    }
    return best_plan;
}

}  // namespace stockwise
