#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "stockwise/profit.hpp"

namespace stockwise {

/// Restriction on order plans. Linear forms encode a resource constraint
/// a . n (=|<=) rhs; the predicate form accepts any feasibility test and
/// is only usable with the lattice solver.
class Constraint {
public:
    enum class Form { linear_eq, linear_le, predicate };

    static Constraint linear_eq(std::vector<double> coeffs, double rhs);
    static Constraint linear_le(std::vector<double> coeffs, double rhs);
    static Constraint predicate(std::function<bool(const OrderPlan&)> test);

    Form form() const { return form_; }
    /// Linear forms only.
    const std::vector<double>& coeffs() const;
    double rhs() const;

    bool feasible(const OrderPlan& plan, double tol = 1e-9) const;

private:
    explicit Constraint(Form f) : form_(f) {}

    Form form_;
    std::vector<double> coeffs_;
    double rhs_ = 0.0;
    std::function<bool(const OrderPlan&)> test_;
};

/// A constrained solution together with its multiplier diagnostics.
struct ConstrainedPlan {
    OrderPlan plan;
    double expected_profit = 0.0;
    /// Whether the constraint binds at the solution. An equality
    /// constraint that happens to pass through the unconstrained optimum
    /// reports inactive (lambda 0).
    bool active = false;
    /// Lagrange multiplier: the marginal expected profit per unit of rhs.
    double lambda = 0.0;
};

/// Maximize expected profit subject to a . n = rhs over continuous-demand
/// products, by bisection on the Lagrange multiplier. All coefficients
/// must be positive. The residual |a . n - rhs| at return is at most
/// 1e-8, widened proportionally only for rhs magnitudes near the limit
/// of double resolution.
/// Throws NotContinuous, Infeasible (rhs negative or beyond the total
/// support), DomainError on malformed constraints.
ConstrainedPlan solve_equality_continuous(const Catalog& catalog, const Constraint& cons);

/// Maximize expected profit subject to a . n <= rhs. If the unconstrained
/// plan is feasible it is returned unchanged (constraint inactive);
/// otherwise the optimum lies on the boundary and the equality solver
/// finishes the job.
ConstrainedPlan solve_inequality_continuous(const Catalog& catalog, const Constraint& cons);

/// Exhaustive search over the integer lattice {0..bounds[0]} x ... for
/// discrete-demand products under an arbitrary constraint. Ties are
/// broken toward the lexicographically smallest plan.
/// Throws BudgetExceeded past 10^7 lattice points and
/// InfeasibleWithinBounds when no lattice point passes the constraint.
OrderPlan solve_discrete_lattice(const Catalog& catalog, const Constraint& cons,
                                 const std::vector<std::int64_t>& bounds);

}  // namespace stockwise
