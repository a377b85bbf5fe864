#include "stockwise/constrained.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <variant>

#include "stockwise/fractile.hpp"
#include "stockwise/numerics.hpp"

namespace stockwise {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::int64_t kLatticeBudget = 10'000'000;

double dot(const std::vector<double>& a, const OrderPlan& n) {
    NeumaierSum s;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double t = a[k] * n[k];
        if (std::isinf(t)) return t;  // unbounded coordinate response
        s.add(t);
    }
    return s.value();
}

std::vector<const ContinuousDemand*> continuous_demands(const Catalog& catalog,
                                                        const char* who) {
    std::vector<const ContinuousDemand*> out(catalog.size());
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        out[k] = std::get_if<ContinuousDemand>(&catalog.demand(k));
        if (out[k] == nullptr) {
            throw NotContinuous(std::string(who) + " needs continuous demand, but product '" +
                                catalog.product(k).name + "' is discrete");
        }
    }
    return out;
}

void check_linear_resource(const Catalog& catalog, const Constraint& cons) {
    if (cons.coeffs().size() != catalog.size()) {
        throw LengthMismatch("constraint has " + std::to_string(cons.coeffs().size()) +
                             " coefficients, catalog has " + std::to_string(catalog.size()) +
                             " products");
    }
    for (double a : cons.coeffs()) {
        if (!std::isfinite(a) || a <= 0.0) {
            throw DomainError("resource constraint coefficients must be > 0");
        }
    }
    if (!std::isfinite(cons.rhs())) {
        throw DomainError("constraint rhs must be finite");
    }
}

/// Maximizer of term_k(n) - lambda * a_k * n over n >= 0: the quantity
/// where the marginal profit c - (c+s) F(n) falls to lambda * a_k.
/// +inf when the priced-out fractile is 1 on unbounded support.
double coordinate_response(const Product& p, const ContinuousDemand& d, double a,
                           double lambda) {
    double c = p.unit_profit;
    double s = p.unit_loss;
    double q = (c - lambda * a) / (c + s);
    if (q <= 0.0) return 0.0;
    if (q >= 1.0) return d.bounded_support() ? d.support_max() : kInf;
    return d.quantile(q);
}

OrderPlan responses(const Catalog& catalog, const std::vector<const ContinuousDemand*>& ds,
                    const std::vector<double>& a, double lambda) {
    OrderPlan n(catalog.size());
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        n[k] = coordinate_response(catalog.product(k), *ds[k], a[k], lambda);
    }
    return n;
}

}  // namespace

Constraint Constraint::linear_eq(std::vector<double> coeffs, double rhs) {
    Constraint c(Form::linear_eq);
    c.coeffs_ = std::move(coeffs);
    c.rhs_ = rhs;
    bool any = false;
    for (double a : c.coeffs_) {
        if (!std::isfinite(a)) throw DomainError("constraint coefficients must be finite");
        any = any || a != 0.0;
    }
    if (c.coeffs_.empty() || !any) {
        throw DomainError("linear constraint needs at least one nonzero coefficient");
    }
    if (!std::isfinite(rhs)) throw DomainError("constraint rhs must be finite");
    return c;
}

Constraint Constraint::linear_le(std::vector<double> coeffs, double rhs) {
    Constraint c = linear_eq(std::move(coeffs), rhs);
    c.form_ = Form::linear_le;
    return c;
}

Constraint Constraint::predicate(std::function<bool(const OrderPlan&)> test) {
    if (!test) throw DomainError("predicate constraint needs a callable test");
    Constraint c(Form::predicate);
    c.test_ = std::move(test);
    return c;
}

const std::vector<double>& Constraint::coeffs() const {
    if (form_ == Form::predicate) {
        throw DomainError("predicate constraints have no coefficients");
    }
    return coeffs_;
}

double Constraint::rhs() const {
    if (form_ == Form::predicate) {
        throw DomainError("predicate constraints have no rhs");
    }
    return rhs_;
}

bool Constraint::feasible(const OrderPlan& plan, double tol) const {
    switch (form_) {
        case Form::linear_eq:
        case Form::linear_le: {
            if (plan.size() != coeffs_.size()) {
                throw LengthMismatch("plan has " + std::to_string(plan.size()) +
                                     " entries, constraint has " + std::to_string(coeffs_.size()) +
                                     " coefficients");
            }
            double v = dot(coeffs_, plan);
            return form_ == Form::linear_eq ? std::abs(v - rhs_) <= tol : v <= rhs_ + tol;
        }
        case Form::predicate:
            return test_(plan);
    }
    return false;
}

ConstrainedPlan solve_equality_continuous(const Catalog& catalog, const Constraint& cons) {
    if (cons.form() != Constraint::Form::linear_eq) {
        throw DomainError("equality solver needs a linear equality constraint");
    }
    auto ds = continuous_demands(catalog, "equality solver");
    check_linear_resource(catalog, cons);
    const std::vector<double>& a = cons.coeffs();
    const double rhs = cons.rhs();

    if (rhs < 0.0) {
        throw Infeasible("constraint rhs is negative; order quantities cannot be");
    }

    // Capacity check against bounded supports.
    bool all_bounded = true;
    NeumaierSum cap;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        if (!ds[k]->bounded_support()) {
            all_bounded = false;
            break;
        }
        cap.add(a[k] * ds[k]->support_max());
    }
    if (all_bounded && rhs > cap.value()) {
        throw Infeasible("constraint rhs " + std::to_string(rhs) +
                         " exceeds the total demand support capacity " +
                         std::to_string(cap.value()));
    }

    if (rhs == 0.0) {
        // The all-zero plan is the only feasible point. Its multiplier is
        // the best marginal profit per unit of resource.
        ConstrainedPlan out;
        out.plan.assign(catalog.size(), 0.0);
        out.expected_profit = 0.0;
        out.active = true;
        for (std::size_t k = 0; k < catalog.size(); ++k) {
            out.lambda = std::max(out.lambda, catalog.product(k).unit_profit / a[k]);
        }
        return out;
    }

    // Absolute target, widened only when rhs is so large that doubles
    // cannot resolve 1e-8 in the dot product.
    const double tol = std::max(1e-8, 1e-14 * rhs);
    auto gap = [&](const OrderPlan& n) { return dot(a, n) - rhs; };

    // If the unconstrained optimum already sits on the constraint, the
    // multiplier is zero and no search is needed; this also returns the
    // exact unconstrained quantities rather than bisection approximations.
    {
        OrderPlan n0 = responses(catalog, ds, a, 0.0);
        double g0 = gap(n0);
        if (std::abs(g0) <= tol) {
            return {n0, expected_profit(catalog, n0), false, 0.0};
        }
    }

    // Bracket the multiplier. Far left every product is pushed to its
    // support ceiling (or +inf), far right every product is priced to 0,
    // so the resource gap changes sign across the bracket.
    double lam_lo = 0.0;
    double lam_hi = 0.0;
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        lam_lo = std::min(lam_lo, -catalog.product(k).unit_loss / a[k]);
        lam_hi = std::max(lam_hi, catalog.product(k).unit_profit / a[k]);
    }
    lam_lo -= 1.0;
    lam_hi += 1.0;
    double g_lo = gap(responses(catalog, ds, a, lam_lo));  // >= 0, possibly +inf
    double g_hi = gap(responses(catalog, ds, a, lam_hi));  // = -rhs < 0
    if (!(g_lo >= 0.0) || !(g_hi < 0.0)) {
        throw std::logic_error("multiplier bracket failed to straddle the constraint");
    }

    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lam_lo + lam_hi);
        OrderPlan n = responses(catalog, ds, a, mid);
        double g = gap(n);
        // The per-coordinate response never increases in lambda; a value
        // outside the current sandwich means the invariant broke.
        if (g > g_lo + tol || g < g_hi - tol) {
            throw std::logic_error("resource use is not monotone in the multiplier");
        }
        if (std::abs(g) <= tol) {
            return {n, expected_profit(catalog, n), true, mid};
        }
        if (g > 0.0) {
            lam_lo = mid;
            g_lo = g;
        } else {
            lam_hi = mid;
            g_hi = g;
        }
    }

    // The gap jumps across the remaining (vanishingly small) bracket: the
    // optimal multiplier sits where some coordinate ranges over a stretch
    // of constant CDF, so the response is set-valued there. On such a
    // stretch the Lagrangian is linear in the coordinate, which makes any
    // split of the jump optimal; fill coordinates greedily until the
    // resource is exactly used up.
    OrderPlan n_over = responses(catalog, ds, a, lam_lo);   // uses too much
    OrderPlan n_under = responses(catalog, ds, a, lam_hi);  // leaves slack
    OrderPlan n = n_under;
    for (std::size_t k = 0; k < catalog.size() && gap(n) < -tol; ++k) {
        double headroom = n_over[k] - n_under[k];
        if (headroom <= 0.0) continue;
        double deficit = -gap(n);
        n[k] = n_under[k] + std::min(headroom, deficit / a[k]);
    }
    if (std::abs(gap(n)) > tol) {
        throw std::logic_error("plateau fill failed to meet the resource constraint");
    }
    return {n, expected_profit(catalog, n), true, 0.5 * (lam_lo + lam_hi)};
}

ConstrainedPlan solve_inequality_continuous(const Catalog& catalog, const Constraint& cons) {
    if (cons.form() != Constraint::Form::linear_le) {
        throw DomainError("inequality solver needs a linear inequality constraint");
    }
    continuous_demands(catalog, "inequality solver");
    check_linear_resource(catalog, cons);
    if (cons.rhs() < 0.0) {
        throw Infeasible("constraint rhs is negative; order quantities cannot be");
    }

    // Complementary slackness: either the unconstrained optimum is
    // feasible and the constraint is dead, or the optimum sits on the
    // boundary and the equality solver takes over. An unbounded
    // unconstrained problem (no overage cost anywhere the support ends)
    // always lands in the second case.
    try {
        SolveReport unconstrained = solve(catalog);
        if (dot(cons.coeffs(), unconstrained.plan) <= cons.rhs()) {
            return {unconstrained.plan, unconstrained.expected_profit, false, 0.0};
        }
    } catch (const UnboundedQuantile&) {
    }

    ConstrainedPlan boundary =
        solve_equality_continuous(catalog, Constraint::linear_eq(cons.coeffs(), cons.rhs()));
    boundary.active = true;
    return boundary;
}

OrderPlan solve_discrete_lattice(const Catalog& catalog, const Constraint& cons,
                                 const std::vector<std::int64_t>& bounds) {
    if (bounds.size() != catalog.size()) {
        throw LengthMismatch("bounds vector has " + std::to_string(bounds.size()) +
                             " entries, catalog has " + std::to_string(catalog.size()) +
                             " products");
    }
    std::vector<const DiscreteDemand*> ds(catalog.size());
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        ds[k] = std::get_if<DiscreteDemand>(&catalog.demand(k));
        if (ds[k] == nullptr) {
            throw DomainError("lattice solver needs discrete demand, but product '" +
                              catalog.product(k).name + "' is continuous");
        }
        if (bounds[k] < 0) {
            throw DomainError("lattice bounds must be >= 0");
        }
    }

    std::int64_t points = 1;
    for (std::int64_t b : bounds) {
        if (b >= kLatticeBudget) {
            throw BudgetExceeded("lattice has more than 10^7 points");
        }
        points *= b + 1;  // stays well under overflow: both factors <= 10^7 + 1
        if (points > kLatticeBudget) {
            throw BudgetExceeded("lattice has more than 10^7 points, budget is 10^7");
        }
    }

    // Per-product expected profit for every candidate quantity, built
    // incrementally: term(n+1) = term(n) + c - (c+s) F(n).
    std::vector<std::vector<double>> term(catalog.size());
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        const Product& p = catalog.product(k);
        term[k].assign(static_cast<std::size_t>(bounds[k]) + 1, 0.0);
        NeumaierSum cdf_run;
        for (std::int64_t i = 0; i < bounds[k]; ++i) {
            cdf_run.add(ds[k]->pmf(i));
            term[k][i + 1] =
                term[k][i] + p.unit_profit - (p.unit_profit + p.unit_loss) * cdf_run.value();
        }
    }

    // Walk the lattice in lexicographic order; keeping strictly better
    // plans only makes the first maximizer, the lexicographically
    // smallest one, the winner.
    std::vector<std::int64_t> idx(catalog.size(), 0);
    OrderPlan plan(catalog.size(), 0.0);
    OrderPlan best_plan;
    double best = -kInf;
    bool any_feasible = false;
    for (;;) {
        if (cons.feasible(plan)) {
            any_feasible = true;
            NeumaierSum profit;
            for (std::size_t k = 0; k < catalog.size(); ++k) {
                profit.add(term[k][static_cast<std::size_t>(idx[k])]);
            }
            if (profit.value() > best) {
                best = profit.value();
                best_plan = plan;
            }
        }
        std::size_t d = catalog.size();
        while (d > 0) {
            --d;
            if (idx[d] < bounds[d]) {
                ++idx[d];
                plan[d] = static_cast<double>(idx[d]);
                break;
            }
            idx[d] = 0;
            plan[d] = 0.0;
            if (d == 0) {
                if (!any_feasible) {
                    throw InfeasibleWithinBounds(
                        "no lattice point within the bounds satisfies the constraint");
                }
                return best_plan;
            }
        }
    }
}

}  // namespace stockwise
