#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <variant>
#include <vector>

#include "stockwise/errors.hpp"

namespace stockwise {

/// Continuous demand distribution on [0, +inf).
///
/// Demand cannot be negative, so every family is required to keep its
/// support inside the nonnegative half-line at construction time.
/// Instances are immutable after construction and safe to share across
/// threads.
class ContinuousDemand {
public:
    enum class Family { uniform, exponential, truncated_normal, piecewise_empirical };

    static ContinuousDemand uniform(double lo, double hi);
    static ContinuousDemand exponential(double rate);
    /// Normal(mean, stddev) conditioned on demand >= lo, density renormalized.
    static ContinuousDemand truncated_normal(double mean, double stddev, double lo = 0.0);
    /// Histogram density: breakpoints x0 < x1 < ... < xm delimit m cells,
    /// weights give the relative mass of each cell (normalized internally).
    static ContinuousDemand piecewise_empirical(std::vector<double> breakpoints,
                                                std::vector<double> weights);

    Family family() const { return family_; }

    /// Rate parameter of an exponential instance; other families throw
    /// DomainError. Exists for closed-form consumers.
    double exponential_rate() const;

    double pdf(double x) const;
    double cdf(double x) const;

    /// Generalized inverse CDF: smallest x with cdf(x) >= q.
    /// Closed form where the family allows it, otherwise bracketed
    /// bisection to absolute tolerance 1e-10.
    /// Throws DomainError unless 0 < q <= 1, and UnboundedQuantile when
    /// q = 1 on an unbounded family.
    double quantile(double q) const;

    double support_min() const;
    /// +inf for unbounded families.
    double support_max() const;
    bool bounded_support() const;

    /// Points where the density has a jump or kink. Quadrature over an
    /// interval should split there first.
    std::vector<double> density_breakpoints() const;

private:
    explicit ContinuousDemand(Family f) : family_(f) {}

    Family family_;
    // uniform: a_=lo, b_=hi. exponential: a_=rate.
    // truncated_normal: a_=mean, b_=stddev, c_=lo, norm_z_ = P(N >= lo).
    double a_ = 0.0;
    double b_ = 0.0;
    double c_ = 0.0;
    double norm_z_ = 0.0;
    // piecewise_empirical: cell edges and the normalized CDF at each edge
    // (cum_.front() = 0, cum_.back() = 1).
    std::vector<double> breaks_;
    std::vector<double> cum_;
};

/// Discrete demand distribution on {0, 1, 2, ...}.
///
/// The infinite families (poisson, geometric) evaluate their CDF by
/// analytic partial sums; scans that need to walk the support treat the
/// distribution as truncated once the remaining tail mass drops below
/// 1e-12, which keeps every operation finite and deterministic.
class DiscreteDemand {
public:
    enum class Family { poisson, geometric, table };

    static DiscreteDemand poisson(double lambda);
    /// P(X = k) = p * (1-p)^k for k = 0, 1, 2, ...; p in (0, 1].
    static DiscreteDemand geometric(double p);
    /// Explicit pmf. Keys must be >= 0, masses >= 0 and sum to 1 within
    /// 1e-12. Zero-mass keys are dropped; at least one key must carry mass.
    static DiscreteDemand table(const std::map<std::int64_t, double>& mass);

    Family family() const { return family_; }

    double pmf(std::int64_t k) const;
    /// Right-continuous step function of a real argument:
    /// P(demand <= x).
    double cdf(double x) const;

    /// Smallest integer n with cdf(n) >= q. Throws DomainError unless
    /// 0 < q <= 1, and UnboundedQuantile when q = 1 on an unbounded family.
    /// A table whose accumulated mass falls a rounding error short of q
    /// resolves to its largest support point.
    std::int64_t quantile(double q) const;

    bool bounded_support() const;
    /// Largest support point. Only meaningful when bounded_support().
    std::int64_t support_max() const;

    /// Visit (k, pmf(k)) for every support point k <= n in ascending order.
    /// Tables walk only their own keys, so sparse supports stay cheap.
    template <class F>
    void for_each_mass_up_to(std::int64_t n, F&& visit) const {
        if (n < 0) return;
        if (family_ == Family::table) {
            for (const auto& [k, p] : support_) {
                if (k > n) break;
                visit(k, p);
            }
        } else {
            for (std::int64_t k = 0; k <= n; ++k) {
                visit(k, pmf(k));
            }
        }
    }

private:
    explicit DiscreteDemand(Family f) : family_(f) {}

    // fit_empirical builds its cumulative from integer counts so the
    // empirical CDF is reproduced exactly, not through rounded masses.
    friend DiscreteDemand fit_empirical(const std::vector<std::int64_t>& samples);

    Family family_;
    double param_ = 0.0;  // poisson lambda or geometric p
    std::vector<std::pair<std::int64_t, double>> support_;  // table only, sorted by key
    std::vector<double> cum_;                               // table only, parallel to support_
};

/// Joint pmf of two discrete demands on {0..I} x {0..J}, stored densely.
class JointDiscreteDemand {
public:
    /// mass[i][j] = P(X = i, Y = j). Must be rectangular and nonempty,
    /// entries >= 0 summing to 1 within 1e-12.
    explicit JointDiscreteDemand(std::vector<std::vector<double>> mass);

    std::size_t rows() const { return mass_.size(); }
    std::size_t cols() const { return mass_.front().size(); }
    double pmf(std::size_t i, std::size_t j) const { return mass_[i][j]; }

    /// Row-sum and column-sum marginal distributions, as table pmfs.
    std::pair<DiscreteDemand, DiscreteDemand> marginals() const;

private:
    std::vector<std::vector<double>> mass_;
};

/// Frequency-table pmf of an observed demand history.
/// Throws EmptySample and NegativeDemand.
DiscreteDemand fit_empirical(const std::vector<std::int64_t>& samples);

/// A product's demand is either continuous or discrete; most of the
/// planner is generic over the two.
using DemandModel = std::variant<ContinuousDemand, DiscreteDemand>;

bool is_continuous(const DemandModel& d);
double cdf_at(const DemandModel& d, double x);
double quantile_at(const DemandModel& d, double q);
bool bounded_support(const DemandModel& d);
/// Largest support point, +inf when unbounded.
double support_max_of(const DemandModel& d);

}  // namespace stockwise
