#include "stockwise/demand.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stockwise/numerics.hpp"

namespace stockwise {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

double normal_ccdf(double z) { return normal_cdf(-z); }

}  // namespace

ContinuousDemand ContinuousDemand::uniform(double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi), "uniform demand needs finite bounds");
    require(lo >= 0.0, "uniform demand needs lo >= 0, got " + std::to_string(lo));
    require(hi > lo, "uniform demand needs hi > lo, got [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "]");
    ContinuousDemand d(Family::uniform);
    d.a_ = lo;
    d.b_ = hi;
    return d;
}

ContinuousDemand ContinuousDemand::exponential(double rate) {
    require(std::isfinite(rate) && rate > 0.0,
            "exponential demand needs rate > 0, got " + std::to_string(rate));
    ContinuousDemand d(Family::exponential);
    d.a_ = rate;
    return d;
}

ContinuousDemand ContinuousDemand::truncated_normal(double mean, double stddev, double lo) {
    require(std::isfinite(mean) && std::isfinite(stddev) && std::isfinite(lo),
            "truncated normal demand needs finite parameters");
    require(stddev > 0.0, "truncated normal demand needs stddev > 0");
    require(lo >= 0.0, "truncated normal demand needs lo >= 0");
    ContinuousDemand d(Family::truncated_normal);
    d.a_ = mean;
    d.b_ = stddev;
    d.c_ = lo;
    d.norm_z_ = normal_ccdf((lo - mean) / stddev);
    // A truncation point this deep into the upper tail leaves no usable
    // mass and the renormalized quantities lose all precision.
    require(d.norm_z_ > 1e-10, "truncated normal demand has negligible mass above lo");
    return d;
}

ContinuousDemand ContinuousDemand::piecewise_empirical(std::vector<double> breakpoints,
                                                       std::vector<double> weights) {
    require(breakpoints.size() >= 2, "piecewise demand needs at least two breakpoints");
    require(weights.size() + 1 == breakpoints.size(),
            "piecewise demand needs one weight per cell (breakpoints - 1)");
    require(breakpoints.front() >= 0.0, "piecewise demand support must start at x >= 0");
    for (double x : breakpoints) {
        require(std::isfinite(x), "piecewise demand breakpoints must be finite");
    }
    for (std::size_t i = 1; i < breakpoints.size(); ++i) {
        require(breakpoints[i] > breakpoints[i - 1],
                "piecewise demand breakpoints must be strictly increasing");
    }
    NeumaierSum total;
    for (double w : weights) {
        require(std::isfinite(w) && w >= 0.0, "piecewise demand weights must be >= 0");
        total.add(w);
    }
    require(total.value() > 0.0, "piecewise demand needs positive total weight");

    ContinuousDemand d(Family::piecewise_empirical);
    d.breaks_ = std::move(breakpoints);
    d.cum_.resize(d.breaks_.size());
    d.cum_[0] = 0.0;
    NeumaierSum partial;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        partial.add(weights[i]);
        d.cum_[i + 1] = partial.value() / total.value();
    }
    d.cum_.back() = 1.0;  // normalization is exact by definition
    return d;
}

double ContinuousDemand::exponential_rate() const {
    require(family_ == Family::exponential, "exponential_rate called on a non-exponential family");
    return a_;
}

double ContinuousDemand::pdf(double x) const {
    switch (family_) {
        case Family::uniform:
            return (x >= a_ && x <= b_) ? 1.0 / (b_ - a_) : 0.0;
        case Family::exponential:
            return x < 0.0 ? 0.0 : a_ * std::exp(-a_ * x);
        case Family::truncated_normal: {
            if (x < c_) return 0.0;
            double z = (x - a_) / b_;
            return normal_pdf(z) / (b_ * norm_z_);
        }
        case Family::piecewise_empirical: {
            if (!(x >= breaks_.front()) || x > breaks_.back()) return 0.0;
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
            std::size_t i = (it == breaks_.end()) ? breaks_.size() - 1
                                                  : static_cast<std::size_t>(it - breaks_.begin());
            return (cum_[i] - cum_[i - 1]) / (breaks_[i] - breaks_[i - 1]);
        }
    }
    return 0.0;
}

double ContinuousDemand::cdf(double x) const {
    switch (family_) {
        case Family::uniform:
            if (!(x > a_)) return 0.0;
            if (x >= b_) return 1.0;
            return (x - a_) / (b_ - a_);
        case Family::exponential:
            return x <= 0.0 ? 0.0 : -std::expm1(-a_ * x);
        case Family::truncated_normal: {
            if (!(x > c_)) return 0.0;
            // 1 - ccdf(z)/ccdf(z_lo) stays accurate where the direct
            // difference of CDFs would cancel.
            double z = (x - a_) / b_;
            double f = 1.0 - normal_ccdf(z) / norm_z_;
            return std::clamp(f, 0.0, 1.0);
        }
        case Family::piecewise_empirical: {
            if (!(x > breaks_.front())) return 0.0;
            if (x >= breaks_.back()) return 1.0;
            auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
            std::size_t i = static_cast<std::size_t>(it - breaks_.begin());
            double t = (x - breaks_[i - 1]) / (breaks_[i] - breaks_[i - 1]);
            return cum_[i - 1] + t * (cum_[i] - cum_[i - 1]);
        }
    }
    return 0.0;
}

double ContinuousDemand::quantile(double q) const {
    if (!(q > 0.0) || q > 1.0) {
        throw DomainError("quantile level must satisfy 0 < q <= 1");
    }
    if (q == 1.0) {
        if (!bounded_support()) {
            throw UnboundedQuantile("quantile(1) does not exist: demand support is unbounded");
        }
        return support_max();
    }
    switch (family_) {
        case Family::uniform:
            return a_ + q * (b_ - a_);
        case Family::exponential:
            return -std::log1p(-q) / a_;
        case Family::truncated_normal: {
            // Bracketed bisection; the CDF is strictly increasing on
            // [lo, inf) so the root is unique.
            double lo = c_;
            double span = b_;
            double hi = std::max(c_, a_) + span;
            while (cdf(hi) < q) {
                span *= 2.0;
                hi = std::max(c_, a_) + span;
            }
            while (hi - lo > 1e-10) {
                double mid = 0.5 * (lo + hi);
                if (cdf(mid) >= q) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return hi;
        }
        case Family::piecewise_empirical: {
            for (std::size_t i = 1; i < cum_.size(); ++i) {
                if (cum_[i] >= q) {
                    // First cell whose right edge reaches q; its mass is
                    // positive (a zero-mass cell cannot straddle q), so
                    // interpolation is well defined and lands on the
                    // smallest attaining point.
                    double t = (q - cum_[i - 1]) / (cum_[i] - cum_[i - 1]);
                    return breaks_[i - 1] + t * (breaks_[i] - breaks_[i - 1]);
                }
            }
            return breaks_.back();
        }
    }
    return 0.0;
}

double ContinuousDemand::support_min() const {
    switch (family_) {
        case Family::uniform: return a_;
        case Family::exponential: return 0.0;
        case Family::truncated_normal: return c_;
        case Family::piecewise_empirical: return breaks_.front();
    }
    return 0.0;
}

double ContinuousDemand::support_max() const {
    switch (family_) {
        case Family::uniform: return b_;
        case Family::piecewise_empirical: return breaks_.back();
        default: return kInf;
    }
}

bool ContinuousDemand::bounded_support() const {
    return family_ == Family::uniform || family_ == Family::piecewise_empirical;
}

std::vector<double> ContinuousDemand::density_breakpoints() const {
    switch (family_) {
        case Family::uniform: return {a_, b_};
        case Family::exponential: return {0.0};
        case Family::truncated_normal: return {c_};
        case Family::piecewise_empirical: return breaks_;
    }
    return {};
}

DiscreteDemand DiscreteDemand::poisson(double lambda) {
    require(std::isfinite(lambda) && lambda > 0.0,
            "poisson demand needs lambda > 0, got " + std::to_string(lambda));
    DiscreteDemand d(Family::poisson);
    d.param_ = lambda;
    return d;
}

DiscreteDemand DiscreteDemand::geometric(double p) {
    require(std::isfinite(p) && p > 0.0 && p <= 1.0,
            "geometric demand needs p in (0, 1], got " + std::to_string(p));
    DiscreteDemand d(Family::geometric);
    d.param_ = p;
    return d;
}

DiscreteDemand DiscreteDemand::table(const std::map<std::int64_t, double>& mass) {
    DiscreteDemand d(Family::table);
    NeumaierSum total;
    for (const auto& [k, p] : mass) {
        require(k >= 0, "table demand keys must be >= 0, got " + std::to_string(k));
        require(std::isfinite(p) && p >= 0.0,
                "table demand mass must be >= 0 at key " + std::to_string(k));
        if (p == 0.0) continue;
        d.support_.emplace_back(k, p);
        total.add(p);
        d.cum_.push_back(total.value());
    }
    require(!d.support_.empty(), "table demand needs at least one key with positive mass");
    require(std::abs(total.value() - 1.0) <= 1e-12,
            "table demand mass must sum to 1, got " + std::to_string(total.value()));
    return d;
}

double DiscreteDemand::pmf(std::int64_t k) const {
    if (k < 0) return 0.0;
    switch (family_) {
        case Family::poisson: {
            double dk = static_cast<double>(k);
            return std::exp(dk * std::log(param_) - param_ - std::lgamma(dk + 1.0));
        }
        case Family::geometric:
            if (param_ == 1.0) return k == 0 ? 1.0 : 0.0;
            return param_ * std::exp(static_cast<double>(k) * std::log1p(-param_));
        case Family::table: {
            auto it = std::lower_bound(support_.begin(), support_.end(), k,
                                       [](const auto& e, std::int64_t key) { return e.first < key; });
            return (it != support_.end() && it->first == k) ? it->second : 0.0;
        }
    }
    return 0.0;
}

double DiscreteDemand::cdf(double x) const {
    if (!(x >= 0.0)) return 0.0;
    switch (family_) {
        case Family::poisson: {
            if (std::isinf(x)) return 1.0;
            auto n = static_cast<std::int64_t>(std::floor(std::min(x, 9.0e18)));
            NeumaierSum cum;
            for (std::int64_t k = 0; k <= n; ++k) {
                cum.add(pmf(k));
                if (1.0 - cum.value() <= 1e-15) break;
            }
            return std::min(cum.value(), 1.0);
        }
        case Family::geometric: {
            if (param_ == 1.0 || std::isinf(x)) return 1.0;
            double n = std::floor(x);
            return -std::expm1((n + 1.0) * std::log1p(-param_));
        }
        case Family::table: {
            // Right-continuous step function: total mass at keys <= x.
            std::size_t lo = 0, hi = support_.size();
            while (lo < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (static_cast<double>(support_[mid].first) <= x) {
                    lo = mid + 1;
                } else {
                    hi = mid;
                }
            }
            return lo == 0 ? 0.0 : cum_[lo - 1];
        }
    }
    return 0.0;
}

std::int64_t DiscreteDemand::quantile(double q) const {
    if (!(q > 0.0) || q > 1.0) {
        throw DomainError("quantile level must satisfy 0 < q <= 1");
    }
    if (q == 1.0) {
        if (!bounded_support()) {
            throw UnboundedQuantile("quantile(1) does not exist: demand support is unbounded");
        }
        return support_max();
    }
    switch (family_) {
        case Family::poisson: {
            NeumaierSum cum;
            for (std::int64_t k = 0;; ++k) {
                cum.add(pmf(k));
                if (cum.value() >= q) return k;
                // Treat the distribution as truncated once the remaining
                // tail is below 1e-12; guarantees termination when q sits
                // inside the truncated mass.
                if (1.0 - cum.value() <= 1e-12) return k;
            }
        }
        case Family::geometric: {
            if (param_ == 1.0) return 0;
            double raw = std::log1p(-q) / std::log1p(-param_) - 1.0;
            auto n = static_cast<std::int64_t>(std::max(0.0, std::ceil(raw)));
            // The closed form can land one step off at representability
            // edges; settle it against the actual CDF.
            while (n > 0 && cdf(static_cast<double>(n - 1)) >= q) --n;
            while (cdf(static_cast<double>(n)) < q) ++n;
            return n;
        }
        case Family::table: {
            for (std::size_t i = 0; i < cum_.size(); ++i) {
                if (cum_[i] >= q) return support_[i].first;
            }
            // Accumulated mass can fall a rounding error short of q near 1;
            // the largest support point is the only sensible answer.
            return support_.back().first;
        }
    }
    return 0;
}

bool DiscreteDemand::bounded_support() const {
    switch (family_) {
        case Family::poisson: return false;
        case Family::geometric: return param_ == 1.0;
        case Family::table: return true;
    }
    return false;
}

std::int64_t DiscreteDemand::support_max() const {
    if (family_ == Family::table) return support_.back().first;
    if (family_ == Family::geometric && param_ == 1.0) return 0;
    throw DomainError("support_max is undefined for unbounded demand");
}

JointDiscreteDemand::JointDiscreteDemand(std::vector<std::vector<double>> mass)
    : mass_(std::move(mass)) {
    require(!mass_.empty() && !mass_.front().empty(), "joint demand matrix must be nonempty");
    NeumaierSum total;
    for (const auto& row : mass_) {
        require(row.size() == mass_.front().size(), "joint demand matrix must be rectangular");
        for (double p : row) {
            require(std::isfinite(p) && p >= 0.0, "joint demand entries must be >= 0");
            total.add(p);
        }
    }
    require(std::abs(total.value() - 1.0) <= 1e-12,
            "joint demand mass must sum to 1, got " + std::to_string(total.value()));
}

std::pair<DiscreteDemand, DiscreteDemand> JointDiscreteDemand::marginals() const {
    std::map<std::int64_t, double> row_mass;
    std::map<std::int64_t, double> col_mass;
    for (std::size_t i = 0; i < rows(); ++i) {
        NeumaierSum r;
        for (std::size_t j = 0; j < cols(); ++j) r.add(mass_[i][j]);
        row_mass[static_cast<std::int64_t>(i)] = r.value();
    }
    for (std::size_t j = 0; j < cols(); ++j) {
        NeumaierSum c;
        for (std::size_t i = 0; i < rows(); ++i) c.add(mass_[i][j]);
        col_mass[static_cast<std::int64_t>(j)] = c.value();
    }
    return {DiscreteDemand::table(row_mass), DiscreteDemand::table(col_mass)};
}

DiscreteDemand fit_empirical(const std::vector<std::int64_t>& samples) {
    if (samples.empty()) {
        throw EmptySample("cannot fit a demand table from zero observations");
    }
    std::map<std::int64_t, std::int64_t> counts;
    for (std::int64_t s : samples) {
        if (s < 0) {
            throw NegativeDemand("demand observations must be >= 0, got " + std::to_string(s));
        }
        ++counts[s];
    }
    auto n = static_cast<double>(samples.size());
    DiscreteDemand d(DiscreteDemand::Family::table);
    std::int64_t running = 0;
    for (const auto& [k, c] : counts) {
        running += c;
        d.support_.emplace_back(k, static_cast<double>(c) / n);
        // Cumulative from integer counts, so cdf reproduces the empirical
        // CDF of the sample exactly at every support point.
        d.cum_.push_back(static_cast<double>(running) / n);
    }
    return d;
}

bool is_continuous(const DemandModel& d) {
    return std::holds_alternative<ContinuousDemand>(d);
}

double cdf_at(const DemandModel& d, double x) {
    return std::visit([x](const auto& m) { return m.cdf(x); }, d);
}

double quantile_at(const DemandModel& d, double q) {
    return std::visit([q](const auto& m) { return static_cast<double>(m.quantile(q)); }, d);
}

bool bounded_support(const DemandModel& d) {
    return std::visit([](const auto& m) { return m.bounded_support(); }, d);
}

double support_max_of(const DemandModel& d) {
    if (!bounded_support(d)) return kInf;
    return std::visit([](const auto& m) { return static_cast<double>(m.support_max()); }, d);
}

}  // namespace stockwise
