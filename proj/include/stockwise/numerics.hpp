#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "stockwise/errors.hpp"

namespace stockwise {

/// Compensated accumulator (Neumaier's variant of Kahan summation).
/// The long discrete sums in this library are checked against identities
/// at absolute tolerances around 1e-12; naive accumulation of a few
/// thousand terms loses exactly the digits those checks look at.
class NeumaierSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Standard normal CDF via the complementary error function, which keeps
/// relative accuracy deep in the tails where 1 - Phi(-z) cancels.
inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

inline double normal_pdf(double z) {
    static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

/// Map a raw 64-bit generator draw to the open interval (0, 1).
/// Keeping both endpoints strictly out means inverse-CDF sampling never
/// has to answer quantile(0) or quantile(1). Only 52 bits are kept: with
/// 53 the top value k + 0.5 would round up and scale to exactly 1.
inline double uniform_open01(std::uint64_t raw) {
    return (static_cast<double>(raw >> 12) + 0.5) * 0x1.0p-52;
}

namespace detail {

struct QuadBudget {
    long evals_left;
};

inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson(F&& f, double a, double fa, double b, double fb, double m,
                        double fm, double whole, double tol, int depth,
                        QuadBudget& budget) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    budget.evals_left -= 2;
    if (budget.evals_left < 0 || depth > 60) {
        throw QuadratureFailure("adaptive quadrature ran out of budget before reaching tolerance");
    }
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1, budget) +
           adaptive_simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1, budget);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to an absolute tolerance.
/// Pass the locations where the integrand has kinks (density breakpoints,
/// plan quantities) as split points; the rule converges much faster when
/// every panel is smooth inside.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol,
                 std::vector<double> split_points = {}) {
    if (!(a <= b)) {
        throw DomainError("integration interval is reversed");
    }
    if (a == b) {
        return 0.0;
    }
    split_points.push_back(a);
    split_points.push_back(b);
    std::sort(split_points.begin(), split_points.end());
    split_points.erase(std::unique(split_points.begin(), split_points.end()),
                       split_points.end());

    std::vector<double> knots;
    for (double x : split_points) {
        if (x >= a && x <= b) knots.push_back(x);
    }

    detail::QuadBudget budget{1'000'000};
    double per_panel_tol = abs_tol / static_cast<double>(knots.size() - 1);
    NeumaierSum total;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double lo = knots[i];
        double hi = knots[i + 1];
        if (lo == hi) continue;
        double mid = 0.5 * (lo + hi);
        budget.evals_left -= 3;
        double flo = f(lo);
        double fhi = f(hi);
        double fmid = f(mid);
        double whole = detail::simpson(lo, flo, hi, fhi, fmid);
        total.add(detail::adaptive_simpson(f, lo, flo, hi, fhi, mid, fmid, whole,
                                           per_panel_tol, 0, budget));
    }
    return total.value();
}

}  // namespace stockwise
