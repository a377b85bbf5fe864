#include "stockwise/demand.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "stockwise/errors.hpp"

namespace stockwise {
namespace {

TEST(Uniform, RejectsBadParameters) {
    EXPECT_THROW(ContinuousDemand::uniform(-1.0, 2.0), DomainError);
    EXPECT_THROW(ContinuousDemand::uniform(2.0, 2.0), DomainError);
    EXPECT_THROW(ContinuousDemand::uniform(3.0, 1.0), DomainError);
    EXPECT_THROW(ContinuousDemand::uniform(0.0, std::numeric_limits<double>::infinity()),
                 DomainError);
}

TEST(Uniform, CdfAndQuantile) {
    ContinuousDemand d = ContinuousDemand::uniform(2.0, 6.0);
    EXPECT_DOUBLE_EQ(d.cdf(1.0), 0.0);
    EXPECT_DOUBLE_EQ(d.cdf(2.0), 0.0);
    EXPECT_DOUBLE_EQ(d.cdf(4.0), 0.5);
    EXPECT_DOUBLE_EQ(d.cdf(6.0), 1.0);
    EXPECT_DOUBLE_EQ(d.cdf(7.0), 1.0);
    EXPECT_DOUBLE_EQ(d.quantile(0.25), 3.0);
    EXPECT_DOUBLE_EQ(d.quantile(1.0), 6.0);
    EXPECT_DOUBLE_EQ(d.pdf(4.0), 0.25);
    EXPECT_DOUBLE_EQ(d.pdf(1.0), 0.0);
    EXPECT_TRUE(d.bounded_support());
    EXPECT_DOUBLE_EQ(d.support_min(), 2.0);
    EXPECT_DOUBLE_EQ(d.support_max(), 6.0);
}

TEST(Uniform, QuantileLevelValidation) {
    ContinuousDemand d = ContinuousDemand::uniform(0.0, 1.0);
    EXPECT_THROW(d.quantile(0.0), DomainError);
    EXPECT_THROW(d.quantile(-0.5), DomainError);
    EXPECT_THROW(d.quantile(1.0 + 1e-12), DomainError);
    EXPECT_THROW(d.quantile(std::nan("")), DomainError);
}

TEST(Exponential, CdfQuantileRoundTrip) {
    ContinuousDemand d = ContinuousDemand::exponential(0.7);
    for (double q : {1e-6, 0.1, 0.5, 0.9, 1.0 - 1e-9}) {
        EXPECT_NEAR(d.cdf(d.quantile(q)), q, 1e-12) << "q = " << q;
    }
    EXPECT_DOUBLE_EQ(d.cdf(0.0), 0.0);
    EXPECT_DOUBLE_EQ(d.cdf(-1.0), 0.0);
    EXPECT_FALSE(d.bounded_support());
    EXPECT_THROW(d.quantile(1.0), UnboundedQuantile);
    EXPECT_THROW(ContinuousDemand::exponential(0.0), DomainError);
    EXPECT_THROW(ContinuousDemand::exponential(-2.0), DomainError);
}

TEST(TruncatedNormal, CdfIsNormalizedAboveLo) {
    ContinuousDemand d = ContinuousDemand::truncated_normal(5.0, 2.0, 1.0);
    EXPECT_DOUBLE_EQ(d.cdf(1.0), 0.0);
    EXPECT_DOUBLE_EQ(d.cdf(0.0), 0.0);
    EXPECT_NEAR(d.cdf(1e9), 1.0, 1e-15);
    // Strictly increasing above the truncation point.
    double prev = 0.0;
    for (double x = 1.0; x <= 12.0; x += 0.5) {
        double f = d.cdf(x);
        EXPECT_GE(f, prev);
        prev = f;
    }
    for (double q : {0.05, 0.3, 0.5, 0.77, 0.99}) {
        EXPECT_NEAR(d.cdf(d.quantile(q)), q, 1e-9) << "q = " << q;
    }
    EXPECT_THROW(d.quantile(1.0), UnboundedQuantile);
}

TEST(TruncatedNormal, RejectsNegligibleMass) {
    EXPECT_THROW(ContinuousDemand::truncated_normal(-100.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(ContinuousDemand::truncated_normal(5.0, 0.0), DomainError);
    EXPECT_THROW(ContinuousDemand::truncated_normal(5.0, 2.0, -1.0), DomainError);
}

TEST(PiecewiseEmpirical, InterpolatesCdf) {
    ContinuousDemand d = ContinuousDemand::piecewise_empirical({0.0, 1.0, 3.0}, {1.0, 1.0});
    EXPECT_DOUBLE_EQ(d.cdf(0.0), 0.0);
    EXPECT_DOUBLE_EQ(d.cdf(0.5), 0.25);
    EXPECT_DOUBLE_EQ(d.cdf(1.0), 0.5);
    EXPECT_DOUBLE_EQ(d.cdf(2.0), 0.75);
    EXPECT_DOUBLE_EQ(d.cdf(3.0), 1.0);
    EXPECT_DOUBLE_EQ(d.quantile(0.25), 0.5);
    EXPECT_DOUBLE_EQ(d.quantile(0.75), 2.0);
    EXPECT_DOUBLE_EQ(d.quantile(1.0), 3.0);
    EXPECT_DOUBLE_EQ(d.pdf(0.5), 0.5);
    EXPECT_DOUBLE_EQ(d.pdf(2.0), 0.25);
}

TEST(PiecewiseEmpirical, ZeroWeightCellQuantileTakesSmallestPoint) {
    // Middle cell carries no mass; the CDF is flat on [1, 2]. The
    // generalized inverse at the flat level must return the left end.
    ContinuousDemand d =
        ContinuousDemand::piecewise_empirical({0.0, 1.0, 2.0, 3.0}, {1.0, 0.0, 1.0});
    EXPECT_DOUBLE_EQ(d.cdf(1.0), 0.5);
    EXPECT_DOUBLE_EQ(d.cdf(1.7), 0.5);
    EXPECT_DOUBLE_EQ(d.cdf(2.0), 0.5);
    EXPECT_DOUBLE_EQ(d.quantile(0.5), 1.0);
    // Just above the flat level the inverse jumps across the dead cell.
    EXPECT_GE(d.quantile(0.5 + 1e-9), 2.0);
}

TEST(PiecewiseEmpirical, RejectsBadShape) {
    EXPECT_THROW(ContinuousDemand::piecewise_empirical({1.0}, {}), DomainError);
    EXPECT_THROW(ContinuousDemand::piecewise_empirical({0.0, 1.0}, {1.0, 2.0}), DomainError);
    EXPECT_THROW(ContinuousDemand::piecewise_empirical({1.0, 1.0}, {1.0}), DomainError);
    EXPECT_THROW(ContinuousDemand::piecewise_empirical({-1.0, 1.0}, {1.0}), DomainError);
    EXPECT_THROW(ContinuousDemand::piecewise_empirical({0.0, 1.0}, {-1.0}), DomainError);
    EXPECT_THROW(ContinuousDemand::piecewise_empirical({0.0, 1.0, 2.0}, {0.0, 0.0}), DomainError);
}

TEST(Poisson, PmfMatchesRecurrence) {
    DiscreteDemand d = DiscreteDemand::poisson(3.5);
    // p(k+1) = p(k) * lambda / (k+1) pins the log-gamma evaluation.
    double p = std::exp(-3.5);
    for (std::int64_t k = 0; k <= 30; ++k) {
        EXPECT_NEAR(d.pmf(k), p, 1e-15 + 1e-12 * p) << "k = " << k;
        p *= 3.5 / static_cast<double>(k + 1);
    }
    EXPECT_DOUBLE_EQ(d.pmf(-1), 0.0);
}

TEST(Poisson, CdfAndQuantileAgree) {
    DiscreteDemand d = DiscreteDemand::poisson(3.0);
    EXPECT_DOUBLE_EQ(d.cdf(-0.5), 0.0);
    EXPECT_DOUBLE_EQ(d.cdf(2.7), d.cdf(2.0));
    // quantile(q) is the smallest n with cdf(n) >= q.
    for (double q : {0.01, 0.2, 0.42, 0.5, 0.9, 0.999}) {
        std::int64_t n = d.quantile(q);
        EXPECT_GE(d.cdf(static_cast<double>(n)), q);
        if (n > 0) {
            EXPECT_LT(d.cdf(static_cast<double>(n - 1)), q);
        }
    }
    EXPECT_THROW(d.quantile(1.0), UnboundedQuantile);
    EXPECT_FALSE(d.bounded_support());
    EXPECT_THROW(d.support_max(), DomainError);
}

TEST(Geometric, ClosedFormsAgree) {
    DiscreteDemand d = DiscreteDemand::geometric(0.3);
    EXPECT_NEAR(d.pmf(0), 0.3, 1e-15);
    EXPECT_NEAR(d.pmf(4), 0.3 * std::pow(0.7, 4), 1e-15);
    EXPECT_NEAR(d.cdf(3.0), 1.0 - std::pow(0.7, 4), 1e-15);
    for (double q : {0.1, 0.3, 0.65, 0.9999}) {
        std::int64_t n = d.quantile(q);
        EXPECT_GE(d.cdf(static_cast<double>(n)), q);
        if (n > 0) {
            EXPECT_LT(d.cdf(static_cast<double>(n - 1)), q);
        }
    }
    EXPECT_THROW(DiscreteDemand::geometric(0.0), DomainError);
    EXPECT_THROW(DiscreteDemand::geometric(1.5), DomainError);
}

TEST(Geometric, PointMassAtOneIsBounded) {
    DiscreteDemand d = DiscreteDemand::geometric(1.0);
    EXPECT_DOUBLE_EQ(d.pmf(0), 1.0);
    EXPECT_DOUBLE_EQ(d.pmf(1), 0.0);
    EXPECT_DOUBLE_EQ(d.cdf(0.0), 1.0);
    EXPECT_TRUE(d.bounded_support());
    EXPECT_EQ(d.support_max(), 0);
    EXPECT_EQ(d.quantile(1.0), 0);
}

TEST(Table, StepCdfAndGeneralizedInverse) {
    DiscreteDemand d = DiscreteDemand::table({{1, 0.25}, {3, 0.5}, {7, 0.25}});
    EXPECT_DOUBLE_EQ(d.cdf(0.0), 0.0);
    EXPECT_DOUBLE_EQ(d.cdf(1.0), 0.25);
    EXPECT_DOUBLE_EQ(d.cdf(2.9), 0.25);
    EXPECT_DOUBLE_EQ(d.cdf(3.0), 0.75);
    EXPECT_DOUBLE_EQ(d.cdf(100.0), 1.0);
    // Exact dyadic masses make the attainment boundary exact: the level
    // q = cdf(n) must map back to n, one ulp above must not.
    EXPECT_EQ(d.quantile(0.25), 1);
    EXPECT_EQ(d.quantile(0.25 + 1e-12), 3);
    EXPECT_EQ(d.quantile(0.75), 3);
    EXPECT_EQ(d.quantile(0.75 + 1e-12), 7);
    EXPECT_EQ(d.quantile(1.0), 7);
    EXPECT_TRUE(d.bounded_support());
    EXPECT_EQ(d.support_max(), 7);
}

TEST(Table, DropsZeroMassAndValidates) {
    DiscreteDemand d = DiscreteDemand::table({{0, 0.5}, {2, 0.0}, {4, 0.5}});
    EXPECT_DOUBLE_EQ(d.pmf(2), 0.0);
    EXPECT_EQ(d.quantile(0.5 + 1e-12), 4);  // zero-mass key never attains
    EXPECT_THROW(DiscreteDemand::table({{-1, 1.0}}), DomainError);
    EXPECT_THROW(DiscreteDemand::table({{0, -0.5}, {1, 1.5}}), DomainError);
    EXPECT_THROW(DiscreteDemand::table({{0, 0.0}}), DomainError);
    EXPECT_THROW(DiscreteDemand::table({{0, 0.5}, {1, 0.4}}), DomainError);
    EXPECT_THROW(DiscreteDemand::table({}), DomainError);
}

TEST(Table, GaloisConnectionHoldsExactly) {
    // On a finite table the generalized inverse and the CDF form a Galois
    // connection: quantile(q) <= n  iff  q <= cdf(n). Check it exactly on
    // dyadic masses where no rounding can blur the boundary.
    DiscreteDemand d = DiscreteDemand::table({{0, 0.125}, {2, 0.375}, {5, 0.25}, {6, 0.25}});
    std::vector<double> levels = {0.0625, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0};
    for (double q : levels) {
        std::int64_t nq = d.quantile(q);
        for (std::int64_t n = 0; n <= 7; ++n) {
            EXPECT_EQ(nq <= n, q <= d.cdf(static_cast<double>(n)))
                << "q = " << q << ", n = " << n;
        }
    }
}

TEST(FitEmpirical, ReproducesEmpiricalCdfExactly) {
    // Counts of thirds do not sum to one in floating point when rounded
    // individually; the fit must build its cumulative from integer counts.
    DiscreteDemand d = fit_empirical({0, 1, 1});
    EXPECT_DOUBLE_EQ(d.pmf(0), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(d.pmf(1), 2.0 / 3.0);
    EXPECT_EQ(d.cdf(0.0), 1.0 / 3.0);
    EXPECT_EQ(d.cdf(1.0), 1.0);
    EXPECT_EQ(d.quantile(1.0), 1);

    DiscreteDemand e = fit_empirical({5, 2, 2, 9, 5, 5});
    EXPECT_DOUBLE_EQ(e.pmf(2), 2.0 / 6.0);
    EXPECT_DOUBLE_EQ(e.pmf(5), 3.0 / 6.0);
    EXPECT_DOUBLE_EQ(e.pmf(9), 1.0 / 6.0);
    EXPECT_EQ(e.cdf(9.0), 1.0);
    EXPECT_EQ(e.support_max(), 9);
}

TEST(FitEmpirical, RejectsBadSamples) {
    EXPECT_THROW(fit_empirical({}), EmptySample);
    EXPECT_THROW(fit_empirical({3, -1, 2}), NegativeDemand);
}

TEST(FitEmpirical, LargeRandomSampleStaysConsistent) {
    std::mt19937_64 rng(42);
    std::vector<std::int64_t> samples;
    for (int i = 0; i < 10000; ++i) {
        samples.push_back(static_cast<std::int64_t>(rng() % 40));
    }
    DiscreteDemand d = fit_empirical(samples);
    EXPECT_EQ(d.cdf(39.0), 1.0);
    // quantile is the smallest attaining point for arbitrary levels.
    for (double q : {0.001, 0.37, 0.5, 0.99, 0.9999}) {
        std::int64_t n = d.quantile(q);
        EXPECT_GE(d.cdf(static_cast<double>(n)), q);
        if (n > 0) {
            EXPECT_LT(d.cdf(static_cast<double>(n - 1)), q);
        }
    }
}

TEST(JointDemand, MarginalsSumRowsAndColumns) {
    JointDiscreteDemand joint({{0.10, 0.20, 0.05},
                               {0.15, 0.25, 0.25}});
    EXPECT_EQ(joint.rows(), 2u);
    EXPECT_EQ(joint.cols(), 3u);
    auto [rows, cols] = joint.marginals();
    EXPECT_NEAR(rows.pmf(0), 0.35, 1e-15);
    EXPECT_NEAR(rows.pmf(1), 0.65, 1e-15);
    EXPECT_NEAR(cols.pmf(0), 0.25, 1e-15);
    EXPECT_NEAR(cols.pmf(1), 0.45, 1e-15);
    EXPECT_NEAR(cols.pmf(2), 0.30, 1e-15);
}

TEST(JointDemand, RejectsBadMatrices) {
    EXPECT_THROW(JointDiscreteDemand({}), DomainError);
    EXPECT_THROW(JointDiscreteDemand({{0.5, 0.5}, {0.5}}), DomainError);
    EXPECT_THROW(JointDiscreteDemand({{0.5, -0.1}, {0.3, 0.3}}), DomainError);
    EXPECT_THROW(JointDiscreteDemand({{0.5, 0.4}}), DomainError);
}

TEST(DemandModel, VariantHelpersDispatch) {
    DemandModel c = ContinuousDemand::uniform(0.0, 10.0);
    DemandModel d = DiscreteDemand::poisson(4.0);
    EXPECT_TRUE(is_continuous(c));
    EXPECT_FALSE(is_continuous(d));
    EXPECT_DOUBLE_EQ(cdf_at(c, 5.0), 0.5);
    EXPECT_DOUBLE_EQ(quantile_at(c, 0.5), 5.0);
    EXPECT_TRUE(bounded_support(c));
    EXPECT_FALSE(bounded_support(d));
    EXPECT_DOUBLE_EQ(support_max_of(c), 10.0);
    EXPECT_TRUE(std::isinf(support_max_of(d)));
}

}  // namespace
}  // namespace stockwise
