#include "stockwise/fractile.hpp"

#include <cmath>
#include <variant>

namespace stockwise {

namespace {

void check_economics(const Product& p) {
    if (!std::isfinite(p.unit_profit) || p.unit_profit <= 0.0) {
        throw DomainError("product '" + p.name + "' needs unit_profit > 0");
    }
    if (!std::isfinite(p.unit_loss) || p.unit_loss < 0.0) {
        throw DomainError("product '" + p.name + "' needs unit_loss >= 0");
    }
}

[[noreturn]] void throw_unbounded(const Product& p) {
    throw UnboundedQuantile("product '" + p.name +
                            "': unbounded order quantity (no overage cost and the demand "
                            "support has no upper end)");
}

}  // namespace

double critical_fractile(const Product& p) {
    check_economics(p);
    return p.unit_profit / (p.unit_profit + p.unit_loss);
}

double optimal_continuous(const Product& p, const ContinuousDemand& d) {
    double q = critical_fractile(p);
    if (q == 1.0 && !d.bounded_support()) throw_unbounded(p);
    return d.quantile(q);
}

std::int64_t optimal_discrete(const Product& p, const DiscreteDemand& d) {
    double q = critical_fractile(p);
    if (q == 1.0 && !d.bounded_support()) throw_unbounded(p);
    return d.quantile(q);
}

SolveReport solve(const Catalog& catalog) {
    SolveReport report;
    report.plan.reserve(catalog.size());
    report.per_product.reserve(catalog.size());
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        const Product& p = catalog.product(k);
        ProductReport pr;
        pr.name = p.name;
        pr.fractile = critical_fractile(p);
        if (const auto* cont = std::get_if<ContinuousDemand>(&catalog.demand(k))) {
            pr.n_opt = optimal_continuous(p, *cont);
            pr.cdf_at_n = cont->cdf(pr.n_opt);
            pr.method = SolveMethod::continuous_fractile;
        } else {
            const auto& disc = std::get<DiscreteDemand>(catalog.demand(k));
            pr.n_opt = static_cast<double>(optimal_discrete(p, disc));
            pr.cdf_at_n = disc.cdf(pr.n_opt);
            pr.method = SolveMethod::discrete_forward_difference;
        }
        pr.stationarity_residual =
            p.unit_profit - (p.unit_profit + p.unit_loss) * pr.cdf_at_n;
        report.plan.push_back(pr.n_opt);
        report.per_product.push_back(std::move(pr));
    }
    report.expected_profit = expected_profit(catalog, report.plan);
    return report;
}

ConcavityCertificate concavity_certificate(const Catalog& catalog, const OrderPlan& plan) {
    if (catalog.size() != 2) {
        throw DomainError("concavity certificate is defined for exactly two products, catalog has " +
                          std::to_string(catalog.size()));
    }
    if (plan.size() != 2) {
        throw LengthMismatch("concavity certificate needs a two-entry plan");
    }
    const auto* d1 = std::get_if<ContinuousDemand>(&catalog.demand(0));
    const auto* d2 = std::get_if<ContinuousDemand>(&catalog.demand(1));
    if (d1 == nullptr || d2 == nullptr) {
        throw NotContinuous("concavity certificate needs continuous demand for both products");
    }
    double f1 = d1->pdf(plan[0]);
    double f2 = d2->pdf(plan[1]);
    ConcavityCertificate cert;
    cert.delta1 = -(catalog.product(0).unit_profit + catalog.product(0).unit_loss) * f1;
    cert.delta2 = (catalog.product(0).unit_profit + catalog.product(0).unit_loss) *
                  (catalog.product(1).unit_profit + catalog.product(1).unit_loss) * f1 * f2;
    cert.verdict = cert.delta1 < 0.0 && cert.delta2 > 0.0;
    return cert;
}

}  // namespace stockwise
