// stockwise: order-quantity planning from the command line.
//
// solve     compute the profit-maximizing order plan for a config
// eval      expected profit of a given plan
// simulate  Monte-Carlo check of a plan (seeded, reproducible)
// fit       turn a demand-history CSV into a config with empirical tables
//
// Exit codes: 0 success, 2 bad input (config, CSV, flags), 3 solver
// failure (unbounded, infeasible, budget exhausted).

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stockwise/config.hpp"
#include "stockwise/constrained.hpp"
#include "stockwise/csv.hpp"
#include "stockwise/demand.hpp"
#include "stockwise/errors.hpp"
#include "stockwise/fractile.hpp"
#include "stockwise/oracle.hpp"
#include "stockwise/profit.hpp"

namespace {

using nlohmann::ordered_json;
using namespace stockwise;

struct CommonOptions {
    std::string config_path;
    std::string csv_path;
    std::string plan_text;
    std::string format = "table";
    std::string out_path;
    std::int64_t samples = 0;
    std::uint64_t seed = 1;
    double grid_step = 0.0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

OrderPlan parse_plan_flag(const std::string& text, std::size_t expected) {
    OrderPlan plan;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string cell = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            throw ConfigError("--plan: '" + cell + "' is not a number");
        }
        plan.push_back(value);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (plan.size() != expected) {
        throw LengthMismatch("--plan has " + std::to_string(plan.size()) +
                             " entries, config has " + std::to_string(expected) + " products");
    }
    return plan;
}

/// Load config (and CSV when provided or required) into a catalog.
struct LoadedPlan {
    PlanConfig config;
    Catalog catalog;
};

LoadedPlan load(const CommonOptions& opt) {
    PlanConfig config = parse_plan_config(read_file(opt.config_path));
    std::optional<DemandHistory> history;
    if (!opt.csv_path.empty()) {
        history = read_demand_history_file(opt.csv_path);
    } else if (config.needs_history()) {
        throw ConfigError("config uses empirical demand; pass the history with --csv");
    }
    Catalog catalog = build_catalog(config, history ? &*history : nullptr);
    return {std::move(config), std::move(catalog)};
}

bool all_continuous(const Catalog& catalog) {
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        if (!is_continuous(catalog.demand(k))) return false;
    }
    return true;
}

bool all_discrete(const Catalog& catalog) {
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        if (is_continuous(catalog.demand(k))) return false;
    }
    return true;
}

void check_resource_coeffs(const ConstraintSpec& spec) {
    for (double a : spec.coeffs) {
        if (!(a > 0.0)) {
            throw ConfigError("constraint.coeffs: resource coefficients must all be > 0");
        }
    }
}

ordered_json product_entry(const Catalog& catalog, std::size_t k, double n) {
    ordered_json e;
    e["name"] = catalog.product(k).name;
    e["n_opt"] = n;
    e["fractile"] = critical_fractile(catalog.product(k));
    e["cdf_at_n"] = cdf_at(catalog.demand(k), n);
    return e;
}

ordered_json plan_json(const OrderPlan& plan) {
    return ordered_json(plan);
}

void emit(const CommonOptions& opt, const ordered_json& report, const std::string& table) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!opt.out_path.empty()) {
        file.open(opt.out_path, std::ios::binary);
        if (!file) {
            throw ConfigError("cannot open '" + opt.out_path + "' for writing");
        }
        out = &file;
    }
    if (opt.format == "json") {
        *out << report.dump(2) << "\n";
    } else {
        *out << table;
    }
}

std::string render_table(const ordered_json& report) {
    std::ostringstream os;
    os << std::left;
    if (report.contains("per_product")) {
        os << std::setw(16) << "product" << std::setw(12) << "n_opt" << std::setw(12)
           << "fractile" << std::setw(12) << "cdf_at_n";
        bool has_term = !report["per_product"].empty() &&
                        report["per_product"].front().contains("term");
        if (has_term) os << std::setw(14) << "term";
        os << "\n";
        for (const auto& e : report["per_product"]) {
            os << std::setw(16) << e["name"].get<std::string>() << std::setw(12)
               << e["n_opt"].get<double>() << std::setw(12) << e["fractile"].get<double>()
               << std::setw(12) << e["cdf_at_n"].get<double>();
            if (has_term) os << std::setw(14) << e["term"].get<double>();
            os << "\n";
        }
    }
    os << "expected profit: " << report["expected_profit"].get<double>() << "\n";
    if (report.contains("constraint_active")) {
        os << "constraint: " << (report["constraint_active"].get<bool>() ? "active" : "inactive");
        if (report.contains("lambda")) os << " (lambda " << report["lambda"].get<double>() << ")";
        os << "\n";
    }
    if (report.contains("simulation")) {
        const auto& s = report["simulation"];
        os << "simulated mean: " << s["mean"].get<double>() << " (std error "
           << s["std_error"].get<double>() << ", " << s["samples"].get<std::int64_t>()
           << " samples, seed " << s["seed"].get<std::uint64_t>() << ")\n";
    }
    if (report.contains("grid_check")) {
        const auto& g = report["grid_check"];
        os << "grid check (step " << g["step"].get<double>()
           << "): max coordinate gap " << g["max_coordinate_gap"].get<double>() << "\n";
    }
    return os.str();
}

std::string method_name(const Catalog& catalog) {
    if (all_continuous(catalog)) return "continuous_fractile";
    if (all_discrete(catalog)) return "discrete_forward_difference";
    return "mixed";
}

int cmd_solve(const CommonOptions& opt) {
    LoadedPlan loaded = load(opt);
    const Catalog& catalog = loaded.catalog;

    ordered_json report;
    OrderPlan plan;
    if (!loaded.config.constraint.has_value()) {
        SolveReport solved = solve(catalog);
        plan = solved.plan;
        report["plan"] = plan_json(plan);
        report["expected_profit"] = solved.expected_profit;
        report["method"] = method_name(catalog);
        ordered_json products = ordered_json::array();
        for (const ProductReport& pr : solved.per_product) {
            ordered_json e;
            e["name"] = pr.name;
            e["n_opt"] = pr.n_opt;
            e["fractile"] = pr.fractile;
            e["cdf_at_n"] = pr.cdf_at_n;
            products.push_back(std::move(e));
        }
        report["per_product"] = std::move(products);
    } else {
        const ConstraintSpec& spec = *loaded.config.constraint;
        check_resource_coeffs(spec);
        bool active = false;
        double lambda = 0.0;
        std::string method;
        if (all_continuous(catalog)) {
            Constraint cons = spec.relation == ConstraintSpec::Relation::eq
                                  ? Constraint::linear_eq(spec.coeffs, spec.rhs)
                                  : Constraint::linear_le(spec.coeffs, spec.rhs);
            ConstrainedPlan solved = spec.relation == ConstraintSpec::Relation::eq
                                         ? solve_equality_continuous(catalog, cons)
                                         : solve_inequality_continuous(catalog, cons);
            plan = solved.plan;
            active = solved.active;
            lambda = solved.lambda;
            method = "lagrange_bisection";
        } else if (all_discrete(catalog)) {
            std::vector<std::int64_t> bounds(catalog.size());
            for (std::size_t k = 0; k < catalog.size(); ++k) {
                // a_k n_k <= rhs caps every coordinate; bounded support
                // caps it further.
                double cap = std::floor(spec.rhs / spec.coeffs[k]);
                double sup = support_max_of(catalog.demand(k));
                bounds[k] = static_cast<std::int64_t>(std::max(0.0, std::min(cap, sup)));
            }
            Constraint cons = spec.relation == ConstraintSpec::Relation::eq
                                  ? Constraint::linear_eq(spec.coeffs, spec.rhs)
                                  : Constraint::linear_le(spec.coeffs, spec.rhs);
            plan = solve_discrete_lattice(catalog, cons, bounds);
            double used = 0.0;
            for (std::size_t k = 0; k < catalog.size(); ++k) {
                used += spec.coeffs[k] * plan[k];
            }
            active = spec.relation == ConstraintSpec::Relation::eq || used >= spec.rhs - 1e-9;
            method = "lattice_enumeration";
        } else {
            throw NotContinuous(
                "constrained solving needs an all-continuous or all-discrete catalog");
        }
        report["plan"] = plan_json(plan);
        report["expected_profit"] = expected_profit(catalog, plan);
        report["method"] = method;
        ordered_json products = ordered_json::array();
        for (std::size_t k = 0; k < catalog.size(); ++k) {
            products.push_back(product_entry(catalog, k, plan[k]));
        }
        report["per_product"] = std::move(products);
        report["constraint_active"] = active;
        if (all_continuous(catalog)) report["lambda"] = lambda;
    }

    if (opt.grid_step > 0.0) {
        if (!all_continuous(catalog)) {
            throw ConfigError("--grid-step cross-checks need all-continuous demand");
        }
        std::vector<double> bounds(catalog.size());
        for (std::size_t k = 0; k < catalog.size(); ++k) {
            double sup = support_max_of(catalog.demand(k));
            bounds[k] = std::isfinite(sup) ? sup : 2.0 * plan[k] + 1.0;
        }
        std::optional<Constraint> cons;
        if (loaded.config.constraint.has_value()) {
            const ConstraintSpec& spec = *loaded.config.constraint;
            cons = spec.relation == ConstraintSpec::Relation::eq
                       ? Constraint::linear_eq(spec.coeffs, spec.rhs)
                       : Constraint::linear_le(spec.coeffs, spec.rhs);
        }
        OrderPlan grid_plan =
            grid_argmax_continuous(catalog, bounds, opt.grid_step, cons ? &*cons : nullptr);
        double gap = 0.0;
        for (std::size_t k = 0; k < catalog.size(); ++k) {
            gap = std::max(gap, std::abs(grid_plan[k] - plan[k]));
        }
        ordered_json g;
        g["step"] = opt.grid_step;
        g["plan"] = plan_json(grid_plan);
        g["expected_profit"] = expected_profit(catalog, grid_plan);
        g["max_coordinate_gap"] = gap;
        report["grid_check"] = std::move(g);
    }

    emit(opt, report, render_table(report));
    return 0;
}

int cmd_eval(const CommonOptions& opt) {
    LoadedPlan loaded = load(opt);
    const Catalog& catalog = loaded.catalog;
    OrderPlan plan = parse_plan_flag(opt.plan_text, catalog.size());

    ordered_json report;
    report["plan"] = plan_json(plan);
    report["expected_profit"] = expected_profit(catalog, plan);
    report["method"] = "direct_evaluation";
    ordered_json products = ordered_json::array();
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        ordered_json e = product_entry(catalog, k, plan[k]);
        OrderPlan solo(catalog.size(), 0.0);
        solo[k] = plan[k];
        e["term"] = expected_profit(catalog, solo);
        products.push_back(std::move(e));
    }
    report["per_product"] = std::move(products);
    emit(opt, report, render_table(report));
    return 0;
}

int cmd_simulate(const CommonOptions& opt) {
    if (opt.samples < 2) {
        throw ConfigError("--samples must be at least 2");
    }
    LoadedPlan loaded = load(opt);
    const Catalog& catalog = loaded.catalog;
    OrderPlan plan = parse_plan_flag(opt.plan_text, catalog.size());

    SimulationResult sim = simulate_profit(catalog, plan, opt.samples, opt.seed);

    ordered_json report;
    report["plan"] = plan_json(plan);
    report["expected_profit"] = expected_profit(catalog, plan);
    report["method"] = "monte_carlo";
    ordered_json products = ordered_json::array();
    for (std::size_t k = 0; k < catalog.size(); ++k) {
        products.push_back(product_entry(catalog, k, plan[k]));
    }
    report["per_product"] = std::move(products);
    ordered_json s;
    s["mean"] = sim.mean;
    s["std_error"] = sim.std_error;
    s["seed"] = sim.seed;
    s["samples"] = sim.n_samples;
    report["simulation"] = std::move(s);
    emit(opt, report, render_table(report));
    return 0;
}

int cmd_fit(const CommonOptions& opt) {
    DemandHistory history = read_demand_history_file(opt.csv_path);

    ordered_json config;
    ordered_json products = ordered_json::array();
    for (std::size_t c = 0; c < history.columns.size(); ++c) {
        if (history.observations[c].empty()) {
            throw CsvError(2, "column '" + history.columns[c] + "' has no observations");
        }
        DiscreteDemand fitted = fit_empirical(history.observations[c]);
        ordered_json mass;
        std::int64_t upper = fitted.support_max();
        for (std::int64_t k = 0; k <= upper; ++k) {
            double p = fitted.pmf(k);
            if (p > 0.0) mass[std::to_string(k)] = p;
        }
        ordered_json product;
        product["name"] = history.columns[c];
        // Neutral economics so the fitted config runs as-is; callers are
        // expected to fill in their real margins.
        product["unit_profit"] = 1.0;
        product["unit_loss"] = 1.0;
        product["demand"] = ordered_json{{"kind", "table"}, {"mass", std::move(mass)}};
        products.push_back(std::move(product));
    }
    config["products"] = std::move(products);

    CommonOptions emit_opt = opt;
    emit_opt.format = "json";
    emit(emit_opt, config, "");
    return 0;
}

int dispatch(const CommonOptions& opt, const std::string& command) {
    try {
        if (command == "solve") return cmd_solve(opt);
        if (command == "eval") return cmd_eval(opt);
        if (command == "simulate") return cmd_simulate(opt);
        if (command == "fit") return cmd_fit(opt);
        std::cerr << "stockwise: unknown command\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "stockwise: " << e.what() << "\n";
        return 2;
    } catch (const CsvError& e) {
        std::cerr << "stockwise: " << e.what() << "\n";
        return 2;
    } catch (const LengthMismatch& e) {
        std::cerr << "stockwise: " << e.what() << "\n";
        return 2;
    } catch (const EmptySample& e) {
        std::cerr << "stockwise: " << e.what() << "\n";
        return 2;
    } catch (const NegativeDemand& e) {
        std::cerr << "stockwise: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "stockwise: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        // Solver-side failures: unbounded, infeasible, budget, quadrature.
        std::cerr << "stockwise: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "stockwise: internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-period order planning under uncertain demand"};
    app.require_subcommand(1);

    CommonOptions opt;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config) {
            cmd->add_option("--config", opt.config_path, "plan configuration (JSON)")
                ->required();
        }
        cmd->add_option("--csv", opt.csv_path, "demand history CSV");
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"json", "table"}))
            ->capture_default_str();
        cmd->add_option("--out", opt.out_path, "write the report to a file instead of stdout");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "compute the optimal order plan");
    add_common(solve_cmd, true);
    solve_cmd->add_option("--grid-step", opt.grid_step,
                          "cross-check the plan against a grid search with this step");

    CLI::App* eval_cmd = app.add_subcommand("eval", "expected profit of a given plan");
    add_common(eval_cmd, true);
    eval_cmd->add_option("--plan", opt.plan_text, "order quantities, comma separated")
        ->required();

    CLI::App* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo check of a plan");
    add_common(sim_cmd, true);
    sim_cmd->add_option("--plan", opt.plan_text, "order quantities, comma separated")
        ->required();
    sim_cmd->add_option("--samples", opt.samples, "number of demand draws")->required();
    sim_cmd->add_option("--seed", opt.seed, "random seed")->capture_default_str();

    CLI::App* fit_cmd = app.add_subcommand("fit", "fit empirical demand tables from a CSV");
    fit_cmd->add_option("--csv", opt.csv_path, "demand history CSV")->required();
    fit_cmd->add_option("--out", opt.out_path, "write the config to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command;
    if (solve_cmd->parsed()) command = "solve";
    if (eval_cmd->parsed()) command = "eval";
    if (sim_cmd->parsed()) command = "simulate";
    if (fit_cmd->parsed()) command = "fit";
    return dispatch(opt, command);
}
