// End-to-end tests driving the installed binary through its public
// command line, checking reports, exit codes, and error wording.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    fs::path out = fs::temp_directory_path() / ("cli_out_" + std::to_string(++counter));
    fs::path err = fs::temp_directory_path() / ("cli_err_" + std::to_string(counter));
    std::string cmd =
        std::string(STOCKWISE_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

TEST(CliSolve, UnconstrainedJsonReport) {
    RunResult r = run_cli("solve --config " + fixture("two_uniform.json") + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    json report = json::parse(r.out);
    EXPECT_EQ(report["plan"][0].get<double>(), 7.5);
    EXPECT_EQ(report["plan"][1].get<double>(), 5.0);
    EXPECT_EQ(report["expected_profit"].get<double>(), 13.75);
    EXPECT_EQ(report["method"], "continuous_fractile");
    ASSERT_EQ(report["per_product"].size(), 2u);
    EXPECT_EQ(report["per_product"][0]["name"], "espresso");
    EXPECT_EQ(report["per_product"][0]["n_opt"].get<double>(), 7.5);
    EXPECT_EQ(report["per_product"][0]["fractile"].get<double>(), 0.75);
    EXPECT_EQ(report["per_product"][0]["cdf_at_n"].get<double>(), 0.75);
    EXPECT_FALSE(report.contains("constraint_active"));
    EXPECT_FALSE(report.contains("simulation"));
}

TEST(CliSolve, EqualityConstraintReport) {
    RunResult r = run_cli("solve --config " + fixture("two_uniform_eq.json") + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    json report = json::parse(r.out);
    EXPECT_EQ(report["method"], "lagrange_bisection");
    EXPECT_TRUE(report["constraint_active"].get<bool>());
    EXPECT_NEAR(report["lambda"].get<double>(), 1.0 / 3.0, 1e-6);
    double n0 = report["plan"][0].get<double>();
    double n1 = report["plan"][1].get<double>();
    EXPECT_NEAR(n0, 20.0 / 3.0, 1e-6);
    EXPECT_NEAR(n1, 10.0 / 3.0, 1e-6);
    EXPECT_NEAR(n0 + n1, 10.0, 1e-7);
}

TEST(CliSolve, SlackInequalityReportsInactive) {
    RunResult r =
        run_cli("solve --config " + fixture("two_uniform_le_slack.json") + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    json report = json::parse(r.out);
    EXPECT_FALSE(report["constraint_active"].get<bool>());
    EXPECT_EQ(report["plan"][0].get<double>(), 7.5);
    EXPECT_EQ(report["plan"][1].get<double>(), 5.0);
}

TEST(CliSolve, LatticeConstraintReport) {
    RunResult r = run_cli("solve --config " + fixture("table_le.json") + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    json report = json::parse(r.out);
    EXPECT_EQ(report["method"], "lattice_enumeration");
    EXPECT_EQ(report["plan"][0].get<double>(), 2.0);
    EXPECT_EQ(report["plan"][1].get<double>(), 1.0);
    EXPECT_EQ(report["expected_profit"].get<double>(), 5.5);
    EXPECT_TRUE(report["constraint_active"].get<bool>());
}

TEST(CliSolve, EmpiricalDemandFromCsv) {
    RunResult r = run_cli("solve --config " + fixture("empirical.json") + " --csv " +
                          fixture("history.csv") + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    json report = json::parse(r.out);
    EXPECT_EQ(report["method"], "discrete_forward_difference");
    EXPECT_EQ(report["plan"][0].get<double>(), 5.0);
    EXPECT_EQ(report["plan"][1].get<double>(), 4.0);
    EXPECT_EQ(report["expected_profit"].get<double>(), 11.875);
}

TEST(CliSolve, MixedCatalog) {
    RunResult r = run_cli("solve --config " + fixture("mixed.json") + " --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    json report = json::parse(r.out);
    EXPECT_EQ(report["method"], "mixed");
    EXPECT_EQ(report["plan"][0].get<double>(), 7.5);
    EXPECT_EQ(report["plan"][1].get<double>(), 6.0);
}

TEST(CliSolve, GridCheckBlockCrossChecksThePlan) {
    RunResult r = run_cli("solve --config " + fixture("two_uniform.json") +
                          " --grid-step 0.5 --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    json report = json::parse(r.out);
    ASSERT_TRUE(report.contains("grid_check"));
    EXPECT_EQ(report["grid_check"]["step"].get<double>(), 0.5);
    EXPECT_EQ(report["grid_check"]["max_coordinate_gap"].get<double>(), 0.0);
    EXPECT_EQ(report["grid_check"]["expected_profit"].get<double>(), 13.75);
}

TEST(CliSolve, SolverFailuresExitThree) {
    RunResult r = run_cli("solve --config " + fixture("exp_unbounded.json"));
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("unbounded order quantity"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("gadgets"), std::string::npos) << r.err;

    RunResult inf = run_cli("solve --config " + fixture("table_eq_infeasible.json"));
    EXPECT_EQ(inf.code, 3);
    EXPECT_NE(inf.err.find("no lattice point"), std::string::npos) << inf.err;
}

TEST(CliSolve, InputErrorsExitTwo) {
    RunResult syntax = run_cli("solve --config " + fixture("bad_syntax.json"));
    EXPECT_EQ(syntax.code, 2);
    EXPECT_NE(syntax.err.find("line"), std::string::npos) << syntax.err;

    RunResult unknown = run_cli("solve --config " + fixture("unknown_key.json"));
    EXPECT_EQ(unknown.code, 2);
    EXPECT_NE(unknown.err.find("products[0]"), std::string::npos) << unknown.err;
    EXPECT_NE(unknown.err.find("price"), std::string::npos) << unknown.err;

    RunResult coeff = run_cli("solve --config " + fixture("negative_coeff.json"));
    EXPECT_EQ(coeff.code, 2);
    EXPECT_NE(coeff.err.find("coeffs"), std::string::npos) << coeff.err;

    RunResult nocsv = run_cli("solve --config " + fixture("empirical.json"));
    EXPECT_EQ(nocsv.code, 2);
    EXPECT_NE(nocsv.err.find("--csv"), std::string::npos) << nocsv.err;

    RunResult missing = run_cli("solve --config /nonexistent/nope.json");
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("cannot open"), std::string::npos) << missing.err;
}

TEST(CliEval, ReportsTermsAndTotal) {
    RunResult r = run_cli("eval --config " + fixture("two_uniform.json") +
                          " --plan 6,4 --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    json report = json::parse(r.out);
    EXPECT_EQ(report["method"], "direct_evaluation");
    EXPECT_NEAR(report["expected_profit"].get<double>(), 13.2, 1e-12);
    double term_sum = 0.0;
    for (const auto& e : report["per_product"]) {
        term_sum += e["term"].get<double>();
    }
    EXPECT_NEAR(term_sum, report["expected_profit"].get<double>(), 1e-12);
}

TEST(CliEval, PlanValidationExitsTwo) {
    EXPECT_EQ(run_cli("eval --config " + fixture("two_uniform.json") + " --plan 6").code, 2);
    EXPECT_EQ(run_cli("eval --config " + fixture("two_uniform.json") + " --plan abc,4").code, 2);
    EXPECT_EQ(run_cli("eval --config " + fixture("two_uniform.json") + " --plan -1,4").code, 2);
    // Discrete demand needs integer quantities.
    EXPECT_EQ(run_cli("eval --config " + fixture("poisson.json") + " --plan 6.5").code, 2);
}

TEST(CliSimulate, SeededRunsAreByteIdentical) {
    std::string args = "simulate --config " + fixture("two_uniform.json") +
                       " --plan 7.5,5 --samples 5000 --seed 9 --format json";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);

    json report = json::parse(a.out);
    ASSERT_TRUE(report.contains("simulation"));
    const json& sim = report["simulation"];
    EXPECT_EQ(sim["seed"].get<std::uint64_t>(), 9u);
    EXPECT_EQ(sim["samples"].get<std::int64_t>(), 5000);
    EXPECT_GT(sim["std_error"].get<double>(), 0.0);
    EXPECT_NEAR(sim["mean"].get<double>(), report["expected_profit"].get<double>(),
                4.0 * sim["std_error"].get<double>());
}

TEST(CliSimulate, DefaultSeedIsOne) {
    RunResult r = run_cli("simulate --config " + fixture("two_uniform.json") +
                          " --plan 7.5,5 --samples 100 --format json");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["simulation"]["seed"].get<std::uint64_t>(), 1u);
}

TEST(CliSimulate, RejectsTinySampleCounts) {
    EXPECT_EQ(run_cli("simulate --config " + fixture("two_uniform.json") +
                      " --plan 7.5,5 --samples 1")
                  .code,
              2);
}

TEST(CliFit, EmitsARunnableConfig) {
    RunResult r = run_cli("fit --csv " + fixture("history.csv"));
    ASSERT_EQ(r.code, 0) << r.err;
    json config = json::parse(r.out);
    ASSERT_EQ(config["products"].size(), 2u);
    EXPECT_EQ(config["products"][0]["name"], "espresso");
    EXPECT_EQ(config["products"][0]["unit_profit"].get<double>(), 1.0);
    EXPECT_EQ(config["products"][0]["demand"]["kind"], "table");
    EXPECT_EQ(config["products"][0]["demand"]["mass"]["5"].get<double>(), 0.5);
    EXPECT_EQ(config["products"][1]["demand"]["mass"]["3"].get<double>(), 0.375);

    // Round trip: the emitted config must solve as-is.
    fs::path tmp = fs::temp_directory_path() / "cli_fit_roundtrip.json";
    std::ofstream(tmp) << r.out;
    RunResult solve = run_cli("solve --config " + tmp.string() + " --format json");
    fs::remove(tmp);
    ASSERT_EQ(solve.code, 0) << solve.err;
    json report = json::parse(solve.out);
    EXPECT_EQ(report["plan"][0].get<double>(), 5.0);
    EXPECT_EQ(report["plan"][1].get<double>(), 4.0);
}

TEST(CliFit, CsvErrorsCarryTheRowNumber) {
    RunResult bad = run_cli("fit --csv " + fixture("bad_row.csv"));
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("row 3"), std::string::npos) << bad.err;
    EXPECT_NE(bad.err.find("oops"), std::string::npos) << bad.err;

    RunResult empty = run_cli("fit --csv " + fixture("header_only.csv"));
    EXPECT_EQ(empty.code, 2);
    EXPECT_NE(empty.err.find("no observations"), std::string::npos) << empty.err;
}

TEST(CliOutput, TableFormatIsTheDefault) {
    RunResult r = run_cli("solve --config " + fixture("two_uniform.json"));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("product"), std::string::npos);
    EXPECT_NE(r.out.find("espresso"), std::string::npos);
    EXPECT_NE(r.out.find("expected profit: 13.75"), std::string::npos) << r.out;
}

TEST(CliOutput, OutFlagWritesTheReportToAFile) {
    fs::path tmp = fs::temp_directory_path() / "cli_out_report.json";
    RunResult r = run_cli("solve --config " + fixture("two_uniform.json") +
                          " --format json --out " + tmp.string());
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    json report = json::parse(slurp(tmp));
    fs::remove(tmp);
    EXPECT_EQ(report["expected_profit"].get<double>(), 13.75);
}

TEST(CliOutput, FlagErrorsExitTwo) {
    EXPECT_EQ(run_cli("solve --config " + fixture("two_uniform.json") + " --format yaml").code,
              2);
    EXPECT_EQ(run_cli("").code, 2);           // a subcommand is required
    EXPECT_EQ(run_cli("solve").code, 2);      // --config is required
    EXPECT_EQ(run_cli("--help").code, 0);
}

}  // namespace
