#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "depfid/audit.hpp"
#include "depfid/commands.hpp"
#include "depfid/csv.hpp"
#include "depfid/report.hpp"
#include "depfid/scenarios.hpp"
#include "test_helpers.hpp"

using namespace depfid;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() /
                         ("depfid_audit_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                          "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::vector<std::string>> read_csv_cells(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(read_file(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

double pairwise_distance(const DataMatrix& m, std::size_t a, std::size_t b) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.d(); ++j) s += (m(a, j) - m(b, j)) * (m(a, j) - m(b, j));
    return std::sqrt(s);
}

AuditReport synthetic_report(double ratio, bool vacuous) {
    AuditReport r;
    r.dataset_meta = {10, 12, 2, std::nullopt, std::nullopt};
    r.verdict.d_sigma = 1.23456789;
    r.verdict.eigengap = 2.0;
    r.verdict.ratio = ratio;
    r.verdict.regime = classify_ratio(ratio);
    r.rv = 0.987654321;
    r.ks.per_dimension = {{0.1, 0.9}, {0.2, 0.5}};
    r.ks.median_statistic = 0.15;
    r.subspace.push_back({1, 0.3, 2.0, {vacuous ? 1.5 : 0.5, vacuous}});
    r.slopes.target_index = 0;
    r.slopes.predictor_indices = {1};
    r.slopes.slopes_ref = {0.5};
    r.slopes.slopes_syn = {-0.5};
    r.slopes.abs_deltas = {1.0};
    r.slopes.sign_flips = 1;
    r.seed = 42;
    r.tool_version = tool_version();
    return r;
}

} // namespace

TEST(Csv, HeaderAndValues) {
    const DataMatrix m = parse_csv("a,b\n1,2\n3,4", true);
    EXPECT_EQ(m.values(), (Matrix{{1, 2}, {3, 4}}));
    EXPECT_EQ(m.column_names(), (std::vector<std::string>{"a", "b"}));
}

TEST(Csv, LineEndingsAndTrailingBlankLines) {
    const DataMatrix m = parse_csv("1.5,-2e3\r\n3,4\r\n\r\n", false);
    EXPECT_EQ(m.values(), (Matrix{{1.5, -2000}, {3, 4}}));
}

TEST(Csv, ErrorCoordinates) {
    try {
        parse_csv("1,2\n3", false);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RaggedRows);
        EXPECT_EQ(e.row(), std::optional<std::size_t>(2));
    }
    try {
        parse_csv("1,2\n3,x", false);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_EQ(e.row(), std::optional<std::size_t>(2));
        EXPECT_EQ(e.col(), std::optional<std::size_t>(2));
    }
    try {
        parse_csv("x,y\n1,2\n3,nan", true);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_EQ(e.row(), std::optional<std::size_t>(3));
    }
    EXPECT_DEPFID_ERROR(parse_csv("1,2", false), ErrorKind::InsufficientSamples);
    EXPECT_DEPFID_ERROR(ingest_csv("/nonexistent/depfid.csv", false), ErrorKind::IoError);
}

TEST(Csv, WriteReadRoundTripIsExact) {
    const fs::path dir = scratch_dir();
    std::mt19937_64 gen(1);
    const DataMatrix data = testing_support::random_data(20, 3, gen);
    write_csv(dir / "x.csv", data.values(), {"p", "q", "r"});
    const DataMatrix back = ingest_csv(dir / "x.csv", true);
    EXPECT_EQ(back.values(), data.values());
    EXPECT_EQ(read_file(dir / "x.csv").find('\r'), std::string::npos);
    EXPECT_EQ(format_csv_number(0.1), "0.1");
    EXPECT_EQ(format_csv_number(-2.0), "-2");
    fs::remove_all(dir);
}

TEST(PcaProject, FullBasisIsARotation) {
    std::mt19937_64 gen(2);
    const DataMatrix ref = testing_support::random_data(60, 4, gen);
    const DataMatrix syn = testing_support::random_data(50, 4, gen);
    const PcaProjection p = pca_project(ref, syn, 4);
    EXPECT_NEAR(p.variance_explained, 1.0, 1e-12);
    for (std::size_t a = 0; a < 10; ++a)
        EXPECT_NEAR(pairwise_distance(p.ref_proj, a, a + 7), pairwise_distance(ref, a, a + 7), 1e-8);
    EXPECT_NEAR(d_sigma(estimate_covariance(p.ref_proj), estimate_covariance(p.syn_proj)),
                d_sigma(estimate_covariance(ref), estimate_covariance(syn)), 1e-8);
}

TEST(PcaProject, CentresByReferenceMeans) {
    const DataMatrix ref(Matrix{{0, 0}, {2, 0}});
    const DataMatrix syn(Matrix{{1, 0}, {5, 0}});
    const PcaProjection p = pca_project(ref, syn, 1);
    EXPECT_NEAR(std::abs(p.ref_proj(0, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(p.syn_proj(0, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(p.syn_proj(1, 0)), 4.0, 1e-15);
}

TEST(PcaProject, RankOneAndErrors) {
    const DataMatrix ref(Matrix{{1, 2, 3}, {2, 4, 6}, {3, 6, 9}, {-1, -2, -3}});
    const PcaProjection p = pca_project(ref, ref, 1);
    EXPECT_NEAR(p.variance_explained, 1.0, 1e-12);
    EXPECT_EQ(p.ref_proj.d(), 1u);
    EXPECT_DEPFID_ERROR(pca_project(ref, ref, 4), ErrorKind::IndexOutOfRange);
    EXPECT_DEPFID_ERROR(pca_project(ref, DataMatrix(Matrix{{1, 2}, {3, 4}}), 1), ErrorKind::ShapeMismatch);
}

TEST(RunAudit, IdenticalInputs) {
    std::mt19937_64 gen(3);
    const DataMatrix data = testing_support::random_data(80, 4, gen);
    const AuditReport r = run_audit(data, data, {});
    EXPECT_EQ(r.verdict.regime, Regime::Stable);
    EXPECT_EQ(r.verdict.ratio, 0.0);
    EXPECT_EQ(r.slopes.sign_flips, 0u);
    EXPECT_EQ(r.ks.median_statistic, 0.0);
    ASSERT_EQ(r.subspace.size(), 3u); // r = 1, 2, 3 of the defaults fit below d = 4
    for (const auto& s : r.subspace) EXPECT_NEAR(s.sin_theta, 0.0, 1e-7);
    EXPECT_EQ(r.slopes.predictor_indices, (std::vector<std::size_t>{1, 2, 3}));
    EXPECT_EQ(r.seed, 42u);
    EXPECT_FALSE(r.bootstrap.has_value());
}

TEST(RunAudit, SignFlipNarrative) {
    const ScenarioPair p = make_sign_flip_pair(0.6, 1.0, 100000, 42);
    const AuditReport r = run_audit(p.samples_ref, p.samples_syn, {});
    EXPECT_LT(r.ks.median_statistic, 0.01);
    EXPECT_NEAR(r.slopes.abs_deltas[0], 1.2, 0.03);
    EXPECT_NEAR(r.verdict.d_sigma, 1.697, 0.03);
    EXPECT_EQ(r.slopes.sign_flips, 1u);
}

TEST(RunAudit, UnstableEigengapScenario) {
    // ε = 2.5 has no positive-definite population to sample from; ε = 1.6
    // already puts the ratio above one
    const ScenarioPair p = make_eigengap_pair(1.6, 20000, 42);
    const AuditReport r = run_audit(p.samples_ref, p.samples_syn, {});
    EXPECT_EQ(r.verdict.regime, Regime::Unstable);
    EXPECT_NEAR(r.verdict.ratio, std::sqrt(2.0) * 1.6 / 2.0, 0.05);
    ASSERT_FALSE(r.subspace.empty());
    EXPECT_TRUE(r.subspace[0].bound.vacuous);
}

TEST(RunAudit, InternalConsistencyAndOptionalBlocks) {
    const ScenarioPair p = make_sign_flip_pair(0.4, 2.0, 400, 9, 6);
    AuditOptions o;
    o.bootstrap_b = 50;
    o.subsets = SubsetOptions{10, 3};
    o.mmd = true;
    o.copula_mmd = true;
    o.subspace_dims = {5, 1, 2, 2};
    const AuditReport r = run_audit(p.samples_ref, p.samples_syn, o);
    EXPECT_NEAR(r.verdict.ratio * r.verdict.eigengap, r.verdict.d_sigma, 1e-9);
    ASSERT_EQ(r.subspace.size(), 3u);
    EXPECT_EQ(r.subspace[0].r, 1u);
    EXPECT_EQ(r.subspace[1].r, 2u);
    EXPECT_EQ(r.subspace[2].r, 5u);
    for (const auto& s : r.subspace)
        if (!s.bound.vacuous) EXPECT_LE(s.sin_theta, s.bound.value);
    ASSERT_TRUE(r.bootstrap.has_value());
    EXPECT_EQ(r.bootstrap->n_resamples, 50u);
    ASSERT_TRUE(r.sensitivity.has_value());
    EXPECT_EQ(r.sensitivity->n_subsets, 10u);
    ASSERT_TRUE(r.mmd.has_value());
    ASSERT_TRUE(r.copula_mmd.has_value());
    EXPECT_GT(r.mmd->bandwidth, 0.0);
}

TEST(RunAudit, PcaAndSlopeOptions) {
    std::mt19937_64 gen(4);
    const DataMatrix a = testing_support::random_data(100, 8, gen);
    const DataMatrix b = testing_support::random_data(100, 8, gen);
    AuditOptions o;
    o.pca_dims = 3;
    o.slope_target = 2;
    o.slope_predictors = {0, 1};
    const AuditReport r = run_audit(a, b, o);
    EXPECT_EQ(r.dataset_meta.d, 3u);
    EXPECT_EQ(r.dataset_meta.pca_dims, std::optional<std::size_t>(3));
    ASSERT_TRUE(r.dataset_meta.variance_explained.has_value());
    EXPECT_GT(*r.dataset_meta.variance_explained, 0.0);
    EXPECT_LE(*r.dataset_meta.variance_explained, 1.0);
    EXPECT_EQ(r.slopes.target_index, 2u);
    EXPECT_EQ(r.ks.per_dimension.size(), 3u);

    o.slope_predictors = {2};
    EXPECT_DEPFID_ERROR(run_audit(a, b, o), ErrorKind::InvalidArgument);
}

TEST(RunAudit, Deterministic) {
    const ScenarioPair p = make_sign_flip_pair(0.6, 1.0, 300, 5, 4);
    AuditOptions o;
    o.bootstrap_b = 30;
    o.subsets = SubsetOptions{8, 2};
    o.mmd = true;
    EXPECT_EQ(emit_report(run_audit(p.samples_ref, p.samples_syn, o), ReportFormat::Json),
              emit_report(run_audit(p.samples_ref, p.samples_syn, o), ReportFormat::Json));
}

TEST(ExitCodePolicy, Examples) {
    const AuditReport stable = synthetic_report(0.5, false);
    const AuditReport unstable = synthetic_report(1.5, true);
    EXPECT_EQ(exit_code_policy(stable, true), 0);
    EXPECT_EQ(exit_code_policy(unstable, true), 2);
    EXPECT_EQ(exit_code_policy(unstable, false), 0);
}

TEST(Report, JsonLayoutAndRoundTrip) {
    const AuditReport r = synthetic_report(0.617283945, false);
    const auto j = nlohmann::json::parse(emit_report(r, ReportFormat::Json));
    std::vector<std::string> keys;
    const auto oj = nlohmann::ordered_json::parse(emit_report(r, ReportFormat::Json));
    for (auto it = oj.begin(); it != oj.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"dataset_meta", "verdict", "rv", "ks", "subspace", "slopes",
                                              "bootstrap", "sensitivity", "mmd", "copula_mmd", "seed",
                                              "tool_version"}));
    EXPECT_EQ(j["verdict"]["d_sigma"].get<double>(), 1.23457);
    EXPECT_EQ(j["verdict"]["ratio"].get<double>(), 0.617284);
    EXPECT_EQ(j["rv"].get<double>(), 0.987654);
    EXPECT_EQ(j["verdict"]["regime"], "stable");
    EXPECT_EQ(j["subspace"][0]["dk_bound"].get<double>(), 0.5);
    EXPECT_EQ(j["subspace"][0]["vacuous"], false);
    EXPECT_EQ(j["slopes"]["sign_flips"], 1);
    EXPECT_TRUE(j["bootstrap"].is_null());
    EXPECT_EQ(round_significant(j["verdict"]["d_sigma"].get<double>()), j["verdict"]["d_sigma"].get<double>());
}

TEST(Report, InfiniteRatioAndVacuousBound) {
    const AuditReport r = synthetic_report(std::numeric_limits<double>::infinity(), true);
    const auto j = nlohmann::json::parse(emit_report(r, ReportFormat::Json));
    EXPECT_EQ(j["verdict"]["ratio"], "inf");
    EXPECT_EQ(j["verdict"]["regime"], "unstable");
    EXPECT_TRUE(j["subspace"][0]["dk_bound"].is_null());
    EXPECT_EQ(j["subspace"][0]["vacuous"], true);
}

TEST(Report, Markdown) {
    const std::string vacuous = emit_report(synthetic_report(1.0, true), ReportFormat::Markdown);
    EXPECT_NE(vacuous.find("| 1 | 0.3 | 2 | --- |"), std::string::npos) << vacuous;
    EXPECT_NE(vacuous.find("| unstable |"), std::string::npos);
    const std::string stable = emit_report(synthetic_report(0.5, false), ReportFormat::Markdown);
    EXPECT_NE(stable.find("| stable |"), std::string::npos);
    EXPECT_EQ(stable.find("---|\n| 1 | 0.3 | 2 | --- |"), std::string::npos);
    EXPECT_EQ(parse_report_format("md"), ReportFormat::Markdown);
    EXPECT_EQ(parse_report_format("json"), ReportFormat::Json);
    EXPECT_DEPFID_ERROR(parse_report_format("xml"), ErrorKind::InvalidArgument);
}

TEST(Report, RoundSignificant) {
    EXPECT_EQ(round_significant(1.6970562748), 1.69706);
    EXPECT_EQ(round_significant(-0.000123456789), -0.000123457);
    EXPECT_EQ(round_significant(0.0), 0.0);
}

TEST(Grid, ParseAndExpand) {
    const Grid g = parse_grid("0:1.4:0.1");
    const auto v = grid_values(g);
    ASSERT_EQ(v.size(), 15u);
    EXPECT_DOUBLE_EQ(v.back(), 1.4);
    EXPECT_EQ(grid_values(parse_grid("2:2:0.5")).size(), 1u);
    EXPECT_DEPFID_ERROR(parse_grid("1:2"), ErrorKind::InvalidArgument);
    EXPECT_DEPFID_ERROR(parse_grid("1:2:0"), ErrorKind::InvalidArgument);
    EXPECT_DEPFID_ERROR(parse_grid("2:1:0.5"), ErrorKind::InvalidArgument);
    EXPECT_DEPFID_ERROR(parse_grid("a:b:c"), ErrorKind::InvalidArgument);
}

TEST(Commands, SynthIsDeterministic) {
    const fs::path dir = scratch_dir();
    ScenarioSpec spec;
    spec.rho = 0.6;
    spec.n = 100;
    std::ostringstream out1, out2;
    EXPECT_EQ(cmd_synth(spec, dir / "r1.csv", dir / "s1.csv", out1), 0);
    EXPECT_EQ(cmd_synth(spec, dir / "r2.csv", dir / "s2.csv", out2), 0);
    EXPECT_EQ(read_file(dir / "r1.csv"), read_file(dir / "r2.csv"));
    EXPECT_EQ(read_file(dir / "s1.csv"), read_file(dir / "s2.csv"));
    EXPECT_EQ(out1.str(), out2.str());
    const DataMatrix ref = ingest_csv(dir / "r1.csv", false);
    EXPECT_EQ(ref.n(), 100u);
    EXPECT_EQ(ref.d(), 2u);
    const auto j = nlohmann::json::parse(out1.str());
    EXPECT_NEAR(j["d_sigma"].get<double>(), 1.697056, 1e-6);

    spec.kind = ScenarioKind::Eigengap;
    spec.epsilon = 1.8;
    EXPECT_DEPFID_ERROR(cmd_synth(spec, dir / "r3.csv", dir / "s3.csv", out1), ErrorKind::NotPositiveDefinite);
    fs::remove_all(dir);
}

TEST(Commands, SweepRows) {
    const fs::path dir = scratch_dir();
    EXPECT_EQ(cmd_sweep(parse_grid("0:1.4:0.1"), 100000, 42, dir / "sweep.csv"), 0);
    const auto rows = read_csv_cells(dir / "sweep.csv");
    ASSERT_EQ(rows.size(), 16u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"epsilon", "d_sigma", "dk_bound", "vacuous",
                                                 "exact_sin_theta", "sample_sin_theta"}));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double eps = std::stod(rows[i][0]);
        const double bound = std::stod(rows[i][2]);
        const double exact = std::stod(rows[i][4]);
        const double sample = std::stod(rows[i][5]);
        EXPECT_LE(exact, bound + 1e-15) << eps;
        EXPECT_NEAR(sample, exact, 0.02) << eps;
        EXPECT_NEAR(exact, eigengap_exact_sin_theta(eps), 1e-12);
    }
    EXPECT_EQ(std::stod(rows[1][1]), 0.0);
    EXPECT_EQ(std::stod(rows[1][2]), 0.0);
    EXPECT_EQ(std::stod(rows[1][4]), 0.0);
    EXPECT_LT(std::abs(std::stod(rows[1][5])), 0.02);
    EXPECT_EQ(rows[1][3], "false");
    // √2ε crosses one between ε = 0.7 and ε = 0.8
    EXPECT_EQ(rows[8][3], "false");
    EXPECT_EQ(rows[9][3], "true");
    fs::remove_all(dir);
}

TEST(Commands, TailRows) {
    const fs::path dir = scratch_dir();
    EXPECT_EQ(cmd_tail(0.5, 3.0, parse_grid("-10:3:0.5"), 100000, 42, dir / "t1.csv"), 0);
    EXPECT_EQ(cmd_tail(0.5, 3.0, parse_grid("-10:3:0.5"), 100000, 42, dir / "t2.csv"), 0);
    EXPECT_EQ(read_file(dir / "t1.csv"), read_file(dir / "t2.csv"));
    const auto rows = read_csv_cells(dir / "t1.csv");
    EXPECT_EQ(rows[0], (std::vector<std::string>{"u", "p_gaussian", "p_tcopula", "ratio"}));
    EXPECT_EQ(std::stod(rows[1][1]), 1.0);
    EXPECT_EQ(std::stod(rows[1][2]), 1.0);
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (std::stod(rows[i][0]) >= 1.5) EXPECT_GT(std::stod(rows[i][2]), std::stod(rows[i][1]));
    EXPECT_DEPFID_ERROR(cmd_tail(0.5, 2.0, parse_grid("0:1:1"), 100, 1, dir / "t3.csv"),
                        ErrorKind::InvalidArgument);
    fs::remove_all(dir);
}
