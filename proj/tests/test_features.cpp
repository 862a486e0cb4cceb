#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <vector>

#include "config.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "features.hpp"
#include "scenario.hpp"

using namespace proxsim;
using namespace proxsim::features;
namespace fs = std::filesystem;

TEST_CASE("rolling stats on the documented example") {
    const std::vector<double> x = {1, 2, 3};
    const RollingStats rs = rolling_stats(x);
    CHECK(rs.std_dev[1] == doctest::Approx(1.0));
    CHECK(rs.gradient[1] == doctest::Approx(1.0));
}

TEST_CASE("rolling stats of a constant series vanish") {
    const std::vector<double> x(40, 7.5);
    const RollingStats rs = rolling_stats(x);
    for (double v : rs.std_dev) CHECK(v == doctest::Approx(0.0));
    for (double v : rs.gradient) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("rolling std is invariant under a constant offset") {
    Rng rng(11);
    std::vector<double> x(200);
    for (double& v : x) v = rng.uniform(-5.0, 5.0);
    std::vector<double> y = x;
    for (double& v : y) v += 1234.5;
    const RollingStats rx = rolling_stats(x);
    const RollingStats ry = rolling_stats(y);
    for (size_t i = 0; i < x.size(); ++i)
        CHECK(rx.std_dev[i] == doctest::Approx(ry.std_dev[i]).epsilon(1e-9));
}

TEST_CASE("rolling stats reject series shorter than the window") {
    const std::vector<double> x = {1.0, 2.0};
    CHECK_THROWS_AS(rolling_stats(x), Error);
}

TEST_CASE("anomaly flags: constant series never flags") {
    const std::vector<double> x(500, 3.0);
    for (uint8_t f : anomaly_flags(x)) CHECK(f == 0);
}

TEST_CASE("anomaly flags: a 10-sigma spike in white noise is flagged") {
    Rng rng(23);
    std::vector<double> x(400);
    for (double& v : x) v = rng.gauss();
    x[200] += 10.0;
    const std::vector<uint8_t> flags = anomaly_flags(x);
    CHECK(flags[200] == 1);
}

TEST_CASE("anomaly flag rate on pure Gaussian noise matches the tail probability") {
    Rng rng(29);
    const size_t n = 100'000;
    std::vector<double> x(n);
    for (double& v : x) v = rng.gauss();
    // Wide window so the window statistics approach the true moments and the
    // flag statistic approaches an exact z-test.
    const std::vector<uint8_t> flags = anomaly_flags(x, 500, 3.0);
    double rate = 0.0;
    for (uint8_t f : flags) rate += f;
    rate /= static_cast<double>(n);
    CHECK(rate == doctest::Approx(0.0027).epsilon(0.75));  // 0.27% +/- 0.2 pp
    CHECK(std::fabs(rate - 0.0027) < 0.002);
}

TEST_CASE("anomaly window must be at least 3") {
    const std::vector<double> x(10, 1.0);
    CHECK_THROWS_AS(anomaly_flags(x, 2, 3.0), Error);
}

TEST_CASE("scenario aggregates on the documented examples") {
    const std::vector<double> x = {0, 1, 2, 3};
    const Aggregates a = scenario_aggregates(x);
    CHECK(a.min == 0.0);
    CHECK(a.max == 3.0);
    CHECK(a.mean == doctest::Approx(1.5));
    CHECK(a.slope == doctest::Approx(1.0));

    const std::vector<double> c(16, 4.0);
    CHECK(scenario_aggregates(c).slope == doctest::Approx(0.0));

    const std::vector<double> rev = {3, 2, 1, 0};
    const Aggregates b = scenario_aggregates(rev);
    CHECK(b.slope == doctest::Approx(-1.0));
    CHECK(b.min == a.min);
    CHECK(b.max == a.max);
    CHECK(b.mean == a.mean);

    const std::vector<double> one = {1.0};
    CHECK_THROWS_AS(scenario_aggregates(one), Error);
}

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunConfig tiny_config() {
    RunConfig cfg;
    cfg.scenarios_per_cell = 1;
    return cfg;
}

}  // namespace

TEST_CASE("feature views: schema, counts, privileged columns stripped") {
    const RunConfig cfg = tiny_config();
    std::vector<scenario::ScenarioRecord> records;
    uint32_t id = 0;
    for (int ci = 0; ci < 3; ++ci)
        for (int ri = 0; ri < 3; ++ri)
            records.push_back(scenario::generate_scenario(cfg, static_cast<BehaviorClass>(ci),
                                                          static_cast<Regime>(ri), id++));

    const FeatureMatrix rf = build_feature_matrix(records, FeatureView::RfOnly, cfg);
    const FeatureMatrix kin = build_feature_matrix(records, FeatureView::KinOnly, cfg);
    const FeatureMatrix fused = build_feature_matrix(records, FeatureView::Fused, cfg);

    CHECK(rf.n_rows == 9u * 864u);
    CHECK(kin.n_rows == rf.n_rows);
    CHECK(fused.n_rows == rf.n_rows);

    // Count identity: FUSED = RF + KIN + 3 interactions, no shared columns.
    CHECK(fused.n_cols == rf.n_cols + kin.n_cols + 3);

    // Base-column disjointness between the single-domain views.
    std::set<std::string> rf_cols(rf.columns.begin(), rf.columns.end());
    for (const std::string& c : kin.columns) CHECK(rf_cols.count(c) == 0);
    // Containment: FUSED holds both views.
    std::set<std::string> fused_cols(fused.columns.begin(), fused.columns.end());
    for (const std::string& c : rf.columns) CHECK(fused_cols.count(c) == 1);
    for (const std::string& c : kin.columns) CHECK(fused_cols.count(c) == 1);

    // Kinematic base absent from the RF view; privileged columns absent everywhere.
    for (const FeatureMatrix* m : {&rf, &kin, &fused}) {
        for (const std::string& c : m->columns) {
            CHECK(c.find("sjnr") == std::string::npos);
            CHECK(c != "jam_state");
        }
    }
    CHECK(rf_cols.count("range_m") == 0);
    CHECK(rf_cols.count("rssi_dbm") == 1);

    // Groups: exactly one distinct id per scenario.
    std::set<int32_t> ids(fused.groups.begin(), fused.groups.end());
    CHECK(ids.size() == 9);

    // Labels are scenario-constant.
    for (size_t r = 1; r < fused.n_rows; ++r)
        if (fused.groups[r] == fused.groups[r - 1]) CHECK(fused.labels[r] == fused.labels[r - 1]);
}

TEST_CASE("feature matrices contain no NaN and match between disk and memory paths") {
    TempDir dir("proxsim_test_feat");
    const RunConfig cfg = tiny_config();
    scenario::generate_dataset(cfg, dir.path.string());

    std::vector<scenario::ScenarioRecord> records;
    uint32_t id = 0;
    for (int ci = 0; ci < 3; ++ci)
        for (int ri = 0; ri < 3; ++ri)
            records.push_back(scenario::generate_scenario(cfg, static_cast<BehaviorClass>(ci),
                                                          static_cast<Regime>(ri), id++));

    const FeatureMatrix from_disk = build_feature_matrix(dir.path.string(), FeatureView::Fused, cfg);
    const FeatureMatrix from_mem = build_feature_matrix(records, FeatureView::Fused, cfg);

    REQUIRE(from_disk.n_rows == from_mem.n_rows);
    REQUIRE(from_disk.n_cols == from_mem.n_cols);
    CHECK(from_disk.columns == from_mem.columns);
    for (size_t i = 0; i < from_disk.x.size(); ++i) {
        CHECK(std::isfinite(from_disk.x[i]));
        // CSV round-trips doubles exactly (shortest round-trip formatting),
        // so the two paths agree bit-for-bit after the float cast.
        CHECK(from_disk.x[i] == from_mem.x[i]);
    }
    CHECK(from_disk.imputed_values == 0);
}

TEST_CASE("schema version mismatch is rejected") {
    TempDir dir("proxsim_test_schema");
    const RunConfig cfg = tiny_config();
    scenario::generate_dataset(cfg, dir.path.string());
    // Corrupt the schema tag.
    nlohmann::json manifest;
    {
        std::ifstream in(dir.path / "manifest.json");
        in >> manifest;
    }
    manifest["schema_version"] = "proxsim-v0";
    {
        std::ofstream out(dir.path / "manifest.json");
        out << manifest.dump();
    }
    CHECK_THROWS_AS(build_feature_matrix(dir.path.string(), FeatureView::Fused, cfg), Error);
}

TEST_CASE("persisted features carry a column manifest") {
    TempDir dir("proxsim_test_persist");
    const RunConfig cfg = tiny_config();
    std::vector<scenario::ScenarioRecord> records = {
        scenario::generate_scenario(cfg, BehaviorClass::Covert, Regime::Geo, 0),
        scenario::generate_scenario(cfg, BehaviorClass::Benign, Regime::Leo, 1)};
    const FeatureMatrix m = build_feature_matrix(records, FeatureView::RfOnly, cfg);
    persist(m, dir.path.string(), FeatureView::RfOnly, cfg);
    CHECK(fs::exists(dir.path / "features_rf.csv"));
    nlohmann::json j;
    std::ifstream in(dir.path / "features_rf.columns.json");
    in >> j;
    CHECK(j.at("schema_version") == kFeatureSchema);
    CHECK(j.at("view") == "rf");
    CHECK(j.at("columns").size() == m.n_cols);
    CHECK(j.at("n_rows").get<size_t>() == m.n_rows);
}
