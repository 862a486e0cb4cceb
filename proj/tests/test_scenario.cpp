#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "core/error.hpp"
#include "scenario.hpp"

using namespace proxsim;
using namespace proxsim::scenario;
namespace fs = std::filesystem;

namespace {

RunConfig small_config() {
    RunConfig cfg;
    cfg.scenarios_per_cell = 2;
    return cfg;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("a scenario has exactly horizon/dt aligned rows on the time grid") {
    const RunConfig cfg = small_config();
    const ScenarioRecord rec =
        generate_scenario(cfg, BehaviorClass::Covert, Regime::Leo, 123);
    CHECK(rec.kin.size() == 864);
    CHECK(rec.rf.size() == 864);
    for (size_t i = 0; i < rec.kin.size(); ++i) {
        CHECK(rec.kin[i].t == doctest::Approx(10.0 * static_cast<double>(i)));
        CHECK(rec.rf[i].t == rec.kin[i].t);
    }
}

TEST_CASE("same seed and id produce identical records") {
    const RunConfig cfg = small_config();
    const ScenarioRecord a = generate_scenario(cfg, BehaviorClass::Benign, Regime::Meo, 9);
    const ScenarioRecord b = generate_scenario(cfg, BehaviorClass::Benign, Regime::Meo, 9);
    REQUIRE(a.kin.size() == b.kin.size());
    for (size_t i = 0; i < a.kin.size(); ++i) {
        CHECK(a.kin[i].range == b.kin[i].range);
        CHECK(a.kin[i].jerk == b.kin[i].jerk);
        CHECK(a.rf[i].rssi_dbm == b.rf[i].rssi_dbm);
        CHECK(a.rf[i].jam_state == b.rf[i].jam_state);
    }
    CHECK(a.maneuver.delta_v.x == b.maneuver.delta_v.x);
}

TEST_CASE("threatening scenarios carry the Table-consistent duty cycle") {
    const RunConfig cfg = small_config();
    // 864 samples of a bursty chain are noisy; average a few scenarios.
    double mean = 0.0;
    int rows = 0;
    for (uint32_t id = 50; id < 56; ++id) {
        const ScenarioRecord rec =
            generate_scenario(cfg, BehaviorClass::Threatening, Regime::Geo, id);
        for (const auto& m : rec.rf) mean += m.jam_state;
        rows += static_cast<int>(rec.rf.size());
    }
    mean /= rows;
    CHECK(std::fabs(mean - 0.769) < 0.10);
}

TEST_CASE("burn time lands inside the configured window and delta-v inside the prior") {
    const RunConfig cfg = small_config();
    for (uint32_t id = 0; id < 40; ++id) {
        const ScenarioRecord rec =
            generate_scenario(cfg, BehaviorClass::Threatening, Regime::Leo, id);
        CHECK(rec.maneuver.t_burn >= 0.1 * cfg.horizon_s);
        CHECK(rec.maneuver.t_burn <= 0.8 * cfg.horizon_s);
        const double dv = rec.maneuver.delta_v.norm();
        CHECK(dv >= cfg.params_for(BehaviorClass::Threatening).dv.dv_min);
        CHECK(dv <= cfg.params_for(BehaviorClass::Threatening).dv.dv_max);
    }
}

TEST_CASE("generated rows contain no NaN or infinity") {
    const RunConfig cfg = small_config();
    for (int ci = 0; ci < 3; ++ci) {
        for (int ri = 0; ri < 3; ++ri) {
            const ScenarioRecord rec = generate_scenario(
                cfg, static_cast<BehaviorClass>(ci), static_cast<Regime>(ri), 700 + ci * 3 + ri);
            for (size_t i = 0; i < rec.kin.size(); ++i) {
                const auto& k = rec.kin[i];
                const auto& m = rec.rf[i];
                for (double v : {k.range, k.range_rate, k.v_r, k.v_t, k.v_n, k.a_r, k.a_t, k.a_n,
                                 k.jerk, k.curvature, k.doppler_hz, k.doppler_rate_hzs,
                                 k.boresight_rad, k.t_to_tca, m.rssi_dbm, m.throughput_mbps,
                                 m.cn0_dbhz, m.jsr_db, m.cfo_noise_hz, m.sjnr_db})
                    CHECK(std::isfinite(v));
            }
        }
    }
}

TEST_CASE("dataset generation: balance, counts, manifest") {
    TempDir dir("proxsim_test_ds");
    const RunConfig cfg = small_config();
    const DatasetSummary s = generate_dataset(cfg, dir.path.string());
    CHECK(s.n_scenarios == 18);
    CHECK(s.n_rows == 18u * 864u);
    CHECK(s.cells.size() == 9);
    for (const CellSummary& c : s.cells) {
        CHECK(c.n_scenarios == 2);
        CHECK(c.n_rows == 2u * 864u);
        CHECK(fs::exists(dir.path / c.shard));
    }
    // Manifest sanity.
    nlohmann::json manifest;
    std::ifstream in(dir.path / "manifest.json");
    in >> manifest;
    CHECK(manifest.at("schema_version") == kDatasetSchema);
    CHECK(manifest.at("complete") == true);
    CHECK(manifest.at("n_rows").get<uint64_t>() == s.n_rows);
    CHECK(manifest.at("scenarios").size() == 18);
    CHECK(manifest.at("config_hash").get<std::string>() == cfg.hash_hex());
}

TEST_CASE("regeneration with the same config is byte-identical") {
    TempDir d1("proxsim_test_det1");
    TempDir d2("proxsim_test_det2");
    const RunConfig cfg = small_config();
    generate_dataset(cfg, d1.path.string());
    generate_dataset(cfg, d2.path.string());
    for (const auto& entry : fs::directory_iterator(d1.path)) {
        const fs::path other = d2.path / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
    }
}

TEST_CASE("different master seeds change the data") {
    RunConfig a = small_config();
    RunConfig b = small_config();
    b.master_seed = a.master_seed + 1;
    const ScenarioRecord ra = generate_scenario(a, BehaviorClass::Covert, Regime::Geo, 4);
    const ScenarioRecord rb = generate_scenario(b, BehaviorClass::Covert, Regime::Geo, 4);
    CHECK(ra.kin[100].range != rb.kin[100].range);
}

TEST_CASE("shard header matches the documented column order") {
    TempDir dir("proxsim_test_hdr");
    RunConfig cfg = small_config();
    cfg.scenarios_per_cell = 1;
    generate_dataset(cfg, dir.path.string());
    std::ifstream in(dir.path / "data_benign_leo.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "scenario_id,class,regime,t,range_m,range_rate_mps,v_r,v_t,v_n,a_r,a_t,a_n,jerk,"
          "curvature,doppler_hz,doppler_rate_hzs,boresight_rad,t_to_tca,visibility,rssi_dbm,"
          "throughput_mbps,cn0_dbhz,jsr_db,cfo_noise_hz,sjnr_db,jam_state");
}

TEST_CASE("strict config parsing rejects unknown keys") {
    CHECK_THROWS_AS(RunConfig::from_json_text("{\"master_sed\": 1}"), Error);
    CHECK_THROWS_AS(RunConfig::from_json_text("{\"link\": {\"bogus\": 2}}"), Error);
    CHECK_NOTHROW(RunConfig::from_json_text("{\"master_seed\": 1}"));
}

TEST_CASE("config round-trips through its canonical JSON") {
    RunConfig cfg;
    cfg.master_seed = 99;
    cfg.sigma = 0.5;
    cfg.classes[1].jammer_eirp_dbw = 61.5;
    const RunConfig back = RunConfig::from_json(cfg.to_json());
    CHECK(back.hash() == cfg.hash());
    CHECK(back.master_seed == 99);
    CHECK(back.classes[1].jammer_eirp_dbw == 61.5);
}

TEST_CASE("horizon must be an integer number of steps") {
    RunConfig cfg;
    cfg.horizon_s = 8645.0;  // not divisible by dt = 10
    CHECK_THROWS_AS(cfg.validate(), Error);
}
