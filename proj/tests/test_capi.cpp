#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <string>

#include "proxsim/proxsim.h"

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Session {
    proxsim_session* s = nullptr;
    ~Session() { proxsim_session_destroy(s); }
};

struct Out {
    char* p = nullptr;
    ~Out() { proxsim_string_free(p); }
};

// Small forest and one scenario per cell keep this fast.
const char* kTinyConfig = R"({
  "scenarios_per_cell": 1,
  "forest": {"n_trees": 8, "max_depth": 6, "min_samples_leaf": 5, "histogram_bins": 64},
  "split_fraction": 0.34
})";

}  // namespace

TEST_CASE("version string is present") {
    CHECK(std::string(proxsim_version()).find("proxsim") != std::string::npos);
}

TEST_CASE("session creation accepts defaults and rejects bad config") {
    Session ok;
    CHECK(proxsim_session_create(nullptr, &ok.s) == PROXSIM_OK);
    CHECK(ok.s != nullptr);

    proxsim_session* bad = nullptr;
    CHECK(proxsim_session_create("{\"bogus_key\": 1}", &bad) == PROXSIM_ERR_CONFIG);
    CHECK(bad == nullptr);
    CHECK(proxsim_session_create("not json", &bad) == PROXSIM_ERR_CONFIG);
    CHECK(proxsim_session_create_from_file("/nonexistent/cfg.json", &bad) == PROXSIM_ERR_IO);
}

TEST_CASE("config hash changes with the seed override") {
    Session s;
    REQUIRE(proxsim_session_create(nullptr, &s.s) == PROXSIM_OK);
    const uint64_t h0 = proxsim_session_config_hash(s.s);
    REQUIRE(proxsim_session_set_seed(s.s, 123456) == PROXSIM_OK);
    CHECK(proxsim_session_config_hash(s.s) != h0);

    Out j;
    REQUIRE(proxsim_session_config_json(s.s, &j.p) == PROXSIM_OK);
    const auto parsed = nlohmann::json::parse(j.p);
    CHECK(parsed.at("master_seed").get<uint64_t>() == 123456);
}

TEST_CASE("generate then train-eval through the C surface") {
    TempDir data("proxsim_capi_data");
    TempDir out("proxsim_capi_out");
    Session s;
    REQUIRE(proxsim_session_create(kTinyConfig, &s.s) == PROXSIM_OK);

    SUBCASE("scenarios_per_cell override validation") {
        CHECK(proxsim_session_set_scenarios_per_cell(s.s, 0) == PROXSIM_ERR_CONFIG);
        CHECK(std::string(proxsim_session_last_error(s.s)).size() > 0);
        CHECK(proxsim_session_set_scenarios_per_cell(s.s, 1) == PROXSIM_OK);
    }

    Out summary;
    REQUIRE(proxsim_generate(s.s, data.path.c_str(), &summary.p) == PROXSIM_OK);
    const auto sj = nlohmann::json::parse(summary.p);
    CHECK(sj.at("n_scenarios").get<int>() == 9);
    CHECK(sj.at("n_rows").get<int>() == 9 * 864);
    CHECK(sj.at("duty_cycle").contains("threatening"));
    CHECK(fs::exists(data.path / "manifest.json"));

    Out feat;
    REQUIRE(proxsim_build_features(s.s, data.path.c_str(), "rf", out.path.c_str(), &feat.p) ==
            PROXSIM_OK);
    CHECK(fs::exists(out.path / "features_rf.csv"));

    Out metrics;
    REQUIRE(proxsim_train_eval(s.s, data.path.c_str(), "fused", out.path.c_str(), &metrics.p) ==
            PROXSIM_OK);
    const auto mj = nlohmann::json::parse(metrics.p);
    CHECK(mj.at("view") == "fused");
    CHECK(mj.at("per_class").contains("covert"));
    CHECK(mj.at("accuracy").get<double>() >= 0.0);
    CHECK(fs::exists(out.path / "metrics_fused.json"));
    CHECK(fs::exists(out.path / "confusion_fused.csv"));
    CHECK(fs::exists(out.path / "roc_fused.csv"));
    CHECK(fs::exists(out.path / "model_fused.json"));

    Out report;
    REQUIRE(proxsim_report(s.s, out.path.c_str(), &report.p) == PROXSIM_OK);
    CHECK(std::string(report.p).find("FUSED") != std::string::npos);

    // Bad view name is a config-class error with a message.
    Out none;
    CHECK(proxsim_train_eval(s.s, data.path.c_str(), "bogus", out.path.c_str(), &none.p) ==
          PROXSIM_ERR_CONFIG);
    CHECK(std::string(proxsim_session_last_error(s.s)).find("view") != std::string::npos);
}

TEST_CASE("noise sweep through the C surface") {
    TempDir out("proxsim_capi_sweep");
    Session s;
    REQUIRE(proxsim_session_create(R"({
        "scenarios_per_cell": 1,
        "sweep": {"scenarios_per_cell": 1,
                  "forest": {"n_trees": 6, "max_depth": 6, "min_samples_leaf": 5,
                             "histogram_bins": 64}}
    })", &s.s) == PROXSIM_OK);
    const double grid[2] = {0.0, 1.0};
    Out csv;
    REQUIRE(proxsim_noise_sweep(s.s, out.path.c_str(), grid, 2, &csv.p) == PROXSIM_OK);
    const std::string text(csv.p);
    CHECK(text.find("sigma,inv_sigma_sq,accuracy,precision,recall,f1") == 0);
    CHECK(text.find("0,inf,") != std::string::npos);
    CHECK(fs::exists(out.path / "sweep.csv"));

    const double bad[1] = {-1.0};
    Out none;
    CHECK(proxsim_noise_sweep(s.s, out.path.c_str(), bad, 1, &none.p) == PROXSIM_ERR_CONFIG);
}
