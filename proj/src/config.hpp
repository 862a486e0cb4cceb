#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "orbital.hpp"
#include "rflink.hpp"

#include "json.hpp"

namespace proxsim {

/// Everything class-conditional: burn prior, jammer strength, burst process.
struct ClassParams {
    orbital::DvPrior dv;
    double jammer_eirp_dbw = 0.0;
    rflink::BurstParams burst;
};

struct ForestSettings {
    int n_trees = 200;
    int max_depth = 16;
    int min_samples_leaf = 5;
    int histogram_bins = 256;
};

struct FeatureSettings {
    int rolling_window = 3;
    int anomaly_window = 16;
    double anomaly_z = 3.0;
    std::vector<std::string> aggregate_columns = {"range_m", "range_rate_mps", "curvature",
                                                  "jerk", "boresight_rad"};
    bool interactions = true;
};

struct SweepSettings {
    int scenarios_per_cell = 12;
    std::vector<double> sigma_grid = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
    ForestSettings forest{100, 16, 5, 256};
};

/// Full run configuration. Parsed strictly: unknown keys are rejected so a
/// typo in a config file cannot silently fall back to defaults.
struct RunConfig {
    uint64_t master_seed = 42;
    int scenarios_per_cell = 400;
    double horizon_s = 8640.0;
    double dt_s = 10.0;
    double sigma = 1.0;           // estimation-noise scale baked into generated data
    double split_fraction = 0.3;  // held-out scenario fraction
    double gs_longitude_offset_deg = 5.0;
    double burn_window_lo = 0.1;  // burn time as horizon fraction
    double burn_window_hi = 0.8;
    bool save_model = true;

    orbital::RegimeBand leo{4.0e5, 2.0e6, 0.015, 1.0};
    orbital::RegimeBand meo{1.0e7, 2.0e7, 0.01, 0.9};
    orbital::GeoBand geo;

    std::array<ClassParams, 3> classes = {
        ClassParams{{0.0, 0.6, 0.0}, 48.0, {0.05, 0.8}},   // benign
        ClassParams{{0.6, 12.0, 1.0}, 68.0, {0.15, 0.6}},  // covert
        ClassParams{{1.0, 30.0, 3.0}, 88.0, {0.5, 0.15}},  // threatening
    };

    rflink::LinkConfig link;
    ForestSettings forest;
    FeatureSettings features;
    SweepSettings sweep;

    size_t samples_per_scenario() const;
    orbital::OrbitalElements target_elements() const;
    const ClassParams& params_for(BehaviorClass c) const {
        return classes[static_cast<size_t>(c)];
    }

    void validate() const;
    nlohmann::json to_json() const;
    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_file(const std::string& path);

    /// FNV-1a over the canonical JSON dump; embedded in every output manifest.
    uint64_t hash() const;
    std::string hash_hex() const;
};

}  // namespace proxsim
