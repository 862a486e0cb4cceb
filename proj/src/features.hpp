#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "config.hpp"
#include "scenario.hpp"

namespace proxsim::features {

inline constexpr const char* kFeatureSchema = "proxsim-features-v1";

enum class FeatureView { RfOnly = 0, KinOnly = 1, Fused = 2 };

const char* to_string(FeatureView v);
FeatureView view_from_string(const std::string& s);

/// Per-timestep design matrix with scenario grouping. Rows carry the
/// scenario-level class label; groups carry the scenario id.
struct FeatureMatrix {
    size_t n_rows = 0;
    size_t n_cols = 0;
    std::vector<float> x;  // row-major
    std::vector<std::string> columns;
    std::vector<int8_t> labels;
    std::vector<int32_t> groups;
    std::vector<uint8_t> jam_state;  // ground truth, label-only use (noise sweep)
    size_t imputed_values = 0;

    float at(size_t r, size_t c) const { return x[r * n_cols + c]; }
};

struct RollingStats {
    std::vector<double> std_dev;
    std::vector<double> gradient;
};

/// Centered 3-point window: sample standard deviation (n-1 denominator) and
/// central-difference gradient per unit step; windows shrink at the edges.
RollingStats rolling_stats(std::span<const double> series, int window = 3);

/// Trailing z-score flags: flag[i] is set when x[i] deviates from the mean of
/// the preceding `window` samples by more than z standard deviations
/// (std floored at 1e-9). The current sample is excluded from its own window;
/// the first rows with fewer than 3 preceding samples never flag.
std::vector<uint8_t> anomaly_flags(std::span<const double> series, int window = 16,
                                   double z = 3.0);

struct Aggregates {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double slope = 0.0;  // OLS slope against the sample index
};

Aggregates scenario_aggregates(std::span<const double> series);

/// Column names of a view (base + derived), in matrix order.
std::vector<std::string> view_columns(FeatureView view, const FeatureSettings& fs);

/// Assembles the per-timestep matrix for a view from dataset shards written by
/// scenario::generate_dataset. Fails on manifest schema mismatch.
FeatureMatrix build_feature_matrix(const std::string& data_dir, FeatureView view,
                                   const RunConfig& cfg);

/// Same, from in-memory records (noise sweep path).
FeatureMatrix build_feature_matrix(std::span<const scenario::ScenarioRecord> records,
                                   FeatureView view, const RunConfig& cfg);

/// Writes features_<view>.csv and features_<view>.columns.json.
void persist(const FeatureMatrix& m, const std::string& out_dir, FeatureView view,
             const RunConfig& cfg);

}  // namespace proxsim::features
