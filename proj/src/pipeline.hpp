#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "features.hpp"
#include "learn/forest.hpp"
#include "learn/metrics.hpp"

#include "json.hpp"

namespace proxsim::pipeline {

/// Dataset generation to out_dir; returns the stdout summary
/// (row counts per cell, measured duty cycles, config hash).
nlohmann::json run_generate(const RunConfig& cfg, const std::string& out_dir);

/// Builds and persists the feature matrix of one view from a dataset directory.
nlohmann::json run_features(const RunConfig& cfg, const std::string& data_dir,
                            features::FeatureView view, const std::string& out_dir);

/// Grouped split, training, evaluation; writes metrics_<view>.json,
/// confusion_<view>.csv, roc_<view>.csv and (optionally) model_<view>.json.
nlohmann::json run_train_eval(const RunConfig& cfg, const std::string& data_dir,
                              features::FeatureView view, const std::string& out_dir);

struct SweepRow {
    double sigma = 0.0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Receiver-noise sensitivity sweep: per sigma, regenerate data with
/// power_jitter_db forced to 0, build fused features, train a binary
/// per-timestep jammer-activity detector (ground-truth jam state used as the
/// label only) and record its test metrics. Writes sweep.csv keyed by sigma
/// and 1/sigma^2 (sigma = 0 keyed "inf").
std::vector<SweepRow> run_noise_sweep(const RunConfig& cfg, const std::string& out_dir,
                                      const std::vector<double>& sigma_grid);

std::string sweep_to_csv(const std::vector<SweepRow>& rows);

/// Human-readable summary of the metrics files found in a directory.
std::string run_report(const std::string& in_dir);

/// Row subset of a feature matrix (keeps columns).
features::FeatureMatrix subset(const features::FeatureMatrix& m,
                               const std::vector<size_t>& idx);

}  // namespace proxsim::pipeline
