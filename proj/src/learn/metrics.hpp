#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace proxsim::learn {

/// Scenario-level stratified split: no group id appears on both sides.
struct SplitResult {
    std::vector<size_t> train_idx;
    std::vector<size_t> test_idx;
    size_t n_train_groups = 0;
    size_t n_test_groups = 0;
};

SplitResult grouped_split(std::span<const int32_t> groups, std::span<const int8_t> labels,
                          double test_fraction, uint64_t seed);

struct RocPoint {
    double threshold;
    double fpr;
    double tpr;
};

struct ClassMetrics {
    std::string name;
    int64_t support = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double auroc = 0.0;
    bool degenerate = false;  // some denominator was zero and got reported as 0
    std::vector<RocPoint> roc;
};

struct MetricsReport {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double macro_auroc = 0.0;
    std::vector<std::vector<int64_t>> confusion;  // rows = true class
    std::vector<ClassMetrics> per_class;
    // Secondary: one majority-vote prediction per scenario.
    double scenario_accuracy = 0.0;
    double scenario_macro_f1 = 0.0;
};

/// One-vs-rest ROC by descending threshold sweep over the distinct scores,
/// trapezoidal area. Tied scores are grouped, which makes the area equal the
/// Mann-Whitney pairwise-concordance statistic.
std::vector<RocPoint> roc_points(std::span<const uint8_t> is_positive,
                                 std::span<const float> scores);
double auroc_from_points(const std::vector<RocPoint>& pts);

/// Full evaluation from true labels (indices into class_names) and per-row
/// probability vectors. Undefined precision/recall denominators report 0 and
/// set the degenerate flag. groups may be empty to skip scenario-level rollups.
MetricsReport evaluate(std::span<const int8_t> y_true, std::span<const float> probas,
                       const std::vector<std::string>& class_names,
                       std::span<const int32_t> groups = {});

nlohmann::json report_to_json(const MetricsReport& r);
void write_confusion_csv(const MetricsReport& r, const std::string& path);
void write_roc_csv(const MetricsReport& r, const std::string& path);

}  // namespace proxsim::learn
