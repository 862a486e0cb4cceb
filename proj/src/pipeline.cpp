#include "pipeline.hpp"

#include <cinttypes>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "scenario.hpp"

namespace proxsim::pipeline {

namespace {

namespace fs = std::filesystem;
using features::FeatureMatrix;
using features::FeatureView;

const std::vector<std::string>& class_names() {
    static const std::vector<std::string> names = {"benign", "covert", "threatening"};
    return names;
}

/// Probabilities expanded to the full class list, zero for classes the model
/// never saw (degenerate training sets).
std::vector<float> expand_probas(const learn::ForestModel& model, const std::vector<float>& probs,
                                 size_t n_rows, size_t n_classes) {
    if (model.classes().size() == n_classes) return probs;
    std::vector<float> out(n_rows * n_classes, 0.0f);
    for (size_t r = 0; r < n_rows; ++r)
        for (size_t c = 0; c < model.classes().size(); ++c)
            out[r * n_classes + static_cast<size_t>(model.classes()[c])] =
                probs[r * model.classes().size() + c];
    return out;
}

}  // namespace

features::FeatureMatrix subset(const FeatureMatrix& m, const std::vector<size_t>& idx) {
    FeatureMatrix out;
    out.columns = m.columns;
    out.n_cols = m.n_cols;
    out.n_rows = idx.size();
    out.x.resize(out.n_rows * out.n_cols);
    out.labels.resize(out.n_rows);
    out.groups.resize(out.n_rows);
    out.jam_state.resize(m.jam_state.empty() ? 0 : out.n_rows);
    for (size_t i = 0; i < idx.size(); ++i) {
        const size_t r = idx[i];
        std::copy_n(m.x.begin() + static_cast<long>(r * m.n_cols), m.n_cols,
                    out.x.begin() + static_cast<long>(i * m.n_cols));
        out.labels[i] = m.labels[r];
        out.groups[i] = m.groups[r];
        if (!m.jam_state.empty()) out.jam_state[i] = m.jam_state[r];
    }
    return out;
}

nlohmann::json run_generate(const RunConfig& cfg, const std::string& out_dir) {
    const scenario::DatasetSummary summary = scenario::generate_dataset(cfg, out_dir);
    return scenario::summary_to_json(summary);
}

nlohmann::json run_features(const RunConfig& cfg, const std::string& data_dir,
                            FeatureView view, const std::string& out_dir) {
    const FeatureMatrix m = features::build_feature_matrix(data_dir, view, cfg);
    features::persist(m, out_dir, view, cfg);
    nlohmann::json j;
    j["view"] = features::to_string(view);
    j["n_rows"] = m.n_rows;
    j["n_cols"] = m.n_cols;
    j["imputed_values"] = m.imputed_values;
    j["config_hash"] = cfg.hash_hex();
    return j;
}

nlohmann::json run_train_eval(const RunConfig& cfg, const std::string& data_dir,
                              FeatureView view, const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw_io("cannot create output directory: " + out_dir);

    const FeatureMatrix m = features::build_feature_matrix(data_dir, view, cfg);
    const learn::SplitResult split =
        learn::grouped_split(m.groups, m.labels, cfg.split_fraction,
                             derive_seed(cfg.master_seed, 0x5917, 0));
    const FeatureMatrix train = subset(m, split.train_idx);
    const FeatureMatrix test = subset(m, split.test_idx);

    const uint64_t forest_seed =
        derive_seed(cfg.master_seed, 0xf05e57, static_cast<uint64_t>(view));
    const learn::ForestModel model =
        learn::train_forest(train, learn::ForestParams::from_settings(cfg.forest, forest_seed));

    const std::vector<float> probs_raw = model.predict_proba(test);
    const std::vector<float> probs =
        expand_probas(model, probs_raw, test.n_rows, class_names().size());
    const learn::MetricsReport report =
        learn::evaluate(test.labels, probs, class_names(), test.groups);

    const std::string vname = features::to_string(view);
    nlohmann::json j = learn::report_to_json(report);
    j["schema_version"] = "proxsim-metrics-v1";
    j["view"] = vname;
    j["config_hash"] = cfg.hash_hex();
    j["n_train_rows"] = train.n_rows;
    j["n_test_rows"] = test.n_rows;
    j["n_train_scenarios"] = split.n_train_groups;
    j["n_test_scenarios"] = split.n_test_groups;
    j["forest"] = {{"n_trees", cfg.forest.n_trees},
                   {"max_depth", cfg.forest.max_depth},
                   {"min_samples_leaf", cfg.forest.min_samples_leaf},
                   {"seed", forest_seed}};

    {
        std::ofstream out(fs::path(out_dir) / ("metrics_" + vname + ".json"), std::ios::binary);
        if (!out) throw_io("cannot write metrics json");
        out << j.dump(2) << "\n";
    }
    learn::write_confusion_csv(report, (fs::path(out_dir) / ("confusion_" + vname + ".csv")).string());
    learn::write_roc_csv(report, (fs::path(out_dir) / ("roc_" + vname + ".csv")).string());
    if (cfg.save_model) model.save((fs::path(out_dir) / ("model_" + vname + ".json")).string());
    return j;
}

std::vector<SweepRow> run_noise_sweep(const RunConfig& cfg, const std::string& out_dir,
                                      const std::vector<double>& sigma_grid) {
    require(!sigma_grid.empty(), ErrorKind::Config, "noise sweep: empty sigma grid");
    for (double s : sigma_grid)
        require(s >= 0.0, ErrorKind::Config, "noise sweep: sigma values must be >= 0");

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw_io("cannot create output directory: " + out_dir);

    RunConfig base = cfg;
    base.link.power_jitter_db = 0.0;  // isolate receiver-side estimation error
    base.scenarios_per_cell = cfg.sweep.scenarios_per_cell;

    std::vector<SweepRow> rows;
    for (size_t gi = 0; gi < sigma_grid.size(); ++gi) {
        RunConfig run = base;
        run.sigma = sigma_grid[gi];
        run.validate();

        // In-memory generation; per-scenario streams keep this identical to
        // the on-disk path for the same ids.
        std::vector<scenario::ScenarioRecord> records;
        uint32_t scenario_id = 0;
        for (int ci = 0; ci < 3; ++ci)
            for (int ri = 0; ri < 3; ++ri)
                for (int s = 0; s < run.scenarios_per_cell; ++s, ++scenario_id)
                    records.push_back(scenario::generate_scenario(
                        run, static_cast<BehaviorClass>(ci), static_cast<Regime>(ri), scenario_id));

        FeatureMatrix m = features::build_feature_matrix(records, FeatureView::Fused, run);
        // Scenario-stratified split on the class labels, then relabel rows with
        // the ground-truth jammer state for the binary detection task.
        const learn::SplitResult split = learn::grouped_split(
            m.groups, m.labels, run.split_fraction, derive_seed(run.master_seed, 0x5917, 1));
        for (size_t i = 0; i < m.n_rows; ++i) m.labels[i] = static_cast<int8_t>(m.jam_state[i]);

        FeatureMatrix train = subset(m, split.train_idx);
        FeatureMatrix test = subset(m, split.test_idx);
        const uint64_t seed = derive_seed(run.master_seed, 0x53eeb, gi);
        const learn::ForestModel model =
            learn::train_forest(train, learn::ForestParams::from_settings(run.sweep.forest, seed));

        const std::vector<float> probs_raw = model.predict_proba(test);
        const std::vector<float> probs = expand_probas(model, probs_raw, test.n_rows, 2);
        const learn::MetricsReport rep = learn::evaluate(test.labels, probs, {"off", "on"});

        SweepRow row;
        row.sigma = run.sigma;
        row.accuracy = rep.accuracy;
        row.precision = rep.per_class[1].precision;
        row.recall = rep.per_class[1].recall;
        row.f1 = rep.per_class[1].f1;
        rows.push_back(row);
    }

    std::ofstream out(fs::path(out_dir) / "sweep.csv", std::ios::binary);
    if (!out) throw_io("cannot write sweep.csv");
    out << sweep_to_csv(rows);
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string s = "sigma,inv_sigma_sq,accuracy,precision,recall,f1\n";
    char buf[256];
    for (const SweepRow& r : rows) {
        if (r.sigma == 0.0) {
            std::snprintf(buf, sizeof(buf), "0,inf,%.6f,%.6f,%.6f,%.6f\n", r.accuracy,
                          r.precision, r.recall, r.f1);
        } else {
            std::snprintf(buf, sizeof(buf), "%g,%g,%.6f,%.6f,%.6f,%.6f\n", r.sigma,
                          1.0 / (r.sigma * r.sigma), r.accuracy, r.precision, r.recall, r.f1);
        }
        s += buf;
    }
    return s;
}

std::string run_report(const std::string& in_dir) {
    std::string text;
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%-8s %-10s %-10s %-10s\n", "Model", "Accuracy", "MacroF1",
                  "AUROC");
    text += buf;
    bool any = false;
    for (const char* view : {"rf", "kin", "fused"}) {
        const fs::path p = fs::path(in_dir) / (std::string("metrics_") + view + ".json");
        std::ifstream in(p);
        if (!in) continue;
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw_io("cannot parse " + p.string() + ": " + e.what());
        }
        std::string uc = view;
        for (char& c : uc) c = static_cast<char>(std::toupper(c));
        std::snprintf(buf, sizeof(buf), "%-8s %-10.4f %-10.4f %-10.4f\n", uc.c_str(),
                      j.at("accuracy").get<double>(), j.at("macro_f1").get<double>(),
                      j.at("macro_auroc").get<double>());
        text += buf;
        any = true;
    }
    if (any) {
        text += "\nPer-class F1 (row-level):\n";
        for (const char* view : {"rf", "kin", "fused"}) {
            const fs::path p = fs::path(in_dir) / (std::string("metrics_") + view + ".json");
            std::ifstream in(p);
            if (!in) continue;
            nlohmann::json j;
            in >> j;
            std::snprintf(buf, sizeof(buf), "  %-6s", view);
            text += buf;
            for (const char* cls : {"benign", "covert", "threatening"}) {
                std::snprintf(buf, sizeof(buf), " %s=%.4f", cls,
                              j.at("per_class").at(cls).at("f1").get<double>());
                text += buf;
            }
            text += "\n";
        }
    }
    const fs::path sweep_path = fs::path(in_dir) / "sweep.csv";
    if (fs::exists(sweep_path)) {
        std::ifstream in(sweep_path);
        text += "\nNoise sweep (sweep.csv):\n";
        std::string line;
        while (std::getline(in, line)) text += "  " + line + "\n";
    }
    if (!any) text += "  (no metrics_*.json found in " + in_dir + ")\n";
    return text;
}

}  // namespace proxsim::pipeline
