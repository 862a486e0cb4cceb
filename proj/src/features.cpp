#include "features.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace proxsim::features {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string>& kin_base() {
    static const std::vector<std::string> cols = {
        "range_m", "range_rate_mps", "v_r", "v_t", "v_n", "a_r", "a_t", "a_n",
        "jerk", "curvature", "doppler_hz", "doppler_rate_hzs", "boresight_rad",
        "t_to_tca", "visibility"};
    return cols;
}

const std::vector<std::string>& rf_base() {
    static const std::vector<std::string> cols = {"rssi_dbm", "throughput_mbps", "cn0_dbhz",
                                                  "jsr_db", "cfo_noise_hz"};
    return cols;
}

const std::vector<std::string>& interaction_names() {
    static const std::vector<std::string> cols = {"ix_jsr_range_corr", "ix_boresight_rssi_grad",
                                                  "ix_rrate_thr_grad"};
    return cols;
}

/// Numeric columns of one scenario, keyed by shard column name.
struct ScenarioBlock {
    int32_t scenario_id = -1;
    int8_t label = 0;
    std::map<std::string, std::vector<double>> cols;
    std::vector<uint8_t> jam;
};

std::vector<std::string> base_columns(FeatureView view) {
    std::vector<std::string> out;
    if (view != FeatureView::RfOnly)
        out.insert(out.end(), kin_base().begin(), kin_base().end());
    if (view != FeatureView::KinOnly)
        out.insert(out.end(), rf_base().begin(), rf_base().end());
    return out;
}

double ols_slope(std::span<const double> y) {
    const size_t n = y.size();
    const double mean_x = (static_cast<double>(n) - 1.0) / 2.0;
    double mean_y = 0.0;
    for (double v : y) mean_y += v;
    mean_y /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = static_cast<double>(i) - mean_x;
        num += dx * (y[i] - mean_y);
        den += dx * dx;
    }
    return den == 0.0 ? 0.0 : num / den;
}

/// Forward-fill then zero-fill non-finite values; returns the imputation count.
size_t impute(std::vector<double>& col) {
    size_t fixed = 0;
    double last = 0.0;
    bool have_last = false;
    for (double& v : col) {
        if (std::isfinite(v)) {
            last = v;
            have_last = true;
        } else {
            v = have_last ? last : 0.0;
            ++fixed;
        }
    }
    return fixed;
}

class MatrixBuilder {
public:
    MatrixBuilder(FeatureView view, const FeatureSettings& fs)
        : view_(view), fs_(fs), base_(base_columns(view)) {
        columns_ = view_columns(view, fs);
    }

    void add_scenario(ScenarioBlock& block, FeatureMatrix& m) {
        const size_t n = block.cols.begin()->second.size();
        for (auto& [name, col] : block.cols) m.imputed_values += impute(col);

        std::vector<std::vector<double>> out;
        out.reserve(columns_.size());

        std::map<std::string, std::vector<double>> grads;  // reused by interactions
        for (const std::string& name : base_) {
            const std::vector<double>& col = block.cols.at(name);
            out.push_back(col);
            RollingStats rs = rolling_stats(col, fs_.rolling_window);
            grads[name] = rs.gradient;
            out.push_back(std::move(rs.std_dev));
            out.push_back(std::move(rs.gradient));
        }
        if (view_ != FeatureView::KinOnly) {
            for (const std::string& name : rf_base()) {
                const std::vector<uint8_t> flags =
                    anomaly_flags(block.cols.at(name), fs_.anomaly_window, fs_.anomaly_z);
                std::vector<double> f(n);
                for (size_t i = 0; i < n; ++i) f[i] = flags[i];
                out.push_back(std::move(f));
            }
        }
        if (view_ != FeatureView::RfOnly) {
            for (const std::string& name : fs_.aggregate_columns) {
                const Aggregates a = scenario_aggregates(block.cols.at(name));
                out.push_back(std::vector<double>(n, a.min));
                out.push_back(std::vector<double>(n, a.max));
                out.push_back(std::vector<double>(n, a.mean));
                out.push_back(std::vector<double>(n, a.slope));
            }
        }
        if (view_ == FeatureView::Fused && fs_.interactions) {
            const auto& range = block.cols.at("range_m");
            const auto& jsr = block.cols.at("jsr_db");
            const auto& bore = block.cols.at("boresight_rad");
            const auto& rrate = block.cols.at("range_rate_mps");
            const auto& rssi_g = grads.at("rssi_dbm");
            const auto& thr_g = grads.at("throughput_mbps");
            std::vector<double> ix1(n), ix2(n), ix3(n);
            for (size_t i = 0; i < n; ++i) {
                // Path-corrected jammer strength: JSR re-inflated by the
                // spherical spreading term in the attacker range.
                ix1[i] = jsr[i] + 20.0 * std::log10(std::max(range[i], 1.0));
                ix2[i] = bore[i] * rssi_g[i];
                ix3[i] = rrate[i] * thr_g[i];
            }
            out.push_back(std::move(ix1));
            out.push_back(std::move(ix2));
            out.push_back(std::move(ix3));
        }

        require(out.size() == columns_.size(), ErrorKind::Internal,
                "feature column count mismatch");
        const size_t d = columns_.size();
        const size_t row0 = m.n_rows;
        m.x.resize((row0 + n) * d);
        for (size_t i = 0; i < n; ++i)
            for (size_t c = 0; c < d; ++c)
                m.x[(row0 + i) * d + c] = static_cast<float>(out[c][i]);
        m.labels.insert(m.labels.end(), n, block.label);
        m.groups.insert(m.groups.end(), n, block.scenario_id);
        m.jam_state.insert(m.jam_state.end(), block.jam.begin(), block.jam.end());
        m.n_rows += n;
        m.n_cols = d;
    }

    const std::vector<std::string>& columns() const { return columns_; }

private:
    FeatureView view_;
    FeatureSettings fs_;
    std::vector<std::string> base_;
    std::vector<std::string> columns_;
};

void warn_zero_variance(const FeatureMatrix& m) {
    if (m.n_rows == 0) return;
    std::string flat;
    for (size_t c = 0; c < m.n_cols; ++c) {
        const float v0 = m.at(0, c);
        bool constant = true;
        for (size_t r = 1; r < m.n_rows && constant; ++r) constant = m.at(r, c) == v0;
        if (constant) flat += (flat.empty() ? "" : ", ") + m.columns[c];
    }
    if (!flat.empty())
        std::fprintf(stderr, "warning: zero-variance feature column(s): %s\n", flat.c_str());
}

}  // namespace

const char* to_string(FeatureView v) {
    switch (v) {
        case FeatureView::RfOnly: return "rf";
        case FeatureView::KinOnly: return "kin";
        case FeatureView::Fused: return "fused";
    }
    return "?";
}

FeatureView view_from_string(const std::string& s) {
    if (s == "rf") return FeatureView::RfOnly;
    if (s == "kin") return FeatureView::KinOnly;
    if (s == "fused") return FeatureView::Fused;
    throw_invalid("unknown feature view: " + s + " (expected rf|kin|fused)");
}

RollingStats rolling_stats(std::span<const double> series, int window) {
    const size_t n = series.size();
    require(window == 3, ErrorKind::Invalid, "rolling_stats: window is fixed at 3");
    require(n >= static_cast<size_t>(window), ErrorKind::Invalid,
            "rolling_stats: series shorter than window");
    RollingStats out;
    out.std_dev.resize(n);
    out.gradient.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const size_t lo = i == 0 ? 0 : i - 1;
        const size_t hi = std::min(n - 1, i + 1);
        const size_t m = hi - lo + 1;
        double mean = 0.0;
        for (size_t k = lo; k <= hi; ++k) mean += series[k];
        mean /= static_cast<double>(m);
        double ss = 0.0;
        for (size_t k = lo; k <= hi; ++k) ss += (series[k] - mean) * (series[k] - mean);
        out.std_dev[i] = m > 1 ? std::sqrt(ss / static_cast<double>(m - 1)) : 0.0;
        out.gradient[i] = (series[hi] - series[lo]) / static_cast<double>(hi - lo == 0 ? 1 : hi - lo);
    }
    return out;
}

std::vector<uint8_t> anomaly_flags(std::span<const double> series, int window, double z) {
    require(window >= 3, ErrorKind::Invalid, "anomaly_flags: window must be >= 3");
    const size_t n = series.size();
    std::vector<uint8_t> flags(n, 0);
    for (size_t i = 0; i < n; ++i) {
        const size_t lo = i > static_cast<size_t>(window) ? i - static_cast<size_t>(window) : 0;
        const size_t m = i - lo;
        if (m < 3) continue;
        double mean = 0.0;
        for (size_t k = lo; k < i; ++k) mean += series[k];
        mean /= static_cast<double>(m);
        double ss = 0.0;
        for (size_t k = lo; k < i; ++k) ss += (series[k] - mean) * (series[k] - mean);
        const double sd = std::max(std::sqrt(ss / static_cast<double>(m - 1)), 1e-9);
        if (std::fabs(series[i] - mean) > z * sd) flags[i] = 1;
    }
    return flags;
}

Aggregates scenario_aggregates(std::span<const double> series) {
    require(series.size() >= 2, ErrorKind::Invalid, "scenario_aggregates: need >= 2 samples");
    Aggregates a;
    a.min = a.max = series[0];
    double sum = 0.0;
    for (double v : series) {
        a.min = std::min(a.min, v);
        a.max = std::max(a.max, v);
        sum += v;
    }
    a.mean = sum / static_cast<double>(series.size());
    a.slope = ols_slope(series);
    return a;
}

std::vector<std::string> view_columns(FeatureView view, const FeatureSettings& fs) {
    std::vector<std::string> out;
    for (const std::string& name : base_columns(view)) {
        out.push_back(name);
        out.push_back(name + "__rstd3");
        out.push_back(name + "__rgrad3");
    }
    if (view != FeatureView::KinOnly)
        for (const std::string& name : rf_base()) out.push_back(name + "__flag");
    if (view != FeatureView::RfOnly)
        for (const std::string& name : fs.aggregate_columns)
            for (const char* agg : {"__min", "__max", "__mean", "__slope"})
                out.push_back(name + agg);
    if (view == FeatureView::Fused && fs.interactions)
        for (const std::string& name : interaction_names()) out.push_back(name);
    return out;
}

FeatureMatrix build_feature_matrix(const std::string& data_dir, FeatureView view,
                                   const RunConfig& cfg) {
    // Schema gate before touching any shard.
    const fs::path manifest_path = fs::path(data_dir) / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw_io("cannot read " + manifest_path.string());
    nlohmann::json manifest;
    try {
        in >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw_io("manifest parse error: " + std::string(e.what()));
    }
    const std::string schema = manifest.value("schema_version", "");
    require(schema == scenario::kDatasetSchema, ErrorKind::Invalid,
            "dataset schema mismatch: expected " + std::string(scenario::kDatasetSchema) +
                ", found '" + schema + "'");

    MatrixBuilder builder(view, cfg.features);
    FeatureMatrix m;
    m.columns = builder.columns();
    m.n_cols = m.columns.size();

    const auto& names = scenario::shard_columns();
    // Numeric feature columns: everything between t and the privileged tail.
    const size_t c_first = 4;                  // range_m
    const size_t c_last = names.size() - 3;    // cfo_noise_hz
    for (const auto& cell : manifest.at("cells")) {
        const std::string shard = (fs::path(data_dir) / cell.at("shard").get<std::string>()).string();
        ScenarioBlock block;
        std::vector<std::vector<double>*> slots;
        auto flush = [&] {
            if (block.scenario_id >= 0) builder.add_scenario(block, m);
            block.cols.clear();
            block.jam.clear();
            block.scenario_id = -1;
            slots.clear();
        };
        read_csv(shard, [&](const std::vector<std::string_view>& f, size_t row) {
            if (row == 0) {
                require(f.size() == names.size(), ErrorKind::Invalid,
                        "shard header mismatch in " + shard);
                return;
            }
            const int32_t sid = static_cast<int32_t>(parse_int(f[0]));
            if (sid != block.scenario_id) {
                flush();
                block.scenario_id = sid;
                block.label = static_cast<int8_t>(behavior_from_string(std::string(f[1])));
                for (size_t c = c_first; c <= c_last; ++c)
                    slots.push_back(&block.cols[names[c]]);  // map nodes are stable
            }
            for (size_t c = c_first; c <= c_last; ++c)
                slots[c - c_first]->push_back(parse_double(f[c]));
            block.jam.push_back(static_cast<uint8_t>(parse_int(f[names.size() - 1])));
        });
        flush();
    }
    warn_zero_variance(m);
    return m;
}

FeatureMatrix build_feature_matrix(std::span<const scenario::ScenarioRecord> records,
                                   FeatureView view, const RunConfig& cfg) {
    MatrixBuilder builder(view, cfg.features);
    FeatureMatrix m;
    m.columns = builder.columns();
    m.n_cols = m.columns.size();

    for (const scenario::ScenarioRecord& rec : records) {
        ScenarioBlock block;
        block.scenario_id = static_cast<int32_t>(rec.scenario_id);
        block.label = static_cast<int8_t>(rec.cls);
        const size_t n = rec.kin.size();
        auto& cols = block.cols;
        for (const std::string& name : scenario::shard_columns()) {
            if (name == "scenario_id" || name == "class" || name == "regime" || name == "t" ||
                name == "sjnr_db" || name == "jam_state")
                continue;
            cols[name].reserve(n);
        }
        block.jam.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            const relmotion::KinematicRow& k = rec.kin[i];
            const rflink::LinkMetrics& rf = rec.rf[i];
            cols["range_m"].push_back(k.range);
            cols["range_rate_mps"].push_back(k.range_rate);
            cols["v_r"].push_back(k.v_r);
            cols["v_t"].push_back(k.v_t);
            cols["v_n"].push_back(k.v_n);
            cols["a_r"].push_back(k.a_r);
            cols["a_t"].push_back(k.a_t);
            cols["a_n"].push_back(k.a_n);
            cols["jerk"].push_back(k.jerk);
            cols["curvature"].push_back(k.curvature);
            cols["doppler_hz"].push_back(k.doppler_hz);
            cols["doppler_rate_hzs"].push_back(k.doppler_rate_hzs);
            cols["boresight_rad"].push_back(k.boresight_rad);
            cols["t_to_tca"].push_back(k.t_to_tca);
            cols["visibility"].push_back(k.visible ? 1.0 : 0.0);
            cols["rssi_dbm"].push_back(rf.rssi_dbm);
            cols["throughput_mbps"].push_back(rf.throughput_mbps);
            cols["cn0_dbhz"].push_back(rf.cn0_dbhz);
            cols["jsr_db"].push_back(rf.jsr_db);
            cols["cfo_noise_hz"].push_back(rf.cfo_noise_hz);
            block.jam.push_back(static_cast<uint8_t>(rf.jam_state));
        }
        builder.add_scenario(block, m);
    }
    return m;
}

void persist(const FeatureMatrix& m, const std::string& out_dir, FeatureView view,
             const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw_io("cannot create output directory: " + out_dir);

    const std::string stem = std::string("features_") + to_string(view);
    CsvWriter w((fs::path(out_dir) / (stem + ".csv")).string());
    for (const std::string& c : m.columns) w.field(c);
    w.field("label");
    w.field("scenario_id");
    w.end_row();
    for (size_t r = 0; r < m.n_rows; ++r) {
        for (size_t c = 0; c < m.n_cols; ++c) w.field(static_cast<double>(m.at(r, c)));
        w.field(static_cast<long long>(m.labels[r]));
        w.field(static_cast<long long>(m.groups[r]));
        w.end_row();
    }
    w.flush();

    nlohmann::json j;
    j["schema_version"] = kFeatureSchema;
    j["view"] = to_string(view);
    j["config_hash"] = cfg.hash_hex();
    j["columns"] = m.columns;
    j["n_rows"] = m.n_rows;
    j["n_cols"] = m.n_cols;
    j["imputed_values"] = m.imputed_values;
    std::ofstream out(fs::path(out_dir) / (stem + ".columns.json"), std::ios::binary);
    if (!out) throw_io("cannot write feature column manifest");
    out << j.dump(2) << "\n";
}

}  // namespace proxsim::features
