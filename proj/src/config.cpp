#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "core/error.hpp"

namespace proxsim {

namespace {

using nlohmann::json;

/// Wraps one JSON object level; get() pulls known keys, done() rejects the rest.
class StrictObj {
public:
    StrictObj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        require(j_.is_object(), ErrorKind::Config, path_ + ": expected a JSON object");
    }

    bool has(const char* key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    template <typename T>
    void get(const char* key, T& target) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            target = j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw_config(path_ + "." + key + ": " + e.what());
        }
    }

    const json& sub(const char* key) {
        seen_.insert(key);
        return j_.at(key);
    }

    void done() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) throw_config(path_ + ": unknown key '" + key + "'");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void parse_band(const json& j, const std::string& path, orbital::RegimeBand& band) {
    StrictObj o(j, path);
    o.get("alt_min_m", band.alt_min);
    o.get("alt_max_m", band.alt_max);
    o.get("ecc_max", band.ecc_max);
    o.get("inc_max_rad", band.inc_max);
    o.done();
}

void parse_geo(const json& j, const std::string& path, orbital::GeoBand& geo) {
    StrictObj o(j, path);
    o.get("sma_m", geo.sma);
    o.get("proximity_window_m", geo.proximity_window);
    o.get("min_along_frac", geo.min_along_frac);
    o.get("max_along_frac", geo.max_along_frac);
    o.get("radial_frac", geo.radial_frac);
    o.get("cross_frac", geo.cross_frac);
    o.get("ecc_max", geo.ecc_max);
    o.done();
}

void parse_class(const json& j, const std::string& path, ClassParams& cp) {
    StrictObj o(j, path);
    o.get("dv_min_mps", cp.dv.dv_min);
    o.get("dv_max_mps", cp.dv.dv_max);
    o.get("los_bias", cp.dv.los_bias);
    o.get("jammer_eirp_dbw", cp.jammer_eirp_dbw);
    o.get("p_on", cp.burst.p_on);
    o.get("p_off", cp.burst.p_off);
    o.done();
}

void parse_link(const json& j, rflink::LinkConfig& l) {
    StrictObj o(j, "link");
    o.get("carrier_hz", l.carrier_hz);
    o.get("bandwidth_hz", l.bandwidth_hz);
    o.get("tx_power_dbw", l.tx_power_dbw);
    o.get("tx_gain_dbi", l.tx_gain_dbi);
    o.get("rx_gain_dbi", l.rx_gain_dbi);
    o.get("theta_3db_rad", l.theta_3db_rad);
    o.get("sidelobe_floor_dbi", l.sidelobe_floor_dbi);
    o.get("t_sys_k", l.t_sys_k);
    o.get("pointing_jitter_std_rad", l.pointing_jitter_std_rad);
    o.get("power_jitter_db", l.power_jitter_db);
    o.get("sigma_rssi_db", l.sigma_rssi_db);
    o.get("sigma_cfo_hz", l.sigma_cfo_hz);
    o.get("sigma_doppler_hz", l.sigma_doppler_hz);
    o.get("sigma_throughput_rel", l.sigma_throughput_rel);
    o.get("sigma_jsr_db", l.sigma_jsr_db);
    o.get("jam_floor_frac", l.jam_floor_frac);
    o.done();
}

void parse_forest(const json& j, const std::string& path, ForestSettings& f) {
    StrictObj o(j, path);
    o.get("n_trees", f.n_trees);
    o.get("max_depth", f.max_depth);
    o.get("min_samples_leaf", f.min_samples_leaf);
    o.get("histogram_bins", f.histogram_bins);
    o.done();
}

json band_json(const orbital::RegimeBand& b) {
    return {{"alt_min_m", b.alt_min},
            {"alt_max_m", b.alt_max},
            {"ecc_max", b.ecc_max},
            {"inc_max_rad", b.inc_max}};
}

json class_json(const ClassParams& c) {
    return {{"dv_min_mps", c.dv.dv_min},     {"dv_max_mps", c.dv.dv_max},
            {"los_bias", c.dv.los_bias},     {"jammer_eirp_dbw", c.jammer_eirp_dbw},
            {"p_on", c.burst.p_on},          {"p_off", c.burst.p_off}};
}

json forest_json(const ForestSettings& f) {
    return {{"n_trees", f.n_trees},
            {"max_depth", f.max_depth},
            {"min_samples_leaf", f.min_samples_leaf},
            {"histogram_bins", f.histogram_bins}};
}

}  // namespace

size_t RunConfig::samples_per_scenario() const {
    const double n = horizon_s / dt_s;
    const double rounded = std::round(n);
    require(std::fabs(n - rounded) < 1e-9 && rounded >= 3.0, ErrorKind::Config,
            "horizon_s / dt_s must be an integer sample count >= 3");
    return static_cast<size_t>(rounded);
}

orbital::OrbitalElements RunConfig::target_elements() const {
    orbital::OrbitalElements el;
    el.semi_major_axis = geo.sma;
    // Circular, equatorial, fixed per run; anomalies zero at scenario start.
    return el;
}

void RunConfig::validate() const {
    samples_per_scenario();
    require(scenarios_per_cell >= 1, ErrorKind::Config, "scenarios_per_cell must be >= 1");
    require(dt_s > 0.0, ErrorKind::Config, "dt_s must be positive");
    require(sigma >= 0.0, ErrorKind::Config, "sigma must be >= 0");
    require(split_fraction > 0.0 && split_fraction < 1.0, ErrorKind::Config,
            "split_fraction must be in (0, 1)");
    require(burn_window_lo >= 0.0 && burn_window_hi <= 1.0 && burn_window_lo < burn_window_hi,
            ErrorKind::Config, "burn window fractions must satisfy 0 <= lo < hi <= 1");
    for (size_t i = 0; i < classes.size(); ++i) {
        const ClassParams& c = classes[i];
        require(c.dv.dv_min >= 0.0 && c.dv.dv_max >= c.dv.dv_min, ErrorKind::Config,
                std::string("dv prior invalid for class ") +
                    to_string(static_cast<BehaviorClass>(i)));
        require(c.burst.p_on > 0.0 && c.burst.p_on <= 1.0 && c.burst.p_off > 0.0 &&
                    c.burst.p_off <= 1.0,
                ErrorKind::Config, "burst probabilities must be in (0, 1]");
    }
    require(forest.n_trees >= 1 && forest.max_depth >= 1 && forest.min_samples_leaf >= 1,
            ErrorKind::Config, "forest parameters out of range");
    require(forest.histogram_bins >= 2 && forest.histogram_bins <= 256, ErrorKind::Config,
            "histogram_bins must be in [2, 256]");
    require(features.rolling_window == 3, ErrorKind::Config,
            "rolling_window is fixed at 3 in this schema");
    require(features.anomaly_window >= 3, ErrorKind::Config, "anomaly_window must be >= 3");
    require(sweep.scenarios_per_cell >= 1, ErrorKind::Config,
            "sweep.scenarios_per_cell must be >= 1");
    for (double s : sweep.sigma_grid)
        require(s >= 0.0, ErrorKind::Config, "sweep sigma grid values must be >= 0");
    link.validate();
    // Band ordering and window checks happen in the sampler constructor.
    orbital::OrbitSampler sampler(leo, meo, geo, target_elements());
}

nlohmann::json RunConfig::to_json() const {
    json j;
    j["master_seed"] = master_seed;
    j["scenarios_per_cell"] = scenarios_per_cell;
    j["horizon_s"] = horizon_s;
    j["dt_s"] = dt_s;
    j["sigma"] = sigma;
    j["split_fraction"] = split_fraction;
    j["gs_longitude_offset_deg"] = gs_longitude_offset_deg;
    j["burn_window_frac"] = {burn_window_lo, burn_window_hi};
    j["save_model"] = save_model;
    j["regimes"] = {{"leo", band_json(leo)},
                    {"meo", band_json(meo)},
                    {"geo",
                     {{"sma_m", geo.sma},
                      {"proximity_window_m", geo.proximity_window},
                      {"min_along_frac", geo.min_along_frac},
                      {"max_along_frac", geo.max_along_frac},
                      {"radial_frac", geo.radial_frac},
                      {"cross_frac", geo.cross_frac},
                      {"ecc_max", geo.ecc_max}}}};
    j["classes"] = {{"benign", class_json(classes[0])},
                    {"covert", class_json(classes[1])},
                    {"threatening", class_json(classes[2])}};
    j["link"] = {{"carrier_hz", link.carrier_hz},
                 {"bandwidth_hz", link.bandwidth_hz},
                 {"tx_power_dbw", link.tx_power_dbw},
                 {"tx_gain_dbi", link.tx_gain_dbi},
                 {"rx_gain_dbi", link.rx_gain_dbi},
                 {"theta_3db_rad", link.theta_3db_rad},
                 {"sidelobe_floor_dbi", link.sidelobe_floor_dbi},
                 {"t_sys_k", link.t_sys_k},
                 {"pointing_jitter_std_rad", link.pointing_jitter_std_rad},
                 {"power_jitter_db", link.power_jitter_db},
                 {"sigma_rssi_db", link.sigma_rssi_db},
                 {"sigma_cfo_hz", link.sigma_cfo_hz},
                 {"sigma_doppler_hz", link.sigma_doppler_hz},
                 {"sigma_throughput_rel", link.sigma_throughput_rel},
                 {"sigma_jsr_db", link.sigma_jsr_db},
                 {"jam_floor_frac", link.jam_floor_frac}};
    j["forest"] = forest_json(forest);
    j["features"] = {{"rolling_window", features.rolling_window},
                     {"anomaly_window", features.anomaly_window},
                     {"anomaly_z", features.anomaly_z},
                     {"aggregate_columns", features.aggregate_columns},
                     {"interactions", features.interactions}};
    j["sweep"] = {{"scenarios_per_cell", sweep.scenarios_per_cell},
                  {"sigma_grid", sweep.sigma_grid},
                  {"forest", forest_json(sweep.forest)}};
    return j;
}

RunConfig RunConfig::from_json(const json& j) {
    RunConfig cfg;
    StrictObj o(j, "config");
    o.get("master_seed", cfg.master_seed);
    o.get("scenarios_per_cell", cfg.scenarios_per_cell);
    o.get("horizon_s", cfg.horizon_s);
    o.get("dt_s", cfg.dt_s);
    o.get("sigma", cfg.sigma);
    o.get("split_fraction", cfg.split_fraction);
    o.get("gs_longitude_offset_deg", cfg.gs_longitude_offset_deg);
    o.get("save_model", cfg.save_model);
    if (o.has("burn_window_frac")) {
        const auto& bw = o.sub("burn_window_frac");
        require(bw.is_array() && bw.size() == 2, ErrorKind::Config,
                "burn_window_frac must be [lo, hi]");
        cfg.burn_window_lo = bw[0].get<double>();
        cfg.burn_window_hi = bw[1].get<double>();
    }
    if (o.has("regimes")) {
        StrictObj r(o.sub("regimes"), "regimes");
        if (r.has("leo")) parse_band(r.sub("leo"), "regimes.leo", cfg.leo);
        if (r.has("meo")) parse_band(r.sub("meo"), "regimes.meo", cfg.meo);
        if (r.has("geo")) parse_geo(r.sub("geo"), "regimes.geo", cfg.geo);
        r.done();
    }
    if (o.has("classes")) {
        StrictObj c(o.sub("classes"), "classes");
        if (c.has("benign")) parse_class(c.sub("benign"), "classes.benign", cfg.classes[0]);
        if (c.has("covert")) parse_class(c.sub("covert"), "classes.covert", cfg.classes[1]);
        if (c.has("threatening"))
            parse_class(c.sub("threatening"), "classes.threatening", cfg.classes[2]);
        c.done();
    }
    if (o.has("link")) parse_link(o.sub("link"), cfg.link);
    if (o.has("forest")) parse_forest(o.sub("forest"), "forest", cfg.forest);
    if (o.has("features")) {
        StrictObj f(o.sub("features"), "features");
        f.get("rolling_window", cfg.features.rolling_window);
        f.get("anomaly_window", cfg.features.anomaly_window);
        f.get("anomaly_z", cfg.features.anomaly_z);
        f.get("aggregate_columns", cfg.features.aggregate_columns);
        f.get("interactions", cfg.features.interactions);
        f.done();
    }
    if (o.has("sweep")) {
        StrictObj s(o.sub("sweep"), "sweep");
        s.get("scenarios_per_cell", cfg.sweep.scenarios_per_cell);
        s.get("sigma_grid", cfg.sweep.sigma_grid);
        if (s.has("forest")) parse_forest(s.sub("forest"), "sweep.forest", cfg.sweep.forest);
        s.done();
    }
    o.done();
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw_config(std::string("config parse error: ") + e.what());
    }
    return from_json(j);
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

uint64_t RunConfig::hash() const {
    const std::string dump = to_json().dump();
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string RunConfig::hash_hex() const {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

}  // namespace proxsim
