#include "scenario.hpp"

#include <cmath>
#include <filesystem>

#include "core/constants.hpp"
#include "core/csv.hpp"
#include "core/error.hpp"

namespace proxsim::scenario {

namespace {

namespace fs = std::filesystem;
using orbital::StateVector;

// Substream tags for per-scenario RNG streams.
enum : uint64_t { kTagOrbit = 1, kTagManeuver = 2, kTagBurst = 3, kTagJitter = 4, kTagNoise = 5 };

Rng scenario_stream(uint64_t master, uint32_t scenario_id, uint64_t tag) {
    return Rng(derive_seed(master, scenario_id, tag));
}

}  // namespace

const std::vector<std::string>& shard_columns() {
    static const std::vector<std::string> cols = {
        "scenario_id", "class", "regime", "t", "range_m", "range_rate_mps",
        "v_r", "v_t", "v_n", "a_r", "a_t", "a_n", "jerk", "curvature",
        "doppler_hz", "doppler_rate_hzs", "boresight_rad", "t_to_tca", "visibility",
        "rssi_dbm", "throughput_mbps", "cn0_dbhz", "jsr_db", "cfo_noise_hz",
        "sjnr_db", "jam_state"};
    return cols;
}

ScenarioRecord generate_scenario(const RunConfig& cfg, BehaviorClass cls, Regime regime,
                                 uint32_t scenario_id) {
    const size_t n = cfg.samples_per_scenario();
    const double dt = cfg.dt_s;
    const ClassParams& cp = cfg.params_for(cls);
    const orbital::OrbitalElements target_el = cfg.target_elements();
    const orbital::OrbitSampler sampler(cfg.leo, cfg.meo, cfg.geo, target_el);

    ScenarioRecord rec;
    rec.scenario_id = scenario_id;
    rec.cls = cls;
    rec.regime = regime;
    rec.seed = derive_seed(cfg.master_seed, scenario_id, 0);

    try {
        Rng rng_orbit = scenario_stream(cfg.master_seed, scenario_id, kTagOrbit);
        Rng rng_burn = scenario_stream(cfg.master_seed, scenario_id, kTagManeuver);
        Rng rng_burst = scenario_stream(cfg.master_seed, scenario_id, kTagBurst);
        Rng rng_jitter = scenario_stream(cfg.master_seed, scenario_id, kTagJitter);
        Rng rng_noise = scenario_stream(cfg.master_seed, scenario_id, kTagNoise);

        const orbital::OrbitalElements att_el = sampler.sample_orbit(regime, cls, rng_orbit);

        // Single impulsive burn at a random fraction of the horizon.
        const double t_burn =
            rng_burn.uniform(cfg.burn_window_lo, cfg.burn_window_hi) * cfg.horizon_s;
        const StateVector att_at_burn = orbital::propagate(att_el, t_burn);
        const StateVector tgt_at_burn = orbital::propagate(target_el, t_burn);
        rec.maneuver = sampler.sample_maneuver(cp.dv, t_burn, att_at_burn, tgt_at_burn, rng_burn);
        const StateVector post_burn = orbital::apply_impulse(att_at_burn, rec.maneuver);

        // State series on the sample grid; attacker restarts from the post-burn state.
        std::vector<StateVector> att(n), tgt(n);
        std::vector<Vec3> gs(n);
        const double gs_lon0 = (target_el.raan + target_el.arg_perigee + target_el.true_anomaly) +
                               deg2rad(cfg.gs_longitude_offset_deg);
        // Ground station co-rotates with the GEO target, so the signal path is
        // static per scenario by construction.
        const double omega_gs = std::sqrt(kMuEarth / std::pow(cfg.geo.sma, 3));
        for (size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) * dt;
            tgt[i] = orbital::propagate(target_el, t);
            att[i] = t <= rec.maneuver.t_burn ? orbital::propagate(att_el, t)
                                              : orbital::propagate_state(post_burn, t - rec.maneuver.t_burn);
            const double lon = gs_lon0 + omega_gs * t;
            gs[i] = Vec3{kEarthRadius * std::cos(lon), kEarthRadius * std::sin(lon), 0.0};
        }

        rec.kin = relmotion::build_kinematic_rows(att, tgt, gs, dt, cfg.link.carrier_hz);

        // RF series: class-conditional burst activity, then per-step link budgets.
        const std::vector<uint8_t> jam = rflink::sample_jammer_activity(cp.burst, n, rng_burst);
        rec.rf.resize(n);
        for (size_t i = 0; i < n; ++i) {
            const double d_sig = (gs[i] - tgt[i].position).norm();
            const double p_sig =
                rflink::received_power_dbw(d_sig, 0.0, cfg.link.eirp_dbw(), cfg.link, &rng_jitter);
            double p_jam = rflink::kJamOffDbw;
            if (jam[i]) {
                p_jam = rflink::received_power_dbw(rec.kin[i].range, rec.kin[i].boresight_rad,
                                                   cp.jammer_eirp_dbw, cfg.link, &rng_jitter);
            }
            rec.rf[i] = rflink::link_metrics(p_sig, p_jam, cfg.link);
            rec.rf[i].t = rec.kin[i].t;
        }

        rflink::apply_estimation_noise(rec.rf, cfg.sigma, cfg.link, rng_noise);

        // Reported Doppler shares the estimation-noise stage; its rate is
        // re-differenced from the noisy shift so the error scales stay coupled.
        if (cfg.sigma > 0.0) {
            std::vector<double> dop(n);
            for (size_t i = 0; i < n; ++i)
                dop[i] = rec.kin[i].doppler_hz + cfg.sigma * cfg.link.sigma_doppler_hz * rng_noise.gauss();
            const std::vector<double> rate = relmotion::central_diff(dop, dt);
            for (size_t i = 0; i < n; ++i) {
                rec.kin[i].doppler_hz = dop[i];
                rec.kin[i].doppler_rate_hzs = rate[i];
            }
        }
    } catch (const Error& e) {
        throw Error(e.kind(), "scenario " + std::to_string(scenario_id) + ": " + e.what());
    }
    return rec;
}

void write_record(CsvWriter& w, const ScenarioRecord& rec) {
    const char* cls = to_string(rec.cls);
    const char* reg = to_string(rec.regime);
    for (size_t i = 0; i < rec.kin.size(); ++i) {
        const relmotion::KinematicRow& k = rec.kin[i];
        const rflink::LinkMetrics& m = rec.rf[i];
        w.field(static_cast<long long>(rec.scenario_id));
        w.field(cls);
        w.field(reg);
        w.field(k.t);
        w.field(k.range);
        w.field(k.range_rate);
        w.field(k.v_r); w.field(k.v_t); w.field(k.v_n);
        w.field(k.a_r); w.field(k.a_t); w.field(k.a_n);
        w.field(k.jerk);
        w.field(k.curvature);
        w.field(k.doppler_hz);
        w.field(k.doppler_rate_hzs);
        w.field(k.boresight_rad);
        w.field(k.t_to_tca);
        w.field(k.visible ? 1 : 0);
        w.field(m.rssi_dbm);
        w.field(m.throughput_mbps);
        w.field(m.cn0_dbhz);
        w.field(m.jsr_db);
        w.field(m.cfo_noise_hz);
        w.field(m.sjnr_db);
        w.field(m.jam_state);
        w.end_row();
    }
}

DatasetSummary generate_dataset(const RunConfig& cfg, const std::string& out_dir, int n_per_cell) {
    RunConfig run = cfg;
    if (n_per_cell > 0) run.scenarios_per_cell = n_per_cell;
    run.validate();

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw_io("cannot create output directory: " + out_dir);

    const size_t samples = run.samples_per_scenario();
    const int per_cell = run.scenarios_per_cell;

    DatasetSummary summary;
    summary.config_hash = run.hash_hex();
    nlohmann::json scenario_table = nlohmann::json::array();
    uint64_t class_rows[3] = {0, 0, 0};
    uint64_t class_on[3] = {0, 0, 0};

    auto write_manifest = [&](bool complete, const std::string& error) {
        nlohmann::json m;
        m["schema_version"] = kDatasetSchema;
        m["config"] = run.to_json();
        m["config_hash"] = summary.config_hash;
        m["samples_per_scenario"] = samples;
        m["n_scenarios"] = summary.n_scenarios;
        m["n_rows"] = summary.n_rows;
        m["complete"] = complete;
        if (!error.empty()) m["error"] = error;
        nlohmann::json cells = nlohmann::json::array();
        for (const CellSummary& c : summary.cells) {
            cells.push_back({{"class", to_string(c.cls)},
                             {"regime", to_string(c.regime)},
                             {"shard", c.shard},
                             {"n_scenarios", c.n_scenarios},
                             {"n_rows", c.n_rows}});
        }
        m["cells"] = cells;
        m["scenarios"] = scenario_table;
        std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::binary);
        if (!out) throw_io("cannot write manifest.json in " + out_dir);
        out << m.dump(2) << "\n";
    };

    try {
        uint32_t scenario_id = 0;
        for (int ci = 0; ci < 3; ++ci) {
            for (int ri = 0; ri < 3; ++ri) {
                const BehaviorClass cls = static_cast<BehaviorClass>(ci);
                const Regime reg = static_cast<Regime>(ri);
                CellSummary cell;
                cell.cls = cls;
                cell.regime = reg;
                cell.shard = std::string("data_") + to_string(cls) + "_" + to_string(reg) + ".csv";

                CsvWriter w((fs::path(out_dir) / cell.shard).string());
                for (const std::string& col : shard_columns()) w.field(col);
                w.end_row();

                for (int s = 0; s < per_cell; ++s, ++scenario_id) {
                    const ScenarioRecord rec = generate_scenario(run, cls, reg, scenario_id);
                    write_record(w, rec);
                    cell.n_scenarios += 1;
                    cell.n_rows += rec.kin.size();
                    uint64_t on = 0;
                    for (const auto& m : rec.rf) on += static_cast<uint64_t>(m.jam_state);
                    cell.jam_on_rows += on;
                    scenario_table.push_back({{"id", rec.scenario_id},
                                              {"class", to_string(cls)},
                                              {"regime", to_string(reg)},
                                              {"seed", rec.seed},
                                              {"rows", rec.kin.size()}});
                }
                w.flush();
                summary.n_scenarios += cell.n_scenarios;
                summary.n_rows += cell.n_rows;
                class_rows[ci] += cell.n_rows;
                class_on[ci] += cell.jam_on_rows;
                summary.cells.push_back(cell);
            }
        }
    } catch (const Error& e) {
        write_manifest(false, e.what());
        throw;
    }

    for (int ci = 0; ci < 3; ++ci)
        summary.duty_cycle[ci] =
            class_rows[ci] ? static_cast<double>(class_on[ci]) / static_cast<double>(class_rows[ci])
                           : 0.0;
    write_manifest(true, "");
    return summary;
}

nlohmann::json summary_to_json(const DatasetSummary& s) {
    nlohmann::json j;
    j["config_hash"] = s.config_hash;
    j["n_scenarios"] = s.n_scenarios;
    j["n_rows"] = s.n_rows;
    j["duty_cycle"] = {{"benign", s.duty_cycle[0]},
                       {"covert", s.duty_cycle[1]},
                       {"threatening", s.duty_cycle[2]}};
    nlohmann::json cells = nlohmann::json::array();
    for (const CellSummary& c : s.cells) {
        cells.push_back({{"class", to_string(c.cls)},
                         {"regime", to_string(c.regime)},
                         {"shard", c.shard},
                         {"n_scenarios", c.n_scenarios},
                         {"n_rows", c.n_rows}});
    }
    j["cells"] = cells;
    return j;
}

}  // namespace proxsim::scenario
