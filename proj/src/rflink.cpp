#include "rflink.hpp"

#include <algorithm>
#include <cmath>

#include "core/constants.hpp"
#include "core/error.hpp"

namespace proxsim::rflink {

double LinkConfig::noise_power_w() const { return kBoltzmann * t_sys_k * bandwidth_hz; }

void LinkConfig::validate() const {
    require(carrier_hz > 0.0, ErrorKind::Config, "link: carrier_hz must be positive");
    require(bandwidth_hz > 0.0, ErrorKind::Config, "link: bandwidth_hz must be positive");
    require(t_sys_k > 0.0, ErrorKind::Config, "link: t_sys_k must be positive");
    require(theta_3db_rad > 0.0, ErrorKind::Config, "link: theta_3db_rad must be positive");
    require(sidelobe_floor_dbi < rx_gain_dbi, ErrorKind::Config,
            "link: sidelobe floor must sit below the peak receive gain");
    require(sigma_rssi_db >= 0.0 && sigma_cfo_hz >= 0.0 && sigma_doppler_hz >= 0.0 &&
                sigma_throughput_rel >= 0.0 && sigma_jsr_db >= 0.0 && jam_floor_frac >= 0.0,
            ErrorKind::Config, "link: noise scales must be non-negative");
}

double fspl_db(double distance_m, double carrier_hz) {
    require(distance_m > 0.0, ErrorKind::Invalid, "fspl: distance must be positive");
    const double lambda = kSpeedOfLight / carrier_hz;
    return 20.0 * std::log10(4.0 * kPi * distance_m / lambda);
}

double rx_gain_dbi(double off_axis_rad, const LinkConfig& cfg) {
    const double x = off_axis_rad / cfg.theta_3db_rad;
    return std::max(cfg.rx_gain_dbi - 12.0 * x * x, cfg.sidelobe_floor_dbi);
}

double received_power_dbw(double distance_m, double off_axis_rad, double eirp_dbw,
                          const LinkConfig& cfg, Rng* rng) {
    require(distance_m > 0.0, ErrorKind::Invalid, "received_power: distance must be positive");
    double eirp = eirp_dbw;
    double theta = off_axis_rad;
    if (rng != nullptr) {
        eirp += cfg.power_jitter_db * rng->gauss();
        theta += cfg.pointing_jitter_std_rad * rng->gauss();
    }
    return eirp + rx_gain_dbi(theta, cfg) - fspl_db(distance_m, cfg.carrier_hz);
}

LinkMetrics link_metrics(double p_sig_dbw, double p_jam_dbw, const LinkConfig& cfg) {
    const bool jam_on = p_jam_dbw > kJamOffDbw;
    const double p_sig_w = std::pow(10.0, p_sig_dbw / 10.0);
    const double p_jam_w = jam_on ? std::pow(10.0, p_jam_dbw / 10.0) : 0.0;
    const double noise_w = cfg.noise_power_w();

    LinkMetrics m;
    m.p_sig_dbw = p_sig_dbw;
    m.p_jam_dbw = jam_on ? p_jam_dbw : kJamOffDbw;
    const double sjnr_lin = p_sig_w / (p_jam_w + noise_w);
    m.sjnr_db = 10.0 * std::log10(sjnr_lin);
    m.rssi_dbm = p_sig_dbw + 30.0;
    m.throughput_mbps = cfg.bandwidth_hz / 1.0e6 * std::log2(1.0 + sjnr_lin);
    m.cn0_dbhz = p_sig_dbw - 10.0 * std::log10(kBoltzmann * cfg.t_sys_k);
    m.jsr_db = jam_on ? p_jam_dbw - p_sig_dbw : kJamOffDbw;
    m.cfo_noise_hz = 0.0;
    m.jam_state = jam_on ? 1 : 0;
    return m;
}

std::vector<uint8_t> sample_jammer_activity(const BurstParams& params, size_t n, Rng& rng) {
    require(n >= 1, ErrorKind::Invalid, "sample_jammer_activity: n must be >= 1");
    require(params.p_on > 0.0 && params.p_on <= 1.0 && params.p_off > 0.0 && params.p_off <= 1.0,
            ErrorKind::Invalid, "sample_jammer_activity: p_on and p_off must be in (0, 1]");

    std::vector<uint8_t> s(n);
    bool on = rng.u01() < params.duty_cycle();
    size_t i = 0;
    while (i < n) {
        const long dwell = rng.geometric(on ? params.p_off : params.p_on);
        const long len = std::clamp(dwell, kBurstClampMin, kBurstClampMax);
        const size_t end = std::min(n, i + static_cast<size_t>(len));
        for (; i < end; ++i) s[i] = on ? 1 : 0;
        on = !on;
    }
    return s;
}

void apply_estimation_noise(std::vector<LinkMetrics>& series, double sigma,
                            const LinkConfig& cfg, Rng& rng) {
    require(sigma >= 0.0, ErrorKind::Invalid, "apply_estimation_noise: sigma must be >= 0");
    if (sigma == 0.0) return;

    const double jam_floor_w = sigma * sigma * cfg.jam_floor_frac * cfg.noise_power_w();
    for (LinkMetrics& m : series) {
        const double thr_clean = m.throughput_mbps;
        m.rssi_dbm += sigma * cfg.sigma_rssi_db * rng.gauss();
        m.cfo_noise_hz += sigma * cfg.sigma_cfo_hz * rng.gauss();
        m.throughput_mbps =
            std::max(0.0, thr_clean + sigma * cfg.sigma_throughput_rel * thr_clean * rng.gauss());

        // The receiver's jammer-power estimate bottoms out at a sigma-scaled
        // fraction of the thermal floor; weak jams disappear into it.
        const double p_jam_w = m.jam_state ? std::pow(10.0, m.p_jam_dbw / 10.0) : 0.0;
        const double p_jam_obs = 10.0 * std::log10(p_jam_w + jam_floor_w) +
                                 sigma * cfg.sigma_jsr_db * rng.gauss();
        m.jsr_db = p_jam_obs - (m.rssi_dbm - 30.0);
    }
}

}  // namespace proxsim::rflink
