#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/rng.hpp"

namespace proxsim::rflink {

/// Finite stand-in for -inf dBW; keeps serialized data numeric.
inline constexpr double kJamOffDbw = -400.0;
inline constexpr long kBurstClampMin = 1;
inline constexpr long kBurstClampMax = 500;

/// Uplink + jammer link budget parameters and receiver noise scales.
/// sigma_* are the base (sigma = 1) estimation-noise standard deviations.
struct LinkConfig {
    double carrier_hz = 14.25e9;
    double bandwidth_hz = 36.0e6;
    double tx_power_dbw = 15.6;        // ground-station transmit power
    double tx_gain_dbi = 40.0;
    double rx_gain_dbi = 40.0;         // receive peak gain
    double theta_3db_rad = 0.00872665; // 0.5 deg receive beamwidth
    double sidelobe_floor_dbi = 0.0;
    double t_sys_k = 500.0;
    double pointing_jitter_std_rad = 5.0e-4;
    double power_jitter_db = 0.5;

    double sigma_rssi_db = 1.0;
    double sigma_cfo_hz = 30.0;
    double sigma_doppler_hz = 25.0;
    double sigma_throughput_rel = 0.02; // proportional to the clean throughput
    double sigma_jsr_db = 1.0;
    /// Jammer-power estimator floor as a fraction of thermal noise; the
    /// observable floor scales with sigma^2 so sigma = 0 recovers the exact core.
    double jam_floor_frac = 0.02;

    double noise_power_w() const;
    double eirp_dbw() const { return tx_power_dbw + tx_gain_dbi; }
    void validate() const;
};

/// Per-timestep RF observables. Produced clean by link_metrics(); the
/// estimation-noise stage then perturbs the receiver-side fields in place.
/// sjnr_db and jam_state stay simulation-privileged ground truth.
struct LinkMetrics {
    double t = 0.0;
    double p_sig_dbw = 0.0;
    double p_jam_dbw = kJamOffDbw;
    double sjnr_db = 0.0;
    double rssi_dbm = 0.0;
    double throughput_mbps = 0.0;
    double cn0_dbhz = 0.0;
    double jsr_db = kJamOffDbw;
    double cfo_noise_hz = 0.0;
    int jam_state = 0;
};

/// Markov burst process parameters: p_on is the OFF->ON per-step probability,
/// p_off the ON->OFF one; stationary duty cycle = p_on / (p_on + p_off).
struct BurstParams {
    double p_on = 0.0;
    double p_off = 0.0;
    double duty_cycle() const { return p_on / (p_on + p_off); }
};

double fspl_db(double distance_m, double carrier_hz);

/// Quadratic-rolloff receive pattern with a sidelobe floor.
double rx_gain_dbi(double off_axis_rad, const LinkConfig& cfg);

/// Link budget: EIRP + G_rx(theta_eff) - FSPL, with per-draw pointing and
/// transmit-power jitter. Pass rng = nullptr to evaluate with jitters zeroed.
double received_power_dbw(double distance_m, double off_axis_rad, double eirp_dbw,
                          const LinkConfig& cfg, Rng* rng);

/// Noise-free metric core from the two received power levels.
/// p_jam_dbw == kJamOffDbw means the jammer is OFF.
LinkMetrics link_metrics(double p_sig_dbw, double p_jam_dbw, const LinkConfig& cfg);

/// ON/OFF series from alternating geometric dwells, each clamped to
/// [1, 500] samples; the initial state is drawn from the stationary law.
std::vector<uint8_t> sample_jammer_activity(const BurstParams& params, size_t n, Rng& rng);

/// Receiver-side estimation noise at scale sigma: additive Gaussian on RSSI
/// and CFO, proportional observation noise on throughput, and a noise-floor-
/// limited jammer power estimate feeding JSR. sigma = 0 leaves the series
/// bit-identical. Transmit power jitter is not touched here.
void apply_estimation_noise(std::vector<LinkMetrics>& series, double sigma,
                            const LinkConfig& cfg, Rng& rng);

}  // namespace proxsim::rflink
