#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/vec3.hpp"
#include "orbital.hpp"

namespace proxsim::relmotion {

using orbital::StateVector;

/// Target-centered RTN triad, components in ECI.
struct RtnBasis {
    Vec3 r_hat;
    Vec3 t_hat;
    Vec3 n_hat;
};

struct RelativeState {
    double t = 0.0;
    Vec3 rel_pos_rtn;   // m
    Vec3 rel_vel_rtn;   // m/s
    double range = 0.0;       // m
    double range_rate = 0.0;  // m/s
};

/// One aligned timestep of kinematic features.
struct KinematicRow {
    double t = 0.0;
    double range = 0.0;
    double range_rate = 0.0;
    double v_r = 0.0, v_t = 0.0, v_n = 0.0;    // m/s
    double a_r = 0.0, a_t = 0.0, a_n = 0.0;    // m/s^2
    double jerk = 0.0;                         // m/s^3, d|a|/dt
    double curvature = 0.0;                    // 1/m
    double doppler_hz = 0.0;
    double doppler_rate_hzs = 0.0;
    double boresight_rad = 0.0;
    double t_to_tca = 0.0;                     // dimensionless, in [-1, 1]
    bool visible = true;
};

struct TcaResult {
    size_t i_star = 0;        // argmin of range (first occurrence on ties)
    double t_tca_frac = 0.0;  // i_star / (N - 1)
    std::vector<double> t_to_tca;
};

/// Gram-Schmidt RTN triad from the target state. Fails on degenerate geometry
/// (velocity parallel to position).
RtnBasis rtn_basis(const StateVector& target);

/// Relative position/velocity projected on the basis; range and range rate.
RelativeState relative_state(const StateVector& attacker, const StateVector& target,
                             const RtnBasis& basis);

/// Central differences on the interior, one-sided two-point differences at the
/// endpoints; output length equals input length. Requires length >= 3.
std::vector<double> central_diff(std::span<const double> series, double dt);

/// Frenet-Serret curvature |v x a| / (|v|^3 + eps), eps = 1e-12.
double curvature(const Vec3& v, const Vec3& a);

/// f_D = -rdot / lambda, lambda = c / f_c.
double doppler_shift(double range_rate, double carrier_hz);

/// Index of minimum range, its horizon fraction, and the signed per-sample
/// normalized time-to-TCA series. Requires length >= 2.
TcaResult tca_features(std::span<const double> range_series);

/// Angle between the receiver->attacker line of sight and the antenna
/// boresight, clamped arccos, in [0, pi].
double boresight_angle(const Vec3& attacker_pos, const Vec3& receiver_pos,
                       const Vec3& boresight_dir);

/// True when the segment a-b passes through the sphere of the given radius
/// centered at the origin (strictly between the endpoints).
bool segment_hits_earth(const Vec3& a, const Vec3& b, double radius);

/// Full per-timestep feature build for aligned attacker/target state series.
/// gs_positions provides the receive-antenna boresight (receiver -> ground
/// station) per step.
std::vector<KinematicRow> build_kinematic_rows(std::span<const StateVector> attacker,
                                               std::span<const StateVector> target,
                                               std::span<const Vec3> gs_positions,
                                               double dt, double carrier_hz);

}  // namespace proxsim::relmotion
