#include "relmotion.hpp"

#include <algorithm>
#include <cmath>

#include "core/constants.hpp"
#include "core/error.hpp"

namespace proxsim::relmotion {

namespace {
constexpr double kCurvatureEps = 1e-12;
}

RtnBasis rtn_basis(const StateVector& target) {
    const double rn = target.position.norm();
    require(rn > 0.0, ErrorKind::Invalid, "rtn_basis: zero target position");
    const Vec3 r_hat = target.position / rn;
    const Vec3 t_prime = target.velocity - dot(target.velocity, r_hat) * r_hat;
    const double tn = t_prime.norm();
    require(tn > 1e-9, ErrorKind::Invalid, "rtn_basis: degenerate geometry (radial velocity only)");
    const Vec3 t_hat = t_prime / tn;
    return RtnBasis{r_hat, t_hat, cross(r_hat, t_hat)};
}

RelativeState relative_state(const StateVector& attacker, const StateVector& target,
                             const RtnBasis& basis) {
    const Vec3 r_rel = attacker.position - target.position;
    const Vec3 v_rel = attacker.velocity - target.velocity;
    const double range = r_rel.norm();
    require(range > 0.0, ErrorKind::Invalid, "relative_state: coincident positions");

    RelativeState out;
    out.t = target.t;
    out.rel_pos_rtn = {dot(r_rel, basis.r_hat), dot(r_rel, basis.t_hat), dot(r_rel, basis.n_hat)};
    out.rel_vel_rtn = {dot(v_rel, basis.r_hat), dot(v_rel, basis.t_hat), dot(v_rel, basis.n_hat)};
    out.range = range;
    out.range_rate = dot(v_rel, r_rel) / range;
    return out;
}

std::vector<double> central_diff(std::span<const double> series, double dt) {
    const size_t n = series.size();
    require(n >= 3, ErrorKind::Invalid, "central_diff: need at least 3 samples");
    require(dt > 0.0, ErrorKind::Invalid, "central_diff: dt must be positive");
    std::vector<double> out(n);
    out[0] = (series[1] - series[0]) / dt;
    for (size_t i = 1; i + 1 < n; ++i) out[i] = (series[i + 1] - series[i - 1]) / (2.0 * dt);
    out[n - 1] = (series[n - 1] - series[n - 2]) / dt;
    return out;
}

double curvature(const Vec3& v, const Vec3& a) {
    const double vn = v.norm();
    return cross(v, a).norm() / (vn * vn * vn + kCurvatureEps);
}

double doppler_shift(double range_rate, double carrier_hz) {
    require(carrier_hz > 0.0, ErrorKind::Invalid, "doppler_shift: carrier must be positive");
    const double lambda = kSpeedOfLight / carrier_hz;
    return -range_rate / lambda;
}

TcaResult tca_features(std::span<const double> range_series) {
    const size_t n = range_series.size();
    require(n >= 2, ErrorKind::Invalid, "tca_features: need at least 2 samples");
    size_t i_star = 0;
    for (size_t i = 1; i < n; ++i)
        if (range_series[i] < range_series[i_star]) i_star = i;

    TcaResult out;
    out.i_star = i_star;
    out.t_tca_frac = static_cast<double>(i_star) / static_cast<double>(n - 1);
    out.t_to_tca.resize(n);
    for (size_t i = 0; i < n; ++i)
        out.t_to_tca[i] = (static_cast<double>(i) - static_cast<double>(i_star)) /
                          static_cast<double>(n - 1);
    return out;
}

double boresight_angle(const Vec3& attacker_pos, const Vec3& receiver_pos,
                       const Vec3& boresight_dir) {
    const Vec3 los = attacker_pos - receiver_pos;
    const double n = los.norm();
    require(n > 0.0, ErrorKind::Invalid, "boresight_angle: coincident positions");
    const double c = std::clamp(dot(los / n, boresight_dir), -1.0, 1.0);
    return std::acos(c);
}

bool segment_hits_earth(const Vec3& a, const Vec3& b, double radius) {
    const Vec3 d = b - a;
    const double dd = d.norm2();
    if (dd == 0.0) return a.norm() < radius;
    const double t = std::clamp(-dot(a, d) / dd, 0.0, 1.0);
    const Vec3 closest = a + t * d;
    return closest.norm() < radius;
}

std::vector<KinematicRow> build_kinematic_rows(std::span<const StateVector> attacker,
                                               std::span<const StateVector> target,
                                               std::span<const Vec3> gs_positions,
                                               double dt, double carrier_hz) {
    const size_t n = attacker.size();
    require(n >= 3, ErrorKind::Invalid, "build_kinematic_rows: need at least 3 samples");
    require(target.size() == n && gs_positions.size() == n, ErrorKind::Invalid,
            "build_kinematic_rows: series lengths differ");

    std::vector<KinematicRow> rows(n);
    std::vector<double> vr(n), vt(n), vn(n), range(n);
    for (size_t i = 0; i < n; ++i) {
        const RtnBasis basis = rtn_basis(target[i]);
        const RelativeState rel = relative_state(attacker[i], target[i], basis);
        KinematicRow& row = rows[i];
        row.t = target[i].t;
        row.range = rel.range;
        row.range_rate = rel.range_rate;
        row.v_r = vr[i] = rel.rel_vel_rtn.x;
        row.v_t = vt[i] = rel.rel_vel_rtn.y;
        row.v_n = vn[i] = rel.rel_vel_rtn.z;
        range[i] = rel.range;
        const Vec3 boresight = normalized(gs_positions[i] - target[i].position);
        row.boresight_rad = boresight_angle(attacker[i].position, target[i].position, boresight);
        row.visible = !segment_hits_earth(target[i].position, attacker[i].position, kEarthRadius);
        row.doppler_hz = doppler_shift(rel.range_rate, carrier_hz);
    }

    const std::vector<double> ar = central_diff(vr, dt);
    const std::vector<double> at = central_diff(vt, dt);
    const std::vector<double> an = central_diff(vn, dt);
    std::vector<double> a_mag(n), dop(n);
    for (size_t i = 0; i < n; ++i) {
        rows[i].a_r = ar[i];
        rows[i].a_t = at[i];
        rows[i].a_n = an[i];
        a_mag[i] = std::sqrt(ar[i] * ar[i] + at[i] * at[i] + an[i] * an[i]);
        rows[i].curvature = curvature({vr[i], vt[i], vn[i]}, {ar[i], at[i], an[i]});
        dop[i] = rows[i].doppler_hz;
    }

    const std::vector<double> jerk = central_diff(a_mag, dt);
    const std::vector<double> dop_rate = central_diff(dop, dt);
    const TcaResult tca = tca_features(range);
    for (size_t i = 0; i < n; ++i) {
        rows[i].jerk = jerk[i];
        rows[i].doppler_rate_hzs = dop_rate[i];
        rows[i].t_to_tca = tca.t_to_tca[i];
    }
    return rows;
}

}  // namespace proxsim::relmotion
