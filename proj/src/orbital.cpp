#include "orbital.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace proxsim {

const char* to_string(BehaviorClass c) {
    switch (c) {
        case BehaviorClass::Benign: return "benign";
        case BehaviorClass::Covert: return "covert";
        case BehaviorClass::Threatening: return "threatening";
    }
    return "?";
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Leo: return "leo";
        case Regime::Meo: return "meo";
        case Regime::Geo: return "geo";
    }
    return "?";
}

BehaviorClass behavior_from_string(const std::string& s) {
    if (s == "benign") return BehaviorClass::Benign;
    if (s == "covert") return BehaviorClass::Covert;
    if (s == "threatening") return BehaviorClass::Threatening;
    throw_invalid("unknown behavior class: " + s);
}

Regime regime_from_string(const std::string& s) {
    if (s == "leo") return Regime::Leo;
    if (s == "meo") return Regime::Meo;
    if (s == "geo") return Regime::Geo;
    throw_invalid("unknown orbit regime: " + s);
}

namespace orbital {

namespace {

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    return a < 0.0 ? a + kTwoPi : a;
}

void check_elliptic(const OrbitalElements& el) {
    require(el.eccentricity >= 0.0 && el.eccentricity < 1.0, ErrorKind::Invalid,
            "propagation requires a bound orbit (0 <= e < 1)");
    require(el.semi_major_axis > 0.0, ErrorKind::Invalid, "semi-major axis must be positive");
}

// Stumpff functions for the universal-variable solve.
void stumpff(double psi, double& c2, double& c3) {
    if (psi > 1e-6) {
        const double sq = std::sqrt(psi);
        c2 = (1.0 - std::cos(sq)) / psi;
        c3 = (sq - std::sin(sq)) / (psi * sq);
    } else if (psi < -1e-6) {
        const double sq = std::sqrt(-psi);
        c2 = (1.0 - std::cosh(sq)) / psi;
        c3 = (std::sinh(sq) - sq) / (-psi * sq);
    } else {
        c2 = 1.0 / 2.0 - psi / 24.0 + psi * psi / 720.0;
        c3 = 1.0 / 6.0 - psi / 120.0 + psi * psi / 5040.0;
    }
}

}  // namespace

double kepler_solve(double mean_anomaly, double eccentricity) {
    const double m = wrap_angle(mean_anomaly);
    double e_anom = eccentricity < 0.8 ? m : kPi;
    for (int it = 0; it < 64; ++it) {
        const double f = e_anom - eccentricity * std::sin(e_anom) - m;
        const double fp = 1.0 - eccentricity * std::cos(e_anom);
        const double step = f / fp;
        e_anom -= step;
        if (std::fabs(step) < 1e-12) break;
    }
    return e_anom;
}

StateVector elements_to_state(const OrbitalElements& el) {
    check_elliptic(el);
    const double a = el.semi_major_axis;
    const double e = el.eccentricity;
    const double nu = el.true_anomaly;
    const double p = a * (1.0 - e * e);
    const double r = p / (1.0 + e * std::cos(nu));

    // Perifocal frame, then 3-1-3 rotation into ECI.
    const Vec3 r_pf{r * std::cos(nu), r * std::sin(nu), 0.0};
    const double vs = std::sqrt(kMuEarth / p);
    const Vec3 v_pf{-vs * std::sin(nu), vs * (e + std::cos(nu)), 0.0};

    const double co = std::cos(el.raan), so = std::sin(el.raan);
    const double ci = std::cos(el.inclination), si = std::sin(el.inclination);
    const double cw = std::cos(el.arg_perigee), sw = std::sin(el.arg_perigee);

    const double r11 = co * cw - so * sw * ci, r12 = -co * sw - so * cw * ci;
    const double r21 = so * cw + co * sw * ci, r22 = -so * sw + co * cw * ci;
    const double r31 = sw * si, r32 = cw * si;

    auto rot = [&](const Vec3& v) {
        return Vec3{r11 * v.x + r12 * v.y, r21 * v.x + r22 * v.y, r31 * v.x + r32 * v.y};
    };
    return StateVector{el.epoch, rot(r_pf), rot(v_pf)};
}

StateVector propagate(const OrbitalElements& el, double t) {
    check_elliptic(el);
    const double a = el.semi_major_axis;
    const double e = el.eccentricity;
    const double n = std::sqrt(kMuEarth / (a * a * a));

    // Anomaly at epoch -> mean anomaly at t.
    const double nu0 = el.true_anomaly;
    const double e0 = 2.0 * std::atan2(std::sqrt(1.0 - e) * std::sin(nu0 / 2.0),
                                       std::sqrt(1.0 + e) * std::cos(nu0 / 2.0));
    const double m0 = e0 - e * std::sin(e0);
    const double m = m0 + n * (t - el.epoch);

    const double e_anom = kepler_solve(m, e);
    const double nu = 2.0 * std::atan2(std::sqrt(1.0 + e) * std::sin(e_anom / 2.0),
                                       std::sqrt(1.0 - e) * std::cos(e_anom / 2.0));

    OrbitalElements at_t = el;
    at_t.true_anomaly = wrap_angle(nu);
    at_t.epoch = t;
    return elements_to_state(at_t);
}

StateVector propagate_state(const StateVector& s0, double dt) {
    if (dt == 0.0) return s0;
    const double r0 = s0.position.norm();
    require(r0 > 0.0, ErrorKind::Invalid, "propagate_state: zero position");
    const double v0sq = s0.velocity.norm2();
    const double alpha = 2.0 / r0 - v0sq / kMuEarth;  // 1/a
    require(alpha > 0.0, ErrorKind::Invalid, "propagate_state: orbit is not bound");
    const double sqrt_mu = std::sqrt(kMuEarth);
    const double rdotv = dot(s0.position, s0.velocity);

    // Universal anomaly, Newton iteration (Vallado's KEPLER).
    double chi = sqrt_mu * dt * alpha;
    double r = r0;
    for (int it = 0; it < 128; ++it) {
        const double psi = chi * chi * alpha;
        double c2, c3;
        stumpff(psi, c2, c3);
        r = chi * chi * c2 + rdotv / sqrt_mu * chi * (1.0 - psi * c3) + r0 * (1.0 - psi * c2);
        const double f = sqrt_mu * dt - chi * chi * chi * c3 -
                         rdotv / sqrt_mu * chi * chi * c2 - r0 * chi * (1.0 - psi * c3);
        const double step = f / r;
        chi += step;
        if (std::fabs(step) <= 1e-12 * std::max(1.0, std::fabs(chi))) break;
    }

    const double psi = chi * chi * alpha;
    double c2, c3;
    stumpff(psi, c2, c3);
    const double f = 1.0 - chi * chi * c2 / r0;
    const double g = dt - chi * chi * chi * c3 / sqrt_mu;
    const double gdot = 1.0 - chi * chi * c2 / r;
    const double fdot = sqrt_mu / (r * r0) * chi * (psi * c3 - 1.0);

    StateVector out;
    out.t = s0.t + dt;
    out.position = f * s0.position + g * s0.velocity;
    out.velocity = fdot * s0.position + gdot * s0.velocity;
    return out;
}

StateVector apply_impulse(const StateVector& state, const ManeuverSpec& spec) {
    StateVector out = state;
    out.velocity += spec.delta_v;
    return out;
}

double specific_energy(const StateVector& s) {
    return 0.5 * s.velocity.norm2() - kMuEarth / s.position.norm();
}

double angular_momentum(const StateVector& s) { return cross(s.position, s.velocity).norm(); }

double sma_from_state(const StateVector& s) { return -kMuEarth / (2.0 * specific_energy(s)); }

double orbital_period(double semi_major_axis) {
    return kTwoPi * std::sqrt(semi_major_axis * semi_major_axis * semi_major_axis / kMuEarth);
}

OrbitSampler::OrbitSampler(const RegimeBand& leo, const RegimeBand& meo, const GeoBand& geo,
                           const OrbitalElements& target)
    : leo_(leo), meo_(meo), geo_(geo), target_(target) {
    require(leo_.alt_min < leo_.alt_max, ErrorKind::Config, "LEO band: alt_min >= alt_max");
    require(meo_.alt_min < meo_.alt_max, ErrorKind::Config, "MEO band: alt_min >= alt_max");
    require(leo_.alt_max < meo_.alt_min, ErrorKind::Config, "regime bands must be ordered LEO < MEO");
    require(kEarthRadius + meo_.alt_max < geo_.sma, ErrorKind::Config,
            "regime bands must be ordered MEO < GEO");
    require(geo_.proximity_window > 0.0, ErrorKind::Config, "GEO proximity window must be positive");
}

OrbitalElements OrbitSampler::sample_band(const RegimeBand& band, Rng& rng) const {
    OrbitalElements el;
    el.semi_major_axis = kEarthRadius + rng.uniform(band.alt_min, band.alt_max);
    // Keep perigee at least 150 km above the surface.
    const double e_cap = 1.0 - (kEarthRadius + 1.5e5) / el.semi_major_axis;
    el.eccentricity = rng.uniform(0.0, std::min(band.ecc_max, e_cap));
    el.inclination = rng.uniform(0.0, band.inc_max);
    el.raan = rng.uniform(0.0, kTwoPi);
    el.arg_perigee = rng.uniform(0.0, kTwoPi);
    el.true_anomaly = rng.uniform(0.0, kTwoPi);
    el.epoch = 0.0;
    return el;
}

OrbitalElements OrbitSampler::sample_geo(Rng& rng) const {
    // Bounded offsets from the target in element space. Component caps keep the
    // initial separation strictly inside the proximity window.
    const double w = geo_.proximity_window;
    const double a_t = geo_.sma;

    const double sign = rng.u01() < 0.5 ? -1.0 : 1.0;
    const double along = sign * rng.uniform(geo_.min_along_frac, geo_.max_along_frac) * w;
    const double radial = rng.uniform(-1.0, 1.0) * geo_.radial_frac * w;
    const double cross_amp = rng.uniform(0.0, geo_.cross_frac * w);

    OrbitalElements el;
    el.semi_major_axis = a_t + radial;
    el.eccentricity = rng.uniform(0.0, geo_.ecc_max);
    el.inclination = cross_amp / a_t;
    el.raan = rng.uniform(0.0, kTwoPi);
    el.arg_perigee = rng.uniform(0.0, kTwoPi);
    // Match mean longitudes up to the along-track offset (small e, small i).
    const double lon_target = wrap_angle(target_.raan + target_.arg_perigee + target_.true_anomaly);
    const double lon = lon_target + along / a_t;
    el.true_anomaly = wrap_angle(lon - el.raan - el.arg_perigee);
    el.epoch = 0.0;
    return el;
}

OrbitalElements OrbitSampler::sample_orbit(Regime regime, BehaviorClass /*cls*/, Rng& rng) const {
    switch (regime) {
        case Regime::Leo: return sample_band(leo_, rng);
        case Regime::Meo: return sample_band(meo_, rng);
        case Regime::Geo: return sample_geo(rng);
    }
    throw_internal("unreachable regime");
}

ManeuverSpec OrbitSampler::sample_maneuver(const DvPrior& prior, double t_burn,
                                           const StateVector& attacker, const StateVector& target,
                                           Rng& rng) const {
    const double mag = rng.uniform(prior.dv_min, prior.dv_max);
    Vec3 dir;
    if (prior.los_bias <= 0.0) {
        dir = rng.unit_vector();
    } else {
        // cos(alpha) drawn so that the density is proportional to
        // ((1 + cos a)/2)^k around the line of sight; k = 0 is isotropic.
        const Vec3 axis = normalized(target.position - attacker.position);
        const double u = rng.u01();
        const double cos_a = 2.0 * std::pow(u, 1.0 / (prior.los_bias + 1.0)) - 1.0;
        const double sin_a = std::sqrt(std::max(0.0, 1.0 - cos_a * cos_a));
        const double phi = rng.uniform(0.0, kTwoPi);
        // Orthonormal frame around the axis.
        const Vec3 helper = std::fabs(axis.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        const Vec3 e1 = normalized(cross(axis, helper));
        const Vec3 e2 = cross(axis, e1);
        dir = axis * cos_a + (e1 * std::cos(phi) + e2 * std::sin(phi)) * sin_a;
    }
    return ManeuverSpec{t_burn, dir * mag};
}

}  // namespace orbital
}  // namespace proxsim
