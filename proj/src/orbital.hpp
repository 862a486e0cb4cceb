#pragma once

#include <cstdint>

#include "core/constants.hpp"
#include "core/rng.hpp"
#include "core/vec3.hpp"

namespace proxsim {

enum class BehaviorClass { Benign = 0, Covert = 1, Threatening = 2 };
enum class Regime { Leo = 0, Meo = 1, Geo = 2 };

const char* to_string(BehaviorClass c);
const char* to_string(Regime r);
BehaviorClass behavior_from_string(const std::string& s);
Regime regime_from_string(const std::string& s);

namespace orbital {

/// Classical elements; angles in radians, normalized to [0, 2pi).
/// true_anomaly is the anomaly at `epoch` (seconds since scenario start).
struct OrbitalElements {
    double semi_major_axis = 0.0;  // m
    double eccentricity = 0.0;     // [0, 1)
    double inclination = 0.0;
    double raan = 0.0;
    double arg_perigee = 0.0;
    double true_anomaly = 0.0;
    double epoch = 0.0;            // s
};

/// ECI position/velocity at time t.
struct StateVector {
    double t = 0.0;   // s
    Vec3 position;    // m
    Vec3 velocity;    // m/s
};

/// The single impulsive burn of a scenario.
struct ManeuverSpec {
    double t_burn = 0.0;  // s, inside the scenario horizon
    Vec3 delta_v;         // m/s, ECI
};

/// Altitude band plus shape/orientation spread for LEO/MEO sampling.
struct RegimeBand {
    double alt_min = 0.0;  // m above kEarthRadius
    double alt_max = 0.0;
    double ecc_max = 0.0;
    double inc_max = 0.0;  // rad
};

/// GEO attacker placement: bounded offsets from the target so the initial
/// range stays inside `proximity_window`.
struct GeoBand {
    double sma = 42164169.0;          // m, target semi-major axis
    double proximity_window = 1.0e6;  // m
    double min_along_frac = 0.05;     // along-track offset as window fraction
    double max_along_frac = 0.8;
    double radial_frac = 0.05;
    double cross_frac = 0.1;
    double ecc_max = 2.0e-4;
};

/// Magnitude range and line-of-sight bias for the class-conditional burn.
struct DvPrior {
    double dv_min = 0.0;    // m/s
    double dv_max = 0.0;
    double los_bias = 0.0;  // cos-weight exponent toward the target (0 = isotropic)
};

/// Solves Kepler's equation M = E - e sin E for E (Newton, |dE| < 1e-12 rad).
double kepler_solve(double mean_anomaly, double eccentricity);

/// State on the conic at the element epoch.
StateVector elements_to_state(const OrbitalElements& el);

/// Two-body propagation from elements to absolute time t (eccentric-anomaly solve).
StateVector propagate(const OrbitalElements& el, double t);

/// Two-body propagation from an arbitrary state by dt seconds
/// (universal-variable formulation with Lagrange f and g coefficients).
StateVector propagate_state(const StateVector& s0, double dt);

/// Instantaneous burn: position unchanged, velocity += delta_v.
StateVector apply_impulse(const StateVector& state, const ManeuverSpec& spec);

double specific_energy(const StateVector& s);
double angular_momentum(const StateVector& s);
double sma_from_state(const StateVector& s);
double orbital_period(double semi_major_axis);

/// Randomized orbit instantiation for each regime. The fixed GEO target
/// elements are needed to place GEO-regime attackers inside the proximity
/// window. Deterministic for a given RNG state.
class OrbitSampler {
public:
    OrbitSampler(const RegimeBand& leo, const RegimeBand& meo, const GeoBand& geo,
                 const OrbitalElements& target);

    /// Behavior class does not shape the orbit itself (only the burn priors do),
    /// but is part of the sampling contract.
    OrbitalElements sample_orbit(Regime regime, BehaviorClass cls, Rng& rng) const;

    /// Burn at t_burn with magnitude from the class prior and direction biased
    /// toward the target line of sight by prior.los_bias.
    ManeuverSpec sample_maneuver(const DvPrior& prior, double t_burn,
                                 const StateVector& attacker, const StateVector& target,
                                 Rng& rng) const;

    const OrbitalElements& target() const { return target_; }

private:
    OrbitalElements sample_band(const RegimeBand& band, Rng& rng) const;
    OrbitalElements sample_geo(Rng& rng) const;

    RegimeBand leo_;
    RegimeBand meo_;
    GeoBand geo_;
    OrbitalElements target_;
};

}  // namespace orbital
}  // namespace proxsim
