//! Propulsion power and per-leg energy accounting.
//!
//! The analytic model keeps the blade-profile term as `3 v² / U_tip`
//! (not the more common `3 v² / U_tip²`) and wraps the induced term in a
//! square root; both are evaluated exactly as written. The experiments use
//! the constant model.

use thiserror::Error;

use crate::scenario::PowerModel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnergyError {
    #[error("speed must be positive, got {0} m/s")]
    InvalidSpeed(f64),
    #[error("power model undefined at v = {v} m/s: induced-power radicand {radicand} < 0")]
    ModelDomain { v: f64, radicand: f64 },
}

/// Propulsion power at horizontal speed `v`, watts.
pub fn propulsion_power(v: f64, model: &PowerModel) -> Result<f64, EnergyError> {
    if !(v >= 0.0) {
        return Err(EnergyError::InvalidSpeed(v));
    }
    match *model {
        PowerModel::Constant {
            flight_power,
            hover_power,
        } => Ok(if v > 0.0 { flight_power } else { hover_power }),
        PowerModel::Analytic {
            blade_profile_power,
            induced_power,
            tip_speed,
            hover_induced_speed,
            body_drag_ratio,
            rotor_solidity,
            air_density,
            rotor_disk_area,
        } => {
            let v2 = v * v;
            let v0_2 = hover_induced_speed * hover_induced_speed;
            let radicand = 1.0 + v2 / (4.0 * v0_2) - (v2 / (2.0 * v0_2)).sqrt();
            if !(radicand >= 0.0) {
                return Err(EnergyError::ModelDomain { v, radicand });
            }
            let blade = blade_profile_power * (1.0 + 3.0 * v2 / tip_speed);
            let induced = induced_power * radicand.sqrt();
            let parasite =
                0.5 * rotor_disk_area * body_drag_ratio * air_density * rotor_solidity * v2 * v;
            Ok(blade + induced + parasite)
        }
    }
}

/// Energy for flying `travel_dist` at speed `v` and then hovering `hover_time`.
pub fn leg_energy(
    travel_dist: f64,
    v: f64,
    hover_time: f64,
    model: &PowerModel,
) -> Result<f64, EnergyError> {
    if !(v > 0.0) {
        return Err(EnergyError::InvalidSpeed(v));
    }
    let fly = propulsion_power(v, model)? * (travel_dist / v);
    let hover = propulsion_power(0.0, model)? * hover_time;
    Ok(fly + hover)
}

/// Time to fly back over the take-off distance `d0`.
pub fn return_time(d0: f64, v: f64) -> f64 {
    d0 / v
}

/// Energy to fly back over `d0`; no hover on the way home.
pub fn return_energy(d0: f64, v: f64, model: &PowerModel) -> Result<f64, EnergyError> {
    if !(v > 0.0) {
        return Err(EnergyError::InvalidSpeed(v));
    }
    Ok(propulsion_power(v, model)? * return_time(d0, v))
}

/// A leg is affordable if the UAV can still get home afterwards (inclusive).
pub fn energy_feasible(leg: f64, ret: f64, remaining: f64) -> bool {
    leg <= remaining - ret
}
