//! Requester-to-UAV link model and the SINR quality gate.
//!
//! The reference-distance gain is `4π / (λ √G)`, used exactly in that form.
//! For typical wavelengths it is larger than one (it amplifies rather than
//! attenuates relative to a Friis budget), so `sinr_threshold` is a
//! calibration knob in linear units rather than a physical dB target.

use std::f64::consts::PI;

use thiserror::Error;

use crate::scenario::ChannelParams;

/// Distance at which the reference gain is defined; shorter links are clamped to it.
pub const REFERENCE_DISTANCE_M: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ChannelError {
    #[error("link distance {0} m is not positive; clamp to the reference distance first")]
    SingularDistance(f64),
}

/// Clamp a link distance to the reference distance.
pub fn clamp_distance(d: f64) -> f64 {
    d.max(REFERENCE_DISTANCE_M)
}

/// Channel power gain at distance `d` with antenna coefficient `g`.
pub fn path_gain_with(d: f64, wavelength: f64, g: f64) -> Result<f64, ChannelError> {
    if !(d > 0.0) {
        return Err(ChannelError::SingularDistance(d));
    }
    Ok(4.0 * PI / (wavelength * g.sqrt()) / (d * d))
}

pub fn path_gain(d: f64, channel: &ChannelParams) -> Result<f64, ChannelError> {
    path_gain_with(d, channel.wavelength, channel.antenna_orientation_coeff)
}

/// SINR for a requester transmitting `p_tx` watts at distance `d`.
pub fn sinr(p_tx: f64, d: f64, channel: &ChannelParams) -> Result<f64, ChannelError> {
    sinr_with(
        p_tx,
        d,
        channel,
        channel.antenna_orientation_coeff,
        channel.interference,
    )
}

/// SINR with an explicit antenna coefficient and interference power.
pub fn sinr_with(
    p_tx: f64,
    d: f64,
    channel: &ChannelParams,
    g: f64,
    interference: f64,
) -> Result<f64, ChannelError> {
    let gain = path_gain_with(d, channel.wavelength, g)?;
    Ok(p_tx * gain / (interference + channel.noise_power))
}

/// Inclusive SINR gate.
pub fn sinr_feasible(sinr: f64, threshold: f64) -> bool {
    sinr >= threshold
}

/// Largest distance at which the SINR still meets the threshold.
pub fn feasibility_radius(p_tx: f64, channel: &ChannelParams) -> f64 {
    let g = channel.antenna_orientation_coeff;
    (p_tx * 4.0 * PI
        / (channel.wavelength
            * g.sqrt()
            * channel.sinr_threshold
            * (channel.interference + channel.noise_power)))
        .sqrt()
}
