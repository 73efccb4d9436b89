//! Pirate attack simulation and the forgery probability formulas.
//!
//! The attack model: the pirate measures each position's angle carrier
//! `cosθ|0> + sinθ|1>` in the computational basis and re-prepares the
//! collapsed state — the best available move, since no information about θ
//! survives the collapse. A re-prepared position passes the issuer's
//! projective check onto the true carrier with probability
//! `1 - sin²(2θ)/2`, and a whole string passes with the product over
//! positions, which shrinks exponentially for generic angles.
//!
//! The attack harness recovers θ from the medium's state description to
//! set up carriers and checks; the pirate herself only ever sees
//! measurement outcomes.

use rand::Rng;

use crate::error::Result;
use crate::issuer::{amplitude_angle_state, make_key_string, Angle, QuantumMedium};
use crate::qsim::{Gate, StateVector};

/// Result of one measure-and-reprepare attack on a whole medium.
#[derive(Debug, Clone)]
pub struct AttackOutcome {
    /// The pirate's copy: collapsed data and hash qubits, key strings
    /// re-prepared at her basis-outcome angle estimates (0 or π/2).
    pub pirated_medium: QuantumMedium,
    /// Issuer's projective check of each re-prepared carrier.
    pub per_position_pass: Vec<bool>,
    pub passed_all: bool,
}

/// Probability that a fake carrier prepared at θ* projects onto the true
/// θ carrier: `cos²θ·cos²(θ-θ*) + sin²θ·sin²(θ+θ*)`.
pub fn fake_projection_prob(theta: Angle, theta_star: Angle) -> f64 {
    let t = theta.radians();
    let s = theta_star.radians();
    t.cos().powi(2) * (t - s).cos().powi(2) + t.sin().powi(2) * (t + s).sin().powi(2)
}

/// Best-case per-position copy probability, attained at θ* = 0 (leave the
/// collapsed state as measured): `1 - sin²(2θ)/2`.
pub fn optimal_copy_prob(theta: Angle) -> f64 {
    1.0 - 0.5 * (2.0 * theta.radians()).sin().powi(2)
}

/// Probability of copying all positions: product of the per-position
/// optima.
pub fn total_copy_prob(thetas: &[Angle]) -> f64 {
    thetas.iter().map(|&t| optimal_copy_prob(t)).product()
}

/// Unitary-clonability defect `|s - s²|` for `s = <ψ1|ψ2>`: zero exactly
/// when the pair is orthogonal or identical, positive otherwise — the
/// no-cloning obstruction for a single copying unitary.
pub fn cloning_defect(psi1: &StateVector, psi2: &StateVector) -> Result<f64> {
    let s = psi1.inner_product(psi2)?;
    Ok((s - s * s).norm())
}

/// Measure-and-reprepare attack on every position of a medium, plus the
/// issuer's projective verification of each re-prepared carrier.
pub fn measure_and_reprepare_attack<R: Rng + ?Sized>(
    medium: &QuantumMedium,
    rng: &mut R,
) -> Result<AttackOutcome> {
    let mut per_position_pass = Vec::with_capacity(medium.n);
    let mut pirated_keys = Vec::with_capacity(medium.n);

    for position in 0..medium.n {
        let theta = medium.key_angle(position)?;
        let carrier = amplitude_angle_state(theta);
        let measured = carrier.measure(0, rng)?;

        // Issuer's check: rotate the re-prepared state so the true carrier
        // maps to |0>, then measure; outcome 0 is a pass.
        let check = measured
            .post_state
            .apply(&Gate::rotation_xz(theta.radians())?, &[0])?
            .measure(0, rng)?;
        per_position_pass.push(check.bit == 0);

        // Outcome 0 collapses to |0> = carrier(0); outcome 1 to |1> = carrier(π/2).
        let estimate = if measured.bit == 0 {
            Angle::ZERO
        } else {
            Angle::new(std::f64::consts::FRAC_PI_2)?
        };
        pirated_keys.push(make_key_string(estimate, medium.l)?);
    }

    let pirated_data = medium
        .data_states
        .iter()
        .map(|state| Ok(state.measure(0, rng)?.post_state))
        .collect::<Result<Vec<_>>>()?;
    let pirated_hash = medium.hash_state.measure(0, rng)?.post_state;

    let passed_all = per_position_pass.iter().all(|&p| p);
    Ok(AttackOutcome {
        pirated_medium: QuantumMedium {
            n: medium.n,
            l: medium.l,
            data_states: pirated_data,
            key_states: pirated_keys,
            hash_state: pirated_hash,
            hash_input_state: medium.hash_input_state.clone(),
        },
        per_position_pass,
        passed_all,
    })
}
