//! The reader side: classical readout, the stored-rotation step, the
//! doubling-angle correction cascade, and one-step full decryption.
//!
//! A stored-rotation step entangles the data qubit (control) with one key
//! qubit (target) through a CNOT and measures the key register: outcome 0
//! leaves the data qubit rotated by +θ, outcome 1 by -θ. A failed step is
//! repaired by the next slot's doubled angle, so after j-1 failures slot j
//! still lands exactly on R_θ; every step is a fair coin, which puts the
//! cascade's success probability at 1 - (1/2)^l.
//!
//! The conditioning of later steps on earlier failures is tracked
//! classically here (branch on the measured key bit) instead of keeping an
//! ancilla-controlled coherent circuit; the two are distributionally
//! identical, and the coherent variant is checked against this one in the
//! test suite.

use rand::Rng;

use crate::error::{Error, Result};
use crate::issuer::{phase_key_state, Angle, QuantumMedium};
use crate::qsim::{Gate, StateVector};

/// Outcome record of one correction cascade.
#[derive(Debug, Clone)]
pub struct CascadeResult {
    /// Data qubit after the last executed step.
    pub final_state: StateVector,
    /// Steps executed (≤ key-string length; retries stop at first success).
    pub attempts_used: usize,
    /// True iff some step measured the right branch.
    pub success: bool,
    /// Measured key bits, one per executed step.
    pub outcome_transcript: Vec<u8>,
}

/// Per-position report of a full-medium decryption run.
#[derive(Debug, Clone)]
pub struct TrialReport {
    pub position: usize,
    pub cascade: CascadeResult,
    /// Present iff the cascade succeeded.
    pub decoded_bit: Option<u8>,
}

/// Pre-measurement two-qubit state of the stored-rotation step:
/// `CNOT(|d> ⊗ |key>)` with the data qubit as control.
pub fn stored_rotation_joint(data: &StateVector, key: &StateVector) -> Result<StateVector> {
    if data.n_qubits() != 1 {
        return Err(Error::DimensionMismatch(data.len(), 2));
    }
    if key.n_qubits() != 1 {
        return Err(Error::DimensionMismatch(key.len(), 2));
    }
    data.tensor(key)?.apply(&Gate::cnot(), &[0, 1])
}

/// One stored-rotation step: build the joint state, measure the key
/// register, and return the collapsed data qubit with the measured bit.
/// Outcome 0 applies R_θ to the data, outcome 1 applies R_θ†; each occurs
/// with probability 1/2 when the key is a phase state.
pub fn stored_rotation_step<R: Rng + ?Sized>(
    data: &StateVector,
    key: &StateVector,
    rng: &mut R,
) -> Result<(StateVector, u8)> {
    let joint = stored_rotation_joint(data, key)?;
    let outcome = joint.measure(1, rng)?;
    let collapsed = outcome.post_state.factor_out(1, outcome.bit)?;
    Ok((collapsed, outcome.bit))
}

/// Run the correction cascade over a doubling-angle key string. Attempt j
/// consumes slot j; the first right-branch measurement ends the cascade.
pub fn decrypt_cascade<R: Rng + ?Sized>(
    data: &StateVector,
    key_string: &[StateVector],
    rng: &mut R,
) -> Result<CascadeResult> {
    if key_string.is_empty() {
        return Err(Error::EmptyKeyString);
    }
    let mut state = data.clone();
    let mut transcript = Vec::with_capacity(key_string.len());
    for key in key_string {
        let (next, bit) = stored_rotation_step(&state, key, rng)?;
        state = next;
        transcript.push(bit);
        if bit == 0 {
            return Ok(CascadeResult {
                final_state: state,
                attempts_used: transcript.len(),
                success: true,
                outcome_transcript: transcript,
            });
        }
    }
    Ok(CascadeResult {
        final_state: state,
        attempts_used: transcript.len(),
        success: false,
        outcome_transcript: transcript,
    })
}

/// Cascade with an unbounded key supply: slot j's phase state is prepared
/// on demand at angle 2^{j-1}·θ until a step succeeds or `max_attempts`
/// runs out. Attempt counts are geometric with mean 2.
pub fn cascade_unlimited<R: Rng + ?Sized>(
    data: &StateVector,
    theta: Angle,
    max_attempts: usize,
    rng: &mut R,
) -> Result<CascadeResult> {
    if max_attempts == 0 {
        return Err(Error::ZeroCount {
            name: "max_attempts",
        });
    }
    let mut state = data.clone();
    let mut transcript = Vec::new();
    let mut angle = theta;
    for _ in 0..max_attempts {
        let key = phase_key_state(angle);
        let (next, bit) = stored_rotation_step(&state, &key, rng)?;
        state = next;
        transcript.push(bit);
        if bit == 0 {
            return Ok(CascadeResult {
                final_state: state,
                attempts_used: transcript.len(),
                success: true,
                outcome_transcript: transcript,
            });
        }
        angle = angle.doubled();
    }
    Ok(CascadeResult {
        final_state: state,
        attempts_used: transcript.len(),
        success: false,
        outcome_transcript: transcript,
    })
}

/// Hadamard-frame decode of a decrypted data qubit: H, then measure.
pub fn decode_bit<R: Rng + ?Sized>(state: &StateVector, rng: &mut R) -> Result<u8> {
    let rotated = state.apply(&Gate::hadamard(), &[0])?;
    Ok(rotated.measure(0, rng)?.bit)
}

/// Decrypt every position of a medium: run the cascade with that
/// position's key string and, on success, decode the bit.
pub fn decrypt_all<R: Rng + ?Sized>(
    medium: &QuantumMedium,
    rng: &mut R,
) -> Result<Vec<TrialReport>> {
    let mut reports = Vec::with_capacity(medium.n);
    for position in 0..medium.n {
        let cascade = decrypt_cascade(
            &medium.data_states[position],
            &medium.key_states[position],
            rng,
        )?;
        let decoded_bit = if cascade.success {
            Some(decode_bit(&cascade.final_state, rng)?)
        } else {
            None
        };
        reports.push(TrialReport {
            position,
            cascade,
            decoded_bit,
        });
    }
    Ok(reports)
}

/// Plain computational-basis readout of the data qubits, no decryption:
/// the "classical layer" anyone can see, garbage without the angles.
pub fn read_classical<R: Rng + ?Sized>(medium: &QuantumMedium, rng: &mut R) -> Result<Vec<u8>> {
    medium
        .data_states
        .iter()
        .map(|state| Ok(state.measure(0, rng)?.bit))
        .collect()
}
