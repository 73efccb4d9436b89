//! Hash-state generation from key states and controlled-SWAP verification.
//!
//! The holder rebuilds the single-qubit hash by running the stored-rotation
//! cascade of every position against the fixed hash-input qubit, then the
//! verifier compares it with the medium's reference hash through a SWAP
//! test: outcome 0 with probability 1/2 + |<ψ|φ>|²/2, so equal states never
//! yield 1. A single test has false-accept probability at least 1/2, so
//! verification repeats m times and accepts only on all zeros.
//!
//! Each repetition consumes a fresh generated hash (the reference is
//! re-preparable in simulation). The holder sees her own cascade
//! transcript, so she submits only hashes whose generation reported
//! success; that postselection is what makes a genuine medium pass with
//! certainty and a fake key with per-position error Δ pass with exactly
//! (1/2 + cos²(nΔ/2)/2)^m.

use rand::Rng;

use crate::error::{Error, Result};
use crate::issuer::QuantumMedium;
use crate::qsim::{Gate, StateVector};
use crate::reader::decrypt_cascade;

/// Hash regenerations allowed per repetition before giving up (the chance
/// of needing anywhere near this many is negligible for sane n, l).
pub const MAX_HASH_GENERATION_ATTEMPTS: usize = 4096;

/// One controlled-SWAP comparison.
#[derive(Debug, Clone, Copy)]
pub struct SwapTestResult {
    /// Measured ancilla bit; 0 means "looks equal".
    pub outcome: u8,
    /// Closed-form Pr[0] = 1/2 + |<ψ|φ>|²/2 for the compared pair.
    pub analytic_p0: f64,
}

/// Verdict of a repeated SWAP-test verification.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerificationVerdict {
    pub accepted: bool,
    pub tests_run: usize,
    pub first_rejection_index: Option<usize>,
}

/// Rebuild the hash qubit by cascading every position's key string onto
/// `hash_input`, in order. Returns the final qubit and whether every
/// position's cascade succeeded; on full success the state equals the
/// issuer's reference hash (up to a global phase).
pub fn generate_hash<R: Rng + ?Sized>(
    key_strings: &[Vec<StateVector>],
    hash_input: &StateVector,
    rng: &mut R,
) -> Result<(StateVector, bool)> {
    let mut state = hash_input.clone();
    let mut all_succeeded = true;
    for key_string in key_strings {
        let result = decrypt_cascade(&state, key_string, rng)?;
        all_succeeded &= result.success;
        state = result.final_state;
    }
    Ok((state, all_succeeded))
}

/// SWAP test between two single-qubit states: ancilla-H, controlled-SWAP,
/// ancilla-H, measure the ancilla.
pub fn swap_test<R: Rng + ?Sized>(
    phi: &StateVector,
    psi: &StateVector,
    rng: &mut R,
) -> Result<SwapTestResult> {
    if phi.n_qubits() != 1 || psi.n_qubits() != 1 {
        return Err(Error::DimensionMismatch(phi.len(), psi.len()));
    }
    let analytic_p0 = 0.5 + 0.5 * phi.inner_product(psi)?.norm_sqr();

    let register = StateVector::ket0()
        .tensor(phi)?
        .tensor(psi)?
        .apply(&Gate::hadamard(), &[0])?
        .apply(&Gate::cswap(), &[0, 1, 2])?
        .apply(&Gate::hadamard(), &[0])?;
    debug_assert!(
        (register.branch_probability(0, 0)? - analytic_p0).abs() < 1e-12,
        "ancilla circuit drifted from the closed form"
    );
    let outcome = register.measure(0, rng)?;
    Ok(SwapTestResult {
        outcome: outcome.bit,
        analytic_p0,
    })
}

/// Run `repetitions` SWAP tests of freshly generated hashes against the
/// medium's stored hash; accept iff every outcome is 0.
pub fn verify_medium<R: Rng + ?Sized>(
    medium: &QuantumMedium,
    repetitions: usize,
    rng: &mut R,
) -> Result<VerificationVerdict> {
    if repetitions == 0 {
        return Err(Error::ZeroCount {
            name: "repetitions",
        });
    }
    for rep in 0..repetitions {
        let Some(hash) = generate_valid_hash(medium, rng)? else {
            // The holder could not produce a transcript-valid hash at all.
            return Ok(VerificationVerdict {
                accepted: false,
                tests_run: rep,
                first_rejection_index: Some(rep),
            });
        };
        let result = swap_test(&hash, &medium.hash_state, rng)?;
        if result.outcome == 1 {
            return Ok(VerificationVerdict {
                accepted: false,
                tests_run: rep + 1,
                first_rejection_index: Some(rep),
            });
        }
    }
    Ok(VerificationVerdict {
        accepted: true,
        tests_run: repetitions,
        first_rejection_index: None,
    })
}

/// Regenerate until the holder's own transcript reports success.
fn generate_valid_hash<R: Rng + ?Sized>(
    medium: &QuantumMedium,
    rng: &mut R,
) -> Result<Option<StateVector>> {
    for _ in 0..MAX_HASH_GENERATION_ATTEMPTS {
        let (state, ok) = generate_hash(&medium.key_states, &medium.hash_input_state, rng)?;
        if ok {
            return Ok(Some(state));
        }
    }
    Ok(None)
}
