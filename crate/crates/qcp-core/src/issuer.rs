//! Minting of quantum-protected media.
//!
//! The issuer draws a secret angle θ_i per plaintext bit, encrypts the bit
//! into a data qubit it can only be read back out of after an R_θ
//! correction, stores the decryption operation as the doubling-angle key
//! string |θ>⊗|2θ>⊗..⊗|2^{l-1}θ>, and records a single-qubit hash of the
//! whole key for later authentication.
//!
//! Bit-to-state mapping: the data qubit is `R_{-θ}·H|bit>`, so applying the
//! stored rotation R_θ followed by H and a computational-basis measurement
//! recovers the bit deterministically. Z-rotations act trivially on basis
//! states, so the encoding has to live on the equator; the Hadamard frame
//! is the canonical choice. The fixed hash-input qubit is |+> for the same
//! reason.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{Gate, StateVector};

/// Current version of the medium / secrets file schemas.
pub const FILE_VERSION: u32 = 1;

/// Key lengths outside this range are rejected at mint time.
pub const MAX_KEY_LENGTH: usize = 32;

/// An angle in radians, reduced to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn new(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::NonFiniteAngle(radians));
        }
        let mut reduced = radians.rem_euclid(TAU);
        if reduced >= TAU {
            reduced = 0.0;
        }
        Ok(Angle(reduced))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// `2θ mod 2π` — the next slot of a key string.
    pub fn doubled(self) -> Self {
        Angle::new(2.0 * self.0).expect("doubling a finite angle stays finite")
    }

    /// Uniform draw from `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Angle(rng.gen::<f64>() * TAU)
    }
}

/// Issuer-private record: the plaintext and the per-position secrets.
#[derive(Debug, Clone)]
pub struct IssuerSecrets {
    pub bits: Vec<u8>,
    pub thetas: Vec<Angle>,
    /// Key-string length per position.
    pub l: usize,
    /// Fixed verification qubit the hash chain starts from.
    pub hash_input_state: StateVector,
}

/// The publicly distributed object. Holds full quantum descriptions but no
/// angles; everything an honest reader or a pirate gets to touch.
#[derive(Debug, Clone)]
pub struct QuantumMedium {
    pub n: usize,
    pub l: usize,
    /// One encrypted single-qubit data state per position.
    pub data_states: Vec<StateVector>,
    /// Position i, slot j holds the phase state for angle 2^{j-1}·θ_i mod 2π.
    pub key_states: Vec<Vec<StateVector>>,
    /// Reference hash qubit R_{θ1}···R_{θn}|hash_input>.
    pub hash_state: StateVector,
    pub hash_input_state: StateVector,
}

/// Phase-encoded angle state `(e^{iθ/2}|0> + e^{-iθ/2}|1>)/√2`.
///
/// Equals `rotation_z(θ)` applied to `|+>`; this is the key carrier the
/// stored-rotation step consumes.
pub fn phase_key_state(theta: Angle) -> StateVector {
    let half = theta.radians() / 2.0;
    StateVector::from_amplitudes(vec![
        Complex64::from_polar(FRAC_1_SQRT_2, half),
        Complex64::from_polar(FRAC_1_SQRT_2, -half),
    ])
    .expect("phase states are unit norm")
}

/// Amplitude-encoded angle state `cosθ|0> + sinθ|1>` (the carrier the
/// measure-and-reprepare attack model works on).
pub fn amplitude_angle_state(theta: Angle) -> StateVector {
    let (s, c) = theta.radians().sin_cos();
    StateVector::from_amplitudes(vec![Complex64::new(c, 0.0), Complex64::new(s, 0.0)])
        .expect("amplitude states are unit norm")
}

/// Encrypt one classical bit under angle θ: `R_{-θ}·H|bit>`.
pub fn encode_data_qubit(bit: u8, theta: Angle) -> Result<StateVector> {
    if bit > 1 {
        return Err(Error::InvalidBit(bit));
    }
    let base = if bit == 0 {
        StateVector::ket0()
    } else {
        StateVector::ket1()
    };
    base.apply(&Gate::hadamard(), &[0])?
        .apply(&Gate::rotation_z(-theta.radians())?, &[0])
}

/// Key string for one position: slot j (1-based) is the phase state for
/// `2^{j-1}·θ mod 2π`.
pub fn make_key_string(theta: Angle, l: usize) -> Result<Vec<StateVector>> {
    if l == 0 {
        return Err(Error::EmptyKeyString);
    }
    if l > MAX_KEY_LENGTH {
        return Err(Error::BadKeyLength(l));
    }
    let mut slots = Vec::with_capacity(l);
    let mut angle = theta;
    for _ in 0..l {
        slots.push(phase_key_state(angle));
        angle = angle.doubled();
    }
    Ok(slots)
}

/// Reference hash: apply R_{θ_i} for i = 1..n, in order, to the fixed
/// hash-input qubit.
pub fn make_hash_state(secrets: &IssuerSecrets) -> StateVector {
    let mut state = secrets.hash_input_state.clone();
    for theta in &secrets.thetas {
        state = state
            .apply(
                &Gate::rotation_z(theta.radians()).expect("angles are finite"),
                &[0],
            )
            .expect("single-qubit rotation on a single-qubit state");
    }
    state
}

/// Mint a medium for `bits` with key length `l`. Angles are drawn
/// uniformly from `[0, 2π)`; deterministic given the rng stream.
pub fn mint_medium<R: Rng + ?Sized>(
    bits: &[u8],
    l: usize,
    rng: &mut R,
) -> Result<(QuantumMedium, IssuerSecrets)> {
    if bits.is_empty() {
        return Err(Error::EmptyPlaintext);
    }
    if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::InvalidBit(bad));
    }
    if l == 0 {
        return Err(Error::EmptyKeyString);
    }
    if l > MAX_KEY_LENGTH {
        return Err(Error::BadKeyLength(l));
    }

    let thetas: Vec<Angle> = bits.iter().map(|_| Angle::random(rng)).collect();
    let secrets = IssuerSecrets {
        bits: bits.to_vec(),
        thetas,
        l,
        hash_input_state: StateVector::plus(),
    };

    let data_states = secrets
        .bits
        .iter()
        .zip(&secrets.thetas)
        .map(|(&bit, &theta)| encode_data_qubit(bit, theta))
        .collect::<Result<Vec<_>>>()?;
    let key_states = secrets
        .thetas
        .iter()
        .map(|&theta| make_key_string(theta, l))
        .collect::<Result<Vec<_>>>()?;
    let hash_state = make_hash_state(&secrets);

    let medium = QuantumMedium {
        n: bits.len(),
        l,
        data_states,
        key_states,
        hash_state,
        hash_input_state: secrets.hash_input_state.clone(),
    };
    Ok((medium, secrets))
}

impl QuantumMedium {
    /// Structural and normalization checks; used after deserialization.
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.data_states.len() != self.n || self.key_states.len() != self.n {
            return Err(Error::InvalidMedium(format!(
                "expected {} positions, found {} data / {} key entries",
                self.n,
                self.data_states.len(),
                self.key_states.len()
            )));
        }
        if self.l == 0 || self.key_states.iter().any(|ks| ks.len() != self.l) {
            return Err(Error::InvalidMedium(format!(
                "every key string must have {} slots",
                self.l
            )));
        }
        let single_qubit_and_normalized = |s: &StateVector| -> bool {
            s.n_qubits() == 1 && (s.norm() - 1.0).abs() <= crate::qsim::NORM_TOL
        };
        let all_states = self
            .data_states
            .iter()
            .chain(self.key_states.iter().flatten())
            .chain([&self.hash_state, &self.hash_input_state]);
        for state in all_states {
            if !single_qubit_and_normalized(state) {
                return Err(Error::InvalidMedium(
                    "found a state that is not a normalized single qubit".into(),
                ));
            }
        }
        Ok(())
    }

    /// Recover the secret angle of position `i` from the slot-1 phase
    /// state. Simulation-harness introspection for attack experiments; a
    /// physical holder has no such readout.
    pub fn key_angle(&self, position: usize) -> Result<Angle> {
        let slot = self
            .key_states
            .get(position)
            .and_then(|ks| ks.first())
            .ok_or_else(|| Error::InvalidMedium(format!("no key slot at position {position}")))?;
        let a0 = slot.amp(0);
        let a1 = slot.amp(1);
        if (a0.norm() - FRAC_1_SQRT_2).abs() > 1e-9 || (a1.norm() - FRAC_1_SQRT_2).abs() > 1e-9 {
            return Err(Error::InvalidMedium(format!(
                "slot 1 of position {position} is not a phase state"
            )));
        }
        Angle::new(a0.arg() - a1.arg())
    }
}

// --- file schemas ---------------------------------------------------------

fn state_to_pairs(state: &StateVector) -> Vec<[f64; 2]> {
    state.amplitudes().iter().map(|a| [a.re, a.im]).collect()
}

fn state_from_pairs(pairs: &[[f64; 2]]) -> Result<StateVector> {
    StateVector::from_amplitudes(
        pairs
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect(),
    )
}

/// On-disk form of a [`QuantumMedium`]. Amplitudes round-trip bit-exactly.
#[derive(Debug, Serialize, Deserialize)]
pub struct MediumFile {
    pub version: u32,
    pub n: usize,
    pub l: usize,
    pub data: Vec<Vec<[f64; 2]>>,
    pub keys: Vec<Vec<Vec<[f64; 2]>>>,
    pub hash: Vec<[f64; 2]>,
    pub hash_input: Vec<[f64; 2]>,
}

impl From<&QuantumMedium> for MediumFile {
    fn from(medium: &QuantumMedium) -> Self {
        MediumFile {
            version: FILE_VERSION,
            n: medium.n,
            l: medium.l,
            data: medium.data_states.iter().map(state_to_pairs).collect(),
            keys: medium
                .key_states
                .iter()
                .map(|ks| ks.iter().map(state_to_pairs).collect())
                .collect(),
            hash: state_to_pairs(&medium.hash_state),
            hash_input: state_to_pairs(&medium.hash_input_state),
        }
    }
}

impl TryFrom<&MediumFile> for QuantumMedium {
    type Error = Error;

    fn try_from(file: &MediumFile) -> Result<QuantumMedium> {
        if file.version != FILE_VERSION {
            return Err(Error::UnsupportedVersion(file.version));
        }
        let medium = QuantumMedium {
            n: file.n,
            l: file.l,
            data_states: file
                .data
                .iter()
                .map(|p| state_from_pairs(p))
                .collect::<Result<_>>()?,
            key_states: file
                .keys
                .iter()
                .map(|ks| ks.iter().map(|p| state_from_pairs(p)).collect::<Result<_>>())
                .collect::<Result<_>>()?,
            hash_state: state_from_pairs(&file.hash)?,
            hash_input_state: state_from_pairs(&file.hash_input)?,
        };
        medium.validate()?;
        Ok(medium)
    }
}

/// On-disk form of [`IssuerSecrets`] (bits and angles only; the key length
/// lives in the medium file and the hash input is the fixed |+>).
#[derive(Debug, Serialize, Deserialize)]
pub struct SecretsFile {
    pub version: u32,
    pub bits: Vec<u8>,
    pub thetas: Vec<f64>,
}

impl From<&IssuerSecrets> for SecretsFile {
    fn from(secrets: &IssuerSecrets) -> Self {
        SecretsFile {
            version: FILE_VERSION,
            bits: secrets.bits.clone(),
            thetas: secrets.thetas.iter().map(|t| t.radians()).collect(),
        }
    }
}

impl SecretsFile {
    pub fn into_secrets(&self, l: usize) -> Result<IssuerSecrets> {
        if self.version != FILE_VERSION {
            return Err(Error::UnsupportedVersion(self.version));
        }
        if self.bits.len() != self.thetas.len() {
            return Err(Error::InvalidMedium(
                "secrets bits/thetas length mismatch".into(),
            ));
        }
        Ok(IssuerSecrets {
            bits: self.bits.clone(),
            thetas: self
                .thetas
                .iter()
                .map(|&t| Angle::new(t))
                .collect::<Result<_>>()?,
            l,
            hash_input_state: StateVector::plus(),
        })
    }
}

pub fn medium_to_json(medium: &QuantumMedium) -> Result<String> {
    Ok(serde_json::to_string_pretty(&MediumFile::from(medium))?)
}

pub fn medium_from_json(json: &str) -> Result<QuantumMedium> {
    let file: MediumFile = serde_json::from_str(json)?;
    QuantumMedium::try_from(&file)
}

pub fn secrets_to_json(secrets: &IssuerSecrets) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SecretsFile::from(secrets))?)
}

pub fn secrets_from_json(json: &str, l: usize) -> Result<IssuerSecrets> {
    let file: SecretsFile = serde_json::from_str(json)?;
    file.into_secrets(l)
}
