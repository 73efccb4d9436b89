//! Exact complex statevector simulation: states, gates, tensor products,
//! inner products, and projective measurement.
//!
//! Qubit-index convention: qubit 0 is the **most significant bit** of the
//! basis-state index, so for an n-qubit register the bit of qubit `q` in
//! basis index `i` is `(i >> (n - 1 - q)) & 1`, and `|q0 q1 .. q_{n-1}>`
//! has index `q0·2^{n-1} + .. + q_{n-1}`. `tensor` and `apply` enforce this
//! ordering; states are renormalized only inside `measure`.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// A single complex probability amplitude.
pub type Amplitude = Complex64;

/// Largest register the simulator will allocate (2^20 amplitudes).
pub const MAX_QUBITS: usize = 20;

/// Unit-norm drift allowed before a state counts as degenerate.
pub const NORM_TOL: f64 = 1e-10;

/// Entrywise tolerance for the U†U = I check.
pub const UNITARITY_TOL: f64 = 1e-12;

/// Normalized register of 2^n complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// Computational basis state `|index>` on `n_qubits` qubits.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(n_qubits));
        }
        let len = 1usize << n_qubits;
        if index >= len {
            return Err(Error::QubitOutOfRange {
                qubit: index,
                n_qubits,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Single-qubit `|0>`.
    pub fn ket0() -> Self {
        Self::basis(1, 0).expect("1-qubit basis state")
    }

    /// Single-qubit `|1>`.
    pub fn ket1() -> Self {
        Self::basis(1, 1).expect("1-qubit basis state")
    }

    /// Single-qubit `|+> = (|0> + |1>)/sqrt(2)`.
    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_amplitudes(vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)])
            .expect("normalized by construction")
    }

    /// Single-qubit `|-> = (|0> - |1>)/sqrt(2)`.
    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_amplitudes(vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)])
            .expect("normalized by construction")
    }

    /// Build a state from raw amplitudes; the vector must be a power-of-two
    /// length, finite, and unit-norm within [`NORM_TOL`].
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadAmplitudeCount(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(n_qubits));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::DegenerateNorm(f64::NAN));
        }
        let state = StateVector { n_qubits, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::DegenerateNorm(norm));
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Amplitude {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Kronecker product `self ⊗ other`; `self`'s qubits become the
    /// high-order qubits of the result.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n_qubits = self.n_qubits + other.n_qubits;
        if n_qubits > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(n_qubits));
        }
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { n_qubits, amps })
    }

    /// `<self|other> = Σ self_i* · other_i`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Amplitude> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch(self.amps.len(), other.amps.len()));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Apply `gate` to the listed target qubits, returning the new state.
    /// `targets[k]` carries bit `arity-1-k` of the gate's local index.
    pub fn apply(&self, gate: &Gate, targets: &[usize]) -> Result<StateVector> {
        let arity = gate.arity();
        let bad = targets.len() != arity
            || targets.iter().any(|&q| q >= self.n_qubits)
            || targets
                .iter()
                .enumerate()
                .any(|(k, &q)| targets[..k].contains(&q));
        if bad {
            return Err(Error::BadTargets {
                arity,
                targets: targets.to_vec(),
            });
        }

        let dim = gate.dim();
        let shifts: Vec<usize> = targets.iter().map(|&q| self.n_qubits - 1 - q).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (i, slot) in out.iter_mut().enumerate() {
            let mut row = 0usize;
            for (k, &sh) in shifts.iter().enumerate() {
                row |= ((i >> sh) & 1) << (arity - 1 - k);
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for col in 0..dim {
                let mut j = i;
                for (k, &sh) in shifts.iter().enumerate() {
                    let bit = (col >> (arity - 1 - k)) & 1;
                    j = (j & !(1usize << sh)) | (bit << sh);
                }
                acc += gate.entry(row, col) * self.amps[j];
            }
            *slot = acc;
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amps: out,
        })
    }

    /// Squared-amplitude mass of the `bit` branch of `qubit`.
    pub fn branch_probability(&self, qubit: usize, bit: u8) -> Result<f64> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        if bit > 1 {
            return Err(Error::InvalidBit(bit));
        }
        let sh = self.n_qubits - 1 - qubit;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| ((i >> sh) & 1) as u8 == bit)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Project `qubit` onto `bit` and renormalize; returns the branch
    /// probability alongside the post-measurement state.
    pub fn project(&self, qubit: usize, bit: u8) -> Result<(f64, StateVector)> {
        let prob = self.branch_probability(qubit, bit)?;
        if prob <= 0.0 {
            return Err(Error::ImpossibleBranch { qubit, bit });
        }
        let sh = self.n_qubits - 1 - qubit;
        let scale = 1.0 / prob.sqrt();
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if ((i >> sh) & 1) as u8 == bit {
                    a * scale
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Ok((
            prob,
            StateVector {
                n_qubits: self.n_qubits,
                amps,
            },
        ))
    }

    /// Born-rule measurement of one qubit in the computational basis.
    /// Deterministic given the rng stream: one uniform draw per call.
    pub fn measure<R: Rng + ?Sized>(&self, qubit: usize, rng: &mut R) -> Result<MeasurementOutcome> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::DegenerateNorm(norm));
        }
        let p_one = self.branch_probability(qubit, 1)?;
        let bit = u8::from(rng.gen::<f64>() < p_one);
        let (probability, post_state) = self.project(qubit, bit)?;
        Ok(MeasurementOutcome {
            bit,
            probability,
            post_state,
        })
    }

    /// Drop a qubit that is already in the definite basis state `bit`
    /// (e.g. after measuring it), shrinking the register by one qubit.
    pub fn factor_out(&self, qubit: usize, bit: u8) -> Result<StateVector> {
        if self.n_qubits < 2 {
            return Err(Error::RegisterTooLarge(0));
        }
        let other = self.branch_probability(qubit, 1 - bit)?;
        if other > NORM_TOL {
            return Err(Error::ImpossibleBranch {
                qubit,
                bit: 1 - bit,
            });
        }
        let sh = self.n_qubits - 1 - qubit;
        let low_mask = (1usize << sh) - 1;
        let mut amps = Vec::with_capacity(self.amps.len() / 2);
        for i in 0..self.amps.len() / 2 {
            let full = ((i & !low_mask) << 1) | ((bit as usize) << sh) | (i & low_mask);
            amps.push(self.amps[full]);
        }
        Ok(StateVector {
            n_qubits: self.n_qubits - 1,
            amps,
        })
    }

    /// Entrywise comparison within `tol`.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.amps.len() == other.amps.len()
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Comparison up to a global phase: true when some unit phase factor
    /// aligns every amplitude within `tol`.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        if self.amps.len() != other.amps.len() {
            return false;
        }
        let pivot = self
            .amps
            .iter()
            .zip(&other.amps)
            .find(|(a, b)| a.norm() > 1e-6 && b.norm() > 1e-6);
        let phase = match pivot {
            Some((a, b)) => {
                let ratio = b / a;
                ratio / ratio.norm()
            }
            None => Complex64::new(1.0, 0.0),
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .all(|(a, b)| (a * phase - b).norm() <= tol)
    }
}

/// Outcome of a single projective measurement.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    /// Measured bit.
    pub bit: u8,
    /// Squared-amplitude mass of the measured branch.
    pub probability: f64,
    /// Renormalized post-measurement state (same register size).
    pub post_state: StateVector,
}

/// Unitary acting on 1, 2 or 3 qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    arity: usize,
    matrix: Vec<Amplitude>,
}

impl Gate {
    fn from_rows(arity: usize, rows: Vec<Vec<Amplitude>>) -> Self {
        let dim = 1usize << arity;
        debug_assert_eq!(rows.len(), dim);
        let mut matrix = Vec::with_capacity(dim * dim);
        for row in rows {
            debug_assert_eq!(row.len(), dim);
            matrix.extend(row);
        }
        Gate { arity, matrix }
    }

    /// Real permutation-style constructor: 1.0 at `(r, cols[r])`, 0 elsewhere.
    fn permutation(arity: usize, cols: &[usize]) -> Self {
        let dim = 1usize << arity;
        let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (r, &c) in cols.iter().enumerate() {
            matrix[r * dim + c] = Complex64::new(1.0, 0.0);
        }
        Gate { arity, matrix }
    }

    /// Single-qubit identity.
    pub fn identity() -> Self {
        Gate::permutation(1, &[0, 1])
    }

    /// Hadamard.
    pub fn hadamard() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Gate::from_rows(1, vec![vec![h, h], vec![h, -h]])
    }

    /// Real rotation in the XZ plane: `[[cosθ, sinθ], [-sinθ, cosθ]]`.
    pub fn rotation_xz(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFiniteAngle(theta));
        }
        let (s, c) = theta.sin_cos();
        let re = |x: f64| Complex64::new(x, 0.0);
        Ok(Gate::from_rows(
            1,
            vec![vec![re(c), re(s)], vec![re(-s), re(c)]],
        ))
    }

    /// Rotation about the z axis: `diag(e^{iθ/2}, e^{-iθ/2})`.
    pub fn rotation_z(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFiniteAngle(theta));
        }
        let zero = Complex64::new(0.0, 0.0);
        Ok(Gate::from_rows(
            1,
            vec![
                vec![Complex64::from_polar(1.0, theta / 2.0), zero],
                vec![zero, Complex64::from_polar(1.0, -theta / 2.0)],
            ],
        ))
    }

    /// Controlled-NOT, control on the first (higher-order) qubit.
    pub fn cnot() -> Self {
        Gate::permutation(2, &[0, 1, 3, 2])
    }

    /// Toffoli: flips the third qubit when both controls are 1.
    pub fn toffoli() -> Self {
        Gate::permutation(3, &[0, 1, 2, 3, 4, 5, 7, 6])
    }

    /// Controlled-SWAP: exchanges the last two qubits when the first is 1.
    pub fn cswap() -> Self {
        Gate::permutation(3, &[0, 1, 2, 3, 4, 6, 5, 7])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Matrix dimension, `2^arity`.
    pub fn dim(&self) -> usize {
        1usize << self.arity
    }

    pub fn entry(&self, row: usize, col: usize) -> Amplitude {
        self.matrix[row * self.dim() + col]
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Gate {
        let dim = self.dim();
        let mut matrix = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                matrix.push(self.entry(c, r).conj());
            }
        }
        Gate {
            arity: self.arity,
            matrix,
        }
    }

    /// Entrywise U†U = I check within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let dim = self.dim();
        for r in 0..dim {
            for c in 0..dim {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..dim {
                    acc += self.entry(k, r).conj() * self.entry(k, c);
                }
                let expect = if r == c { 1.0 } else { 0.0 };
                if (acc - Complex64::new(expect, 0.0)).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::master_rng;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI, TAU};

    /// Naive dense matrix product, kept independent of `Gate` internals.
    fn mat_mul(a: &Gate, b: &Gate) -> Vec<Amplitude> {
        let dim = a.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                for k in 0..dim {
                    out[r * dim + c] += a.entry(r, k) * b.entry(k, c);
                }
            }
        }
        out
    }

    fn gates_close(lhs: &Gate, entries: &[Amplitude], tol: f64) -> bool {
        lhs.matrix.iter().zip(entries).all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Deterministic pseudo-random single-qubit state for grid tests.
    fn random_qubit(rng: &mut impl Rng) -> StateVector {
        let a = rng.gen::<f64>() * TAU;
        let b = rng.gen::<f64>() * TAU;
        let c = rng.gen::<f64>();
        let r0 = c.sqrt();
        let r1 = (1.0 - c).sqrt();
        StateVector::from_amplitudes(vec![
            Complex64::from_polar(r0, a),
            Complex64::from_polar(r1, b),
        ])
        .unwrap()
    }

    #[test]
    fn rotation_xz_identity_at_zero() {
        let g = Gate::rotation_xz(0.0).unwrap();
        assert!(gates_close(&g, &Gate::identity().matrix, 0.0));
    }

    #[test]
    fn rotation_xz_quarter_turn() {
        let g = Gate::rotation_xz(FRAC_PI_2).unwrap();
        let expect = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        assert!(gates_close(&g, &expect, 1e-15));
    }

    #[test]
    fn rotation_xz_composition_adds_angles() {
        let mut rng = master_rng(11);
        for _ in 0..100 {
            let a = rng.gen::<f64>() * TAU;
            let b = rng.gen::<f64>() * TAU;
            let product = mat_mul(
                &Gate::rotation_xz(a).unwrap(),
                &Gate::rotation_xz(b).unwrap(),
            );
            let direct = Gate::rotation_xz(a + b).unwrap();
            assert!(gates_close(&direct, &product, 1e-12));
        }
    }

    #[test]
    fn rotation_rejects_non_finite() {
        assert!(Gate::rotation_xz(f64::NAN).is_err());
        assert!(Gate::rotation_xz(f64::INFINITY).is_err());
        assert!(Gate::rotation_z(f64::NAN).is_err());
        assert!(Gate::rotation_z(f64::NEG_INFINITY).is_err());
    }

    #[test]
    fn rotation_z_identity_at_zero() {
        let g = Gate::rotation_z(0.0).unwrap();
        assert!(gates_close(&g, &Gate::identity().matrix, 0.0));
    }

    #[test]
    fn rotation_z_full_turn_is_minus_identity() {
        // Oracle: direct evaluation of the exponential at ±π.
        let g = Gate::rotation_z(TAU).unwrap();
        let expect = [
            Complex64::from_polar(1.0, PI),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, -PI),
        ];
        assert!(gates_close(&g, &expect, 1e-15));
        assert!((g.entry(0, 0) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        assert!((g.entry(1, 1) - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rotation_z_composition_doubles_angle() {
        let mut rng = master_rng(12);
        for _ in 0..100 {
            let theta = rng.gen::<f64>() * TAU;
            let g = Gate::rotation_z(theta).unwrap();
            let squared = mat_mul(&g, &g);
            let direct = Gate::rotation_z(2.0 * theta).unwrap();
            assert!(gates_close(&direct, &squared, 1e-12));
        }
    }

    #[test]
    fn rotation_z_dagger_negates_angle() {
        let theta = 1.234;
        let dag = Gate::rotation_z(theta).unwrap().dagger();
        let neg = Gate::rotation_z(-theta).unwrap();
        assert!(gates_close(&neg, &dag.matrix, 1e-15));
    }

    #[test]
    fn cnot_defining_action() {
        let s10 = StateVector::basis(2, 0b10).unwrap();
        let out = s10.apply(&Gate::cnot(), &[0, 1]).unwrap();
        assert!(out.approx_eq(&StateVector::basis(2, 0b11).unwrap(), 0.0));

        let s00 = StateVector::basis(2, 0b00).unwrap();
        let out = s00.apply(&Gate::cnot(), &[0, 1]).unwrap();
        assert!(out.approx_eq(&s00, 0.0));
    }

    #[test]
    fn toffoli_defining_action() {
        let s110 = StateVector::basis(3, 0b110).unwrap();
        let out = s110.apply(&Gate::toffoli(), &[0, 1, 2]).unwrap();
        assert!(out.approx_eq(&StateVector::basis(3, 0b111).unwrap(), 0.0));

        let s100 = StateVector::basis(3, 0b100).unwrap();
        let out = s100.apply(&Gate::toffoli(), &[0, 1, 2]).unwrap();
        assert!(out.approx_eq(&s100, 0.0));
    }

    #[test]
    fn cswap_defining_action() {
        for a in 0..2usize {
            for b in 0..2usize {
                let idx = 0b100 | (a << 1) | b;
                let swapped = 0b100 | (b << 1) | a;
                let out = StateVector::basis(3, idx)
                    .unwrap()
                    .apply(&Gate::cswap(), &[0, 1, 2])
                    .unwrap();
                assert!(out.approx_eq(&StateVector::basis(3, swapped).unwrap(), 0.0));

                // Control 0: inert.
                let idx = (a << 1) | b;
                let out = StateVector::basis(3, idx)
                    .unwrap()
                    .apply(&Gate::cswap(), &[0, 1, 2])
                    .unwrap();
                assert!(out.approx_eq(&StateVector::basis(3, idx).unwrap(), 0.0));
            }
        }
    }

    #[test]
    fn constructors_are_unitary_and_permutations_self_inverse() {
        for gate in [
            Gate::identity(),
            Gate::hadamard(),
            Gate::cnot(),
            Gate::toffoli(),
            Gate::cswap(),
            Gate::rotation_xz(0.7).unwrap(),
            Gate::rotation_z(2.9).unwrap(),
        ] {
            assert!(gate.is_unitary(UNITARITY_TOL));
        }
        for gate in [Gate::cnot(), Gate::toffoli(), Gate::cswap()] {
            let square = mat_mul(&gate, &gate);
            let dim = gate.dim();
            for r in 0..dim {
                for c in 0..dim {
                    let expect = if r == c { 1.0 } else { 0.0 };
                    assert!((square[r * dim + c] - Complex64::new(expect, 0.0)).norm() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn tensor_basis_cases() {
        let s01 = StateVector::ket0().tensor(&StateVector::ket1()).unwrap();
        assert!(s01.approx_eq(&StateVector::basis(2, 0b01).unwrap(), 0.0));

        let plus0 = StateVector::plus().tensor(&StateVector::ket0()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((plus0.amp(0b00).re - h).abs() < 1e-15);
        assert!((plus0.amp(0b10).re - h).abs() < 1e-15);
        assert!(plus0.amp(0b01).norm() < 1e-15);
        assert!(plus0.amp(0b11).norm() < 1e-15);
    }

    #[test]
    fn tensor_respects_register_cap() {
        let mut state = StateVector::ket0();
        for _ in 0..MAX_QUBITS - 1 {
            state = state.tensor(&StateVector::ket0()).unwrap();
        }
        assert_eq!(state.n_qubits(), MAX_QUBITS);
        assert!(matches!(
            state.tensor(&StateVector::ket0()),
            Err(Error::RegisterTooLarge(_))
        ));
    }

    #[test]
    fn inner_product_cases() {
        let zero = StateVector::ket0();
        let one = StateVector::ket1();
        assert!(zero.inner_product(&one).unwrap().norm() < 1e-15);
        assert!((zero.inner_product(&zero).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        // Componentwise oracle on random coefficient pairs.
        let mut rng = master_rng(13);
        for _ in 0..50 {
            let phi = random_qubit(&mut rng);
            let psi = random_qubit(&mut rng);
            let expect = phi.amp(0).conj() * psi.amp(0) + phi.amp(1).conj() * psi.amp(1);
            assert!((phi.inner_product(&psi).unwrap() - expect).norm() < 1e-15);
            // Conjugate symmetry.
            let flipped = psi.inner_product(&phi).unwrap();
            assert!((flipped.conj() - expect).norm() < 1e-15);
        }

        let two = StateVector::basis(2, 0).unwrap();
        assert!(zero.inner_product(&two).is_err());
    }

    #[test]
    fn apply_identity_and_bad_targets() {
        let s = StateVector::ket0();
        assert!(s.apply(&Gate::identity(), &[0]).unwrap().approx_eq(&s, 0.0));
        assert!(s.apply(&Gate::identity(), &[1]).is_err());
        assert!(s.apply(&Gate::cnot(), &[0]).is_err());
        let two = StateVector::basis(2, 0).unwrap();
        assert!(two.apply(&Gate::cnot(), &[1, 1]).is_err());
    }

    #[test]
    fn apply_on_reversed_targets() {
        // CNOT with control on qubit 1: |01> -> |11>.
        let s = StateVector::basis(2, 0b01).unwrap();
        let out = s.apply(&Gate::cnot(), &[1, 0]).unwrap();
        assert!(out.approx_eq(&StateVector::basis(2, 0b11).unwrap(), 0.0));
    }

    #[test]
    fn apply_preserves_inner_products() {
        let mut rng = master_rng(14);
        let gates = [
            Gate::hadamard(),
            Gate::rotation_z(1.4).unwrap(),
            Gate::rotation_xz(0.9).unwrap(),
        ];
        for gate in &gates {
            for _ in 0..30 {
                let a = random_qubit(&mut rng).tensor(&random_qubit(&mut rng)).unwrap();
                let b = random_qubit(&mut rng).tensor(&random_qubit(&mut rng)).unwrap();
                let before = a.inner_product(&b).unwrap();
                let after = a
                    .apply(gate, &[1])
                    .unwrap()
                    .inner_product(&b.apply(gate, &[1]).unwrap())
                    .unwrap();
                assert!((before - after).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn apply_preserves_norm() {
        let mut rng = master_rng(15);
        for _ in 0..50 {
            let s = random_qubit(&mut rng).tensor(&random_qubit(&mut rng)).unwrap();
            let out = s.apply(&Gate::cnot(), &[0, 1]).unwrap();
            assert!((out.norm() - 1.0).abs() < NORM_TOL);
        }
    }

    #[test]
    fn measure_basis_state_is_deterministic() {
        let mut rng = master_rng(16);
        for _ in 0..20 {
            let out = StateVector::ket0().measure(0, &mut rng).unwrap();
            assert_eq!(out.bit, 0);
            assert!((out.probability - 1.0).abs() < 1e-15);
            assert!(out.post_state.approx_eq(&StateVector::ket0(), 1e-15));
        }
    }

    #[test]
    fn measure_plus_is_balanced() {
        let trials = 100_000u64;
        let mut rng = master_rng(17);
        let mut zeros = 0u64;
        for _ in 0..trials {
            if StateVector::plus().measure(0, &mut rng).unwrap().bit == 0 {
                zeros += 1;
            }
        }
        let p_hat = zeros as f64 / trials as f64;
        let tol = 3.0 * (0.25 / trials as f64).sqrt();
        assert!((p_hat - 0.5).abs() < tol, "p_hat = {p_hat}");
    }

    #[test]
    fn measure_matches_sin_squared() {
        // Pr[1] = sin²(π/6) = 0.25, evaluated numerically as the oracle.
        let p1 = FRAC_PI_6.sin().powi(2);
        let state = StateVector::from_amplitudes(vec![
            Complex64::new(FRAC_PI_6.cos(), 0.0),
            Complex64::new(FRAC_PI_6.sin(), 0.0),
        ])
        .unwrap();
        let trials = 100_000u64;
        let mut rng = master_rng(18);
        let ones = (0..trials)
            .filter(|_| state.measure(0, &mut rng).unwrap().bit == 1)
            .count() as f64;
        let p_hat = ones / trials as f64;
        let tol = 3.0 * (p1 * (1.0 - p1) / trials as f64).sqrt();
        assert!((p_hat - p1).abs() < tol, "p_hat = {p_hat}, expect {p1}");
    }

    #[test]
    fn measure_frequencies_pass_chi_square() {
        // Two-bin chi-square against |amplitude|² at 10^5 samples.
        let state = random_qubit(&mut master_rng(19));
        let p1 = state.amp(1).norm_sqr();
        let trials = 100_000u64;
        let mut rng = master_rng(20);
        let ones = (0..trials)
            .filter(|_| state.measure(0, &mut rng).unwrap().bit == 1)
            .count() as f64;
        let zeros = trials as f64 - ones;
        let e1 = trials as f64 * p1;
        let e0 = trials as f64 - e1;
        let chi2 = (ones - e1).powi(2) / e1 + (zeros - e0).powi(2) / e0;
        // df = 1; 9.0 corresponds to the 3σ two-sided level.
        assert!(chi2 < 9.0, "chi2 = {chi2}");
    }

    #[test]
    fn measure_post_state_is_projected_branch() {
        let mut rng = master_rng(21);
        let bell = StateVector::basis(2, 0)
            .unwrap()
            .apply(&Gate::hadamard(), &[0])
            .unwrap()
            .apply(&Gate::cnot(), &[0, 1])
            .unwrap();
        let out = bell.measure(0, &mut rng).unwrap();
        assert!((out.probability - 0.5).abs() < 1e-12);
        let expected = StateVector::basis(2, if out.bit == 0 { 0b00 } else { 0b11 }).unwrap();
        assert!(out.post_state.approx_eq(&expected, 1e-12));
        // The partner qubit is now perfectly correlated.
        let second = out.post_state.measure(1, &mut rng).unwrap();
        assert_eq!(second.bit, out.bit);
    }

    #[test]
    fn measure_is_reproducible_per_seed() {
        let state = random_qubit(&mut master_rng(22));
        let run = |seed: u64| -> Vec<u8> {
            let mut rng = master_rng(seed);
            (0..64).map(|_| state.measure(0, &mut rng).unwrap().bit).collect()
        };
        assert_eq!(run(77), run(77));
        assert_ne!(run(77), run(78));
    }

    #[test]
    fn degenerate_norm_is_rejected() {
        assert!(StateVector::from_amplitudes(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0)
        ])
        .is_err());
        assert!(StateVector::from_amplitudes(vec![
            Complex64::new(f64::NAN, 0.0),
            Complex64::new(0.0, 0.0)
        ])
        .is_err());
    }

    #[test]
    fn factor_out_extracts_remaining_register() {
        let joint = StateVector::plus().tensor(&StateVector::ket1()).unwrap();
        let rest = joint.factor_out(1, 1).unwrap();
        assert!(rest.approx_eq(&StateVector::plus(), 1e-15));
        assert!(joint.factor_out(1, 0).is_err());
        // Factoring the high qubit keeps the low one.
        let joint = StateVector::ket1().tensor(&StateVector::minus()).unwrap();
        let rest = joint.factor_out(0, 1).unwrap();
        assert!(rest.approx_eq(&StateVector::minus(), 1e-15));
    }

    #[test]
    fn project_zero_branch_errors() {
        assert!(StateVector::ket0().project(0, 1).is_err());
        let (p, state) = StateVector::plus().project(0, 1).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!(state.approx_eq(&StateVector::basis(1, 1).unwrap(), 1e-15));
    }

    proptest! {
        #[test]
        fn tensor_of_normalized_states_is_normalized(sa in 0u64..1_000_000, sb in 0u64..1_000_000) {
            let a = random_qubit(&mut master_rng(sa));
            let b = random_qubit(&mut master_rng(sb ^ 0xdead_beef));
            let t = a.tensor(&b).unwrap();
            prop_assert!((t.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn rotation_groups_compose(a in 0.0..TAU, b in 0.0..TAU) {
            for ctor in [Gate::rotation_xz as fn(f64) -> Result<Gate>, Gate::rotation_z] {
                let left = ctor(a).unwrap();
                let right = ctor(b).unwrap();
                let composed = ctor(a + b).unwrap();
                let dim = left.dim();
                let mut product = vec![Complex64::new(0.0, 0.0); dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        for k in 0..dim {
                            product[r * dim + c] += left.entry(r, k) * right.entry(k, c);
                        }
                    }
                }
                for r in 0..dim {
                    for c in 0..dim {
                        prop_assert!((composed.entry(r, c) - product[r * dim + c]).norm() < 1e-12);
                    }
                }
            }
        }

        #[test]
        fn constructed_rotations_stay_unitary(theta in -10.0 * TAU..10.0 * TAU) {
            prop_assert!(Gate::rotation_xz(theta).unwrap().is_unitary(UNITARITY_TOL));
            prop_assert!(Gate::rotation_z(theta).unwrap().is_unitary(UNITARITY_TOL));
        }
    }
}
