// Copyright 2026 The refocus developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Dense statevector over at most four qubits.
//!
//! Qubit 0 is the leftmost position in ket notation and therefore the most
//! significant bit of the amplitude index: for three qubits the basis state
//! `|q0 q1 q2>` lives at index `q0*4 + q1*2 + q2`. Gates return nothing and
//! mutate the owned vector in place; callers that need both branches of a
//! measurement clone first. States are compared through overlaps, never
//! componentwise, so gate sequences are free to accumulate global phases.

use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// Largest register the dense representation supports.
pub const MAX_QUBITS: usize = 4;

/// Tolerance for exact-algebra checks (norm preservation, branch
/// completeness).
pub const EXACT_TOL: f64 = 1e-12;

/// One of the three Pauli operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];
}

impl std::fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PauliAxis::X => write!(f, "X"),
            PauliAxis::Y => write!(f, "Y"),
            PauliAxis::Z => write!(f, "Z"),
        }
    }
}

/// Outcome of sampling a Z measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureSample {
    /// Measured bit, 0 or 1.
    pub outcome: u8,
    /// Born probability of the branch that was taken.
    pub probability: f64,
}

/// Dense complex amplitude vector over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// The all-zeros computational basis state `|0...0>`.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Computational basis state described by a bitstring, e.g. `"110"` for
    /// `|110>`. The first character is qubit 0 (the leftmost ket position).
    pub fn basis_state(num_qubits: usize, bits: &str) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        if bits.len() != num_qubits {
            return Err(Error::BitstringLength {
                expected: num_qubits,
                got: bits.len(),
            });
        }
        let mut index = 0usize;
        for ch in bits.chars() {
            index <<= 1;
            match ch {
                '0' => {}
                '1' => index |= 1,
                other => return Err(Error::BitstringChar(other)),
            }
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Builds a state from raw amplitudes in computational-basis order.
    /// The length must be `2^n` for `n` in `[1, 4]`. No normalization is
    /// applied.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let num_qubits = match amps.len() {
            2 => 1,
            4 => 2,
            8 => 3,
            16 => 4,
            other => return Err(Error::InvalidAmplitudeCount(other)),
        };
        Ok(Self { num_qubits, amps })
    }

    /// Single-qubit `(|0> + |1>)/sqrt(2)`.
    pub fn plus_one_qubit() -> Self {
        Self {
            num_qubits: 1,
            amps: vec![
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(FRAC_1_SQRT_2, 0.0),
            ],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Rescales to unit norm. Errors on a vanishing vector.
    pub fn normalize(&mut self) -> Result<()> {
        let n2 = self.norm_sqr();
        if n2 < 1e-300 {
            return Err(Error::ZeroNormBranch(n2));
        }
        let inv = 1.0 / n2.sqrt();
        for a in &mut self.amps {
            *a *= inv;
        }
        Ok(())
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch(self.num_qubits, other.num_qubits));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self (x) other`; `self`'s qubits become the leading
    /// (leftmost) positions.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let num_qubits = self.num_qubits + other.num_qubits;
        check_qubit_count(num_qubits)?;
        let mut amps = Vec::with_capacity(1 << num_qubits);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(Self { num_qubits, amps })
    }

    /// Places a two-qubit state onto qubits `(first, second)` of a fresh
    /// `num_qubits` register, all other qubits in `|0>`. `first` carries the
    /// pair's leftmost ket position.
    pub fn embed_pair(
        pair: &Statevector,
        num_qubits: usize,
        first: usize,
        second: usize,
    ) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        if pair.num_qubits != 2 {
            return Err(Error::DimensionMismatch(pair.num_qubits, 2));
        }
        if first == second {
            return Err(Error::DuplicateQubit(first));
        }
        for q in [first, second] {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    num_qubits,
                });
            }
        }
        let s_first = stride(num_qubits, first);
        let s_second = stride(num_qubits, second);
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        for sub in 0..4usize {
            let hi = (sub >> 1) & 1;
            let lo = sub & 1;
            let idx = hi * s_first + lo * s_second;
            amps[idx] = pair.amps[sub];
        }
        Ok(Self { num_qubits, amps })
    }

    /// Applies `exp(-i * angle * sigma_axis)` on one qubit.
    pub fn apply_rotation(&mut self, qubit: usize, axis: PauliAxis, angle: f64) -> Result<()> {
        let s = self.check_qubit(qubit)?;
        let (c, sn) = (angle.cos(), angle.sin());
        let zero = Complex64::new(0.0, 0.0);
        let (u00, u01, u10, u11) = match axis {
            PauliAxis::X => (
                Complex64::new(c, 0.0),
                Complex64::new(0.0, -sn),
                Complex64::new(0.0, -sn),
                Complex64::new(c, 0.0),
            ),
            PauliAxis::Y => (
                Complex64::new(c, 0.0),
                Complex64::new(-sn, 0.0),
                Complex64::new(sn, 0.0),
                Complex64::new(c, 0.0),
            ),
            PauliAxis::Z => (Complex64::new(c, -sn), zero, zero, Complex64::new(c, sn)),
        };
        for i in 0..self.amps.len() {
            if i & s == 0 {
                let j = i | s;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = u00 * a + u01 * b;
                self.amps[j] = u10 * a + u11 * b;
            }
        }
        Ok(())
    }

    /// Applies the entangling gate `exp(-i (pi/4 + epsilon) X (x) X)` on
    /// `(q1, q2)`. `epsilon` is the amplitude error of this particular pulse.
    pub fn apply_ms(&mut self, q1: usize, q2: usize, epsilon: f64) -> Result<()> {
        let s1 = self.check_qubit(q1)?;
        let s2 = self.check_qubit(q2)?;
        if q1 == q2 {
            return Err(Error::DuplicateQubit(q1));
        }
        let theta = PI / 4.0 + epsilon;
        let c = Complex64::new(theta.cos(), 0.0);
        let msin = Complex64::new(0.0, -theta.sin());
        let mask = s1 | s2;
        for i in 0..self.amps.len() {
            let j = i ^ mask;
            if i < j {
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = c * a + msin * b;
                self.amps[j] = c * b + msin * a;
            }
        }
        Ok(())
    }

    /// Applies a single Pauli operator exactly.
    pub fn apply_pauli(&mut self, qubit: usize, axis: PauliAxis) -> Result<()> {
        let s = self.check_qubit(qubit)?;
        match axis {
            PauliAxis::X => {
                for i in 0..self.amps.len() {
                    if i & s == 0 {
                        self.amps.swap(i, i | s);
                    }
                }
            }
            PauliAxis::Y => {
                let im = Complex64::new(0.0, 1.0);
                for i in 0..self.amps.len() {
                    if i & s == 0 {
                        let j = i | s;
                        let a0 = self.amps[i];
                        let a1 = self.amps[j];
                        // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
                        self.amps[i] = -im * a1;
                        self.amps[j] = im * a0;
                    }
                }
            }
            PauliAxis::Z => {
                for i in 0..self.amps.len() {
                    if i & s != 0 {
                        self.amps[i] = -self.amps[i];
                    }
                }
            }
        }
        Ok(())
    }

    /// Probability of reading 1 on a Z measurement of `qubit`.
    pub fn probability_one(&self, qubit: usize) -> Result<f64> {
        let s = self.check_qubit(qubit)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & s != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Both unnormalized projection branches of a Z measurement. The squared
    /// norms of the branches sum to the squared norm of the input.
    pub fn branch_z(&self, qubit: usize) -> Result<(Statevector, Statevector)> {
        let s = self.check_qubit(qubit)?;
        let mut b0 = self.clone();
        let mut b1 = self.clone();
        for i in 0..self.amps.len() {
            if i & s == 0 {
                b1.amps[i] = Complex64::new(0.0, 0.0);
            } else {
                b0.amps[i] = Complex64::new(0.0, 0.0);
            }
        }
        Ok((b0, b1))
    }

    /// Samples a Z measurement of `qubit` with the Born rule, collapsing and
    /// renormalizing in place.
    pub fn sample_measure_z(&mut self, qubit: usize, rng: &mut impl Rng) -> Result<MeasureSample> {
        if !self.is_normalized(1e-9) {
            return Err(Error::NotNormalized(self.norm_sqr()));
        }
        let p1 = self.probability_one(qubit)?;
        let outcome = u8::from(rng.gen::<f64>() < p1);
        let probability = self.collapse_z(qubit, outcome)?;
        Ok(MeasureSample {
            outcome,
            probability,
        })
    }

    /// Projects `qubit` onto `bit` and renormalizes; returns the weight of the
    /// removed projection complement's counterpart, i.e. the probability of
    /// the kept branch.
    pub fn collapse_z(&mut self, qubit: usize, bit: u8) -> Result<f64> {
        let s = self.check_qubit(qubit)?;
        let keep_one = bit == 1;
        let mut kept = 0.0f64;
        for i in 0..self.amps.len() {
            if (i & s != 0) == keep_one {
                kept += self.amps[i].norm_sqr();
            } else {
                self.amps[i] = Complex64::new(0.0, 0.0);
            }
        }
        if kept < 1e-300 {
            return Err(Error::ZeroNormBranch(kept));
        }
        let inv = 1.0 / kept.sqrt();
        for a in &mut self.amps {
            *a *= inv;
        }
        Ok(kept)
    }

    /// Extracts the reduced register after the listed qubits have collapsed to
    /// definite bits. The remaining qubits keep their relative order. The
    /// returned vector is not renormalized.
    pub fn restricted_to(&self, fixed: &[(usize, u8)]) -> Result<Statevector> {
        let mut fixed_mask = 0usize;
        let mut fixed_bits = 0usize;
        for &(q, b) in fixed {
            let s = self.check_qubit(q)?;
            if fixed_mask & s != 0 {
                return Err(Error::DuplicateQubit(q));
            }
            fixed_mask |= s;
            if b != 0 {
                fixed_bits |= s;
            }
        }
        let kept = self.num_qubits - fixed.len();
        check_qubit_count(kept)?;
        let mut amps = Vec::with_capacity(1 << kept);
        let kept_strides: Vec<usize> = (0..self.num_qubits)
            .map(|q| stride(self.num_qubits, q))
            .filter(|s| fixed_mask & s == 0)
            .collect();
        for sub in 0..(1usize << kept) {
            let mut idx = fixed_bits;
            for (pos, s) in kept_strides.iter().enumerate() {
                if sub & (1 << (kept - 1 - pos)) != 0 {
                    idx |= s;
                }
            }
            amps.push(self.amps[idx]);
        }
        Ok(Statevector {
            num_qubits: kept,
            amps,
        })
    }

    fn check_qubit(&self, qubit: usize) -> Result<usize> {
        if qubit >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        Ok(stride(self.num_qubits, qubit))
    }
}

fn check_qubit_count(num_qubits: usize) -> Result<()> {
    if !(1..=MAX_QUBITS).contains(&num_qubits) {
        return Err(Error::QubitCountOutOfRange(num_qubits));
    }
    Ok(())
}

/// Index stride of a qubit: qubit 0 is the most significant bit.
fn stride(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

/// Haar-random pure state, drawn as a normalized vector of standard complex
/// Gaussians.
pub fn haar_random_state(num_qubits: usize, rng: &mut impl Rng) -> Result<Statevector> {
    check_qubit_count(num_qubits)?;
    let mut amps = Vec::with_capacity(1 << num_qubits);
    for _ in 0..(1 << num_qubits) {
        let (re, im) = normal_pair(rng);
        amps.push(Complex64::new(re, im));
    }
    let mut sv = Statevector {
        num_qubits,
        amps,
    };
    sv.normalize()?;
    Ok(sv)
}

/// Box-Muller pair of independent standard normals.
fn normal_pair(rng: &mut impl Rng) -> (f64, f64) {
    let mut u1: f64 = rng.gen();
    while u1 <= f64::MIN_POSITIVE {
        u1 = rng.gen();
    }
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * PI * u2;
    (r * theta.cos(), r * theta.sin())
}
