#![allow(dead_code)] // shared by several test targets; not every target uses every helper

//! Brute-force matrix oracle shared by the integration tests.
//!
//! Everything here is built from explicit Kronecker products and a power
//! series matrix exponential, deliberately independent of the statevector
//! implementation under test.

use num_complex::Complex64;
use refocus_core::statevector::{PauliAxis, Statevector};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone)]
pub struct CMat {
    pub dim: usize,
    pub a: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            a: vec![c(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, c(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.dim + j] = v;
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        let mut out = CMat::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let aik = self.get(i, k);
                if aik == c(0.0, 0.0) {
                    continue;
                }
                for j in 0..self.dim {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn kron(&self, other: &CMat) -> CMat {
        let dim = self.dim * other.dim;
        let mut out = CMat::zeros(dim);
        for i1 in 0..self.dim {
            for j1 in 0..self.dim {
                for i2 in 0..other.dim {
                    for j2 in 0..other.dim {
                        out.set(
                            i1 * other.dim + i2,
                            j1 * other.dim + j2,
                            self.get(i1, j1) * other.get(i2, j2),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> CMat {
        let mut out = CMat::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat {
            dim: self.dim,
            a: self.a.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &CMat) -> CMat {
        assert_eq!(self.dim, other.dim);
        CMat {
            dim: self.dim,
            a: self
                .a
                .iter()
                .zip(&other.a)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        self.add(&other.scale(c(-1.0, 0.0)))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

pub fn pauli_matrix(axis: PauliAxis) -> CMat {
    match axis {
        PauliAxis::X => CMat::from_rows(&[&[c(0.0, 0.0), c(1.0, 0.0)], &[c(1.0, 0.0), c(0.0, 0.0)]]),
        PauliAxis::Y => CMat::from_rows(&[&[c(0.0, 0.0), c(0.0, -1.0)], &[c(0.0, 1.0), c(0.0, 0.0)]]),
        PauliAxis::Z => CMat::from_rows(&[&[c(1.0, 0.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(-1.0, 0.0)]]),
    }
}

/// Power-series matrix exponential; fine for the modest norms used here.
pub fn expm(m: &CMat) -> CMat {
    let mut result = CMat::identity(m.dim);
    let mut term = CMat::identity(m.dim);
    for k in 1..=60 {
        term = term.mul(m).scale(c(1.0 / k as f64, 0.0));
        result = result.add(&term);
        if term.frobenius_norm() < 1e-18 {
            break;
        }
    }
    result
}

/// `exp(-i angle sigma_axis)` from the series, not from cos/sin shortcuts.
pub fn rotation_matrix(axis: PauliAxis, angle: f64) -> CMat {
    expm(&pauli_matrix(axis).scale(c(0.0, -angle)))
}

/// `exp(-i (pi/4 + epsilon) X (x) X)` from the series.
pub fn ms_matrix(epsilon: f64) -> CMat {
    let xx = pauli_matrix(PauliAxis::X).kron(&pauli_matrix(PauliAxis::X));
    expm(&xx.scale(c(0.0, -(std::f64::consts::FRAC_PI_4 + epsilon))))
}

fn sub_index(i: usize, qubits: &[usize], n: usize) -> usize {
    qubits
        .iter()
        .fold(0, |acc, &q| (acc << 1) | ((i >> (n - 1 - q)) & 1))
}

/// Embeds a k-qubit gate onto the listed qubits of an n-qubit register.
/// The first listed qubit is the gate's leftmost ket position.
pub fn embed(gate: &CMat, qubits: &[usize], num_qubits: usize) -> CMat {
    assert_eq!(gate.dim, 1 << qubits.len());
    let dim = 1usize << num_qubits;
    let mask: usize = qubits.iter().map(|&q| 1usize << (num_qubits - 1 - q)).sum();
    let mut out = CMat::zeros(dim);
    for i in 0..dim {
        let gi = sub_index(i, qubits, num_qubits);
        for j in 0..dim {
            if (i & !mask) != (j & !mask) {
                continue;
            }
            out.set(i, j, gate.get(gi, sub_index(j, qubits, num_qubits)));
        }
    }
    out
}

/// Ideal CNOT as an explicit basis permutation.
pub fn cnot_matrix(control: usize, target: usize, num_qubits: usize) -> CMat {
    let dim = 1usize << num_qubits;
    let sc = 1usize << (num_qubits - 1 - control);
    let st = 1usize << (num_qubits - 1 - target);
    let mut out = CMat::zeros(dim);
    for col in 0..dim {
        let row = if col & sc != 0 { col ^ st } else { col };
        out.set(row, col, c(1.0, 0.0));
    }
    out
}

pub fn apply_matrix(m: &CMat, sv: &Statevector) -> Statevector {
    Statevector::from_amplitudes(m.matvec(sv.amplitudes())).unwrap()
}

/// Builds the statevector columns of an operation into an explicit matrix.
pub fn matrix_of(num_qubits: usize, mut op: impl FnMut(&mut Statevector)) -> CMat {
    let dim = 1usize << num_qubits;
    let mut out = CMat::zeros(dim);
    for col in 0..dim {
        let mut amps = vec![c(0.0, 0.0); dim];
        amps[col] = c(1.0, 0.0);
        let mut sv = Statevector::from_amplitudes(amps).unwrap();
        op(&mut sv);
        for row in 0..dim {
            out.set(row, col, sv.amplitudes()[row]);
        }
    }
    out
}

/// Frobenius distance minimized over a global phase.
pub fn phase_aligned_distance(a: &CMat, b: &CMat) -> f64 {
    let cross = b.dagger().mul(a).trace().norm();
    let d2 = a.frobenius_norm().powi(2) + b.frobenius_norm().powi(2) - 2.0 * cross;
    d2.max(0.0).sqrt()
}

/// `|<u~|v~>|` for possibly unnormalized vectors.
pub fn state_fidelity(u: &Statevector, v: &Statevector) -> f64 {
    let nu = u.norm_sqr().sqrt();
    let nv = v.norm_sqr().sqrt();
    u.overlap(v).unwrap().norm() / (nu * nv)
}

/// Distance between two statevectors after aligning a global phase.
pub fn state_distance_up_to_phase(u: &Statevector, v: &Statevector) -> f64 {
    let ov = u.overlap(v).unwrap();
    let phase = if ov.norm() > 1e-300 {
        ov / ov.norm()
    } else {
        c(1.0, 0.0)
    };
    u.amplitudes()
        .iter()
        .zip(v.amplitudes())
        .map(|(a, b)| (a * phase - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
