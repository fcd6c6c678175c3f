//! Ladder operators and the su(1,1) generators built from them on a
//! truncated Fock space of dimension D.
//!
//! Conventions: a|n⟩ = √n |n-1⟩, a†|n⟩ = √(n+1) |n+1⟩ (with a†|D-1⟩ = 0 at
//! the truncation), N = a†a. Truncation deforms [a, a†] = 1 only in the last
//! row/column: ([a,a†] - I) vanishes on indices 0..D-2 and equals -D at
//! (D-1, D-1). All identity checks elsewhere in the crate stay inside a band
//! of at most D/2 for exactly this reason.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{CMatrix, CVector, TruncationConfig};

/// a, a† and N = a†a on one truncation.
#[derive(Debug, Clone)]
pub struct LadderSet {
    pub dim: usize,
    pub a: CMatrix,
    pub a_dag: CMatrix,
    /// Stored as the literal product a† · a, not as rounded integers, so the
    /// defining relation holds entrywise.
    pub n_op: CMatrix,
}

/// K₊ = a†²/2, K₋ = a²/2, K₃ = (a†a + 1/2)/2.
#[derive(Debug, Clone)]
pub struct Su11Set {
    pub dim: usize,
    pub k_plus: CMatrix,
    pub k_minus: CMatrix,
    pub k3: CMatrix,
}

/// A Fock basis vector |n⟩ with its dense amplitude column.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    index: usize,
    amplitudes: CVector,
}

impl FockVector {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }
}

/// Builds the ladder triple for `cfg.dim`; needs at least a two-level space.
pub fn build_ladder(cfg: &TruncationConfig) -> Result<LadderSet> {
    let d = cfg.dim;
    if d < 2 {
        return Err(Error::DimTooSmall { dim: d, context: "ladder operators need dim >= 2" });
    }
    let mut a = CMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let a_dag = a.adjoint();
    let n_op = &a_dag * &a;
    Ok(LadderSet { dim: d, a, a_dag, n_op })
}

/// Builds the su(1,1) generators; the two-photon shifts need dim >= 3.
pub fn build_su11(cfg: &TruncationConfig) -> Result<Su11Set> {
    let d = cfg.dim;
    if d < 3 {
        return Err(Error::DimTooSmall { dim: d, context: "su(1,1) generators need dim >= 3" });
    }
    let ladder = build_ladder(cfg)?;
    let half = Complex64::new(0.5, 0.0);
    let k_plus = (&ladder.a_dag * &ladder.a_dag).map(|e| e * half);
    let k_minus = (&ladder.a * &ladder.a).map(|e| e * half);
    let mut k3 = ladder.n_op.clone();
    for n in 0..d {
        k3[(n, n)] += Complex64::new(0.5, 0.0);
    }
    let k3 = k3.map(|e| e * half);
    Ok(Su11Set { dim: d, k_plus, k_minus, k3 })
}

/// |n⟩ as a basis column.
pub fn number_state(cfg: &TruncationConfig, n: usize) -> Result<FockVector> {
    if n >= cfg.dim {
        return Err(Error::IndexOutOfRange { index: n, dim: cfg.dim });
    }
    let mut amplitudes = CVector::zeros(cfg.dim);
    amplitudes[n] = Complex64::new(1.0, 0.0);
    Ok(FockVector { index: n, amplitudes })
}

/// diag(e^{i t n}) with integer n, the factor e^{itN} appearing in the
/// disentangled orderings.
pub fn number_phase(t: f64, dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, dim);
    for n in 0..dim {
        m[(n, n)] = Complex64::new(0.0, t * n as f64).exp();
    }
    m
}

/// z a† - z̄ a, the anti-Hermitian displacement generator.
pub fn displacement_generator(z: Complex64, ladder: &LadderSet) -> CMatrix {
    let d = ladder.dim;
    let mut x = CMatrix::zeros(d, d);
    for n in 1..d {
        let s = (n as f64).sqrt();
        x[(n, n - 1)] = z * s;
        x[(n - 1, n)] = -z.conj() * s;
    }
    x
}

/// z a† - z̄ a + i t N, the generator of the phase-extended operator.
pub fn extended_generator(z: Complex64, t: f64, ladder: &LadderSet) -> CMatrix {
    let mut x = displacement_generator(z, ladder);
    for n in 0..ladder.dim {
        x[(n, n)] += Complex64::new(0.0, t) * ladder.n_op[(n, n)];
    }
    x
}
