//! The phase-extended displacement operator U(z, t) = exp(z a† - z̄ a + itN)
//! and its closed forms, all driven by the scalar kernels f(t), g(t):
//! disentangled orderings, matrix elements through the substitution w = f(t)z,
//! the exchange identity, the conjugated decomposition valid at t ≠ 0, the
//! closed regularized trace, and the su(1,1) squeeze operator built from the
//! two-photon generators.
//!
//! At t = 0 everything degrades gracefully to the plain displacement module:
//! f(0) = 1, g(0) = -1/2.

use num_complex::Complex64;

use crate::coherent::coherent_matrix_element;
use crate::error::{Error, Result};
use crate::kernels::{distance_to_two_pi_multiple, PhaseKernelValue, TWO_PI_GUARD};
use crate::matrix::{expm_skew, expm_triangular, CMatrix, CVector, TruncationConfig};
use crate::oscillator::{build_ladder, build_su11, extended_generator, number_phase};

pub use crate::coherent::DisentangleForm;

/// |t| below this makes the conjugated decomposition numerically meaningless
/// (the conjugating displacement scales like |z|/t).
pub const MIN_T_DECOMPOSITION: f64 = 1e-6;

/// Parameter pair (z, t) of the extended operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtendedParam {
    pub z: Complex64,
    pub t: f64,
}

impl ExtendedParam {
    pub fn new(z: Complex64, t: f64) -> Self {
        Self { z, t }
    }
}

/// U(z, t) by exponentiating the generator directly.
pub fn extended_exact(p: ExtendedParam, cfg: &TruncationConfig) -> Result<CMatrix> {
    let ladder = build_ladder(cfg)?;
    expm_skew(&extended_generator(p.z, p.t, &ladder))
}

/// U(z, t) as a disentangled product:
///
/// Normal:     e^{g(t)|z|²}  · e^{f(t) z a†} · e^{itN} · e^{-f(t) z̄ a}
/// Antinormal: e^{-ḡ(t)|z|²} · e^{-f̄(t) z̄ a} · e^{itN} · e^{f̄(t) z a†}
///
/// As in the plain displacement case, the antinormal sandwich runs through
/// Fock states far above the band and its alternating terms cancel to
/// ~8 digits at |z| = 2, so that branch goes through the double-double
/// product in the `compensated` module with the e^{itN} phases folded into
/// the factor arguments.
pub fn extended_disentangled(
    p: ExtendedParam,
    cfg: &TruncationConfig,
    form: DisentangleForm,
) -> Result<CMatrix> {
    let k = PhaseKernelValue::at(p.t);
    let x = p.z.norm_sqr();
    let m = match form {
        DisentangleForm::Normal => {
            let ladder = build_ladder(cfg)?;
            let phases = number_phase(p.t, cfg.dim);
            let up = expm_triangular(&(&ladder.a_dag * (k.f * p.z)))?;
            let down = expm_triangular(&(&ladder.a * (-k.f * p.z.conj())))?;
            (up * phases * down) * (k.g * x).exp()
        }
        DisentangleForm::Antinormal => {
            cfg.validate()?;
            let sandwich = crate::compensated::down_phase_up(
                -k.f.conj() * p.z.conj(),
                p.t,
                k.f.conj() * p.z,
                cfg.dim,
            );
            sandwich * (-k.g.conj() * x).exp()
        }
    };
    Ok(m)
}

/// The pieces of the closed-form element ⟨n|U(z,t)|m⟩: the substituted
/// argument w = f(t) z, the total prefactor exponent
/// -|w|²/2 - ḡ(t)|z|² + itm (purely imaginary), and the plain displacement
/// element ⟨n|U(w)|m⟩ it multiplies.
#[derive(Debug, Clone, Copy)]
pub struct ExtendedElementParts {
    pub w: Complex64,
    pub prefactor_exponent: Complex64,
    pub base_element: Complex64,
}

impl ExtendedElementParts {
    pub fn value(&self) -> Complex64 {
        self.prefactor_exponent.exp() * self.base_element
    }
}

/// Decomposition of ⟨n|U(z,t)|m⟩ into prefactor and displacement element.
/// Remains total at zeros of f, where w = 0 and the base element collapses
/// to δ_nm.
pub fn extended_matrix_element_parts(n: usize, m: usize, p: ExtendedParam) -> ExtendedElementParts {
    let k = PhaseKernelValue::at(p.t);
    let w = k.f * p.z;
    let prefactor_exponent = Complex64::new(-0.5 * w.norm_sqr(), p.t * m as f64)
        - k.g.conj() * p.z.norm_sqr();
    ExtendedElementParts {
        w,
        prefactor_exponent,
        base_element: coherent_matrix_element(n, m, w),
    }
}

/// ⟨n|U(z,t)|m⟩ in closed form.
pub fn extended_matrix_element(n: usize, m: usize, p: ExtendedParam) -> Complex64 {
    extended_matrix_element_parts(n, m, p).value()
}

/// Closed-form amplitudes of |z,t⟩ = U(z,t)|0⟩, a coherent ladder in
/// w = f(t) z with overall factor e^{g(t)|z|²}:  ⟨n|z,t⟩ = e^{g|z|²} wⁿ/√n!.
pub fn extended_amplitudes(p: ExtendedParam, len: usize) -> CVector {
    let k = PhaseKernelValue::at(p.t);
    let w = k.f * p.z;
    let mut amps = CVector::zeros(len);
    if len == 0 {
        return amps;
    }
    let mut amp = (k.g * p.z.norm_sqr()).exp();
    amps[0] = amp;
    for n in 1..len {
        amp *= w / (n as f64).sqrt();
        amps[n] = amp;
    }
    amps
}

/// Max-entry band residual of the exchange identity
///
/// U(z,t) U(w,s) = e^{f̄(t)f̄(s) z w̄ - f(t)f(s) z̄ w} · U(w e^{it}, s) · U(z e^{-is}, t).
pub fn extended_commutation_residual(
    p1: ExtendedParam,
    p2: ExtendedParam,
    cfg: &TruncationConfig,
) -> Result<f64> {
    let (z, t) = (p1.z, p1.t);
    let (w, s) = (p2.z, p2.t);
    let lhs = extended_exact(p1, cfg)? * extended_exact(p2, cfg)?;
    let ft = PhaseKernelValue::at(t).f;
    let fs = PhaseKernelValue::at(s).f;
    let phase = (ft.conj() * fs.conj() * z * w.conj() - ft * fs * z.conj() * w).exp();
    let left = extended_exact(ExtendedParam::new(w * Complex64::new(0.0, t).exp(), s), cfg)?;
    let right = extended_exact(ExtendedParam::new(z * Complex64::new(0.0, -s).exp(), t), cfg)?;
    let rhs = (left * right) * phase;
    crate::matrix::band_residual(&lhs, &rhs, cfg.band)
}

/// U(z, t) through the conjugated decomposition
///
/// e^{-i|z|²/t} · e^{(i/t)(z a† + z̄ a)} · e^{itN} · e^{-(i/t)(z a† + z̄ a)},
///
/// defined for |t| ≥ [`MIN_T_DECOMPOSITION`]. The inner factors are unitary,
/// so the inverse conjugator is taken as an adjoint rather than a second
/// exponential.
pub fn conjugated_decomposition(p: ExtendedParam, cfg: &TruncationConfig) -> Result<CMatrix> {
    if p.t.abs() < MIN_T_DECOMPOSITION {
        return Err(Error::DecompositionNearZero { t_abs: p.t.abs(), min: MIN_T_DECOMPOSITION });
    }
    let d = cfg.dim;
    let ladder = build_ladder(cfg)?;
    let i_over_t = Complex64::new(0.0, 1.0 / p.t);
    let gen = ladder.a_dag.map(|e| e * (i_over_t * p.z))
        + ladder.a.map(|e| e * (i_over_t * p.z.conj()));
    let conjugator = expm_skew(&gen)?;
    let phases = number_phase(p.t, d);
    let scalar = Complex64::new(0.0, -p.z.norm_sqr() / p.t).exp();
    Ok((&conjugator * phases * conjugator.adjoint()) * scalar)
}

/// Closed form of the Abel-regularized trace of U(z, t):
/// e^{-i|z|²/t} / (1 - e^{it}). Divergent at multiples of 2π (including
/// t = 0), mirroring the behavior of the numeric route.
pub fn extended_trace_closed(p: ExtendedParam) -> Result<Complex64> {
    if distance_to_two_pi_multiple(p.t).abs() < TWO_PI_GUARD {
        return Err(Error::DivergentSum { t: p.t });
    }
    let shift = Complex64::new(0.0, -p.z.norm_sqr() / p.t).exp();
    let denom = Complex64::new(1.0, 0.0) - Complex64::new(0.0, p.t).exp();
    Ok(shift / denom)
}

/// Abel-summed regularized trace of U(z, t): partial sums of
/// Σ_n rⁿ ⟨n|U(z,t)|n⟩ Richardson-extrapolated to r → 1. The diagonal
/// elements e^{iχ+itn} e^{-|w|²/2} L_n(|w|²) are advanced by the Laguerre
/// three-term recurrence, one step per term, so the damped sums stay linear
/// in the term count. Numerically independent of [`extended_trace_closed`].
pub fn extended_trace_abel(p: ExtendedParam) -> Result<Complex64> {
    if distance_to_two_pi_multiple(p.t).abs() < TWO_PI_GUARD {
        return Err(Error::DivergentSum { t: p.t });
    }
    let k = PhaseKernelValue::at(p.t);
    let x = (k.f * p.z).norm_sqr();
    // e^{iχ} e^{-|w|²/2} with iχ = -|w|²/2 - ḡ|z|²
    let front = (Complex64::new(-x, 0.0) - k.g.conj() * p.z.norm_sqr()).exp();
    Ok(crate::kernels::abel_richardson_limit(|r| {
        let q = Complex64::from_polar(r, p.t);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut phase = Complex64::new(1.0, 0.0);
        let mut l_prev = 0.0_f64;
        let mut l_cur = 1.0_f64;
        for n in 0..crate::kernels::ABEL_TERMS {
            sum += phase * l_cur;
            let nf = n as f64;
            let l_next = ((2.0 * nf + 1.0 - x) * l_cur - nf * l_prev) / (nf + 1.0);
            l_prev = l_cur;
            l_cur = l_next;
            phase *= q;
        }
        front * sum
    }))
}

/// Squeeze-family operator V(z, t) = exp(z K₊ - z̄ K₋ + it K₃) with the
/// su(1,1) generators K₊ = a†²/2, K₋ = a²/2, K₃ = (a†a + 1/2)/2.
///
/// Unitary at any z on the truncation; the underlying group element stays in
/// the stable (elliptic-like) regime only for |z| < 1, see [`squeeze_stable`].
pub fn squeeze_extended(p: ExtendedParam, cfg: &TruncationConfig) -> Result<CMatrix> {
    let su = build_su11(cfg)?;
    let mut gen = su.k_plus.map(|e| e * p.z);
    gen -= su.k_minus.map(|e| e * p.z.conj());
    gen += su.k3.map(|e| e * Complex64::new(0.0, p.t));
    expm_skew(&gen)
}

/// Whether |z| is inside the unit disk where the squeeze parameterization is
/// well-conditioned. Callers emit a warning, not an error, outside it.
pub fn squeeze_stable(z: Complex64) -> bool {
    z.norm() < 1.0
}

/// U(z, t) · V(w, s), the combined displacement-squeeze element.
pub fn product_uv(
    pu: ExtendedParam,
    pv: ExtendedParam,
    cfg: &TruncationConfig,
) -> Result<CMatrix> {
    Ok(extended_exact(pu, cfg)? * squeeze_extended(pv, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::displacement_exact;
    use crate::matrix::{band_residual, max_abs_diff, unitarity_defect};
    use std::f64::consts::TAU;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg(dim: usize, band: usize) -> TruncationConfig {
        TruncationConfig::new(dim, band, 1e-9).unwrap()
    }

    #[test]
    fn reduces_to_displacement_at_t_zero() {
        let z = c(0.9, -0.4);
        let cfg = cfg(48, 12);
        let ext = extended_exact(ExtendedParam::new(z, 0.0), &cfg).unwrap();
        let dis = displacement_exact(z, &cfg).unwrap();
        assert!(max_abs_diff(&ext, &dis).unwrap() < 1e-12);
    }

    #[test]
    fn pure_phase_at_z_zero() {
        let cfg = cfg(32, 8);
        let t = 1.7;
        let ext = extended_exact(ExtendedParam::new(c(0.0, 0.0), t), &cfg).unwrap();
        let expect = number_phase(t, 32);
        assert!(max_abs_diff(&ext, &expect).unwrap() < 1e-12);
    }

    #[test]
    fn disentangled_forms_match_exact_inside_band() {
        let p = ExtendedParam::new(c(0.8, -0.3), 1.3);
        let cfg = cfg(64, 16);
        let exact = extended_exact(p, &cfg).unwrap();
        for form in [DisentangleForm::Normal, DisentangleForm::Antinormal] {
            let dis = extended_disentangled(p, &cfg, form).unwrap();
            let r = band_residual(&exact, &dis, cfg.band).unwrap();
            assert!(r < 1e-10, "{form:?}: residual {r:.3e}");
        }
    }

    #[test]
    fn disentangled_at_t_zero_matches_displacement_forms() {
        let z = c(-0.5, 1.1);
        let cfg = cfg(32, 8);
        for form in [DisentangleForm::Normal, DisentangleForm::Antinormal] {
            let ext = extended_disentangled(ExtendedParam::new(z, 0.0), &cfg, form).unwrap();
            let dis = crate::coherent::displacement_disentangled(z, &cfg, form).unwrap();
            assert!(max_abs_diff(&ext, &dis).unwrap() < 1e-13);
        }
    }

    #[test]
    fn elements_match_brute_force_block() {
        let cfg = cfg(64, 16);
        for &(z, t) in &[(c(0.4, 0.9), 1.0), (c(-1.1, 0.3), -2.7), (c(0.5, 0.0), TAU)] {
            let p = ExtendedParam::new(z, t);
            let u = extended_exact(p, &cfg).unwrap();
            for n in 0..8 {
                for m in 0..8 {
                    let closed = extended_matrix_element(n, m, p);
                    let diff = (closed - u[(n, m)]).norm();
                    assert!(diff < 1e-10, "z={z}, t={t}, ({n},{m}): {diff:.3e}");
                }
            }
        }
    }

    #[test]
    fn prefactor_exponent_is_purely_imaginary() {
        for &(z, t) in &[(c(1.3, -0.8), 0.9), (c(0.2, 0.1), TAU), (c(-1.9, 0.4), -5.5)] {
            let parts = extended_matrix_element_parts(2, 5, ExtendedParam::new(z, t));
            assert!(
                parts.prefactor_exponent.re.abs() < 1e-13,
                "Re = {:.3e}",
                parts.prefactor_exponent.re
            );
        }
    }

    #[test]
    fn shift_identity_at_two_pi() {
        // U(z, 2π) = e^{-i|z|²/(2π)} · I on the interior band
        let cfg = cfg(128, 32);
        let p = ExtendedParam::new(c(1.0, 0.0), TAU);
        let u = extended_exact(p, &cfg).unwrap();
        let phase = Complex64::new(0.0, -1.0 / TAU).exp();
        let expect = CMatrix::identity(128, 128) * phase;
        let r = band_residual(&u, &expect, cfg.band).unwrap();
        assert!(r < 1e-8, "residual {r:.3e}");
    }

    #[test]
    fn element_at_two_pi_matches_shift_identity() {
        let p = ExtendedParam::new(c(0.7, -0.2), TAU);
        let phase = Complex64::new(0.0, -p.z.norm_sqr() / TAU).exp();
        for n in 0..6 {
            for m in 0..6 {
                let e = extended_matrix_element(n, m, p);
                let expect = if n == m { phase } else { c(0.0, 0.0) };
                assert!((e - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn commutation_identity_small_params() {
        let cfg = cfg(48, 12);
        let p1 = ExtendedParam::new(c(0.5, 0.1), 0.8);
        let p2 = ExtendedParam::new(c(-0.2, 0.6), -1.9);
        let r = extended_commutation_residual(p1, p2, &cfg).unwrap();
        assert!(r < 1e-11, "residual {r:.3e}");
    }

    #[test]
    fn commutation_reduces_to_coherent_case_at_zero_phases() {
        let cfg = cfg(48, 12);
        let p1 = ExtendedParam::new(c(0.6, 0.2), 0.0);
        let p2 = ExtendedParam::new(c(-0.4, 0.8), 0.0);
        let r = extended_commutation_residual(p1, p2, &cfg).unwrap();
        assert!(r < 1e-11, "residual {r:.3e}");
    }

    #[test]
    fn conjugated_decomposition_matches_exact() {
        let cfg = cfg(96, 12);
        let p = ExtendedParam::new(c(0.5, -0.3), 1.0);
        let dec = conjugated_decomposition(p, &cfg).unwrap();
        let exact = extended_exact(p, &cfg).unwrap();
        let r = band_residual(&dec, &exact, cfg.band).unwrap();
        assert!(r < 1e-8, "residual {r:.3e}");
    }

    #[test]
    fn conjugated_decomposition_rejects_tiny_t() {
        let p = ExtendedParam::new(c(0.5, 0.0), 1e-7);
        assert!(matches!(
            conjugated_decomposition(p, &cfg(16, 8)),
            Err(Error::DecompositionNearZero { .. })
        ));
    }

    #[test]
    fn closed_trace_known_value() {
        // e^{-i}/(1 - e^{i·1}); 1/(1-e^{i}) = 0.5 + 0.91524386085622596i
        let p = ExtendedParam::new(c(1.0, 0.0), 1.0);
        let got = extended_trace_closed(p).unwrap();
        let expect = Complex64::new(0.0, -1.0).exp() * Complex64::new(0.5, 0.915_243_860_856_226);
        assert!((got - expect).norm() < 1e-14);
    }

    #[test]
    fn closed_trace_rejects_two_pi_multiples() {
        for &t in &[0.0, TAU, -2.0 * TAU] {
            let p = ExtendedParam::new(c(1.0, 0.0), t);
            assert!(matches!(extended_trace_closed(p), Err(Error::DivergentSum { .. })));
        }
    }

    #[test]
    fn abel_trace_converges_to_closed_trace() {
        for &t in &[1.0, 2.5, std::f64::consts::PI] {
            for &zr in &[0.0, 1.0] {
                let p = ExtendedParam::new(c(zr, 0.0), t);
                let numeric = extended_trace_abel(p).unwrap();
                let closed = extended_trace_closed(p).unwrap();
                assert!(
                    (numeric - closed).norm() < 1e-8,
                    "z = {zr}, t = {t}: {numeric} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn abel_trace_at_zero_displacement_reduces_to_scalar_route() {
        // with z = 0 every Laguerre value is exactly 1 and both routes sum
        // the same geometric terms
        let t = 2.2;
        let p = ExtendedParam::new(c(0.0, 0.0), t);
        let here = extended_trace_abel(p).unwrap();
        let scalar = crate::kernels::abel_trace(t).unwrap();
        assert_eq!(here, scalar);
    }

    #[test]
    fn abel_trace_rejects_two_pi_multiples() {
        let p = ExtendedParam::new(c(1.0, 0.0), TAU);
        assert!(matches!(extended_trace_abel(p), Err(Error::DivergentSum { .. })));
    }

    #[test]
    fn amplitudes_match_exact_column() {
        let p = ExtendedParam::new(c(1.1, 0.4), 2.2);
        let cfg = cfg(64, 16);
        let exact = extended_exact(p, &cfg).unwrap();
        let closed = extended_amplitudes(p, 64);
        let diff = (&exact.column(0).into_owned() - &closed).norm();
        assert!(diff < 1e-11, "diff {diff:.3e}");
    }

    #[test]
    fn squeeze_is_unitary_and_preserves_parity() {
        let cfg = cfg(64, 16);
        let v = squeeze_extended(ExtendedParam::new(c(0.3, 0.0), 0.7), &cfg).unwrap();
        assert!(unitarity_defect(&v) < 1e-11 * 64.0);
        let mut cross = 0.0_f64;
        for n in 0..64 {
            for m in 0..64 {
                if (n + m) % 2 == 1 {
                    cross = cross.max(v[(n, m)].norm());
                }
            }
        }
        assert!(cross < 1e-12, "cross-parity leak {cross:.3e}");
    }

    #[test]
    fn squeeze_at_zero_z_gives_k3_phases() {
        let cfg = cfg(32, 8);
        let s = 1.4;
        let v = squeeze_extended(ExtendedParam::new(c(0.0, 0.0), s), &cfg).unwrap();
        for n in 0..32 {
            let expect = Complex64::new(0.0, s * (n as f64 / 2.0 + 0.25)).exp();
            assert!((v[(n, n)] - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn squeeze_stability_flag() {
        assert!(squeeze_stable(c(0.95, 0.0)));
        assert!(!squeeze_stable(c(0.8, 0.8)));
    }

    #[test]
    fn product_uv_is_unitary() {
        let cfg = cfg(64, 16);
        let m = product_uv(
            ExtendedParam::new(c(1.0, 0.0), 0.5),
            ExtendedParam::new(c(0.3, 0.0), 1.0),
            &cfg,
        )
        .unwrap();
        assert!(unitarity_defect(&m) < 1e-10 * 64.0);
    }
}
