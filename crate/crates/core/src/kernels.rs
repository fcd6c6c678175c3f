//! Scalar kernels shared by the extended-operator formulas: the pair
//!
//!   f(t) = (e^{it} - 1) / (it),    g(t) = (e^{it} - (1 + it)) / t²,
//!
//! associated Laguerre polynomials, and the Abel-summed regularized trace
//! Σ_n e^{itn}.
//!
//! f and g are 0/0 at t = 0, so below [`T_SWITCH`] both switch to their Taylor
//! series. The direct branches use the rearrangements f = e^{it/2}·sinc(t/2)
//! and Re g = -sinc²(t/2)/2, which are algebraically identical to the
//! definitions but free of the cancellation that would otherwise dominate
//! just above the switch point.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Below this |t| the series branches of [`f_of_t`] and [`g_of_t`] are used.
pub const T_SWITCH: f64 = 1e-3;

/// |t| closer than this to a multiple of 2π makes the regularized trace
/// divergent.
pub const TWO_PI_GUARD: f64 = 1e-9;

/// Terms kept in each partial Abel sum S(r).
pub const ABEL_TERMS: usize = 200_000;

/// Abel radii r_k = 1 - 2^{-k} for k in this inclusive range.
pub const ABEL_K_RANGE: (i32, i32) = (4, 12);

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// Signed distance from t to the nearest multiple of 2π.
pub fn distance_to_two_pi_multiple(t: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    t - (t / tau).round() * tau
}

/// f(t) = (e^{it} - 1)/(it); f(0) = 1 exactly through the series branch.
pub fn f_of_t(t: f64) -> Complex64 {
    if t.abs() < T_SWITCH {
        // Σ_{k≥0} (it)^k / (k+1)!
        let it = Complex64::new(0.0, t);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..=10 {
            term *= it / (k as f64 + 1.0);
            sum += term;
        }
        sum
    } else {
        let half = 0.5 * t;
        Complex64::new(0.0, half).exp() * sinc(half)
    }
}

/// g(t) = (e^{it} - (1 + it))/t²; g(0) = -1/2 exactly through the series
/// branch.
pub fn g_of_t(t: f64) -> Complex64 {
    if t.abs() < T_SWITCH {
        // -Σ_{k≥0} (it)^k / (k+2)!
        let it = Complex64::new(0.0, t);
        let mut term = Complex64::new(-0.5, 0.0);
        let mut sum = term;
        for k in 1..=10 {
            term *= it / (k as f64 + 2.0);
            sum += term;
        }
        sum
    } else {
        let s = sinc(0.5 * t);
        Complex64::new(-0.5 * s * s, (t.sin() - t) / (t * t))
    }
}

/// f, g and |f|² evaluated together at one t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseKernelValue {
    pub t: f64,
    pub f: Complex64,
    pub g: Complex64,
    pub abs_f_sq: f64,
}

impl PhaseKernelValue {
    pub fn at(t: f64) -> Self {
        let f = f_of_t(t);
        Self { t, f, g: g_of_t(t), abs_f_sq: f.norm_sqr() }
    }
}

/// Associated Laguerre polynomial L_n^{(α)}(x) by the three-term recurrence
/// (k+1) L_{k+1} = (2k+1+α-x) L_k - (k+α) L_{k-1}, seeded with L_0 = 1 and
/// L_1 = 1 + α - x.
pub fn laguerre_assoc(n: usize, alpha: usize, x: f64) -> f64 {
    let a = alpha as f64;
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - x) * curr - (kf + a) * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// √(hi!/lo!) for hi ≥ lo, and its reciprocal otherwise, computed as a
/// running product so no intermediate factorial overflows.
pub fn sqrt_factorial_ratio(num: usize, den: usize) -> f64 {
    let mut acc = 1.0;
    if num >= den {
        for j in (den + 1)..=num {
            acc *= (j as f64).sqrt();
        }
        acc
    } else {
        for j in (num + 1)..=den {
            acc /= (j as f64).sqrt();
        }
        acc
    }
}

/// Abel-summed evaluation of Σ_{n≥0} e^{itn}: partial sums S(r) = Σ r^n e^{itn}
/// at r_k = 1 - 2^{-k}, Richardson-extrapolated in ε = 1 - r to ε → 0.
///
/// An independent numeric route to the closed form 1/(1 - e^{it}); the two
/// never share code. Errors out within [`TWO_PI_GUARD`] of multiples of 2π,
/// where the sum diverges.
pub fn abel_trace(t: f64) -> Result<Complex64> {
    if distance_to_two_pi_multiple(t).abs() < TWO_PI_GUARD {
        return Err(Error::DivergentSum { t });
    }
    Ok(abel_richardson_limit(|r| {
        let q = Complex64::from_polar(r, t);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        for _ in 0..ABEL_TERMS {
            sum += term;
            term *= q;
        }
        sum
    }))
}

/// Richardson extrapolation of Abel partial sums to r → 1: `sum_at(r)` is
/// evaluated at r_k = 1 - 2^{-k} over [`ABEL_K_RANGE`] and extrapolated in
/// ε = 1 - r, halving ratio 2 per level.
pub(crate) fn abel_richardson_limit<S: Fn(f64) -> Complex64>(sum_at: S) -> Complex64 {
    let (k_lo, k_hi) = ABEL_K_RANGE;
    let mut table: Vec<Complex64> =
        (k_lo..=k_hi).map(|k| sum_at(1.0 - 2.0_f64.powi(-k))).collect();
    let n = table.len();
    for j in 1..n {
        let fac = 2.0_f64.powi(j as i32);
        for i in (j..n).rev() {
            table[i] = (table[i] * fac - table[i - 1]) / (fac - 1.0);
        }
    }
    table[n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, TAU};

    #[test]
    fn f_at_zero_is_exactly_one() {
        assert_eq!(f_of_t(0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn g_at_zero_is_exactly_minus_half() {
        assert_eq!(g_of_t(0.0), Complex64::new(-0.5, 0.0));
    }

    #[test]
    fn f_vanishes_at_two_pi() {
        assert!(f_of_t(TAU).norm() < 1e-12);
    }

    #[test]
    fn f_modulus_at_pi_is_two_over_pi() {
        // |f(π)| = sin(π/2)/(π/2) = 2/π
        assert!((f_of_t(PI).norm() - std::f64::consts::FRAC_2_PI).abs() < 1e-15);
        // and f(π) is purely imaginary: 2i/π
        assert!(f_of_t(PI).re.abs() < 1e-16);
    }

    #[test]
    fn g_at_two_pi_is_minus_i_over_two_pi() {
        let g = g_of_t(TAU);
        assert!(g.re.abs() < 1e-15);
        assert!((g.im + 0.159_154_943_091_895_34).abs() < 1e-15);
    }

    #[test]
    fn branches_agree_at_the_switch() {
        // just below the switch the series branch runs; the stable direct
        // forms evaluated at the same t must agree to rounding
        for &t in &[T_SWITCH * 0.999_999, -T_SWITCH * 0.999_999] {
            let direct_f = Complex64::new(0.0, 0.5 * t).exp() * ((0.5 * t).sin() / (0.5 * t));
            assert!((f_of_t(t) - direct_f).norm() < 1e-12);
            let direct_g = Complex64::new(
                -0.5 * ((0.5 * t).sin() / (0.5 * t)).powi(2),
                (t.sin() - t) / (t * t),
            );
            assert!((g_of_t(t) - direct_g).norm() < 1e-12);
        }
    }

    #[test]
    fn modulus_identities_hold_on_random_t() {
        // |f(t)| = |sin(t/2)/(t/2)| and |f(t)|² = -(g + ḡ), 1000 seeded draws
        let mut state = 0x243f6a8885a308d3_u64;
        let mut uniform = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 20.0 - 10.0
        };
        for _ in 0..1000 {
            let t = uniform();
            let k = PhaseKernelValue::at(t);
            let half = 0.5 * t;
            let target = if half == 0.0 { 1.0 } else { (half.sin() / half).abs() };
            assert!(
                (k.f.norm() - target).abs() < 1e-12,
                "modulus identity off at t = {t}"
            );
            assert!(
                (k.abs_f_sq + 2.0 * k.g.re).abs() < 1e-12,
                "|f|² + g + ḡ = {} at t = {t}",
                k.abs_f_sq + 2.0 * k.g.re
            );
        }
    }

    #[test]
    fn laguerre_low_orders_match_explicit_polynomials() {
        for &x in &[0.0, 0.37, 1.0, 4.2] {
            assert!((laguerre_assoc(0, 3, x) - 1.0).abs() < 1e-15);
            assert!((laguerre_assoc(1, 2, x) - (3.0 - x)).abs() < 1e-14);
            // L_2^{(1)}(x) = 3 - 3x + x²/2
            let expect = 3.0 - 3.0 * x + 0.5 * x * x;
            assert!((laguerre_assoc(2, 1, x) - expect).abs() < 1e-13 * (1.0 + expect.abs()));
        }
    }

    fn binomial(n: usize, k: usize) -> f64 {
        if k > n {
            return 0.0;
        }
        let mut acc = 1.0_f64;
        for j in 0..k {
            acc = acc * (n - j) as f64 / (j + 1) as f64;
        }
        acc
    }

    #[test]
    fn laguerre_recurrence_matches_alternating_sum() {
        // independent oracle: L_n^{(α)}(x) = Σ_j (-1)^j C(n+α, n-j) x^j / j!
        for n in 0..=10_usize {
            for alpha in 0..=4_usize {
                for &x in &[0.0, 0.5, 1.7, 8.3] {
                    let mut oracle = 0.0;
                    let mut xj = 1.0;
                    let mut fact = 1.0;
                    for j in 0..=n {
                        if j > 0 {
                            xj *= x;
                            fact *= j as f64;
                        }
                        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                        oracle += sign * binomial(n + alpha, n - j) * xj / fact;
                    }
                    let got = laguerre_assoc(n, alpha, x);
                    assert!(
                        (got - oracle).abs() < 1e-10 * (1.0 + oracle.abs()),
                        "n={n} α={alpha} x={x}: {got} vs {oracle}"
                    );
                }
            }
        }
    }

    #[test]
    fn sqrt_factorial_ratio_small_cases() {
        assert_eq!(sqrt_factorial_ratio(3, 3), 1.0);
        assert!((sqrt_factorial_ratio(4, 2) - 12.0_f64.sqrt()).abs() < 1e-15);
        assert!((sqrt_factorial_ratio(2, 4) - 1.0 / 12.0_f64.sqrt()).abs() < 1e-16);
        // representable where the raw factorial 128! would already overflow
        let tiny = sqrt_factorial_ratio(0, 128);
        assert!(tiny > 0.0 && tiny.is_finite());
        let huge = sqrt_factorial_ratio(128, 0);
        assert!((tiny * huge - 1.0).abs() < 1e-12);
    }

    #[test]
    fn abel_trace_matches_closed_form() {
        for &t in &[1.0, 2.5, PI, 0.5, 6.0] {
            let closed = (Complex64::new(1.0, 0.0) - Complex64::new(0.0, t).exp()).inv();
            let got = abel_trace(t).unwrap();
            assert!(
                (got - closed).norm() < 1e-10,
                "t = {t}: {got} vs {closed}"
            );
        }
    }

    #[test]
    fn abel_trace_half_pi_known_value() {
        // 1/(1 - i) = (1 + i)/2
        let got = abel_trace(PI / 2.0).unwrap();
        assert!((got - Complex64::new(0.5, 0.5)).norm() < 1e-10);
    }

    #[test]
    fn abel_trace_rejects_multiples_of_two_pi() {
        for &t in &[0.0, TAU, -TAU, 2.0 * TAU, TAU + 1e-10] {
            assert!(matches!(abel_trace(t), Err(Error::DivergentSum { .. })), "t = {t}");
        }
        // just outside the guard it converges
        assert!(abel_trace(TAU + 1e-3).is_ok());
    }
}
