//! Verification suites. Each suite is a fixed list of checks; a check
//! evaluates one identity to a worst-case residual and compares it against a
//! pinned tolerance (overridable per check name). Sampling is freshly seeded
//! per check, so suite selection never shifts another suite's draws and
//! reports are reproducible for a given seed.

use std::collections::BTreeMap;
use std::time::Instant;

use fockops::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fockops::coherent::{
    coherent_matrix_element, coherent_state, commutation_phase, displacement_disentangled,
    displacement_exact, DisentangleForm,
};
use fockops::extended::{
    conjugated_decomposition, extended_commutation_residual, extended_disentangled,
    extended_exact, extended_matrix_element, extended_trace_abel, extended_trace_closed,
    product_uv, squeeze_extended, ExtendedParam,
};
use fockops::matrix::{
    band_residual, frobenius_band_distance, max_abs_diff, unitarity_defect,
};
use fockops::oscillator::{build_ladder, build_su11, number_state};
use fockops::phase_space::{
    build_polar_grid, build_t_grid, gauss_laguerre, glauber_reconstruct,
    resolution_residual_coherent, resolution_residual_extended,
    resolution_residual_t_integrated, trace_limit_probe, F_FLOOR, T_GRID_MAX,
    T_NODES_PER_SEGMENT, T_WINDOW_HALF_WIDTH,
};
use fockops::{exec, CMatrix, TruncationConfig};

use crate::report::CheckResult;

/// All suites, in report order.
pub const SUITE_NAMES: [&str; 7] =
    ["algebra", "coherent", "extended", "glauber", "quadrature", "squeeze", "trace"];

/// Full run configuration, the source of truth for every check.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dim: usize,
    pub band: usize,
    pub seed: u64,
    pub samples: usize,
    pub z_radius: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub tol_overrides: BTreeMap<String, f64>,
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 128,
            band: 32,
            seed: 42,
            samples: 50,
            z_radius: 2.0,
            t_min: -6.0,
            t_max: 6.0,
            tol_overrides: BTreeMap::new(),
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.samples == 0 {
            return Err("samples must be positive".into());
        }
        let radius_ok = self.z_radius > 0.0;
        if !radius_ok {
            return Err("z-radius must be positive".into());
        }
        let t_range_ok = self.t_min < self.t_max;
        if !t_range_ok {
            return Err("t range must be nonempty".into());
        }
        TruncationConfig::new(self.dim, self.band, 1e-9).map_err(|e| e.to_string())?;
        for name in self.tol_overrides.keys() {
            if !all_check_names().contains(&name.as_str()) {
                return Err(format!(
                    "unknown check name '{name}' in --tol; known checks: {}",
                    all_check_names().join(", ")
                ));
            }
        }
        Ok(())
    }

    fn truncation(&self) -> fockops::Result<TruncationConfig> {
        TruncationConfig::new(self.dim, self.band, 1e-9)
    }

    /// Pinned-band variant for checks whose band is fixed by contract; the
    /// dimension grows if needed to keep band ≤ dim/2.
    fn truncation_banded(&self, band: usize) -> fockops::Result<TruncationConfig> {
        TruncationConfig::new(self.dim.max(2 * band), band, 1e-9)
    }

    fn check<F>(&self, name: &str, paper_ref: &str, tol: f64, body: F) -> fockops::Result<CheckResult>
    where
        F: FnOnce() -> fockops::Result<f64>,
    {
        let start = Instant::now();
        let residual = body()?;
        let seconds = if self.timing { start.elapsed().as_secs_f64() } else { 0.0 };
        let tol = self.tol_overrides.get(name).copied().unwrap_or(tol);
        Ok(CheckResult {
            name: name.to_string(),
            paper_ref: paper_ref.to_string(),
            residual,
            tol,
            pass: residual.is_finite() && residual <= tol,
            seconds,
        })
    }
}

/// Every check name every suite can emit, for override validation.
pub fn all_check_names() -> Vec<&'static str> {
    vec![
        "algebra.ladder_commutator",
        "algebra.number_commutators",
        "algebra.completeness",
        "algebra.su11_structure",
        "algebra.edge_defect",
        "coherent.disentangle_normal",
        "coherent.disentangle_antinormal",
        "coherent.matrix_elements",
        "coherent.commutation",
        "coherent.state_norm",
        "extended.disentangle_normal",
        "extended.disentangle_antinormal",
        "extended.matrix_elements",
        "extended.commutation",
        "extended.conjugated_decomposition",
        "extended.small_t_limit",
        "extended.kernel_zero",
        "glauber.vacuum",
        "glauber.offdiag_t0",
        "glauber.offdiag_t1",
        "glauber.random_band",
        "quadrature.gauss_laguerre_moments",
        "quadrature.polar_mass",
        "quadrature.t_grid_mass",
        "quadrature.resolution_coherent",
        "quadrature.resolution_extended",
        "quadrature.resolution_t_integrated",
        "squeeze.unitarity",
        "squeeze.phase_mode",
        "squeeze.product_unitarity",
        "squeeze.parity",
        "trace.abel_closed_form",
        "trace.probe_monotone",
        "trace.probe_value",
    ]
}

fn or_max(r: fockops::Result<f64>) -> f64 {
    r.unwrap_or(f64::MAX)
}

/// Seeded (z, t) draws: z uniform on the disk of the configured radius,
/// t uniform on the configured range.
fn sample_params(cfg: &RunConfig) -> Vec<(Complex64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.samples)
        .map(|_| {
            let u: f64 = rng.gen();
            let th: f64 = rng.gen();
            let ut: f64 = rng.gen();
            let z = Complex64::from_polar(cfg.z_radius * u.sqrt(), std::f64::consts::TAU * th);
            (z, cfg.t_min + (cfg.t_max - cfg.t_min) * ut)
        })
        .collect()
}

/// Seeded z draws uniform on the annulus 1 ≤ |z| ≤ 2, used by the small-t
/// continuity check. The difference U(z,t) - U(z) at fixed small t grows
/// toward z = 0: the corner entry of e^{itN} - 1 alone is t·(band-1), which
/// is 3.1e-5 at t = 1e-6 on a 32-band, already past the check's 1e-5. The
/// band-corner magnitudes of U(z) shrink with |z| (Laguerre decay), and from
/// |z| = 1 outward the difference stays below 8.2e-6.
fn sample_annulus(cfg: &RunConfig) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.samples)
        .map(|_| {
            let u: f64 = rng.gen();
            let th: f64 = rng.gen();
            Complex64::from_polar((1.0 + 3.0 * u).sqrt(), std::f64::consts::TAU * th)
        })
        .collect()
}

fn suite_algebra(cfg: &RunConfig) -> fockops::Result<Vec<CheckResult>> {
    let tc = cfg.truncation()?;
    let ladder = build_ladder(&tc)?;
    let su = build_su11(&tc)?;
    let band = cfg.band;
    let eye = CMatrix::identity(cfg.dim, cfg.dim);
    let mut out = Vec::new();

    out.push(cfg.check(
        "algebra.ladder_commutator",
        "ladder commutator [a, a\u{2020}] = 1 on the interior band",
        1e-12,
        || {
            let comm = &ladder.a * &ladder.a_dag - &ladder.a_dag * &ladder.a;
            band_residual(&comm, &eye, band)
        },
    )?);

    out.push(cfg.check(
        "algebra.number_commutators",
        "number-operator commutators [N, a\u{2020}] = a\u{2020} and [N, a] = -a",
        1e-12,
        || {
            let up = &ladder.n_op * &ladder.a_dag - &ladder.a_dag * &ladder.n_op;
            let down = &ladder.n_op * &ladder.a - &ladder.a * &ladder.n_op;
            let r1 = band_residual(&up, &ladder.a_dag, band)?;
            let r2 = band_residual(&down, &ladder.a.map(|e| -e), band)?;
            Ok(r1.max(r2))
        },
    )?);

    out.push(cfg.check(
        "algebra.completeness",
        "number-state completeness \u{3a3}|n\u{27e9}\u{27e8}n| = 1",
        1e-15,
        || {
            let mut acc = CMatrix::zeros(cfg.dim, cfg.dim);
            for n in 0..cfg.dim {
                let v = number_state(&tc, n)?;
                acc += v.amplitudes() * v.amplitudes().adjoint();
            }
            max_abs_diff(&acc, &CMatrix::identity(cfg.dim, cfg.dim))
        },
    )?);

    out.push(cfg.check(
        "algebra.su11_structure",
        "su(1,1) relations [K\u{2083},K\u{b1}] = \u{b1}K\u{b1}, [K\u{208a},K\u{208b}] = -2K\u{2083}",
        1e-11,
        || {
            let c_plus = &su.k3 * &su.k_plus - &su.k_plus * &su.k3;
            let c_minus = &su.k3 * &su.k_minus - &su.k_minus * &su.k3;
            let c_pm = &su.k_plus * &su.k_minus - &su.k_minus * &su.k_plus;
            let r1 = band_residual(&c_plus, &su.k_plus, band)?;
            let r2 = band_residual(&c_minus, &su.k_minus.map(|e| -e), band)?;
            let r3 = band_residual(&c_pm, &su.k3.map(|e| e * (-2.0)), band)?;
            Ok(r1.max(r2).max(r3))
        },
    )?);

    out.push(cfg.check(
        "algebra.edge_defect",
        "truncation defect of [a, a\u{2020}] equals 1 - dim at the edge state",
        1e-12,
        || {
            let comm = &ladder.a * &ladder.a_dag - &ladder.a_dag * &ladder.a;
            let corner = comm[(cfg.dim - 1, cfg.dim - 1)];
            Ok((corner - Complex64::new(1.0 - cfg.dim as f64, 0.0)).norm())
        },
    )?);

    Ok(out)
}

fn suite_coherent(cfg: &RunConfig) -> fockops::Result<Vec<CheckResult>> {
    let tc = cfg.truncation()?;
    let band = cfg.band;
    let samples = sample_params(cfg);
    let zs: Vec<Complex64> = samples.iter().map(|&(z, _)| z).collect();
    let mut out = Vec::new();

    for (name, form) in [
        ("coherent.disentangle_normal", DisentangleForm::Normal),
        ("coherent.disentangle_antinormal", DisentangleForm::Antinormal),
    ] {
        let zs = zs.clone();
        let side = match form {
            DisentangleForm::Normal => "normal",
            DisentangleForm::Antinormal => "antinormal",
        };
        out.push(cfg.check(
            name,
            &format!("{side}-ordered disentangling of U(z)"),
            1e-9,
            move || {
                Ok(exec::fold_max(zs.len(), |i| {
                    or_max((|| {
                        let exact = displacement_exact(zs[i], &tc)?;
                        let dis = displacement_disentangled(zs[i], &tc, form)?;
                        band_residual(&dis, &exact, band)
                    })())
                }))
            },
        )?);
    }

    {
        let zs = zs.clone();
        let nm = 20.min(cfg.dim - 1);
        out.push(cfg.check(
            "coherent.matrix_elements",
            "Laguerre closed form of \u{27e8}n|U(z)|m\u{27e9}",
            1e-9,
            move || {
                Ok(exec::fold_max(zs.len(), |i| {
                    or_max((|| {
                        let exact = displacement_exact(zs[i], &tc)?;
                        let mut worst = 0.0_f64;
                        for n in 0..=nm {
                            for m in 0..=nm {
                                let closed = coherent_matrix_element(n, m, zs[i]);
                                worst = worst.max((closed - exact[(n, m)]).norm());
                            }
                        }
                        Ok(worst)
                    })())
                }))
            },
        )?);
    }

    {
        let zs = zs.clone();
        out.push(cfg.check(
            "coherent.commutation",
            "exchange phase U(z)U(w) = e^{zw\u{304}-z\u{304}w} U(w)U(z)",
            1e-9,
            move || {
                let pairs = zs.len() - 1;
                Ok(exec::fold_max(pairs.max(1), |i| {
                    or_max((|| {
                        let (z, w) = (zs[i], zs[(i + 1) % zs.len()]);
                        let lhs = displacement_exact(z, &tc)? * displacement_exact(w, &tc)?;
                        let rhs = (displacement_exact(w, &tc)? * displacement_exact(z, &tc)?)
                            * commutation_phase(z, w);
                        band_residual(&lhs, &rhs, band)
                    })())
                }))
            },
        )?);
    }

    {
        out.push(cfg.check(
            "coherent.state_norm",
            "unit norm of coherent states U(z)|0\u{27e9}",
            1e-10,
            move || {
                Ok(exec::fold_max(zs.len(), |i| {
                    or_max((|| {
                        let v = coherent_state(zs[i], &tc)?;
                        Ok((v.norm() - 1.0).abs())
                    })())
                }))
            },
        )?);
    }

    Ok(out)
}

fn suite_extended(cfg: &RunConfig) -> fockops::Result<Vec<CheckResult>> {
    let tc = cfg.truncation()?;
    let band = cfg.band;
    let samples = sample_params(cfg);
    let mut out = Vec::new();

    for (name, form) in [
        ("extended.disentangle_normal", DisentangleForm::Normal),
        ("extended.disentangle_antinormal", DisentangleForm::Antinormal),
    ] {
        let samples = samples.clone();
        let side = match form {
            DisentangleForm::Normal => "normal",
            DisentangleForm::Antinormal => "antinormal",
        };
        out.push(cfg.check(
            name,
            &format!("{side}-ordered disentangling of U(z,t)"),
            1e-9,
            move || {
                Ok(exec::fold_max(samples.len(), |i| {
                    or_max((|| {
                        let p = ExtendedParam::new(samples[i].0, samples[i].1);
                        let exact = extended_exact(p, &tc)?;
                        let dis = extended_disentangled(p, &tc, form)?;
                        band_residual(&dis, &exact, band)
                    })())
                }))
            },
        )?);
    }

    {
        // sampled (z, t) plus t pinned into the degenerate-f neighborhood of 2π
        let tau = std::f64::consts::TAU;
        let mut cases: Vec<ExtendedParam> =
            samples.iter().map(|&(z, t)| ExtendedParam::new(z, t)).collect();
        for (i, &t) in [tau - 1e-4, tau + 1e-4, tau].iter().enumerate().cycle().take(6) {
            cases.push(ExtendedParam::new(samples[i % samples.len()].0, t));
        }
        let nm = 20.min(cfg.dim - 1);
        out.push(cfg.check(
            "extended.matrix_elements",
            "closed form of \u{27e8}n|U(z,t)|m\u{27e9} via w = f(t)z",
            1e-9,
            move || {
                Ok(exec::fold_max(cases.len(), |i| {
                    or_max((|| {
                        let exact = extended_exact(cases[i], &tc)?;
                        let mut worst = 0.0_f64;
                        for n in 0..=nm {
                            for m in 0..=nm {
                                let closed = extended_matrix_element(n, m, cases[i]);
                                worst = worst.max((closed - exact[(n, m)]).norm());
                            }
                        }
                        Ok(worst)
                    })())
                }))
            },
        )?);
    }

    {
        let samples = samples.clone();
        out.push(cfg.check(
            "extended.commutation",
            "exchange identity for U(z,t)U(w,s)",
            1e-9,
            move || {
                let pairs = samples.len() - 1;
                Ok(exec::fold_max(pairs.max(1), |i| {
                    let p1 = ExtendedParam::new(samples[i].0, samples[i].1);
                    let j = (i + 1) % samples.len();
                    let p2 = ExtendedParam::new(samples[j].0, samples[j].1);
                    or_max(extended_commutation_residual(p1, p2, &tc))
                }))
            },
        )?);
    }

    {
        // fixed decomposition regime: moderate t away from 0, unit disk z,
        // doubled dimension so the conjugators stay band-accurate
        let tc256 = TruncationConfig::new(cfg.dim.max(256), 16, 1e-9)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let n_conj = cfg.samples.clamp(4, 12);
        let cases: Vec<ExtendedParam> = (0..n_conj)
            .map(|_| {
                let u: f64 = rng.gen();
                let th: f64 = rng.gen();
                let ut: f64 = rng.gen();
                let z = Complex64::from_polar(u.sqrt(), std::f64::consts::TAU * th);
                ExtendedParam::new(z, 0.5 + 2.5 * ut)
            })
            .collect();
        out.push(cfg.check(
            "extended.conjugated_decomposition",
            "conjugated decomposition of U(z,t) at nonzero t",
            1e-6,
            move || {
                Ok(exec::fold_max(cases.len(), |i| {
                    or_max((|| {
                        let exact = extended_exact(cases[i], &tc256)?;
                        let dec = conjugated_decomposition(cases[i], &tc256)?;
                        band_residual(&dec, &exact, 16)
                    })())
                }))
            },
        )?);
    }

    {
        let ring = sample_annulus(cfg);
        out.push(cfg.check(
            "extended.small_t_limit",
            "continuity U(z,t) \u{2192} U(z) as t \u{2192} 0",
            1e-5,
            move || {
                Ok(exec::fold_max(ring.len(), |i| {
                    or_max((|| {
                        let ext = extended_exact(ExtendedParam::new(ring[i], 1e-6), &tc)?;
                        let disp = displacement_exact(ring[i], &tc)?;
                        band_residual(&ext, &disp, band)
                    })())
                }))
            },
        )?);
    }

    out.push(cfg.check(
        "extended.kernel_zero",
        "kernel values f(0) = 1 and g(0) = -1/2 from the series branch",
        0.0,
        || {
            let k = fockops::kernels::PhaseKernelValue::at(0.0);
            let df = (k.f - Complex64::new(1.0, 0.0)).norm();
            let dg = (k.g - Complex64::new(-0.5, 0.0)).norm();
            Ok(df.max(dg))
        },
    )?);

    Ok(out)
}

fn suite_glauber(cfg: &RunConfig) -> fockops::Result<Vec<CheckResult>> {
    // reconstruction band pinned at 8; the grid resolves twice the band in
    // both directions because the integrand is quadratic in the elements
    let band = 8;
    let tc = cfg.truncation_banded(band)?;
    let dim = tc.dim;
    let grid = build_polar_grid(2 * band + 2, 4 * band + 2)?;
    let mut out = Vec::new();

    {
        let grid = grid.clone();
        out.push(cfg.check(
            "glauber.vacuum",
            "reconstruction of |0\u{27e9}\u{27e8}0| from its displacement transform",
            1e-8,
            move || {
                let mut a = CMatrix::zeros(dim, dim);
                a[(0, 0)] = Complex64::new(1.0, 0.0);
                let rec = glauber_reconstruct(&a, &tc, &grid, 0.0)?;
                frobenius_band_distance(&rec, &a, band)
            },
        )?);
    }

    for (name, t) in [("glauber.offdiag_t0", 0.0), ("glauber.offdiag_t1", 1.0)] {
        let grid = grid.clone();
        out.push(cfg.check(
            name,
            &format!("reconstruction of |1\u{27e9}\u{27e8}2| + |2\u{27e9}\u{27e8}1| at t = {t}"),
            1e-6,
            move || {
                let mut a = CMatrix::zeros(dim, dim);
                a[(1, 2)] = Complex64::new(1.0, 0.0);
                a[(2, 1)] = Complex64::new(1.0, 0.0);
                let rec = glauber_reconstruct(&a, &tc, &grid, t)?;
                frobenius_band_distance(&rec, &a, band)
            },
        )?);
    }

    {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut a = CMatrix::zeros(dim, dim);
        for j in 0..band {
            for k in 0..band {
                a[(j, k)] = Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0);
            }
        }
        out.push(cfg.check(
            "glauber.random_band",
            "reconstruction of a random band-supported operator at t = 0.7",
            1e-6,
            move || {
                let rec = glauber_reconstruct(&a, &tc, &grid, 0.7)?;
                frobenius_band_distance(&rec, &a, band)
            },
        )?);
    }

    Ok(out)
}

fn suite_quadrature(cfg: &RunConfig) -> fockops::Result<Vec<CheckResult>> {
    let mut out = Vec::new();

    out.push(cfg.check(
        "quadrature.gauss_laguerre_moments",
        "Gauss-Laguerre moments \u{222b}e^{-u}u^k du = k!",
        1e-12,
        || {
            let rule = gauss_laguerre(20)?;
            let mut worst = 0.0_f64;
            let mut factorial = 1.0_f64;
            for k in 0..=8u32 {
                if k > 0 {
                    factorial *= k as f64;
                }
                let got: f64 = rule.iter().map(|&(u, w)| w * u.powi(k as i32)).sum();
                worst = worst.max((got - factorial).abs() / factorial);
            }
            Ok(worst)
        },
    )?);

    out.push(cfg.check(
        "quadrature.polar_mass",
        "unit Gaussian mass of the polar rule",
        1e-12,
        || {
            let grid = build_polar_grid(20, 40)?;
            Ok((grid.gaussian_mass() - 1.0).abs())
        },
    )?);

    out.push(cfg.check(
        "quadrature.t_grid_mass",
        "kept plus excluded mass of the t grid equals 1",
        1e-10,
        || {
            let grid = build_t_grid(T_GRID_MAX, T_WINDOW_HALF_WIDTH, T_NODES_PER_SEGMENT, F_FLOOR)?;
            Ok((grid.weight_sum() + grid.defect_bound() - 1.0).abs())
        },
    )?);

    {
        let tc16 = cfg.truncation_banded(16)?;
        out.push(cfg.check(
            "quadrature.resolution_coherent",
            "resolution of unity \u{222b}[d\u{b2}z]/\u{3c0} |z\u{27e9}\u{27e8}z| = 1",
            1e-10,
            || {
                let grid = build_polar_grid(20, 40)?;
                resolution_residual_coherent(&tc16, &grid)
            },
        )?);
    }

    {
        let tc16 = cfg.truncation_banded(16)?;
        out.push(cfg.check(
            "quadrature.resolution_extended",
            "resolution of unity under the |f(t)|\u{b2} measure at t = 1.7",
            1e-9,
            || {
                let grid = build_polar_grid(20, 40)?;
                resolution_residual_extended(1.7, &tc16, &grid)
            },
        )?);
    }

    {
        let tc8 = cfg.truncation_banded(8)?;
        let z_grid = build_polar_grid(10, 20)?;
        let t_grid = build_t_grid(T_GRID_MAX, T_WINDOW_HALF_WIDTH, T_NODES_PER_SEGMENT, F_FLOOR)?;
        let r = resolution_residual_t_integrated(&tc8, &z_grid, &t_grid)?;
        out.push(cfg.check(
            "quadrature.resolution_t_integrated",
            "doubly integrated resolution over the kept t domain",
            r.defect_bound + 1e-6,
            move || Ok(r.residual),
        )?);
    }

    Ok(out)
}

fn suite_squeeze(cfg: &RunConfig) -> fockops::Result<Vec<CheckResult>> {
    let tc = cfg.truncation()?;
    let samples = sample_params(cfg);
    let mut out = Vec::new();

    {
        let samples = samples.clone();
        out.push(cfg.check(
            "squeeze.unitarity",
            "unitarity of the squeeze-family operator V(z,t)",
            1e-11 * cfg.dim as f64,
            move || {
                Ok(exec::fold_max(samples.len(), |i| {
                    or_max((|| {
                        let p = ExtendedParam::new(samples[i].0, samples[i].1);
                        Ok(unitarity_defect(&squeeze_extended(p, &tc)?))
                    })())
                }))
            },
        )?);
    }

    {
        let samples = samples.clone();
        let dim = cfg.dim;
        out.push(cfg.check(
            "squeeze.phase_mode",
            "diagonal phases e^{is(n/2+1/4)} of V(0,s)",
            1e-12,
            move || {
                Ok(exec::fold_max(samples.len(), |i| {
                    or_max((|| {
                        let s = samples[i].1;
                        let v = squeeze_extended(
                            ExtendedParam::new(Complex64::new(0.0, 0.0), s),
                            &tc,
                        )?;
                        let mut expected = CMatrix::zeros(dim, dim);
                        for n in 0..dim {
                            expected[(n, n)] =
                                Complex64::new(0.0, s * (n as f64 / 2.0 + 0.25)).exp();
                        }
                        max_abs_diff(&v, &expected)
                    })())
                }))
            },
        )?);
    }

    {
        let samples = samples.clone();
        out.push(cfg.check(
            "squeeze.product_unitarity",
            "unitarity of the product U(z,t) V(w,s)",
            1e-10,
            move || {
                let pairs = samples.len() - 1;
                Ok(exec::fold_max(pairs.max(1), |i| {
                    or_max((|| {
                        let pu = ExtendedParam::new(samples[i].0, samples[i].1);
                        let j = (i + 1) % samples.len();
                        let pv = ExtendedParam::new(samples[j].0, samples[j].1);
                        Ok(unitarity_defect(&product_uv(pu, pv, &tc)?))
                    })())
                }))
            },
        )?);
    }

    {
        let dim = cfg.dim;
        out.push(cfg.check(
            "squeeze.parity",
            "V(z,t) never couples even and odd number states",
            1e-12,
            move || {
                Ok(exec::fold_max(samples.len(), |i| {
                    or_max((|| {
                        let p = ExtendedParam::new(samples[i].0, samples[i].1);
                        let v = squeeze_extended(p, &tc)?;
                        let mut leak = 0.0_f64;
                        for r in 0..dim {
                            for c in 0..dim {
                                if (r + c) % 2 == 1 {
                                    leak = leak.max(v[(r, c)].norm());
                                }
                            }
                        }
                        Ok(leak)
                    })())
                }))
            },
        )?);
    }

    Ok(out)
}

fn suite_trace(cfg: &RunConfig) -> fockops::Result<Vec<CheckResult>> {
    let mut out = Vec::new();

    out.push(cfg.check(
        "trace.abel_closed_form",
        "Abel-summed trace of U(z,t) vs e^{-i|z|\u{b2}/t}/(1-e^{it})",
        1e-6,
        || {
            let ts = [1.0, 2.5, std::f64::consts::PI];
            let zs = [0.0, 1.0];
            let mut worst = 0.0_f64;
            for &t in &ts {
                for &zr in &zs {
                    let p = ExtendedParam::new(Complex64::new(zr, 0.0), t);
                    let numeric = extended_trace_abel(p)?;
                    let closed = extended_trace_closed(p)?;
                    worst = worst.max((numeric - closed).norm());
                }
            }
            Ok(worst)
        },
    )?);

    out.push(cfg.check(
        "trace.probe_monotone",
        "Gaussian trace probe approaches 1 monotonically as t halves",
        0.0,
        || {
            let devs: Vec<f64> = [0.5, 0.25, 0.125, 0.0625]
                .iter()
                .map(|&t| {
                    trace_limit_probe(1.0, t)
                        .map(|p| (p - Complex64::new(1.0, 0.0)).norm())
                })
                .collect::<fockops::Result<_>>()?;
            let mut worst_increase = 0.0_f64;
            for pair in devs.windows(2) {
                worst_increase = worst_increase.max(pair[1] - pair[0]);
            }
            Ok(worst_increase)
        },
    )?);

    out.push(cfg.check(
        "trace.probe_value",
        "Gaussian trace probe deviation at t = 1/16",
        1e-4,
        || {
            let p = trace_limit_probe(1.0, 0.0625)?;
            let dev = (p - Complex64::new(1.0, 0.0)).norm();
            Ok((dev - 0.031_190_835_371_342_426).abs())
        },
    )?);

    Ok(out)
}

/// Runs one suite by name. Unknown names are rejected by
/// [`resolve_suites`] before this is reached.
pub fn run_suite(name: &str, cfg: &RunConfig) -> fockops::Result<Vec<CheckResult>> {
    match name {
        "algebra" => suite_algebra(cfg),
        "coherent" => suite_coherent(cfg),
        "extended" => suite_extended(cfg),
        "glauber" => suite_glauber(cfg),
        "quadrature" => suite_quadrature(cfg),
        "squeeze" => suite_squeeze(cfg),
        "trace" => suite_trace(cfg),
        other => Err(fockops::Error::InvalidConfig(format!("unknown suite '{other}'"))),
    }
}

/// Normalizes a suite selection: empty means all, order is always
/// alphabetical, duplicates collapse. Unknown names produce a usage error
/// message listing the valid suites.
pub fn resolve_suites(selected: &[String]) -> Result<Vec<String>, String> {
    if selected.is_empty() {
        return Ok(SUITE_NAMES.iter().map(|s| s.to_string()).collect());
    }
    let mut names: Vec<String> = Vec::new();
    for s in selected {
        if !SUITE_NAMES.contains(&s.as_str()) {
            return Err(format!(
                "unknown suite '{s}'; valid suites: {}",
                SUITE_NAMES.join(", ")
            ));
        }
        if !names.contains(s) {
            names.push(s.clone());
        }
    }
    names.sort();
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> RunConfig {
        RunConfig { dim: 64, band: 16, samples: 3, ..RunConfig::default() }
    }

    #[test]
    fn suite_names_are_sorted_and_match_check_prefixes() {
        let mut sorted = SUITE_NAMES.to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, SUITE_NAMES.to_vec());
        for check in all_check_names() {
            let prefix = check.split('.').next().unwrap();
            assert!(SUITE_NAMES.contains(&prefix), "{check} has no suite");
        }
    }

    #[test]
    fn check_names_are_unique() {
        let names = all_check_names();
        let mut dedup = names.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len());
    }

    #[test]
    fn emitted_names_match_the_registry() {
        let cfg = tiny();
        let mut emitted = Vec::new();
        for suite in SUITE_NAMES {
            for check in run_suite(suite, &cfg).unwrap() {
                emitted.push(check.name);
            }
        }
        assert_eq!(emitted, all_check_names());
    }

    #[test]
    fn algebra_suite_passes_on_small_config() {
        for check in run_suite("algebra", &tiny()).unwrap() {
            assert!(check.pass, "{}: residual {:e} > tol {:e}", check.name, check.residual, check.tol);
        }
    }

    #[test]
    fn trace_suite_passes_and_is_deterministic() {
        let cfg = tiny();
        let a = run_suite("trace", &cfg).unwrap();
        let b = run_suite("trace", &cfg).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert!(x.pass, "{} failed", x.name);
            assert_eq!(x.residual.to_bits(), y.residual.to_bits());
        }
    }

    #[test]
    fn overrides_change_tolerance_and_flip_pass() {
        let mut cfg = tiny();
        cfg.tol_overrides.insert("trace.abel_closed_form".into(), 1e-30);
        let checks = run_suite("trace", &cfg).unwrap();
        let abel = checks.iter().find(|c| c.name == "trace.abel_closed_form").unwrap();
        assert!(!abel.pass);
        assert_eq!(abel.tol, 1e-30);
        assert!(abel.residual > 0.0);
    }

    #[test]
    fn unknown_suite_is_rejected_with_the_valid_list() {
        let err = resolve_suites(&["nope".to_string()]).unwrap_err();
        assert!(err.contains("nope"));
        for name in SUITE_NAMES {
            assert!(err.contains(name));
        }
    }

    #[test]
    fn empty_selection_means_all_suites() {
        assert_eq!(resolve_suites(&[]).unwrap(), SUITE_NAMES.to_vec());
    }

    #[test]
    fn selection_is_sorted_and_deduplicated() {
        let got = resolve_suites(&[
            "trace".to_string(),
            "algebra".to_string(),
            "trace".to_string(),
        ])
        .unwrap();
        assert_eq!(got, vec!["algebra".to_string(), "trace".to_string()]);
    }

    #[test]
    fn config_validation_catches_bad_values() {
        let mut cfg = tiny();
        cfg.samples = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = tiny();
        cfg.tol_overrides.insert("no.such_check".into(), 1.0);
        assert!(cfg.validate().is_err());
        let mut cfg = tiny();
        cfg.band = cfg.dim;
        assert!(cfg.validate().is_err());
        assert!(tiny().validate().is_ok());
    }
}
