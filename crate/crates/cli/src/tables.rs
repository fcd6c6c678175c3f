//! CSV emitters: matrix-element tables (closed form next to an
//! exponential-oracle column) and the trace-probe series. Floats are written
//! in lower exponential form, which round-trips f64 exactly and keeps files
//! byte-stable across runs.

use std::io::Write;

use fockops::Complex64;

use fockops::coherent::coherent_matrix_element;
use fockops::extended::{extended_exact, extended_matrix_element, ExtendedParam};
use fockops::kernels::{distance_to_two_pi_multiple, TWO_PI_GUARD};
use fockops::phase_space::trace_limit_probe;
use fockops::TruncationConfig;

/// Highest index the element tables accept; the oracle dimension must stay
/// comfortably above the requested block for truncation not to intrude.
pub const TABLE_INDEX_MAX: usize = 64;

const ORACLE_DIM: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Coherent,
    Extended,
}

fn fmt(v: f64) -> String {
    format!("{v:e}")
}

/// Matrix-element table for 0 ≤ n ≤ n_max, 0 ≤ m ≤ m_max: closed form,
/// exponential oracle at dimension 128, and their absolute difference.
/// For the coherent kind t must be absent.
pub fn matrix_table_csv(
    kind: TableKind,
    n_max: usize,
    m_max: usize,
    z: Complex64,
    t: Option<f64>,
) -> Result<String, String> {
    if n_max > TABLE_INDEX_MAX || m_max > TABLE_INDEX_MAX {
        return Err(format!("indices must stay within {TABLE_INDEX_MAX} (the oracle runs at dimension {ORACLE_DIM})"));
    }
    let t = match (kind, t) {
        (TableKind::Coherent, Some(_)) => {
            return Err("--t applies only to --kind extended".into());
        }
        (TableKind::Coherent, None) => 0.0,
        (TableKind::Extended, given) => given.unwrap_or(0.0),
    };
    let cfg = TruncationConfig::new(ORACLE_DIM, ORACLE_DIM / 2, 1e-9).map_err(|e| e.to_string())?;
    let p = ExtendedParam::new(z, t);
    let oracle = extended_exact(p, &cfg).map_err(|e| e.to_string())?;

    let mut out = String::from("n,m,re_closed,im_closed,re_oracle,im_oracle,abs_err\n");
    for n in 0..=n_max {
        for m in 0..=m_max {
            let closed = match kind {
                TableKind::Coherent => coherent_matrix_element(n, m, z),
                TableKind::Extended => extended_matrix_element(n, m, p),
            };
            let reference = oracle[(n, m)];
            let err = (closed - reference).norm();
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                n,
                m,
                fmt(closed.re),
                fmt(closed.im),
                fmt(reference.re),
                fmt(reference.im),
                fmt(err),
            ));
        }
    }
    Ok(out)
}

/// Probe series for plotting the trace limit. Values of t at multiples of 2π
/// (where the trace diverges) are skipped; each skip leaves a comment row in
/// place and the returned list of warnings, so row positions stay aligned
/// with the input.
pub fn probe_series_csv(sigma: f64, t_list: &[f64]) -> Result<(String, Vec<String>), String> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(format!("sigma = {sigma}, need finite > 0"));
    }
    let mut out = String::from("t,re_probe,im_probe,abs_dev_from_1\n");
    let mut warnings = Vec::new();
    for &t in t_list {
        if distance_to_two_pi_multiple(t).abs() < TWO_PI_GUARD {
            let msg = format!("skipped t = {}: the trace diverges at multiples of 2*pi", fmt(t));
            out.push_str(&format!("# {msg}\n"));
            warnings.push(msg);
            continue;
        }
        let p = trace_limit_probe(sigma, t).map_err(|e| e.to_string())?;
        let dev = (p - Complex64::new(1.0, 0.0)).norm();
        out.push_str(&format!("{},{},{},{}\n", fmt(t), fmt(p.re), fmt(p.im), fmt(dev)));
    }
    Ok((out, warnings))
}

/// Writes `content` to `path`, mapping failures to printable messages.
pub fn write_file(path: &std::path::Path, content: &str) -> Result<(), String> {
    let mut file = std::fs::File::create(path)
        .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    file.write_all(content.as_bytes())
        .map_err(|e| format!("cannot write {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn parse_rows(csv: &str) -> Vec<Vec<String>> {
        csv.lines()
            .skip(1)
            .filter(|l| !l.starts_with('#'))
            .map(|l| l.split(',').map(|s| s.to_string()).collect())
            .collect()
    }

    #[test]
    fn coherent_table_has_expected_shape_and_vacuum_entry() {
        let csv =
            matrix_table_csv(TableKind::Coherent, 2, 2, Complex64::new(1.0, 0.0), None).unwrap();
        let rows = parse_rows(&csv);
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0][0], "0");
        assert_eq!(rows[0][1], "0");
        // ⟨0|U(1)|0⟩ = e^{-1/2}
        let re: f64 = rows[0][2].parse().unwrap();
        assert!((re - 0.606_530_659_712_633_4).abs() < 1e-12);
        for row in &rows {
            let err: f64 = row[6].parse().unwrap();
            assert!(err <= 1e-9);
        }
    }

    #[test]
    fn extended_table_at_zero_z_is_diagonal_phases() {
        let t = std::f64::consts::FRAC_PI_2;
        let csv =
            matrix_table_csv(TableKind::Extended, 3, 3, Complex64::new(0.0, 0.0), Some(t)).unwrap();
        for row in parse_rows(&csv) {
            let (n, m): (usize, usize) = (row[0].parse().unwrap(), row[1].parse().unwrap());
            let closed = Complex64::new(row[2].parse().unwrap(), row[3].parse().unwrap());
            if n == m {
                let expect = Complex64::new(0.0, t * m as f64).exp();
                assert!((closed - expect).norm() < 1e-14);
            } else {
                assert_eq!(closed.norm(), 0.0);
            }
        }
    }

    #[test]
    fn table_rejects_out_of_range_indices_and_stray_t() {
        assert!(matrix_table_csv(TableKind::Coherent, 65, 0, Complex64::new(1.0, 0.0), None)
            .is_err());
        assert!(
            matrix_table_csv(TableKind::Coherent, 2, 2, Complex64::new(1.0, 0.0), Some(1.0))
                .is_err()
        );
    }

    #[test]
    fn probe_series_matches_closed_values_and_monotonicity() {
        let (csv, warnings) =
            probe_series_csv(1.0, &[0.5, 0.25, 0.125, 0.0625]).unwrap();
        assert!(warnings.is_empty());
        let rows = parse_rows(&csv);
        assert_eq!(rows.len(), 4);
        let devs: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
        assert!((devs[3] - 0.031_190_835_371_342_426).abs() < 1e-12);
        for pair in devs.windows(2) {
            assert!(pair[1] < pair[0]);
        }
    }

    #[test]
    fn probe_series_skips_divergent_t_with_a_warning_row() {
        let (csv, warnings) = probe_series_csv(1.0, &[0.5, TAU, 0.25]).unwrap();
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("diverges"));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[2].starts_with('#'));
        assert_eq!(parse_rows(&csv).len(), 2);
    }

    #[test]
    fn empty_probe_list_gives_header_only() {
        let (csv, warnings) = probe_series_csv(1.0, &[]).unwrap();
        assert_eq!(csv, "t,re_probe,im_probe,abs_dev_from_1\n");
        assert!(warnings.is_empty());
    }

    #[test]
    fn float_format_round_trips() {
        for &v in &[0.0, 1.0, -0.5, 1e-300, std::f64::consts::PI] {
            let s = fmt(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
        }
    }
}
