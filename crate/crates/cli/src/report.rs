//! Report data model. Serialized reports are deterministic: map fields use
//! ordered containers, check ordering is fixed by the caller, and the
//! `seconds` field stays 0.0 unless timing was explicitly requested, so two
//! runs with the same configuration produce identical bytes.

use std::collections::BTreeMap;

use serde::Serialize;

/// Version stamp of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Echo of the run configuration embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub dim: usize,
    pub band: usize,
    pub seed: u64,
    pub samples: usize,
    pub z_radius: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub suites: Vec<String>,
    pub tol_overrides: BTreeMap<String, f64>,
}

/// One verified identity: worst residual seen, the tolerance it was held to,
/// and whether it passed. `paper_ref` names the identity being checked.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub paper_ref: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub config: ConfigEcho,
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> VerificationReport {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            config: ConfigEcho {
                dim: 128,
                band: 32,
                seed: 7,
                samples: 50,
                z_radius: 2.0,
                t_min: -6.0,
                t_max: 6.0,
                suites: vec!["algebra".into()],
                tol_overrides: BTreeMap::new(),
            },
            checks: vec![CheckResult {
                name: "algebra.completeness".into(),
                paper_ref: "number-state completeness".into(),
                residual: 0.0,
                tol: 1e-15,
                pass: true,
                seconds: 0.0,
            }],
        }
    }

    #[test]
    fn serialization_is_reproducible() {
        let a = sample_report().to_json();
        let b = sample_report().to_json();
        assert_eq!(a, b);
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn schema_fields_are_present() {
        let v: serde_json::Value = serde_json::from_str(&sample_report().to_json()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert!(v["config"]["dim"].is_number());
        let check = &v["checks"][0];
        for key in ["name", "paper_ref", "residual", "tol", "pass", "seconds"] {
            assert!(!check[key].is_null(), "missing {key}");
        }
    }
}
