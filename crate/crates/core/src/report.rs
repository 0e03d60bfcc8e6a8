//! Machine-readable run reports. Every rational is a `"p/q"` string.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::euler::Route;
use crate::geometry::GeometrySpec;
use crate::mirror::Computation;
use crate::rational::{format_rat, parse_rat, Rat};
use crate::series::Degree;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FReport {
    pub alpha: Vec<(Vec<u32>, String)>,
    pub x: Vec<(Vec<u32>, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MirrorMapReport {
    pub f: FReport,
    /// `(axis, degree, value)`.
    pub g: Vec<(usize, Vec<u32>, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub degree: Vec<u32>,
    #[serde(rename = "K")]
    pub k: String,
    #[serde(rename = "K_raw")]
    pub k_raw: Vec<(i32, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
    #[serde(default, rename = "match", skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub spec: GeometrySpec,
    pub route: String,
    pub max_degree: u32,
    pub s: u32,
    pub mirror_map: MirrorMapReport,
    pub invariants: Vec<InvariantReport>,
    pub checks: Vec<CheckReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field {field}: {value:?} is not an exact rational")]
    Rational { field: String, value: String },
}

pub fn route_name(route: Route) -> &'static str {
    match route {
        Route::Chern => "chern",
        Route::Euler => "euler",
    }
}

impl RunReport {
    pub fn new(spec: &GeometrySpec, max_degree: u32, c: &Computation) -> RunReport {
        let series = |s: &crate::series::ScalarSeries| -> Vec<(Vec<u32>, String)> {
            s.iter()
                .map(|(d, v)| (d.0.clone(), format_rat(v)))
                .collect()
        };
        let mut g = Vec::new();
        for (i, gi) in c.mirror_map.g.iter().enumerate() {
            for (d, v) in gi {
                g.push((i, d.0.clone(), format_rat(v)));
            }
        }
        RunReport {
            spec: spec.clone(),
            route: route_name(c.route).to_string(),
            max_degree,
            s: c.s,
            mirror_map: MirrorMapReport {
                f: FReport {
                    alpha: series(&c.mirror_map.f_alpha),
                    x: series(&c.mirror_map.f_x),
                },
                g,
            },
            invariants: c
                .table
                .entries
                .iter()
                .map(|(d, e)| InvariantReport {
                    degree: d.0.clone(),
                    k: format_rat(&e.k),
                    k_raw: e.k_raw.iter().map(|(x, v)| (*x, format_rat(v))).collect(),
                    oracle: None,
                    matches: None,
                })
                .collect(),
            checks: c
                .checks
                .iter()
                .map(|name| CheckReport {
                    name: name.to_string(),
                    pass: true,
                    detail: None,
                })
                .collect(),
            timing_ms: None,
        }
    }

    /// Attaches an oracle value to the entry of degree `d`.
    pub fn set_oracle(&mut self, d: &Degree, value: &Rat) {
        if let Some(e) = self.invariants.iter_mut().find(|e| e.degree == d.0) {
            let matches = parse_rat(&e.k).map(|k| &k == value).unwrap_or(false);
            e.oracle = Some(format_rat(value));
            e.matches = Some(matches);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Every rational field, for exact round-trip checks.
    pub fn rationals(&self) -> Vec<(String, &str)> {
        let mut out: Vec<(String, &str)> = Vec::new();
        for (d, v) in &self.mirror_map.f.alpha {
            out.push((format!("f.alpha{d:?}"), v));
        }
        for (d, v) in &self.mirror_map.f.x {
            out.push((format!("f.x{d:?}"), v));
        }
        for (i, d, v) in &self.mirror_map.g {
            out.push((format!("g{i}{d:?}"), v));
        }
        for e in &self.invariants {
            out.push((format!("K{:?}", e.degree), &e.k));
            for (x, v) in &e.k_raw {
                out.push((format!("K_raw{:?}.x{x}", e.degree), v));
            }
            if let Some(o) = &e.oracle {
                out.push((format!("oracle{:?}", e.degree), o));
            }
        }
        out
    }
}

/// Parses a JSON report and checks that every rational is exact.
pub fn parse_report(text: &str) -> Result<RunReport, ReportError> {
    let report: RunReport = serde_json::from_str(text)?;
    for (field, value) in report.rationals() {
        if parse_rat(value).is_err() {
            return Err(ReportError::Rational {
                field,
                value: value.to_string(),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{parse_spec, validate};
    use crate::mirror::compute;
    use crate::rational::rat;

    #[test]
    fn json_round_trip_is_exact() {
        let spec = parse_spec("name local P2\nspace 2\nbundle concave 3").unwrap();
        let v = validate(&spec).unwrap();
        let c = compute(&v, Route::Chern, 3).unwrap();
        let mut r = RunReport::new(&spec, 3, &c);
        r.set_oracle(&Degree(vec![1]), &rat(3));
        let text = r.to_json();
        let back = parse_report(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.invariants[1].k, "-45/8");
        assert_eq!(back.invariants[0].matches, Some(true));
        for (d, e) in &c.table.entries {
            let entry = back.invariants.iter().find(|i| i.degree == d.0).unwrap();
            assert_eq!(parse_rat(&entry.k).unwrap(), e.k);
        }
    }

    #[test]
    fn rejects_inexact_numbers() {
        let spec = parse_spec("space 1\nbundle concave 1\nbundle concave 1").unwrap();
        let v = validate(&spec).unwrap();
        let c = compute(&v, Route::Chern, 1).unwrap();
        let text = RunReport::new(&spec, 1, &c)
            .to_json()
            .replace("\"1/1\"", "\"1.0\"");
        assert!(matches!(
            parse_report(&text),
            Err(ReportError::Rational { .. })
        ));
        assert!(matches!(parse_report("{"), Err(ReportError::Json(_))));
    }
}
