//! Consistency suite: engine self-checks, agreement with localization, the
//! `x -> 0` reduction and truncation stability.

use num_traits::One;

use crate::error::{Error, Result};
use crate::euler::Route;
use crate::geometry::ValidatedSpec;
use crate::mirror::{
    compute, is_conifold, Computation, CHECK_ALPHA_ORDER, CHECK_GRADING, CHECK_OVERDETERMINATION,
};
use crate::oracle::{oracle_consensus, OracleReport};
use crate::rational::{rat, Rat};
use crate::series::Degree;

/// Samples and seed used for oracle comparisons.
#[derive(Clone, Copy, Debug)]
pub struct OracleSettings {
    pub samples: usize,
    pub seed: u64,
}

impl Default for OracleSettings {
    fn default() -> OracleSettings {
        OracleSettings {
            samples: 3,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: String,
    pub result: std::result::Result<(), String>,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, result: std::result::Result<(), String>) -> CheckOutcome {
        CheckOutcome {
            name: name.into(),
            result,
        }
    }

    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

#[derive(Clone, Debug)]
pub struct Verification {
    /// Chern-route run, when it succeeded.
    pub computation: Option<Computation>,
    pub oracles: Vec<OracleReport>,
    pub checks: Vec<CheckOutcome>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed())
    }
}

fn check_name(e: &Error) -> &'static str {
    match e {
        Error::Grading { .. } => CHECK_GRADING,
        Error::ExtractionInconsistency { .. } => CHECK_OVERDETERMINATION,
        _ => CHECK_ALPHA_ORDER,
    }
}

/// True when the localization oracle covers the geometry.
pub fn oracle_supported(spec: &ValidatedSpec) -> bool {
    spec.num_factors() == 1
}

/// True when the Euler-class route is defined for the geometry.
pub fn euler_route_supported(spec: &ValidatedSpec) -> bool {
    spec.s() == 0 && (spec.rank_concave() == 0 || spec.num_factors() == 1)
}

/// Degrees `1..=min(2, max_degree)` compared against localization.
pub fn oracle_degrees(max_degree: u32) -> impl Iterator<Item = u32> {
    1..=max_degree.min(2)
}

/// Runs the whole suite; never stops at the first failure.
pub fn verify(spec: &ValidatedSpec, max_degree: u32, oracle: OracleSettings) -> Verification {
    let mut checks = Vec::new();
    let mut oracles = Vec::new();

    let engine = compute(spec, Route::Chern, max_degree);
    let engine = match engine {
        Ok(c) => {
            for name in &c.checks {
                checks.push(CheckOutcome::new(*name, Ok(())));
            }
            c
        }
        Err(e) => {
            checks.push(CheckOutcome::new(check_name(&e), Err(e.to_string())));
            return Verification {
                computation: None,
                oracles,
                checks,
            };
        }
    };

    if is_conifold(spec) {
        let bad = engine
            .table
            .entries
            .iter()
            .find(|(d, e)| e.k.clone() * rat(d.0[0] as i64).pow(3) != Rat::one());
        checks.push(CheckOutcome::new(
            "multiple_cover",
            match bad {
                None => Ok(()),
                Some((d, e)) => Err(format!("K{:?} = {}", d.0, e.k)),
            },
        ));
    }

    if oracle_supported(spec) {
        for d in oracle_degrees(max_degree) {
            let name = format!("oracle_degree_{d}");
            let result = match oracle_consensus(spec, d, oracle.samples, oracle.seed) {
                Ok(r) => {
                    let k = engine.table.k(&Degree(vec![d])).cloned();
                    let res = if k.as_ref() == Some(&r.value) {
                        Ok(())
                    } else {
                        Err(format!(
                            "engine {:?} vs oracle {}",
                            k.map(|k| k.to_string()),
                            r.value
                        ))
                    };
                    oracles.push(r);
                    res
                }
                Err(e) => Err(e.to_string()),
            };
            checks.push(CheckOutcome::new(name, result));
        }
    }

    if euler_route_supported(spec) {
        let result = match compute(spec, Route::Euler, max_degree) {
            Ok(e) => {
                let chern: Vec<_> = engine
                    .table
                    .entries
                    .iter()
                    .map(|(d, v)| (d, &v.k))
                    .collect();
                let euler: Vec<_> = e.table.entries.iter().map(|(d, v)| (d, &v.k)).collect();
                if chern != euler {
                    Err("Chern route at x = 0 differs from the Euler route".to_string())
                } else if e.mirror_map.g != engine.mirror_map.g
                    || e.mirror_map.f_alpha != engine.mirror_map.f_alpha
                {
                    Err("mirror maps differ between routes".to_string())
                } else {
                    Ok(())
                }
            }
            Err(e) => Err(e.to_string()),
        };
        checks.push(CheckOutcome::new("x_to_zero", result));
    }

    let result = match compute(spec, Route::Chern, max_degree + 2) {
        Ok(wide) => {
            if wide.mirror_map.truncate(max_degree) != engine.mirror_map {
                Err(format!("mirror map changes at order {}", max_degree + 2))
            } else if wide.table.truncate(max_degree) != engine.table {
                Err(format!("invariants change at order {}", max_degree + 2))
            } else {
                Ok(())
            }
        }
        Err(e) => Err(e.to_string()),
    };
    checks.push(CheckOutcome::new("truncation_stability", result));

    Verification {
        computation: Some(engine),
        oracles,
        checks,
    }
}

/// Oracle values for the report of a plain computation; errors are returned
/// instead of being recorded.
pub fn oracle_values(
    spec: &ValidatedSpec,
    max_degree: u32,
    oracle: OracleSettings,
) -> Result<Vec<OracleReport>> {
    if !oracle_supported(spec) {
        return Ok(Vec::new());
    }
    oracle_degrees(max_degree)
        .map(|d| oracle_consensus(spec, d, oracle.samples, oracle.seed))
        .collect()
}
