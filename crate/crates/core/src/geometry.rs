//! Input geometry: a product of projective spaces `X = P^{n_1} x ... x P^{n_m}`
//! together with a split bundle `V = V+ ⊕ V-` of convex and concave line bundles.
//!
//! Text format, one directive per line, `#` starts a comment:
//!
//! ```text
//! name quintic threefold
//! space 4
//! bundle convex 5
//! ```
//!
//! `bundle concave a_1 .. a_m` takes non-negative magnitudes and denotes
//! `O(-a_1, .., -a_m)`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coh::{CohClass, Shape};
use crate::rational::rat;
use crate::series::Degree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BundleKind {
    Convex,
    Concave,
}

/// A line bundle `O(c_1, .., c_m)`, stored with its signed first Chern class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineBundleSpec {
    pub multidegree: Vec<i64>,
    pub kind: BundleKind,
}

impl LineBundleSpec {
    pub fn convex(multidegree: Vec<i64>) -> LineBundleSpec {
        LineBundleSpec {
            multidegree,
            kind: BundleKind::Convex,
        }
    }

    /// `O(-a_1, .., -a_m)` from magnitudes `a_i >= 0`.
    pub fn concave(magnitudes: Vec<i64>) -> LineBundleSpec {
        LineBundleSpec {
            multidegree: magnitudes.into_iter().map(|a| -a).collect(),
            kind: BundleKind::Concave,
        }
    }

    pub fn magnitudes(&self) -> Vec<i64> {
        self.multidegree.iter().map(|a| a.abs()).collect()
    }

    pub fn c1(&self, shape: &Arc<Shape>) -> CohClass {
        let coeffs: Vec<_> = self.multidegree.iter().map(|&a| rat(a)).collect();
        CohClass::linear(shape, &coeffs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometrySpec {
    pub name: Option<String>,
    pub factors: Vec<u32>,
    pub bundles: Vec<LineBundleSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("balance condition c1(V+) - c1(V-) = c1(X) fails on factor {factor}: {lhs} != {rhs}")]
    Balance { factor: usize, lhs: i64, rhs: i64 },
    #[error("rk V+ - rk V- - (n - 3) = {0} is negative")]
    NegativeS(i64),
}

fn err(line: usize, message: impl Into<String>) -> SpecError {
    SpecError {
        line,
        message: message.into(),
    }
}

/// Parses the line format. Balance and `s >= 0` are left to [`validate`].
pub fn parse_spec(text: &str) -> Result<GeometrySpec, SpecError> {
    let mut name = None;
    let mut factors = Vec::new();
    let mut bundles: Vec<(usize, LineBundleSpec)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (directive, rest) = match line.split_once(char::is_whitespace) {
            Some((d, r)) => (d, r.trim()),
            None => (line, ""),
        };
        match directive {
            "name" => {
                if name.is_some() {
                    return Err(err(lineno, "duplicate `name`"));
                }
                name = Some(rest.to_string());
            }
            "space" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 1 {
                    return Err(err(lineno, "`space` takes exactly one dimension"));
                }
                let n: u32 = toks[0]
                    .parse()
                    .map_err(|_| err(lineno, format!("invalid dimension `{}`", toks[0])))?;
                if n == 0 {
                    return Err(err(lineno, "dimension must be at least 1"));
                }
                if n > 64 {
                    return Err(err(lineno, "dimension too large"));
                }
                factors.push(n);
            }
            "bundle" => {
                let mut toks = rest.split_whitespace();
                let kind = match toks.next() {
                    Some("convex") => BundleKind::Convex,
                    Some("concave") => BundleKind::Concave,
                    Some(other) => {
                        return Err(err(lineno, format!("unknown bundle kind `{other}`")))
                    }
                    None => return Err(err(lineno, "`bundle` needs a kind")),
                };
                let mut degs = Vec::new();
                for tok in toks {
                    let a: i64 = tok
                        .parse()
                        .map_err(|_| err(lineno, format!("non-integer degree `{tok}`")))?;
                    if a.unsigned_abs() > 1 << 20 {
                        return Err(err(lineno, format!("degree `{tok}` out of range")));
                    }
                    degs.push(a);
                }
                if degs.iter().any(|&a| a < 0) {
                    return Err(err(
                        lineno,
                        "degrees are non-negative (concave bundles take magnitudes)",
                    ));
                }
                let bundle = match kind {
                    BundleKind::Convex => LineBundleSpec::convex(degs),
                    BundleKind::Concave => {
                        if degs.iter().all(|&a| a == 0) {
                            return Err(err(lineno, "concave bundle must have a nonzero degree"));
                        }
                        LineBundleSpec::concave(degs)
                    }
                };
                bundles.push((lineno, bundle));
            }
            other => return Err(err(lineno, format!("unknown directive `{other}`"))),
        }
    }

    if factors.is_empty() {
        return Err(err(text.lines().count().max(1), "spec has no `space` line"));
    }
    for (lineno, b) in &bundles {
        if b.multidegree.len() != factors.len() {
            return Err(err(
                *lineno,
                format!(
                    "bundle has {} degrees but there are {} factors",
                    b.multidegree.len(),
                    factors.len()
                ),
            ));
        }
    }
    Ok(GeometrySpec {
        name,
        factors,
        bundles: bundles.into_iter().map(|(_, b)| b).collect(),
    })
}

impl GeometrySpec {
    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn dimension(&self) -> u32 {
        self.factors.iter().sum()
    }

    pub fn shape(&self) -> Arc<Shape> {
        Shape::new(self.factors.clone())
    }

    pub fn convex(&self) -> impl Iterator<Item = &LineBundleSpec> + '_ {
        self.bundles.iter().filter(|b| b.kind == BundleKind::Convex)
    }

    pub fn concave(&self) -> impl Iterator<Item = &LineBundleSpec> + '_ {
        self.bundles
            .iter()
            .filter(|b| b.kind == BundleKind::Concave)
    }

    pub fn rank_convex(&self) -> usize {
        self.convex().count()
    }

    pub fn rank_concave(&self) -> usize {
        self.concave().count()
    }

    /// `s = rk V+ - rk V- - (n - 3)`.
    pub fn s(&self) -> i64 {
        self.rank_convex() as i64 - self.rank_concave() as i64 - (self.dimension() as i64 - 3)
    }

    /// Serialises back to the line format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GeometrySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = &self.name {
            writeln!(f, "name {name}")?;
        }
        for n in &self.factors {
            writeln!(f, "space {n}")?;
        }
        for b in &self.bundles {
            let kind = match b.kind {
                BundleKind::Convex => "convex",
                BundleKind::Concave => "concave",
            };
            write!(f, "bundle {kind}")?;
            for a in b.magnitudes() {
                write!(f, " {a}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A spec that satisfies the balance condition and `s >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidatedSpec {
    spec: GeometrySpec,
    s: u32,
}

impl ValidatedSpec {
    pub fn spec(&self) -> &GeometrySpec {
        &self.spec
    }

    pub fn s(&self) -> u32 {
        self.s
    }
}

impl std::ops::Deref for ValidatedSpec {
    type Target = GeometrySpec;
    fn deref(&self) -> &GeometrySpec {
        &self.spec
    }
}

pub fn validate(spec: &GeometrySpec) -> Result<ValidatedSpec, ValidationError> {
    for (i, &n) in spec.factors.iter().enumerate() {
        let lhs: i64 = spec
            .bundles
            .iter()
            .map(|b| match b.kind {
                BundleKind::Convex => b.multidegree[i],
                BundleKind::Concave => -b.multidegree[i],
            })
            .sum();
        let rhs = n as i64 + 1;
        if lhs != rhs {
            return Err(ValidationError::Balance {
                factor: i,
                lhs,
                rhs,
            });
        }
    }
    let s = spec.s();
    if s < 0 {
        return Err(ValidationError::NegativeS(s));
    }
    Ok(ValidatedSpec {
        spec: spec.clone(),
        s: s as u32,
    })
}

/// `<c_1(L), d>`.
pub fn pairing(bundle: &LineBundleSpec, d: &Degree) -> i64 {
    assert_eq!(bundle.multidegree.len(), d.0.len(), "arity mismatch");
    bundle
        .multidegree
        .iter()
        .zip(&d.0)
        .map(|(a, &b)| a * b as i64)
        .sum()
}

/// `c_1(X) = sum_i (n_i + 1) H_i`.
pub fn c1_x(spec: &GeometrySpec) -> CohClass {
    let shape = spec.shape();
    let coeffs: Vec<_> = spec.factors.iter().map(|&n| rat(n as i64 + 1)).collect();
    CohClass::linear(&shape, &coeffs)
}
