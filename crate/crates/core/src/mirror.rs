//! The mirror transformation and the extraction of `K_d`.
//!
//! The prefactor is `e^{f/α}` with `f = α·f_α(q) + x·f_x(q)`, the shift is
//! `t̃ = t + g(q)`. The bracket
//!
//! ```text
//! e^{-H·t/α} [ e^{f/α} Σ_d B_d q^d  -  e^{-H·g/α} Ω ]
//! ```
//!
//! must have no support at `α^{≥ -1}`; this fixes `f` and `g` degree by degree.
//! Integrating over `X` and reading the `α^{-3} x^s` part against
//! `2Φ(t̃) - Σ t̃_i ∂Φ/∂t̃_i` gives the invariants.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::coh::{CohClass, Shape};
use crate::error::{Error, Result};
use crate::euler::{EulerData, Route};
use crate::geometry::{GeometrySpec, ValidatedSpec};
use crate::laurent::{exp_minus_ht_over_alpha, LaurentBlock, Mono};
use crate::rational::{rat, Rat};
use crate::series::{
    degrees_of_total, degrees_up_to, lift_scalar, to_scalar, Degree, QSeries, ScalarSeries,
};

/// Coefficients of `f = α·f_α + x·f_x` and `g_1..g_m`; no degree-zero terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorMap {
    pub f_alpha: ScalarSeries,
    pub f_x: ScalarSeries,
    pub g: Vec<ScalarSeries>,
    pub order: u32,
}

impl MirrorMap {
    pub fn zero(m: usize, order: u32) -> MirrorMap {
        MirrorMap {
            f_alpha: ScalarSeries::new(),
            f_x: ScalarSeries::new(),
            g: vec![ScalarSeries::new(); m],
            order,
        }
    }

    pub fn num_factors(&self) -> usize {
        self.g.len()
    }

    pub fn is_zero(&self) -> bool {
        self.f_alpha.is_empty() && self.f_x.is_empty() && self.g.iter().all(|s| s.is_empty())
    }

    pub fn truncate(&self, order: u32) -> MirrorMap {
        let cut = |s: &ScalarSeries| -> ScalarSeries {
            s.iter()
                .filter(|(d, _)| d.total() <= order)
                .map(|(d, c)| (d.clone(), c.clone()))
                .collect()
        };
        MirrorMap {
            f_alpha: cut(&self.f_alpha),
            f_x: cut(&self.f_x),
            g: self.g.iter().map(cut).collect(),
            order: order.min(self.order),
        }
    }

    fn set(series: &mut ScalarSeries, d: &Degree, c: Rat) {
        if c.is_zero() {
            series.remove(d);
        } else {
            series.insert(d.clone(), c);
        }
    }
}

/// Solved invariant for one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantEntry {
    /// Coefficient of `x^s`.
    pub k: Rat,
    /// The integrated class as an `x`-polynomial, `(exponent, coefficient)`.
    pub k_raw: Vec<(i32, Rat)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantTable {
    pub s: u32,
    pub entries: BTreeMap<Degree, InvariantEntry>,
}

impl InvariantTable {
    pub fn k(&self, d: &Degree) -> Option<&Rat> {
        self.entries.get(d).map(|e| &e.k)
    }

    pub fn truncate(&self, order: u32) -> InvariantTable {
        InvariantTable {
            s: self.s,
            entries: self
                .entries
                .iter()
                .filter(|(d, _)| d.total() <= order)
                .map(|(d, e)| (d.clone(), e.clone()))
                .collect(),
        }
    }
}

/// `B_0` and `B_d` as used by the bracket: `Ω`-normalised for the Chern
/// route, denominator-cleared (`b(V+)`, `b(V-)·B_d`) for the Euler route.
fn bracket_inputs(
    data: &EulerData,
    cleared: bool,
) -> (LaurentBlock, &BTreeMap<Degree, LaurentBlock>) {
    match (&data.omega, cleared) {
        (Some(omega), false) => (omega.clone(), &data.terms),
        _ => (data.c_plus.clone(), &data.cleared),
    }
}

/// `e^{f/α}` and `e^{-H·g/α}` as q-series over the route's ring.
fn prefactors(data: &EulerData, mm: &MirrorMap, order: u32) -> Result<(QSeries, QSeries)> {
    let shape = &data.shape;
    let m = data.spec.num_factors();
    let one = LaurentBlock::one(shape, m);
    let mut f = lift_scalar(&mm.f_alpha, &one, m, order);
    if data.route == Route::Chern {
        let x_over_alpha = LaurentBlock::monomial(shape, m, -1, 1, CohClass::one(shape));
        f.add_assign(&lift_scalar(&mm.f_x, &x_over_alpha, m, order));
    }
    let mut g = QSeries::zero(shape, m, m, order);
    for (i, gi) in mm.g.iter().enumerate() {
        let h_over_alpha =
            LaurentBlock::monomial(shape, m, -1, 0, -&CohClass::hyperplane(shape, i));
        g.add_assign(&lift_scalar(gi, &h_over_alpha, m, order));
    }
    Ok((f.exp()?, g.exp()?))
}

/// `e^{f/α} Σ B_d q^d - e^{-H·g/α} B_0`, without the `e^{-H·t/α}` factor.
fn bracket(data: &EulerData, mm: &MirrorMap, order: u32, cleared: bool) -> Result<QSeries> {
    let m = data.spec.num_factors();
    let (b0, terms) = bracket_inputs(data, cleared);
    let (ef, eg) = prefactors(data, mm, order)?;
    let mut bs = QSeries::constant(b0.clone(), m, order);
    for (d, b) in terms {
        if d.total() <= order {
            bs.set(d.clone(), b.clone());
        }
    }
    let mut out = ef.mul(&bs);
    out.add_assign(&eg.scale_block(&b0).scale(&-Rat::one()));
    Ok(out)
}

/// The full integrand `e^{-H·t/α}[e^{f/α}B - e^{-H·t̃/α}Ω]` up to `mm.order`.
/// For the Euler route with concave bundles the `Ω`-less cleared form is
/// returned (multiplied through by `e(V-)`).
pub fn integrand(data: &EulerData, mm: &MirrorMap) -> Result<QSeries> {
    let order = mm.order.min(data.order);
    let e = exp_minus_ht_over_alpha(&data.shape);
    let b = bracket(data, mm, order, false)?;
    Ok(b.map_blocks(|blk| &e * blk))
}

/// Coordinates of a t-free block as `(monomial, H-exponent index) -> value`.
fn coordinates(block: &LaurentBlock) -> BTreeMap<(Mono, usize), Rat> {
    let mut out = BTreeMap::new();
    for (mono, c) in block.terms() {
        for (idx, v) in c.coeffs().iter().enumerate() {
            if !v.is_zero() {
                out.insert((mono.clone(), idx), v.clone());
            }
        }
    }
    out
}

/// Solves `Σ c_j columns_j = target` exactly; the solution must be unique.
fn solve_span(
    target: &LaurentBlock,
    columns: &[LaurentBlock],
) -> std::result::Result<Vec<Rat>, String> {
    let n = columns.len();
    let tcoords = coordinates(target);
    let ccoords: Vec<_> = columns.iter().map(coordinates).collect();
    let mut keys: Vec<&(Mono, usize)> = tcoords.keys().collect();
    for c in &ccoords {
        keys.extend(c.keys());
    }
    keys.sort();
    keys.dedup();
    let mut rows: Vec<Vec<Rat>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<Rat> = ccoords
                .iter()
                .map(|c| c.get(*k).cloned().unwrap_or_else(Rat::zero))
                .collect();
            row.push(tcoords.get(*k).cloned().unwrap_or_else(Rat::zero));
            row
        })
        .collect();

    let mut pivot_row = 0;
    for col in 0..n {
        let Some(p) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return Err(format!("column {col} is not determined"));
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for v in rows[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pivot = rows[pivot_row].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != pivot_row && !row[col].is_zero() {
                let factor = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pivot) {
                    *v -= &factor * p;
                }
            }
        }
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[n].is_zero()) {
        return Err("residual outside the span of the read-off directions".into());
    }
    Ok((0..n).map(|j| rows[j][n].clone()).collect())
}

/// Determines `f` and `g` so that the bracket is `O(α^{-2})`.
pub fn solve_mirror_map(data: &EulerData, order: u32) -> Result<MirrorMap> {
    let order = order.min(data.order);
    let m = data.spec.num_factors();
    let shape = &data.shape;
    let with_x = data.route == Route::Chern;
    let (b0, _) = bracket_inputs(data, true);

    let alpha_cols = vec![b0.clone()];
    let mut beta_cols = Vec::new();
    if with_x {
        beta_cols.push(&LaurentBlock::x(shape, m) * &b0);
    }
    for i in 0..m {
        beta_cols.push(b0.mul_coh(&CohClass::hyperplane(shape, i)));
    }

    let mut mm = MirrorMap::zero(m, order);
    for level in 1..=order {
        let mut current = mm.clone();
        current.order = level;
        let j = bracket(data, &current, level, true)?;
        for d in degrees_of_total(m, level) {
            let block = j.coefficient(&d);
            let inconsistency = |detail: String| Error::MirrorInconsistency {
                degree: d.0.clone(),
                detail,
            };
            if let Some((_, hi)) = block.alpha_range() {
                if hi > 0 {
                    return Err(inconsistency(format!("support at α^{hi}")));
                }
            }
            let a0 = -&block.alpha_slice(0);
            let a1 = -&block.alpha_slice(-1).shift(1, 0);
            let fa =
                solve_span(&a0, &alpha_cols).map_err(|e| inconsistency(format!("α^0: {e}")))?;
            let rest =
                solve_span(&a1, &beta_cols).map_err(|e| inconsistency(format!("α^-1: {e}")))?;
            MirrorMap::set(&mut mm.f_alpha, &d, fa[0].clone());
            let mut it = rest.into_iter();
            if with_x {
                MirrorMap::set(&mut mm.f_x, &d, it.next().expect("x column"));
            }
            for (i, c) in it.enumerate() {
                MirrorMap::set(&mut mm.g[i], &d, c);
            }
        }
    }
    Ok(mm)
}

/// Asserts that no coefficient of the integrand has support at `α^{≥ -1}`.
pub fn check_alpha_order(integrand: &QSeries) -> Result<()> {
    for (d, block) in integrand.terms() {
        if d.is_zero() {
            if !block.is_zero() {
                return Err(Error::Grading {
                    degree: d.0.clone(),
                    detail: "degree-zero part of the integrand does not vanish".into(),
                });
            }
            continue;
        }
        if let Some((_, hi)) = block.alpha_range() {
            if hi >= -1 {
                return Err(Error::MirrorInconsistency {
                    degree: d.0.clone(),
                    detail: format!("integrand has support at α^{hi} after solving"),
                });
            }
        }
    }
    Ok(())
}

/// `exp(d·g(q))` as a scalar series.
fn exp_pairing_g(d: &Degree, g: &[ScalarSeries], order: u32) -> Result<ScalarSeries> {
    let point = Shape::point();
    let m = d.0.len();
    let one = LaurentBlock::one(&point, 0);
    let mut arg = QSeries::zero(&point, 0, m, order);
    for (i, gi) in g.iter().enumerate() {
        if d.0[i] > 0 {
            arg.add_assign(&lift_scalar(gi, &one.scale(&rat(d.0[i] as i64)), m, order));
        }
    }
    Ok(to_scalar(&arg.exp()?))
}

/// `Σ_i d_i g_i(q)` as a scalar series.
fn pairing_g(d: &Degree, g: &[ScalarSeries]) -> ScalarSeries {
    let mut out = ScalarSeries::new();
    for (i, gi) in g.iter().enumerate() {
        for (e, c) in gi {
            *out.entry(e.clone()).or_insert_with(Rat::zero) += c * rat(d.0[i] as i64);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn coeff(series: &ScalarSeries, d: &Degree) -> Rat {
    series.get(d).cloned().unwrap_or_else(Rat::zero)
}

/// Reads off `K_d` for `1 <= |d| <= mm.order`.
pub fn extract_invariants(
    data: &EulerData,
    mm: &MirrorMap,
    integrand: &QSeries,
    s: u32,
) -> Result<InvariantTable> {
    let m = data.spec.num_factors();
    let order = integrand.order().min(mm.order);
    let norm = data.concave_normaliser().recip();
    let degrees = degrees_up_to(m, order, false);

    // α^{-3} part of the integrated bracket, keyed by degree.
    let mut integrated: BTreeMap<Degree, LaurentBlock> = BTreeMap::new();
    for d in &degrees {
        let block = integrand.coefficient(d).integrate().scale(&norm);
        for (mono, _) in block.terms() {
            if mono.x == s as i32 && mono.alpha != -3 {
                return Err(Error::Grading {
                    degree: d.0.clone(),
                    detail: format!("x^{s} part has support at α^{}", mono.alpha),
                });
            }
        }
        integrated.insert(d.clone(), block.alpha_slice(-3));
    }

    // Lower-degree weights, shared by every x-exponent.
    let mut exp_g: BTreeMap<Degree, ScalarSeries> = BTreeMap::new();
    let mut lin_g: BTreeMap<Degree, ScalarSeries> = BTreeMap::new();
    for d in &degrees {
        exp_g.insert(d.clone(), exp_pairing_g(d, &mm.g, order)?);
        lin_g.insert(d.clone(), pairing_g(d, &mm.g));
    }
    // [(2 - d'·g) e^{d'·g}]_{e}
    let t0_weight = |dp: &Degree, e: &Degree| -> Rat {
        let eg = &exp_g[dp];
        let lg = &lin_g[dp];
        let mut v = coeff(eg, e) * rat(2);
        for (a, ca) in lg {
            if let Some(rest) = e.checked_sub(a) {
                v -= ca * coeff(eg, &rest);
            }
        }
        v
    };

    let mut xs: Vec<i32> = integrated
        .values()
        .flat_map(|b| b.terms().map(|(mono, _)| mono.x).collect::<Vec<_>>())
        .collect();
    xs.push(s as i32);
    xs.sort_unstable();
    xs.dedup();

    let unit_t = vec![0u32; m];
    let mut solved: BTreeMap<i32, BTreeMap<Degree, Rat>> = BTreeMap::new();
    for &xe in &xs {
        let mut ks: BTreeMap<Degree, Rat> = BTreeMap::new();
        for d in &degrees {
            let lhs = integrated[d].scalar_at(&Mono::new(-3, xe, unit_t.clone()));
            let mut known = Rat::zero();
            for (dp, kp) in &ks {
                if let Some(rest) = d.checked_sub(dp) {
                    known += kp * t0_weight(dp, &rest);
                }
            }
            ks.insert(d.clone(), (lhs - known) / rat(2));
        }
        if xe != s as i32 {
            if let Some((d, _)) = ks.iter().find(|(_, v)| !v.is_zero()) {
                return Err(Error::Grading {
                    degree: d.0.clone(),
                    detail: format!("nonzero x^{xe} component with s = {s}"),
                });
            }
        }
        solved.insert(xe, ks);
    }
    let ks = &solved[&(s as i32)];

    // Overdetermination: t-linear terms are predicted, t^{>=2} terms vanish.
    for d in &degrees {
        let slice = integrated[d].filter(|mono| mono.x == s as i32);
        for (mono, c) in slice.terms() {
            if mono.t_degree() >= 2 && !c.is_zero() {
                return Err(Error::ExtractionInconsistency {
                    degree: d.0.clone(),
                    detail: format!("t-degree {} term survives", mono.t_degree()),
                });
            }
        }
        for i in 0..m {
            let mut t = unit_t.clone();
            t[i] = 1;
            let lhs = slice.scalar_at(&Mono::new(-3, s as i32, t));
            let mut rhs = Rat::zero();
            for (dp, kp) in ks {
                if dp.0[i] == 0 {
                    continue;
                }
                if let Some(rest) = d.checked_sub(dp) {
                    rhs -= kp * rat(dp.0[i] as i64) * coeff(&exp_g[dp], &rest);
                }
            }
            if lhs != rhs {
                return Err(Error::ExtractionInconsistency {
                    degree: d.0.clone(),
                    detail: format!("t_{} coefficient {lhs} but Φ predicts {rhs}", i + 1),
                });
            }
        }
    }

    let mut entries = BTreeMap::new();
    for d in &degrees {
        let k_raw: Vec<(i32, Rat)> = solved
            .iter()
            .map(|(xe, ks)| (*xe, ks[d].clone()))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        entries.insert(
            d.clone(),
            InvariantEntry {
                k: ks[d].clone(),
                k_raw,
            },
        );
    }
    Ok(InvariantTable { s, entries })
}

/// Outcome of a full run together with the names of the checks it passed.
#[derive(Clone, Debug)]
pub struct Computation {
    pub route: Route,
    pub s: u32,
    pub mirror_map: MirrorMap,
    pub table: InvariantTable,
    pub checks: Vec<&'static str>,
}

pub const CHECK_ALPHA_ORDER: &str = "alpha_order";
pub const CHECK_OVERDETERMINATION: &str = "overdetermination";
pub const CHECK_GRADING: &str = "grading";

/// Euler data, mirror map, integrand checks and extraction in one go.
pub fn compute(spec: &ValidatedSpec, route: Route, order: u32) -> Result<Computation> {
    let s = spec.s();
    if route == Route::Euler && s != 0 {
        return Err(Error::Unsupported(format!(
            "Euler class route needs s = 0, got s = {s}"
        )));
    }
    let data = EulerData::new(spec.spec(), route, order)?;
    let mm = solve_mirror_map(&data, order)?;
    let integ = integrand(&data, &mm)?;
    check_alpha_order(&integ)?;
    let table = extract_invariants(
        &data,
        &mm,
        &integ,
        if route == Route::Euler { 0 } else { s },
    )?;
    Ok(Computation {
        route,
        s,
        mirror_map: mm,
        table,
        checks: vec![CHECK_ALPHA_ORDER, CHECK_GRADING, CHECK_OVERDETERMINATION],
    })
}

/// True for `P^1` with `O(-1) ⊕ O(-1)`.
pub fn is_conifold(spec: &GeometrySpec) -> bool {
    spec.factors == [1]
        && spec.bundles.len() == 2
        && spec.concave().count() == 2
        && spec.bundles.iter().all(|b| b.multidegree == [-1])
}

fn conifold_k(spec: &GeometrySpec, d: u32) -> Result<Rat> {
    if !is_conifold(spec) {
        return Err(Error::Unsupported(
            "pointed invariants are only available for O(-1)+O(-1) over P^1".into(),
        ));
    }
    if d == 0 {
        return Err(Error::Domain("degree must be positive".into()));
    }
    let v = crate::geometry::validate(spec)?;
    let c = compute(&v, Route::Chern, d)?;
    Ok(c.table
        .k(&Degree(vec![d]))
        .cloned()
        .unwrap_or_else(Rat::zero))
}

/// One-pointed degree-`d` number `d·K_d`.
pub fn one_pointed(spec: &GeometrySpec, d: u32) -> Result<Rat> {
    Ok(conifold_k(spec, d)? * rat(d as i64))
}

/// Two-pointed degree-`d` number; the fibre integration contributes `d`.
pub fn two_pointed(spec: &GeometrySpec, d: u32) -> Result<Rat> {
    Ok(one_pointed(spec, d)? * rat(d as i64))
}
