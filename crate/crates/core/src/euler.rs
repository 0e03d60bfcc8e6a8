//! Hypergeometric data: `Ω`, the normal Euler factor of `X` inside the linear
//! sigma model, the classes `B_d` and the assembled series `B(t)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use crate::coh::{CohClass, Shape};
use crate::error::{Error, Result};
use crate::geometry::{pairing, BundleKind, GeometrySpec};
use crate::laurent::{
    exp_minus_ht_over_alpha, invert_linear_factor, invert_x_linear, linear_factor, LaurentBlock,
};
use crate::rational::{rat, Rat};
use crate::series::{degrees_up_to, Degree, QSeries};

/// Which multiplicative class `b` the pipeline runs with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Route {
    /// Chern polynomial in `x`.
    Chern,
    /// Euler class, i.e. `x -> 0` applied from the start.
    Euler,
}

/// `c_1(L)` as a class over `shape` (which may be an enlarged box).
fn c1_on(multidegree: &[i64], shape: &Arc<Shape>) -> CohClass {
    let coeffs: Vec<Rat> = multidegree.iter().map(|&a| rat(a)).collect();
    CohClass::linear(shape, &coeffs)
}

/// `Ω = ∏_convex (x + c_1) / ∏_concave (x + c_1)`.
pub fn omega(spec: &GeometrySpec) -> LaurentBlock {
    let shape = spec.shape();
    let nt = spec.num_factors();
    let mut out = LaurentBlock::one(&shape, nt);
    for b in &spec.bundles {
        let c = c1_on(&b.multidegree, &shape);
        let f = match b.kind {
            BundleKind::Convex => linear_factor(&c, 0, true, nt),
            BundleKind::Concave => invert_x_linear(&c, nt).expect("c_1 is nilpotent"),
        };
        out = &out * &f;
    }
    out
}

/// `e(N) = ∏_i ∏_{k=1}^{d_i} (H_i - kα)^{n_i+1}` and its inverse.
#[derive(Clone, Debug)]
pub struct EulerNormal {
    pub factor: LaurentBlock,
    pub inverse: LaurentBlock,
}

pub fn euler_normal(spec: &GeometrySpec, d: &Degree) -> EulerNormal {
    euler_normal_on(&spec.factors, d, &spec.shape(), spec.num_factors())
}

fn euler_normal_on(factors: &[u32], d: &Degree, shape: &Arc<Shape>, nt: usize) -> EulerNormal {
    let mut factor = LaurentBlock::one(shape, nt);
    let mut inverse = LaurentBlock::one(shape, nt);
    for (i, (&n, &di)) in factors.iter().zip(&d.0).enumerate() {
        let h = CohClass::hyperplane(shape, i);
        for k in 1..=di as i64 {
            let lin = linear_factor(&h, -k, false, nt).pow(n + 1);
            let inv = invert_linear_factor(&h, k, nt)
                .expect("k >= 1 and H is nilpotent")
                .pow(n + 1);
            factor = &factor * &lin;
            inverse = &inverse * &inv;
        }
    }
    EulerNormal { factor, inverse }
}

/// The coefficient ring for a route. The Euler route with concave bundles
/// works in `Q[H]/(H^{n+1+r})`, `r` the number of concave summands, so that
/// `e(V-)` can be divided out at integration time.
pub fn route_shape(spec: &GeometrySpec, route: Route) -> Result<Arc<Shape>> {
    match route {
        Route::Chern => Ok(spec.shape()),
        Route::Euler => {
            let r = spec.rank_concave() as u32;
            if r == 0 {
                Ok(spec.shape())
            } else if spec.num_factors() == 1 {
                Ok(Shape::new(vec![spec.factors[0] + r]))
            } else {
                Err(Error::Unsupported(
                    "Euler class route with concave bundles needs a single factor".into(),
                ))
            }
        }
    }
}

/// `B_d` for `d != 0` without the `Ω` normalisation, over `shape`.
fn b_d_on(spec: &GeometrySpec, d: &Degree, shape: &Arc<Shape>, with_x: bool) -> LaurentBlock {
    let nt = spec.num_factors();
    let mut out = euler_normal_on(&spec.factors, d, shape, nt).inverse;
    for b in &spec.bundles {
        let c = c1_on(&b.multidegree, shape);
        let p = pairing(b, d);
        match b.kind {
            BundleKind::Convex => {
                for k in 0..=p {
                    out = &out * &linear_factor(&c, -k, with_x, nt);
                }
            }
            BundleKind::Concave => {
                for k in 1..=(-p - 1) {
                    out = &out * &linear_factor(&c, k, with_x, nt);
                }
            }
        }
    }
    out
}

/// `B_d` with `x` tracked; `B_0 = Ω`.
pub fn b_d(spec: &GeometrySpec, d: &Degree) -> LaurentBlock {
    if d.is_zero() {
        return omega(spec);
    }
    b_d_on(spec, d, &spec.shape(), true)
}

/// `B(t)`: degree-`d` coefficient `e^{-H·t/α} B_d` for `|d| <= order`.
pub fn b_series(spec: &GeometrySpec, order: u32) -> QSeries {
    let shape = spec.shape();
    let m = spec.num_factors();
    let e = exp_minus_ht_over_alpha(&shape);
    let mut out = QSeries::zero(&shape, m, m, order);
    for d in degrees_up_to(m, order, true) {
        let b = b_d(spec, &d);
        out.set(d, &e * &b);
    }
    out
}

/// Euler data for one route, stored in cleared-denominator form:
/// `c_plus = b(V+)`, `c_minus = b(V-)` and `terms[d] = c_minus · B_d`, so that
/// `Ω = c_plus / c_minus` never has to be inverted.
#[derive(Clone, Debug)]
pub struct EulerData {
    pub spec: GeometrySpec,
    pub route: Route,
    pub shape: Arc<Shape>,
    pub c_plus: LaurentBlock,
    pub c_minus: LaurentBlock,
    /// `Ω` when it exists in the route's ring.
    pub omega: Option<LaurentBlock>,
    /// `B_d` for `1 <= |d| <= order`.
    pub terms: BTreeMap<Degree, LaurentBlock>,
    /// `c_minus · B_d` for `1 <= |d| <= order`.
    pub cleared: BTreeMap<Degree, LaurentBlock>,
    pub order: u32,
}

impl EulerData {
    pub fn new(spec: &GeometrySpec, route: Route, order: u32) -> Result<EulerData> {
        let shape = route_shape(spec, route)?;
        let m = spec.num_factors();
        let with_x = route == Route::Chern;
        let mut c_plus = LaurentBlock::one(&shape, m);
        let mut c_minus = LaurentBlock::one(&shape, m);
        for b in &spec.bundles {
            let f = linear_factor(&c1_on(&b.multidegree, &shape), 0, with_x, m);
            match b.kind {
                BundleKind::Convex => c_plus = &c_plus * &f,
                BundleKind::Concave => c_minus = &c_minus * &f,
            }
        }
        let omega = match route {
            Route::Chern => Some(omega(spec)),
            Route::Euler if spec.rank_concave() == 0 => Some(c_plus.clone()),
            Route::Euler => None,
        };
        let mut terms = BTreeMap::new();
        let mut cleared = BTreeMap::new();
        for d in degrees_up_to(m, order, false) {
            let b = b_d_on(spec, &d, &shape, with_x);
            cleared.insert(d.clone(), &c_minus * &b);
            terms.insert(d, b);
        }
        Ok(EulerData {
            spec: spec.clone(),
            route,
            shape,
            c_plus,
            c_minus,
            omega,
            terms,
            cleared,
            order,
        })
    }

    /// `∏ (-b_j)` where `c_1(L-_j) = -b_j H`, the scalar by which the top
    /// coefficient of the enlarged ring is divided. One on the Chern route.
    pub fn concave_normaliser(&self) -> Rat {
        if self.route == Route::Chern {
            return Rat::one();
        }
        self.spec
            .concave()
            .map(|b| rat(b.multidegree[0]))
            .fold(Rat::one(), |acc, c| acc * c)
    }
}
