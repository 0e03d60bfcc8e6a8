//! Finite Laurent polynomials in the equivariant weight `α` and the Chern
//! variable `x`, polynomial in the Kähler parameters `t_1..t_m`, with
//! cohomology-class coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::coh::{CohClass, Shape};
use crate::error::{Error, Result};
use crate::rational::{inv_factorial, rat, rat_pow, Rat};

/// Exponents of `α^alpha x^x t^t`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub alpha: i32,
    pub x: i32,
    pub t: Vec<u32>,
}

impl Mono {
    pub fn new(alpha: i32, x: i32, t: Vec<u32>) -> Mono {
        Mono { alpha, x, t }
    }

    pub fn unit(nt: usize) -> Mono {
        Mono::new(0, 0, vec![0; nt])
    }

    pub fn t_degree(&self) -> u32 {
        self.t.iter().sum()
    }

    fn times(&self, other: &Mono) -> Mono {
        Mono {
            alpha: self.alpha + other.alpha,
            x: self.x + other.x,
            t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentBlock {
    shape: Arc<Shape>,
    nt: usize,
    terms: BTreeMap<Mono, CohClass>,
}

impl LaurentBlock {
    pub fn zero(shape: &Arc<Shape>, nt: usize) -> LaurentBlock {
        LaurentBlock {
            shape: shape.clone(),
            nt,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(shape: &Arc<Shape>, nt: usize) -> LaurentBlock {
        LaurentBlock::constant(CohClass::one(shape), nt)
    }

    pub fn constant(c: CohClass, nt: usize) -> LaurentBlock {
        let shape = c.shape().clone();
        LaurentBlock::term(&shape, Mono::unit(nt), c)
    }

    pub fn scalar(shape: &Arc<Shape>, nt: usize, c: Rat) -> LaurentBlock {
        LaurentBlock::constant(CohClass::scalar(shape, c), nt)
    }

    pub fn term(shape: &Arc<Shape>, mono: Mono, c: CohClass) -> LaurentBlock {
        let mut out = LaurentBlock::zero(shape, mono.t.len());
        if !c.is_zero() {
            out.terms.insert(mono, c);
        }
        out
    }

    /// `c * α^alpha x^x` with no `t` dependence.
    pub fn monomial(
        shape: &Arc<Shape>,
        nt: usize,
        alpha: i32,
        x: i32,
        c: CohClass,
    ) -> LaurentBlock {
        LaurentBlock::term(shape, Mono::new(alpha, x, vec![0; nt]), c)
    }

    pub fn alpha(shape: &Arc<Shape>, nt: usize) -> LaurentBlock {
        LaurentBlock::monomial(shape, nt, 1, 0, CohClass::one(shape))
    }

    pub fn x(shape: &Arc<Shape>, nt: usize) -> LaurentBlock {
        LaurentBlock::monomial(shape, nt, 0, 1, CohClass::one(shape))
    }

    pub fn t(shape: &Arc<Shape>, nt: usize, i: usize) -> LaurentBlock {
        let mut t = vec![0; nt];
        t[i] = 1;
        LaurentBlock::term(shape, Mono::new(0, 0, t), CohClass::one(shape))
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn num_t(&self) -> usize {
        self.nt
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &CohClass)> + '_ {
        self.terms.iter()
    }

    pub fn get(&self, mono: &Mono) -> Option<&CohClass> {
        self.terms.get(mono)
    }

    /// Smallest and largest `α` exponents present.
    pub fn alpha_range(&self) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.alpha);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), a| (lo.min(a), hi.max(a))))
    }

    pub fn x_range(&self) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.x);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), a| (lo.min(a), hi.max(a))))
    }

    pub fn max_t_degree(&self) -> u32 {
        self.terms.keys().map(Mono::t_degree).max().unwrap_or(0)
    }

    /// Terms whose monomial satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Mono) -> bool) -> LaurentBlock {
        LaurentBlock {
            shape: self.shape.clone(),
            nt: self.nt,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The part of exact `α`-degree `a`.
    pub fn alpha_slice(&self, a: i32) -> LaurentBlock {
        self.filter(|m| m.alpha == a)
    }

    fn insert_add(&mut self, mono: Mono, c: &CohClass) {
        match self.terms.get_mut(&mono) {
            Some(slot) => {
                slot.add_assign_unchecked(c);
                if slot.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                if !c.is_zero() {
                    self.terms.insert(mono, c.clone());
                }
            }
        }
    }

    fn check(&self, other: &LaurentBlock) {
        debug_assert!(
            crate::coh::same_shape(&self.shape, &other.shape) && self.nt == other.nt,
            "laurent blocks over different rings"
        );
    }

    pub fn add_assign(&mut self, other: &LaurentBlock) {
        self.check(other);
        for (m, c) in &other.terms {
            self.insert_add(m.clone(), c);
        }
    }

    pub fn scale(&self, c: &Rat) -> LaurentBlock {
        if c.is_zero() {
            return LaurentBlock::zero(&self.shape, self.nt);
        }
        LaurentBlock {
            shape: self.shape.clone(),
            nt: self.nt,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.scale(c)))
                .collect(),
        }
    }

    pub fn mul_coh(&self, c: &CohClass) -> LaurentBlock {
        let mut out = LaurentBlock::zero(&self.shape, self.nt);
        for (m, a) in &self.terms {
            let p = a * c;
            if !p.is_zero() {
                out.terms.insert(m.clone(), p);
            }
        }
        out
    }

    /// Multiplies by `α^alpha x^x`.
    pub fn shift(&self, alpha: i32, x: i32) -> LaurentBlock {
        LaurentBlock {
            shape: self.shape.clone(),
            nt: self.nt,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Mono::new(m.alpha + alpha, m.x + x, m.t.clone()), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> LaurentBlock {
        let mut out = LaurentBlock::one(&self.shape, self.nt);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// True when every coefficient has vanishing scalar part, so that the
    /// block is nilpotent.
    pub fn is_nilpotent(&self) -> bool {
        self.terms.values().all(CohClass::is_nilpotent)
    }

    /// `exp(self)` for a nilpotent block; the series terminates.
    pub fn exp(&self) -> Result<LaurentBlock> {
        if !self.is_nilpotent() {
            return Err(Error::Domain(
                "exponential of a block with nonzero scalar part".into(),
            ));
        }
        let mut out = LaurentBlock::one(&self.shape, self.nt);
        let mut power = LaurentBlock::one(&self.shape, self.nt);
        let mut k = 0u32;
        loop {
            k += 1;
            power = &power * self;
            if power.is_zero() {
                break;
            }
            out.add_assign(&power.scale(&inv_factorial(k)));
        }
        Ok(out)
    }

    /// Integrates every coefficient over the top class; the result lives over
    /// the point.
    pub fn integrate(&self) -> LaurentBlock {
        let top: Vec<u32> = self.shape.dims().to_vec();
        self.coefficient_at(&top)
    }

    /// Extracts the coefficient of `H^e` from every term.
    pub fn coefficient_at(&self, e: &[u32]) -> LaurentBlock {
        let point = Shape::point();
        let mut out = LaurentBlock::zero(&point, self.nt);
        for (m, c) in &self.terms {
            let v = c.coefficient(e);
            if !v.is_zero() {
                out.terms.insert(m.clone(), CohClass::scalar(&point, v));
            }
        }
        out
    }

    /// For blocks over the point: the scalar at a monomial.
    pub fn scalar_at(&self, mono: &Mono) -> Rat {
        self.terms
            .get(mono)
            .map(|c| c.scalar_part().clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Specialises `x -> 0`. Fails if negative powers of `x` are present.
    pub fn at_x_zero(&self) -> Result<LaurentBlock> {
        if self.terms.keys().any(|m| m.x < 0) {
            return Err(Error::Domain("x -> 0 of a block with poles in x".into()));
        }
        Ok(self.filter(|m| m.x == 0))
    }

    /// Substitutes a rational value for `α`.
    pub fn eval_alpha(&self, value: &Rat) -> Result<LaurentBlock> {
        if value.is_zero() && self.terms.keys().any(|m| m.alpha < 0) {
            return Err(Error::DivisionByZero("α = 0 in a block with poles in α"));
        }
        let mut out = LaurentBlock::zero(&self.shape, self.nt);
        for (m, c) in &self.terms {
            let w = rat_pow(value, m.alpha);
            out.insert_add(Mono::new(0, m.x, m.t.clone()), &c.scale(&w));
        }
        Ok(out)
    }

    /// Substitutes a rational value for `x`.
    pub fn eval_x(&self, value: &Rat) -> Result<LaurentBlock> {
        if value.is_zero() && self.terms.keys().any(|m| m.x < 0) {
            return Err(Error::DivisionByZero("x = 0 in a block with poles in x"));
        }
        let mut out = LaurentBlock::zero(&self.shape, self.nt);
        for (m, c) in &self.terms {
            let w = rat_pow(value, m.x);
            out.insert_add(Mono::new(m.alpha, 0, m.t.clone()), &c.scale(&w));
        }
        Ok(out)
    }

    /// Moves the block into another coefficient ring with the same number of
    /// factors, dropping exponents outside the target box.
    pub fn reshape(&self, target: &Arc<Shape>) -> LaurentBlock {
        let mut out = LaurentBlock::zero(target, self.nt);
        for (m, c) in &self.terms {
            out.insert_add(m.clone(), &c.reshape(target));
        }
        out
    }
}

impl std::ops::Mul for &LaurentBlock {
    type Output = LaurentBlock;
    fn mul(self, rhs: &LaurentBlock) -> LaurentBlock {
        self.check(rhs);
        let mut out = LaurentBlock::zero(&self.shape, self.nt);
        for (ma, a) in &self.terms {
            for (mb, b) in &rhs.terms {
                let p = a * b;
                if !p.is_zero() {
                    out.insert_add(ma.times(mb), &p);
                }
            }
        }
        out
    }
}

impl std::ops::Add for &LaurentBlock {
    type Output = LaurentBlock;
    fn add(self, rhs: &LaurentBlock) -> LaurentBlock {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl std::ops::Sub for &LaurentBlock {
    type Output = LaurentBlock;
    fn sub(self, rhs: &LaurentBlock) -> LaurentBlock {
        let mut out = self.clone();
        out.add_assign(&-rhs);
        out
    }
}

impl std::ops::Neg for &LaurentBlock {
    type Output = LaurentBlock;
    fn neg(self) -> LaurentBlock {
        self.scale(&-Rat::one())
    }
}

impl fmt::Debug for LaurentBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})*a^{}*x^{}*t^{:?}", m.alpha, m.x, m.t)?;
        }
        Ok(())
    }
}

/// `(v - c)^{-1}` where `v` is `k α` or `x` and `c` is nilpotent:
/// `v^{-1} sum_j (c / v)^j`, finite because `c` is nilpotent.
fn invert_nilpotent_shift(
    c: &CohClass,
    v_alpha: i32,
    v_x: i32,
    v_coeff: &Rat,
    nt: usize,
) -> LaurentBlock {
    let shape = c.shape().clone();
    let inv_v = v_coeff.recip();
    let mut out = LaurentBlock::zero(&shape, nt);
    let mut power = CohClass::one(&shape);
    let mut j = 0i32;
    while !power.is_zero() {
        let coeff = power.scale(&rat_pow(&inv_v, j + 1));
        out.add_assign(&LaurentBlock::monomial(
            &shape,
            nt,
            -(j + 1) * v_alpha,
            -(j + 1) * v_x,
            coeff,
        ));
        power = &power * c;
        j += 1;
    }
    out
}

/// `(c - kα)^{-1}` for nilpotent `c`, expanded as
/// `-(kα)^{-1} sum_j (c/(kα))^j`.
pub fn invert_linear_factor(c: &CohClass, k: i64, nt: usize) -> Result<LaurentBlock> {
    if k == 0 {
        return Err(Error::DivisionByZero("(c - kα)^{-1} with k = 0"));
    }
    if !c.is_nilpotent() {
        return Err(Error::Domain(
            "(c - kα)^{-1} needs c with vanishing scalar part".into(),
        ));
    }
    // (c - kα)^{-1} = -(kα - c)^{-1}
    Ok(-&invert_nilpotent_shift(c, 1, 0, &rat(k), nt))
}

/// `(x + c)^{-1}` for nilpotent `c`, expanded as `x^{-1} sum_j (-c/x)^j`.
pub fn invert_x_linear(c: &CohClass, nt: usize) -> Result<LaurentBlock> {
    if !c.is_nilpotent() {
        return Err(Error::Domain(
            "(x + c)^{-1} needs c with vanishing scalar part".into(),
        ));
    }
    Ok(invert_nilpotent_shift(&-c, 0, 1, &Rat::one(), nt))
}

/// The linear factor `x·[with_x] + c + kα` as a block.
pub fn linear_factor(c: &CohClass, k: i64, with_x: bool, nt: usize) -> LaurentBlock {
    let shape = c.shape().clone();
    let mut out = LaurentBlock::constant(c.clone(), nt);
    if with_x {
        out.add_assign(&LaurentBlock::x(&shape, nt));
    }
    if k != 0 {
        out.add_assign(&LaurentBlock::alpha(&shape, nt).scale(&rat(k)));
    }
    out
}

/// `exp(-sum_i H_i t_i / α)`.
pub fn exp_minus_ht_over_alpha(shape: &Arc<Shape>) -> LaurentBlock {
    let nt = shape.num_factors();
    let mut arg = LaurentBlock::zero(shape, nt);
    for i in 0..nt {
        let mut t = vec![0; nt];
        t[i] = 1;
        arg.add_assign(&LaurentBlock::term(
            shape,
            Mono::new(-1, 0, t),
            -&CohClass::hyperplane(shape, i),
        ));
    }
    arg.exp().expect("H_i are nilpotent")
}
