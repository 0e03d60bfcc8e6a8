//! The cohomology ring `Q[H_1..H_m] / (H_i^{n_i+1})` of a product of projective spaces.
//!
//! Classes are stored densely over the box of exponent vectors `0 <= e_i <= n_i`.
//! The same type also serves as a truncated polynomial ring with enlarged bounds
//! (used when a class has to be divided by an Euler class later on), and as the
//! ring `Q` itself when there are no factors.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rat;

/// Bounds `n_1..n_m` of the exponent box plus precomputed index tables.
#[derive(Debug, PartialEq, Eq)]
pub struct Shape {
    dims: Vec<u32>,
    strides: Vec<usize>,
    exponents: Vec<Vec<u32>>,
}

impl Shape {
    pub fn new(dims: Vec<u32>) -> Arc<Shape> {
        let mut strides = Vec::with_capacity(dims.len());
        let mut len = 1usize;
        for &n in &dims {
            strides.push(len);
            len *= n as usize + 1;
        }
        let mut exponents = Vec::with_capacity(len);
        for idx in 0..len {
            exponents.push(
                dims.iter()
                    .zip(&strides)
                    .map(|(&n, &s)| ((idx / s) % (n as usize + 1)) as u32)
                    .collect(),
            );
        }
        Arc::new(Shape {
            dims,
            strides,
            exponents,
        })
    }

    /// The zero-factor shape: classes are plain rationals.
    pub fn point() -> Arc<Shape> {
        Shape::new(Vec::new())
    }

    pub fn dims(&self) -> &[u32] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Complex dimension `sum n_i` of the product.
    pub fn dimension(&self) -> u32 {
        self.dims.iter().sum()
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        if e.len() != self.dims.len() || e.iter().zip(&self.dims).any(|(a, n)| a > n) {
            return None;
        }
        Some(
            e.iter()
                .zip(&self.strides)
                .map(|(&a, &s)| a as usize * s)
                .sum(),
        )
    }

    pub fn exponent(&self, idx: usize) -> &[u32] {
        &self.exponents[idx]
    }

    fn product_index(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (&self.exponents[i], &self.exponents[j]);
        for k in 0..self.dims.len() {
            if a[k] + b[k] > self.dims[k] {
                return None;
            }
        }
        Some(i + j)
    }
}

pub(crate) fn same_shape(a: &Arc<Shape>, b: &Arc<Shape>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// An element of the truncated ring, dense over the exponent box.
#[derive(Clone, PartialEq, Eq)]
pub struct CohClass {
    shape: Arc<Shape>,
    coeffs: Vec<Rat>,
}

impl CohClass {
    pub fn zero(shape: &Arc<Shape>) -> CohClass {
        CohClass {
            shape: shape.clone(),
            coeffs: vec![Rat::zero(); shape.len()],
        }
    }

    pub fn scalar(shape: &Arc<Shape>, c: Rat) -> CohClass {
        let mut z = CohClass::zero(shape);
        z.coeffs[0] = c;
        z
    }

    pub fn one(shape: &Arc<Shape>) -> CohClass {
        CohClass::scalar(shape, Rat::one())
    }

    /// `c * H^e`; zero if `e` lies outside the box.
    pub fn monomial(shape: &Arc<Shape>, e: &[u32], c: Rat) -> CohClass {
        let mut z = CohClass::zero(shape);
        if let Some(i) = shape.index_of(e) {
            z.coeffs[i] = c;
        }
        z
    }

    /// The hyperplane class `H_i`.
    pub fn hyperplane(shape: &Arc<Shape>, i: usize) -> CohClass {
        let mut e = vec![0; shape.num_factors()];
        e[i] = 1;
        CohClass::monomial(shape, &e, Rat::one())
    }

    /// `sum_i c_i H_i`.
    pub fn linear(shape: &Arc<Shape>, coeffs: &[Rat]) -> CohClass {
        let mut z = CohClass::zero(shape);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; shape.num_factors()];
            e[i] = 1;
            if let Some(idx) = shape.index_of(&e) {
                z.coeffs[idx] += c;
            }
        }
        z
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coefficient(&self, e: &[u32]) -> Rat {
        self.shape
            .index_of(e)
            .map(|i| self.coeffs[i].clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn scalar_part(&self) -> &Rat {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True when the scalar part vanishes (every such class is nilpotent).
    pub fn is_nilpotent(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rat)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.shape.exponent(i), c))
    }

    /// Coefficient of the top class `H_1^{n_1} ... H_m^{n_m}`.
    pub fn integrate(&self) -> Rat {
        self.coeffs[self.coeffs.len() - 1].clone()
    }

    fn check_shape(&self, other: &CohClass) -> Result<()> {
        if same_shape(&self.shape, &other.shape) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch {
                left: self.shape.dims.clone(),
                right: other.shape.dims.clone(),
            })
        }
    }

    pub fn try_mul(&self, other: &CohClass) -> Result<CohClass> {
        self.check_shape(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_add(&self, other: &CohClass) -> Result<CohClass> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    fn mul_unchecked(&self, other: &CohClass) -> CohClass {
        let mut out = CohClass::zero(&self.shape);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                if let Some(k) = self.shape.product_index(i, j) {
                    out.coeffs[k] += a * b;
                }
            }
        }
        out
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &CohClass) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub(crate) fn add_scaled_assign(&mut self, other: &CohClass, c: &Rat) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a += b * c;
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> CohClass {
        CohClass {
            shape: self.shape.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> CohClass {
        let mut out = CohClass::one(&self.shape);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Reinterprets the class in a shape with the same number of factors.
    /// Exponents outside the target box are dropped.
    pub fn reshape(&self, target: &Arc<Shape>) -> CohClass {
        let mut out = CohClass::zero(target);
        for (e, c) in self.terms() {
            if let Some(i) = target.index_of(e) {
                out.coeffs[i] = c.clone();
            }
        }
        out
    }
}

/// Cup product with the relations `H_i^{n_i+1} = 0` applied.
pub fn coh_mul(a: &CohClass, b: &CohClass) -> Result<CohClass> {
    a.try_mul(b)
}

/// Top-degree coefficient.
pub fn integrate(a: &CohClass) -> Rat {
    a.integrate()
}

impl std::ops::Mul for &CohClass {
    type Output = CohClass;
    fn mul(self, rhs: &CohClass) -> CohClass {
        debug_assert!(
            same_shape(&self.shape, &rhs.shape),
            "cup product across shapes"
        );
        self.mul_unchecked(rhs)
    }
}

impl std::ops::Add for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        debug_assert!(same_shape(&self.shape, &rhs.shape));
        let mut out = self.clone();
        out.add_assign_unchecked(rhs);
        out
    }
}

impl std::ops::Sub for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        debug_assert!(same_shape(&self.shape, &rhs.shape));
        let mut out = self.clone();
        out.add_scaled_assign(rhs, &-Rat::one());
        out
    }
}

impl std::ops::Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        self.scale(&-Rat::one())
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    write!(f, "*H{}^{}", i + 1, k)?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
