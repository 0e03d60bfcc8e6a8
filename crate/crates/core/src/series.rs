//! Truncated formal series `sum_d c_d q^d` over effective curve classes,
//! where `q^d` stands for `e^{d·t}`. Truncation is by total degree `|d|`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::coh::Shape;
use crate::error::{Error, Result};
use crate::laurent::LaurentBlock;
use crate::rational::{inv_factorial, Rat};

/// A curve class `d = (d_1..d_m)` with `d_i >= 0`. Ordered by total degree,
/// then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(pub Vec<u32>);

impl Degree {
    pub fn zero(m: usize) -> Degree {
        Degree(vec![0; m])
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when `other <= self` componentwise.
    pub fn checked_sub(&self, other: &Degree) -> Option<Degree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Degree)
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Degree) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Degree) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All degrees in `Z_{>=0}^m` with `|d| <= max_total`, in [`Degree`] order.
pub fn degrees_up_to(m: usize, max_total: u32, include_zero: bool) -> Vec<Degree> {
    fn rec(m: usize, budget: u32, prefix: &mut Vec<u32>, out: &mut Vec<Degree>) {
        if prefix.len() == m {
            out.push(Degree(prefix.clone()));
            return;
        }
        for k in 0..=budget {
            prefix.push(k);
            rec(m, budget - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, max_total, &mut Vec::new(), &mut out);
    out.retain(|d| include_zero || !d.is_zero());
    out.sort();
    out
}

/// Degrees of a fixed total, in lexicographic order.
pub fn degrees_of_total(m: usize, total: u32) -> Vec<Degree> {
    degrees_up_to(m, total, total == 0)
        .into_iter()
        .filter(|d| d.total() == total)
        .collect()
}

/// A truncated q-series with [`LaurentBlock`] coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    order: u32,
    m: usize,
    shape: Arc<Shape>,
    nt: usize,
    terms: BTreeMap<Degree, LaurentBlock>,
}

impl QSeries {
    pub fn zero(shape: &Arc<Shape>, nt: usize, m: usize, order: u32) -> QSeries {
        QSeries {
            order,
            m,
            shape: shape.clone(),
            nt,
            terms: BTreeMap::new(),
        }
    }

    /// The series with a single coefficient in degree zero.
    pub fn constant(block: LaurentBlock, m: usize, order: u32) -> QSeries {
        let mut s = QSeries::zero(&block.shape().clone(), block.num_t(), m, order);
        s.set(Degree::zero(m), block);
        s
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn num_factors(&self) -> usize {
        self.m
    }

    pub fn shape(&self) -> &Arc<Shape> {
        &self.shape
    }

    pub fn num_t(&self) -> usize {
        self.nt
    }

    /// Sets the coefficient of `q^d`; ignored beyond the truncation order.
    pub fn set(&mut self, d: Degree, block: LaurentBlock) {
        assert_eq!(d.0.len(), self.m, "degree arity");
        if d.total() > self.order {
            return;
        }
        if block.is_zero() {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, block);
        }
    }

    pub fn add_to(&mut self, d: Degree, block: &LaurentBlock) {
        if d.total() > self.order || block.is_zero() {
            return;
        }
        let entry = self
            .terms
            .entry(d.clone())
            .or_insert_with(|| LaurentBlock::zero(&self.shape, self.nt));
        entry.add_assign(block);
        if entry.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn coefficient(&self, d: &Degree) -> LaurentBlock {
        self.terms
            .get(d)
            .cloned()
            .unwrap_or_else(|| LaurentBlock::zero(&self.shape, self.nt))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Degree, &LaurentBlock)> + '_ {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Restriction to a smaller truncation order.
    pub fn truncate(&self, order: u32) -> QSeries {
        let mut out = QSeries::zero(&self.shape, self.nt, self.m, order.min(self.order));
        for (d, b) in &self.terms {
            if d.total() <= out.order {
                out.terms.insert(d.clone(), b.clone());
            }
        }
        out
    }

    pub fn map_blocks(&self, mut f: impl FnMut(&LaurentBlock) -> LaurentBlock) -> QSeries {
        let first = self.terms.values().next().map(&mut f);
        let (shape, nt) = match &first {
            Some(b) => (b.shape().clone(), b.num_t()),
            None => (self.shape.clone(), self.nt),
        };
        let mut out = QSeries::zero(&shape, nt, self.m, self.order);
        for (d, b) in &self.terms {
            out.set(d.clone(), f(b));
        }
        out
    }

    pub fn scale_block(&self, c: &LaurentBlock) -> QSeries {
        let mut out = QSeries::zero(&self.shape, self.nt, self.m, self.order);
        for (d, b) in &self.terms {
            out.set(d.clone(), b * c);
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> QSeries {
        let mut out = QSeries::zero(&self.shape, self.nt, self.m, self.order);
        if c.is_zero() {
            return out;
        }
        for (d, b) in &self.terms {
            out.set(d.clone(), b.scale(c));
        }
        out
    }

    pub fn add_assign(&mut self, other: &QSeries) {
        for (d, b) in &other.terms {
            self.add_to(d.clone(), b);
        }
    }

    /// Graded convolution truncated at the smaller of the two orders.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let order = self.order.min(other.order);
        let mut out = QSeries::zero(&self.shape, self.nt, self.m, order);
        for (da, a) in &self.terms {
            for (db, b) in &other.terms {
                if da.total() + db.total() > order {
                    continue;
                }
                out.add_to(da.add(db), &(a * b));
            }
        }
        out
    }

    /// `exp` of a series whose degree-zero coefficient is nilpotent (or zero).
    /// The positive-degree part contributes at most `order` powers.
    pub fn exp(&self) -> Result<QSeries> {
        let d0 = Degree::zero(self.m);
        let head = self.coefficient(&d0);
        let head_exp = head.exp().map_err(|_| {
            Error::Domain("exponential of a series with non-nilpotent constant term".into())
        })?;
        let mut tail = self.clone();
        tail.terms.remove(&d0);

        let mut out =
            QSeries::constant(LaurentBlock::one(&self.shape, self.nt), self.m, self.order);
        let mut power = out.clone();
        for k in 1..=self.order {
            power = power.mul(&tail);
            if power.is_zero() {
                break;
            }
            out.add_assign(&power.scale(&inv_factorial(k)));
        }
        Ok(out.scale_block(&head_exp))
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

/// Scalar power series `sum_d c_d q^d` over degrees, used for mirror maps.
pub type ScalarSeries = BTreeMap<Degree, Rat>;

/// Lifts a scalar series to a [`QSeries`] over the given ring, multiplying
/// every coefficient by `unit`.
pub fn lift_scalar(series: &ScalarSeries, unit: &LaurentBlock, m: usize, order: u32) -> QSeries {
    let mut out = QSeries::zero(unit.shape(), unit.num_t(), m, order);
    for (d, c) in series {
        if !c.is_zero() {
            out.add_to(d.clone(), &unit.scale(c));
        }
    }
    out
}

/// Reads a series over the point back as scalars.
pub fn to_scalar(series: &QSeries) -> ScalarSeries {
    let unit = crate::laurent::Mono::unit(series.num_t());
    series
        .terms()
        .map(|(d, b)| (d.clone(), b.scalar_at(&unit)))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coh::CohClass;
    use crate::rational::{rat, ratio};

    #[test]
    fn degree_order_is_total_then_lex() {
        let ds = degrees_up_to(2, 2, false);
        let expected: Vec<Vec<u32>> =
            vec![vec![0, 1], vec![1, 0], vec![0, 2], vec![1, 1], vec![2, 0]];
        assert_eq!(ds.into_iter().map(|d| d.0).collect::<Vec<_>>(), expected);
        assert_eq!(degrees_of_total(1, 3), vec![Degree(vec![3])]);
    }

    #[test]
    fn exp_of_scalar_series() {
        // exp(q) truncated at q^4 has coefficients 1/k!.
        let p = Shape::point();
        let one = LaurentBlock::one(&p, 0);
        let mut s = QSeries::zero(&p, 0, 1, 4);
        s.set(Degree(vec![1]), one.clone());
        let e = to_scalar(&s.exp().unwrap());
        for k in 0..=4u32 {
            assert_eq!(e[&Degree(vec![k])], inv_factorial(k));
        }
    }

    #[test]
    fn exp_with_nilpotent_head() {
        let s = Shape::new(vec![1]);
        let h = LaurentBlock::constant(CohClass::hyperplane(&s, 0), 0);
        let series = QSeries::constant(h.clone(), 1, 3);
        let e = series.exp().unwrap();
        assert_eq!(
            e.coefficient(&Degree(vec![0])),
            &LaurentBlock::one(&s, 0) + &h
        );
        assert!(e.coefficient(&Degree(vec![1])).is_zero());
    }

    #[test]
    fn exp_rejects_unit_head() {
        let p = Shape::point();
        let s = QSeries::constant(LaurentBlock::scalar(&p, 0, rat(2)), 1, 2);
        assert!(s.exp().is_err());
    }

    #[test]
    fn product_truncates() {
        let p = Shape::point();
        let mut a = QSeries::zero(&p, 0, 1, 2);
        a.set(Degree(vec![0]), LaurentBlock::one(&p, 0));
        a.set(Degree(vec![1]), LaurentBlock::scalar(&p, 0, ratio(1, 2)));
        let sq = to_scalar(&a.mul(&a));
        assert_eq!(sq[&Degree(vec![1])], rat(1));
        assert_eq!(sq[&Degree(vec![2])], ratio(1, 4));
        assert!(!sq.contains_key(&Degree(vec![3])));
    }
}
