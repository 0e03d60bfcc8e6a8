//! Torus-equivariant classes on `P^n`, stored by their restrictions to the
//! `n + 1` fixed points at sampled rational weights.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coh::{CohClass, Shape};
use crate::error::{Error, Result};
use crate::laurent::LaurentBlock;
use crate::rational::{rat, ratio, Rat};

/// Torus weights `λ_0..λ_n` at one sample point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSample {
    pub lambda: Vec<Rat>,
    pub seed: u64,
}

impl WeightSample {
    /// Rejects coincident weights.
    pub fn new(lambda: Vec<Rat>, seed: u64) -> Result<WeightSample> {
        for i in 0..lambda.len() {
            for j in 0..i {
                if lambda[i] == lambda[j] {
                    return Err(Error::Sampling(format!("λ_{j} = λ_{i} = {}", lambda[i])));
                }
            }
        }
        Ok(WeightSample { lambda, seed })
    }

    /// `count` distinct rationals with numerators in `[-997, 997]` and
    /// denominators in `[1, 9]`, drawn from a ChaCha stream.
    pub fn random(count: usize, seed: u64) -> WeightSample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lambda: Vec<Rat> = Vec::with_capacity(count);
        while lambda.len() < count {
            let v = ratio(rng.gen_range(-997..=997), rng.gen_range(1..=9));
            if !lambda.contains(&v) {
                lambda.push(v);
            }
        }
        WeightSample { lambda, seed }
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }
}

/// Restrictions to the fixed points `p_0..p_n`, each a finite Laurent
/// polynomial in `α` and `x` over the point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantClass {
    pub sample: WeightSample,
    pub restrictions: Vec<LaurentBlock>,
}

impl EquivariantClass {
    /// The class restricting to `value_j` at `p_j`.
    pub fn from_fn(
        sample: &WeightSample,
        mut value: impl FnMut(usize) -> LaurentBlock,
    ) -> EquivariantClass {
        EquivariantClass {
            sample: sample.clone(),
            restrictions: (0..sample.len()).map(&mut value).collect(),
        }
    }

    pub fn constant(sample: &WeightSample, c: Rat) -> EquivariantClass {
        EquivariantClass::from_fn(sample, |_| scalar(c.clone()))
    }

    /// The hyperplane class, `H|_{p_j} = λ_j`.
    pub fn hyperplane(sample: &WeightSample) -> EquivariantClass {
        EquivariantClass::from_fn(sample, |j| scalar(sample.lambda[j].clone()))
    }

    pub fn mul(&self, other: &EquivariantClass) -> EquivariantClass {
        EquivariantClass {
            sample: self.sample.clone(),
            restrictions: self
                .restrictions
                .iter()
                .zip(&other.restrictions)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    /// `∫_{P^n} = Σ_j value_j / ∏_{k≠j} (λ_j - λ_k)`.
    pub fn integrate(&self) -> Result<LaurentBlock> {
        let lambda = &self.sample.lambda;
        let mut out = LaurentBlock::zero(&Shape::point(), 0);
        for (j, v) in self.restrictions.iter().enumerate() {
            let mut denom = Rat::one();
            for (k, lk) in lambda.iter().enumerate() {
                if k != j {
                    denom *= &lambda[j] - lk;
                }
            }
            if denom.is_zero() {
                return Err(Error::Sampling(
                    "coincident weights in fixed-point sum".into(),
                ));
            }
            out.add_assign(&v.scale(&denom.recip()));
        }
        Ok(out)
    }
}

fn scalar(c: Rat) -> LaurentBlock {
    LaurentBlock::scalar(&Shape::point(), 0, c)
}

/// `x + c + kα` over the point.
fn affine(c: Rat, k: &Rat) -> LaurentBlock {
    let p = Shape::point();
    let mut out = LaurentBlock::x(&p, 0);
    out.add_assign(&scalar(c));
    out.add_assign(&LaurentBlock::alpha(&p, 0).scale(k));
    out
}

/// `B_d = (1/x) ∏_i ∏_{k=0}^{d} (x + H - λ_i - kα)` for `T P^n`, restricted to
/// the fixed points. The factor `i = j, k = 0` at `p_j` is `x` and cancels.
pub fn tangent_b_d(n: u32, d: u32, sample: &WeightSample) -> Result<EquivariantClass> {
    check_sample(n, sample)?;
    let lambda = &sample.lambda;
    Ok(EquivariantClass::from_fn(sample, |j| {
        let mut v = scalar(Rat::one());
        for (i, li) in lambda.iter().enumerate() {
            for k in 0..=d as i64 {
                if i == j && k == 0 {
                    continue;
                }
                v = &v * &affine(&lambda[j] - li, &rat(-k));
            }
        }
        v
    }))
}

/// `∏_i (x + H - λ_i)`, the total Chern class side of the Euler sequence.
pub fn euler_sequence_product(n: u32, sample: &WeightSample) -> Result<EquivariantClass> {
    check_sample(n, sample)?;
    let lambda = &sample.lambda;
    Ok(EquivariantClass::from_fn(sample, |j| {
        lambda.iter().fold(scalar(Rat::one()), |acc, li| {
            &acc * &affine(&lambda[j] - li, &Rat::zero())
        })
    }))
}

/// `∏_i ∏_{k=0}^{d} (x + λ_j - λ_i - kλ/d)` with `λ = λ_j - λ_l`, as a
/// polynomial in `x`.
pub fn linking_values(
    n: u32,
    d: u32,
    j: usize,
    l: usize,
    sample: &WeightSample,
) -> Result<LaurentBlock> {
    check_sample(n, sample)?;
    if j == l || j > n as usize || l > n as usize {
        return Err(Error::Domain(format!(
            "linking values need distinct fixed points, got {j}, {l}"
        )));
    }
    if d == 0 {
        return Err(Error::Domain("linking values need d >= 1".into()));
    }
    let lambda = &sample.lambda;
    let step = (&lambda[j] - &lambda[l]) / rat(d as i64);
    let mut v = scalar(Rat::one());
    for li in lambda {
        for k in 0..=d as i64 {
            v = &v * &affine(&lambda[j] - li - &step * rat(k), &Rat::zero());
        }
    }
    Ok(v)
}

fn check_sample(n: u32, sample: &WeightSample) -> Result<()> {
    if sample.len() != n as usize + 1 {
        return Err(Error::Sampling(format!(
            "P^{n} needs {} weights, got {}",
            n + 1,
            sample.len()
        )));
    }
    WeightSample::new(sample.lambda.clone(), sample.seed).map(|_| ())
}

/// The `α^0 x^0` coefficient of a block over the point.
pub fn scalar_value(block: &LaurentBlock) -> Rat {
    block
        .terms()
        .find(|(m, _)| m.alpha == 0 && m.x == 0)
        .map(|(_, c): (_, &CohClass)| c.scalar_part().clone())
        .unwrap_or_else(Rat::zero)
}
