//! Fixed-point localization on genus-zero stable maps to `P^n` in degrees one
//! and two, and a Schubert-calculus count of lines on the quintic.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::equivariant::WeightSample;
use crate::error::{Error, Result};
use crate::geometry::{BundleKind, GeometrySpec};
use crate::rational::{rat, ratio, Rat};

/// A torus-fixed stable map: a tree of multiple covers of coordinate lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedGraph {
    /// Fixed point each vertex maps to.
    pub vertices: Vec<usize>,
    /// `(u, v, δ)` on vertex indices: a degree-`δ` cover of the line through
    /// the images of `u` and `v`.
    pub edges: Vec<(usize, usize, u32)>,
    /// `1 / |Aut|`.
    pub automorphism: Rat,
}

/// Which of the degree-two graph families a graph belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFamily {
    SingleEdge,
    TwoEdges,
}

impl FixedGraph {
    pub fn degree(&self) -> u32 {
        self.edges.iter().map(|e| e.2).sum()
    }

    pub fn family(&self) -> GraphFamily {
        if self.edges.len() == 1 {
            GraphFamily::SingleEdge
        } else {
            GraphFamily::TwoEdges
        }
    }

    /// Incident flags of vertex `v` as `(fixed point at the other end, δ)`.
    fn flags(&self, v: usize) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for &(a, b, delta) in &self.edges {
            if a == v {
                out.push((self.vertices[b], delta));
            } else if b == v {
                out.push((self.vertices[a], delta));
            }
        }
        out
    }
}

/// All fixed graphs of degree `d ∈ {1, 2}` on `P^n`.
pub fn fixed_graphs(n: u32, d: u32) -> Result<Vec<FixedGraph>> {
    if !(1..=2).contains(&d) {
        return Err(Error::Unsupported(format!(
            "localization only in degrees 1 and 2, got {d}"
        )));
    }
    let pts = n as usize + 1;
    let mut out = Vec::new();
    for i in 0..pts {
        for j in i + 1..pts {
            out.push(FixedGraph {
                vertices: vec![i, j],
                edges: vec![(0, 1, d)],
                automorphism: ratio(1, d as i64),
            });
        }
    }
    if d == 2 {
        // Chains j - i - k of two lines; the middle vertex maps to i.
        for i in 0..pts {
            for j in 0..pts {
                for k in j..pts {
                    if j == i || k == i {
                        continue;
                    }
                    out.push(FixedGraph {
                        vertices: vec![i, j, k],
                        edges: vec![(0, 1, 1), (0, 2, 1)],
                        automorphism: if j == k { ratio(1, 2) } else { Rat::one() },
                    });
                }
            }
        }
    }
    Ok(out)
}

fn nonzero(v: Rat, what: &str) -> Result<Rat> {
    if v.is_zero() {
        Err(Error::Sampling(format!("vanishing {what} at this sample")))
    } else {
        Ok(v)
    }
}

/// Equivariant weights of `V_d` at a graph: `H^0` of convex summands and `H^1`
/// of concave ones, glued over the nodes. Convex node weights are removed
/// (each also occurs on every incident edge, so the cancellation is exact);
/// concave node weights are added.
fn bundle_weights(spec: &GeometrySpec, graph: &FixedGraph, lambda: &[Rat]) -> Vec<Rat> {
    let mut out = Vec::new();
    for b in &spec.bundles {
        let l = b.multidegree[0];
        let mut own = Vec::new();
        for &(u, v, delta) in &graph.edges {
            let (i, j) = (graph.vertices[u], graph.vertices[v]);
            let dl = l * delta as i64;
            let (lo, hi) = match b.kind {
                BundleKind::Convex => (0, dl),
                BundleKind::Concave => (dl + 1, -1),
            };
            for a in lo..=hi {
                own.push((&lambda[i] * rat(a) + &lambda[j] * rat(dl - a)) / rat(delta as i64));
            }
        }
        for (v, &p) in graph.vertices.iter().enumerate() {
            let w = &lambda[p] * rat(l);
            for _ in 1..graph.flags(v).len() {
                match b.kind {
                    BundleKind::Convex => {
                        let pos = own
                            .iter()
                            .position(|x| *x == w)
                            .expect("node weight occurs on its edges");
                        own.swap_remove(pos);
                    }
                    BundleKind::Concave => own.push(w.clone()),
                }
            }
        }
        out.extend(own);
    }
    out
}

/// Elementary symmetric polynomial `e_k` of `values`.
fn elementary(values: &[Rat], k: usize) -> Rat {
    let mut e = vec![Rat::zero(); k + 1];
    e[0] = Rat::one();
    for v in values {
        for j in (1..=k).rev() {
            let prev = e[j - 1].clone();
            e[j] += prev * v;
        }
    }
    e[k].clone()
}

/// Contribution of one graph to `∫ b(V_d)` at the sample. For `s > 0` the
/// integrand is the `x^s` coefficient of `∏(x + w)`, i.e. `e_{N-s}(w)`.
pub fn graph_contribution(
    spec: &GeometrySpec,
    graph: &FixedGraph,
    sample: &WeightSample,
) -> Result<Rat> {
    let lambda = &sample.lambda;
    let s = spec.s();
    if s < 0 {
        return Err(Error::Domain(format!("negative s = {s}")));
    }
    let weights = bundle_weights(spec, graph, lambda);
    let Some(k) = weights.len().checked_sub(s as usize) else {
        return Ok(Rat::zero());
    };
    let numerator = elementary(&weights, k);

    let mut euler_inv = Rat::one();
    for &(u, v, delta) in &graph.edges {
        let (i, j) = (graph.vertices[u], graph.vertices[v]);
        let dd = delta as i64;
        let lij = nonzero(&lambda[i] - &lambda[j], "edge weight")?;
        let mut fact = Rat::one();
        for q in 1..=dd {
            fact *= rat(q);
        }
        let sign = if dd % 2 == 0 { Rat::one() } else { -Rat::one() };
        let mut e = sign * rat(dd).pow(2 * dd as i32) / (&fact * &fact * lij.pow(2 * dd as i32));
        for (k, lk) in lambda.iter().enumerate() {
            if k == i || k == j {
                continue;
            }
            for a in 0..=dd {
                let w = (&lambda[i] * rat(a) + &lambda[j] * rat(dd - a)) / rat(dd) - lk;
                e /= nonzero(w, "edge normal weight")?;
            }
        }
        euler_inv *= e;
    }
    for (vi, &v) in graph.vertices.iter().enumerate() {
        let flags = graph.flags(vi);
        let val = flags.len() as i32;
        let mut f = Rat::one();
        for (k, lk) in lambda.iter().enumerate() {
            if k != v {
                f *= (&lambda[v] - lk).pow(val - 1);
            }
        }
        let omegas: Vec<Rat> = flags
            .iter()
            .map(|&(j, delta)| (&lambda[v] - &lambda[j]) / rat(delta as i64))
            .collect();
        let inv_sum = omegas.iter().fold(Rat::zero(), |acc, w| acc + w.recip());
        f *= nonzero(inv_sum, "flag sum")?.pow(val - 3);
        for w in &omegas {
            f /= w;
        }
        euler_inv *= f;
    }
    Ok(&graph.automorphism * numerator * euler_inv)
}

fn check_oracle_spec(spec: &GeometrySpec) -> Result<()> {
    if spec.num_factors() != 1 {
        return Err(Error::Unsupported(
            "localization oracle needs a single P^n".into(),
        ));
    }
    Ok(())
}

/// `∫_{M_{0,0}(d, P^n)} b(V_d)` at one weight sample.
pub fn oracle_invariant(spec: &GeometrySpec, d: u32, sample: &WeightSample) -> Result<Rat> {
    check_oracle_spec(spec)?;
    oracle_sum(spec, d, sample, |_| true)
}

/// The fixed-point sum restricted to graphs accepted by `keep`.
pub fn oracle_sum(
    spec: &GeometrySpec,
    d: u32,
    sample: &WeightSample,
    mut keep: impl FnMut(&FixedGraph) -> bool,
) -> Result<Rat> {
    check_oracle_spec(spec)?;
    let n = spec.factors[0];
    if sample.len() != n as usize + 1 {
        return Err(Error::Sampling(format!("P^{n} needs {} weights", n + 1)));
    }
    WeightSample::new(sample.lambda.clone(), sample.seed)?;
    let mut total = Rat::zero();
    for g in fixed_graphs(n, d)? {
        if keep(&g) {
            total += graph_contribution(spec, &g, sample)?;
        }
    }
    Ok(total)
}

/// Oracle value with per-sample results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub degree: u32,
    pub value: Rat,
    pub samples: Vec<(WeightSample, Rat)>,
}

/// Evaluates at `samples` independent weight samples derived from `seed` and
/// requires exact agreement.
pub fn oracle_consensus(
    spec: &GeometrySpec,
    d: u32,
    samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    check_oracle_spec(spec)?;
    fixed_graphs(spec.factors[0], d)?;
    if samples == 0 {
        return Err(Error::Sampling("at least one sample is required".into()));
    }
    let n = spec.factors[0] as usize;
    let mut out = Vec::with_capacity(samples);
    let mut stream = seed;
    let mut attempts = 0;
    while out.len() < samples {
        attempts += 1;
        if attempts > 16 * samples {
            return Err(Error::Sampling("could not find generic weights".into()));
        }
        let sample = WeightSample::random(n + 1, stream);
        stream = stream.wrapping_add(0x9e37_79b9_7f4a_7c15);
        match oracle_invariant(spec, d, &sample) {
            Ok(v) => out.push((sample, v)),
            Err(Error::Sampling(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let value = out[0].1.clone();
    if let Some((s, v)) = out.iter().find(|(_, v)| *v != value) {
        return Err(Error::OracleInconsistency(format!(
            "degree {d}: {value} at seed {} but {v} at seed {}",
            out[0].0.seed, s.seed
        )));
    }
    Ok(OracleReport {
        degree: d,
        value,
        samples: out,
    })
}

/// `∫_{G(2,5)} c_6(Sym^5 S^*)`, computed from Chern roots and Pieri's rule.
pub fn schubert_lines_quintic() -> Rat {
    // c_top(Sym^5 S*) = ∏_{i=0}^{5} (i a + (5 - i) b) in the roots a, b of S*.
    let mut poly: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
    poly.insert((0, 0), Rat::one());
    for i in 0..=5u32 {
        let mut next = BTreeMap::new();
        for ((p, q), c) in &poly {
            *next.entry((p + 1, *q)).or_insert_with(Rat::zero) += c * rat(i as i64);
            *next.entry((*p, q + 1)).or_insert_with(Rat::zero) += c * rat(5 - i as i64);
        }
        poly = next;
    }
    poly.retain(|_, c| !c.is_zero());

    // Rewrite in e_1 = σ_1 and e_2 = σ_{11}. The polynomial is symmetric and
    // homogeneous, so its lexicographically largest monomial a^p b^q has
    // p >= q; strip it with c·e_1^{p-q} e_2^q and repeat.
    let mut in_e: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
    while let Some((&(p, q), c)) = poly.iter().next_back() {
        let c = c.clone();
        debug_assert!(p >= q);
        let k = p - q;
        *in_e.entry((k, q)).or_insert_with(Rat::zero) += &c;
        for r in 0..=k {
            *poly.entry((r + q, k - r + q)).or_insert_with(Rat::zero) -= &c * rat(binomial(k, r));
        }
        poly.retain(|_, v| !v.is_zero());
    }

    // Evaluate e_1^i e_2^j in the Schubert basis σ_{(λ1, λ2)} ⊂ 2 × 3 box.
    let mut total = Rat::zero();
    for ((i, j), c) in &in_e {
        if c.is_zero() {
            continue;
        }
        let mut classes: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
        classes.insert((0, 0), Rat::one());
        for _ in 0..*j {
            classes = classes
                .into_iter()
                .filter(|((l1, _), _)| *l1 < 3)
                .map(|((l1, l2), v)| ((l1 + 1, l2 + 1), v))
                .collect();
        }
        for _ in 0..*i {
            let mut next: BTreeMap<(u32, u32), Rat> = BTreeMap::new();
            for ((l1, l2), v) in classes {
                if l1 < 3 {
                    *next.entry((l1 + 1, l2)).or_insert_with(Rat::zero) += v.clone();
                }
                if l2 < l1 {
                    *next.entry((l1, l2 + 1)).or_insert_with(Rat::zero) += v;
                }
            }
            classes = next;
        }
        if let Some(v) = classes.get(&(3, 3)) {
            total += c * v;
        }
    }
    total
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut r: i64 = 1;
    for i in 0..k as i64 {
        r = r * (n as i64 - i) / (i + 1);
    }
    r
}
