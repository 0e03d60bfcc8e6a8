//! Hypergeometric blocks against a naive term-by-term expander that knows
//! nothing about the library's ring types.

use std::collections::BTreeMap;

use gw_core::euler::{b_d, b_series};
use gw_core::geometry::{parse_spec, validate, GeometrySpec};
use gw_core::laurent::LaurentBlock;
use gw_core::mirror::compute;
use gw_core::rational::{rat, ratio, Rat};
use gw_core::series::Degree;
use gw_core::Route;
use num_traits::{One, Zero};

/// `(h, alpha, x, t) -> coefficient` in `Q[H]/(H^{n+1})`.
type Poly = BTreeMap<(u32, i32, u32, u32), Rat>;

/// Spec text, `n`, convex degrees, concave magnitudes, top degree.
type Case = (&'static str, u32, &'static [i64], &'static [i64], i64);

struct Naive {
    n: u32,
}

impl Naive {
    fn one(&self) -> Poly {
        Poly::from([((0, 0, 0, 0), Rat::one())])
    }

    fn mul(&self, p: &Poly, q: &Poly) -> Poly {
        let mut out = Poly::new();
        for (&(h1, a1, x1, t1), c1) in p {
            for (&(h2, a2, x2, t2), c2) in q {
                if h1 + h2 > self.n {
                    continue;
                }
                *out.entry((h1 + h2, a1 + a2, x1 + x2, t1 + t2))
                    .or_insert_with(Rat::zero) += c1 * c2;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// `x + cH + kα`
    fn linear(&self, c: i64, k: i64) -> Poly {
        let mut p = Poly::from([((0, 0, 1, 0), Rat::one())]);
        if c != 0 {
            p.insert((1, 0, 0, 0), rat(c));
        }
        if k != 0 {
            p.insert((0, 1, 0, 0), rat(k));
        }
        p
    }

    /// `(H - kα)^{-1} = -Σ_j H^j (kα)^{-j-1}`
    fn inv_h_minus(&self, k: i64) -> Poly {
        (0..=self.n)
            .map(|j| {
                (
                    (j, -(j as i32) - 1, 0, 0),
                    -Rat::one() / rat(k).pow(j as i32 + 1),
                )
            })
            .collect()
    }

    /// `exp(-Ht/α)`
    fn exp_ht(&self) -> Poly {
        let mut fact = Rat::one();
        let mut out = Poly::new();
        for j in 0..=self.n {
            if j > 0 {
                fact *= rat(j as i64);
            }
            let sign = if j % 2 == 0 { Rat::one() } else { -Rat::one() };
            out.insert((j, -(j as i32), 0, j), sign / &fact);
        }
        out
    }

    /// `B_d` on `P^n` with convex degrees `l_j` and concave magnitudes `m_j`.
    fn b(&self, convex: &[i64], concave: &[i64], d: i64) -> Poly {
        let mut p = self.one();
        for &l in convex {
            for k in 0..=l * d {
                p = self.mul(&p, &self.linear(l, -k));
            }
        }
        for &m in concave {
            for k in 1..m * d {
                p = self.mul(&p, &self.linear(-m, k));
            }
        }
        for k in 1..=d {
            for _ in 0..=self.n {
                p = self.mul(&p, &self.inv_h_minus(k));
            }
        }
        p
    }
}

fn flatten(block: &LaurentBlock) -> Poly {
    let mut out = Poly::new();
    for (mono, c) in block.terms() {
        let t = mono.t.first().copied().unwrap_or(0);
        for (e, v) in c.terms() {
            if !v.is_zero() {
                out.insert((e[0], mono.alpha, mono.x as u32, t), v.clone());
            }
        }
    }
    out
}

fn alpha_range(p: &Poly, keep: impl Fn(u32) -> bool) -> (i32, i32) {
    let alphas: Vec<i32> = p.keys().filter(|k| keep(k.2)).map(|k| k.1).collect();
    (*alphas.iter().min().unwrap(), *alphas.iter().max().unwrap())
}

fn spec(text: &str) -> GeometrySpec {
    parse_spec(text).unwrap()
}

#[test]
fn b_d_matches_naive_expansion() {
    let cases: [Case; 5] = [
        (
            "space 1\nbundle concave 1\nbundle concave 1",
            1,
            &[],
            &[1, 1],
            4,
        ),
        ("space 2\nbundle concave 3", 2, &[], &[3], 3),
        ("space 4\nbundle convex 5", 4, &[5], &[], 2),
        ("space 3\nbundle convex 4", 3, &[4], &[], 2),
        (
            "space 3\nbundle convex 2\nbundle convex 2",
            3,
            &[2, 2],
            &[],
            2,
        ),
    ];
    for (text, n, convex, concave, max_d) in cases {
        let naive = Naive { n };
        let s = spec(text);
        for d in 1..=max_d {
            let got = flatten(&b_d(&s, &Degree(vec![d as u32])));
            assert_eq!(got, naive.b(convex, concave, d), "{text} d={d}");
        }
    }
}

#[test]
fn quintic_degree_two_alpha_range() {
    let naive = Naive { n: 4 };
    let expected = naive.mul(&naive.exp_ht(), &naive.b(&[5], &[], 2));
    let block = b_series(&spec("space 4\nbundle convex 5"), 2).coefficient(&Degree(vec![2]));
    assert_eq!(flatten(&block), expected);
    assert_eq!(block.alpha_range(), Some((-14, 0)));
    assert_eq!(alpha_range(&expected, |_| true), (-14, 0));
    assert_eq!(alpha_range(&expected, |x| x == 0), (-3, 0));
    let at_zero = block.at_x_zero().unwrap();
    assert_eq!(at_zero.alpha_range(), Some((-3, 0)));
}

#[test]
fn quintic_degree_one_at_x_zero() {
    // ∏_{k=0}^{5} (5H - kα) · (H - α)^{-5}
    let naive = Naive { n: 4 };
    let mut p = naive.one();
    for k in 0..=5 {
        let mut f = naive.linear(5, -k);
        f.remove(&(0, 0, 1, 0));
        p = naive.mul(&p, &f);
    }
    for _ in 0..5 {
        p = naive.mul(&p, &naive.inv_h_minus(1));
    }
    let got = b_d(&spec("space 4\nbundle convex 5"), &Degree(vec![1]))
        .at_x_zero()
        .unwrap();
    assert_eq!(flatten(&got), p);
}

#[test]
fn conifold_blocks() {
    let s = spec("space 1\nbundle concave 1\nbundle concave 1");
    // d = 1: α^{-2} + 2Hα^{-3}
    let b1 = flatten(&b_d(&s, &Degree(vec![1])));
    assert_eq!(
        b1,
        Poly::from([((0, -2, 0, 0), rat(1)), ((1, -3, 0, 0), rat(2))])
    );
    // At x = 0 the concave factors cancel against all but the last
    // denominator: B_d = (H - dα)^{-2}.
    let naive = Naive { n: 1 };
    for d in 1..=6 {
        let inv = naive.inv_h_minus(d);
        let want = naive.mul(&inv, &inv);
        let got = b_d(&s, &Degree(vec![d as u32])).at_x_zero().unwrap();
        assert_eq!(flatten(&got), want, "d={d}");
    }
}

fn harmonic(l: i64) -> Rat {
    (1..=l).map(|k| ratio(1, k)).sum()
}

/// Degree-one mirror map of a degree-`n+1` hypersurface in `P^n`:
/// `f_α = -l!`, `f_x = l!·H_l`, `g = l!(l·H_l - (n+1))` with `l = n+1`.
#[test]
fn degree_one_mirror_map_closed_form() {
    for (text, n) in [
        ("space 4\nbundle convex 5", 4i64),
        ("space 3\nbundle convex 4", 3),
    ] {
        let l = n + 1;
        let fact: Rat = (1..=l).map(rat).product();
        let v = validate(&spec(text)).unwrap();
        let c = compute(&v, Route::Chern, 1).unwrap();
        let one = Degree(vec![1]);
        let mm = &c.mirror_map;
        assert_eq!(mm.f_alpha[&one], -fact.clone(), "{text}");
        assert_eq!(mm.f_x[&one], &fact * harmonic(l), "{text}");
        assert_eq!(
            mm.g[0][&one],
            &fact * (rat(l) * harmonic(l) - rat(n + 1)),
            "{text}"
        );
    }
}

#[test]
fn hypersurface_values() {
    let cases = [
        (
            "space 4\nbundle convex 5",
            vec![rat(2875), ratio(4876875, 8), ratio(8564575000, 27)],
        ),
        ("space 3\nbundle convex 4", vec![rat(320), rat(5056)]),
        (
            "space 2\nbundle concave 3",
            vec![rat(3), ratio(-45, 8), ratio(244, 9)],
        ),
    ];
    for (text, ks) in cases {
        let v = validate(&spec(text)).unwrap();
        let c = compute(&v, Route::Chern, ks.len() as u32).unwrap();
        for (i, want) in ks.iter().enumerate() {
            assert_eq!(
                c.table.k(&Degree(vec![i as u32 + 1])),
                Some(want),
                "{text} d={}",
                i + 1
            );
        }
    }
}

#[test]
fn local_p1xp1_values() {
    let v = validate(&spec("space 1\nspace 1\nbundle concave 2 2")).unwrap();
    let c = compute(&v, Route::Chern, 2).unwrap();
    for (d, want) in [
        ([1, 0], rat(-2)),
        ([0, 1], rat(-2)),
        ([1, 1], rat(-4)),
        ([2, 0], ratio(-1, 4)),
        ([0, 2], ratio(-1, 4)),
    ] {
        assert_eq!(c.table.k(&Degree(d.to_vec())), Some(&want), "{d:?}");
    }
}
