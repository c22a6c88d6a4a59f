//! GL2(F_p) actions on the graded rings and restriction to the subgroups A_i.
//!
//! Two conventions are in use. The module convention (`act_be`, `act_poly`)
//! substitutes `y1 -> a*y1 + b*y2`, `y2 -> c*y1 + d*y2` for `g = (a b; c d)`.
//! The Weyl convention on BA (`weyl_act_on_ba`) writes matrices in the basis
//! (c, ab^i) and sends `y -> m22*y + m21*u`, `u -> m12*y + m11*u`; with it,
//! restriction commutes with the action of the stabilizer of A_i.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{Mat2, Prime};
use crate::graded::{be_ring, Algebra, GradedElement, Monomial, YTerm};

/// Index of the subgroup A_i = <c, ab^i>, or A_inf = <c, b>.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubgroupIndex {
    Finite(u32),
    Infinity,
}

impl SubgroupIndex {
    /// All p+1 indices, finite ones first.
    pub fn all(p: Prime) -> Vec<SubgroupIndex> {
        (0..p.get()).map(SubgroupIndex::Finite).chain([SubgroupIndex::Infinity]).collect()
    }
}

impl fmt::Display for SubgroupIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubgroupIndex::Finite(i) => write!(f, "{i}"),
            SubgroupIndex::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for SubgroupIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "∞" => Ok(SubgroupIndex::Infinity),
            t => t.parse().map(SubgroupIndex::Finite).map_err(|_| Error::Parse(format!("bad subgroup index {s}"))),
        }
    }
}

impl Serialize for SubgroupIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SubgroupIndex::Finite(i) => s.serialize_u32(*i),
            SubgroupIndex::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for SubgroupIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u32),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(i) => Ok(SubgroupIndex::Finite(i)),
            Raw::S(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Row of binomial coefficients C(n, 0..=n) mod p.
pub(crate) fn binom_row(p: Prime, n: u32) -> Vec<u32> {
    (0..=n as u64).map(|k| p.binom(n as u64, k)).collect()
}

/// Substitution `x1 -> m11*x1 + m12*x2`, `x2 -> m21*x1 + m22*x2` on a binary
/// form of degree `f.len() - 1`, stored by exponent of x1. O(t^2) through an
/// LDU factorization.
pub fn substitute_binary(m: &Mat2, f: &[u32]) -> Vec<u32> {
    let p = m.prime();
    let [a, b, c, d] = m.entries();
    if a == 0 {
        // m = P * (P m) with P the swap; the swap acts first.
        let mut g: Vec<u32> = f.iter().rev().copied().collect();
        g = substitute_binary(&Mat2::new(p, c as i64, d as i64, a as i64, b as i64), &g);
        return g;
    }
    let ai = p.inv(a);
    let l = p.mul(c, ai);
    let d2 = p.mul(m.det(), ai);
    let u = p.mul(b, ai);
    let g = shift_lower(p, l, f);
    let g = scale_diag(p, a, d2, &g);
    shift_upper(p, u, &g)
}

/// x2 -> l*x1 + x2.
fn shift_lower(p: Prime, l: u32, f: &[u32]) -> Vec<u32> {
    if l == 0 {
        return f.to_vec();
    }
    let t = f.len() - 1;
    let q = p.get() as u64;
    let lp: Vec<u64> = (0..=t as u64).map(|k| p.pow(l, k) as u64).collect();
    let mut acc = vec![0u64; t + 1];
    for (e, &ce) in f.iter().enumerate() {
        if ce == 0 {
            continue;
        }
        let n = t - e;
        let row = binom_row(p, n as u32);
        for k in 0..=n {
            if row[k] != 0 {
                acc[e + k] += ce as u64 * (row[k] as u64 * lp[k] % q);
            }
        }
    }
    acc.into_iter().map(|x| (x % q) as u32).collect()
}

/// x1 -> x1 + u*x2.
fn shift_upper(p: Prime, u: u32, f: &[u32]) -> Vec<u32> {
    if u == 0 {
        return f.to_vec();
    }
    let t = f.len() - 1;
    let q = p.get() as u64;
    let up: Vec<u64> = (0..=t as u64).map(|k| p.pow(u, k) as u64).collect();
    let mut acc = vec![0u64; t + 1];
    for (e, &ce) in f.iter().enumerate() {
        if ce == 0 {
            continue;
        }
        let row = binom_row(p, e as u32);
        for k in 0..=e {
            if row[k] != 0 {
                acc[e - k] += ce as u64 * (row[k] as u64 * up[k] % q);
            }
        }
    }
    acc.into_iter().map(|x| (x % q) as u32).collect()
}

fn scale_diag(p: Prime, d1: u32, d2: u32, f: &[u32]) -> Vec<u32> {
    let t = f.len() - 1;
    f.iter().enumerate().map(|(e, &c)| p.mul(c, p.mul(p.pow(d1, e as u64), p.pow(d2, (t - e) as u64)))).collect()
}

/// Image of each canonical y-monomial (in `BeRing::ymons` order) under `g`.
pub fn ymon_action(g: &Mat2) -> Vec<Vec<YTerm>> {
    let p = g.prime();
    let ring = be_ring(p);
    ring.ymons
        .iter()
        .map(|&(i, j)| {
            let s = (i + j) as usize;
            let mut f = vec![0; s + 1];
            f[i as usize] = 1;
            let img = substitute_binary(g, &f);
            let mut out: HashMap<(u32, u32, u32), u32> = HashMap::new();
            for (e, &c) in img.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for t in ring.ymul(e as u32, (s - e) as u32, 0, 0) {
                    let slot = out.entry((t.dc, t.i, t.j)).or_insert(0);
                    *slot = p.add(*slot, p.mul(c, t.coeff));
                }
            }
            let mut v: Vec<YTerm> = out
                .into_iter()
                .filter(|&(_, c)| c != 0)
                .map(|((dc, i, j), coeff)| YTerm { dc, i, j, coeff })
                .collect();
            v.sort_by_key(|t| (t.dc, t.i, t.j));
            v
        })
        .collect()
}

/// Module-convention action of `g` on H*(BE).
pub fn act_be(g: &Mat2, x: &GradedElement) -> GradedElement {
    let p = g.prime();
    assert_eq!(x.algebra(), Algebra::BE(p));
    let ring = be_ring(p);
    let table = ymon_action(g);
    let det = g.det();
    let mut terms = Vec::new();
    for (m, &c) in x.terms() {
        let scalar = p.mul(c, p.pow(det, m.v as u64));
        for t in &table[ring.ymon_index(m.e1, m.e2)] {
            terms.push((Monomial::be(m.c + t.dc, m.v, t.i, t.j), p.mul(scalar, t.coeff)));
        }
    }
    GradedElement::from_terms(x.algebra(), terms)
}

/// Module-convention action on POLY2 (or BA), times det(g)^k.
pub fn act_poly(g: &Mat2, f: &GradedElement, k: u32) -> GradedElement {
    let p = g.prime();
    let twist = p.pow(g.det(), k as u64);
    substitute_element(g, f, twist)
}

fn substitute_element(m: &Mat2, f: &GradedElement, twist: u32) -> GradedElement {
    let alg = f.algebra();
    assert!(!matches!(alg, Algebra::BE(_)), "polynomial algebra expected");
    let p = alg.prime();
    let mut terms = Vec::new();
    for (d, comp) in f.components() {
        let t = (d / 2) as usize;
        let mut dense = vec![0; t + 1];
        for (mono, &c) in comp.terms() {
            dense[mono.e1 as usize] = c;
        }
        for (e, c) in substitute_binary(m, &dense).into_iter().enumerate() {
            terms.push((Monomial::y(e as u32, (t - e) as u32), p.mul(c, twist)));
        }
    }
    GradedElement::from_terms(alg, terms)
}

/// Weyl-convention action on BA: `y -> m22*y + m21*u`, `u -> m12*y + m11*u`.
pub fn weyl_act_on_ba(m: &Mat2, f: &GradedElement) -> GradedElement {
    substitute_element(&weyl_swap(m), f, 1)
}

/// The matrix whose module-convention substitution on (y, u) realizes the
/// Weyl-convention action of `m`.
pub fn weyl_swap(m: &Mat2) -> Mat2 {
    let [a, b, c, d] = m.entries();
    Mat2::new(m.prime(), d as i64, c as i64, b as i64, a as i64)
}

/// Weyl-convention action on a dense BA form indexed by exponent of y.
pub fn weyl_act_dense(m: &Mat2, f: &[u32]) -> Vec<u32> {
    substitute_binary(&weyl_swap(m), f)
}

/// Ring map H*(BE) -> H*(BA_i).
pub fn restrict_to_a(x: &GradedElement, i: SubgroupIndex) -> GradedElement {
    let p = x.algebra().prime();
    assert_eq!(x.algebra(), Algebra::BE(p));
    let ba = Algebra::BA(p);
    let mut terms = Vec::new();
    for (m, &c) in x.terms() {
        for (ye, ue, coeff) in restrict_monomial(p, m, i) {
            terms.push((Monomial::y(ye, ue), p.mul(coeff, c)));
        }
    }
    GradedElement::from_terms(ba, terms)
}

/// Terms `(y exponent, u exponent, coeff)` of the restriction of one monomial.
pub(crate) fn restrict_monomial(p: Prime, m: &Monomial, i: SubgroupIndex) -> Vec<(u32, u32, u32)> {
    let q = p.get();
    let scalar = match i {
        SubgroupIndex::Finite(i) => p.pow(i, m.e2 as u64),
        SubgroupIndex::Infinity => (m.e1 == 0) as u32,
    };
    if scalar == 0 {
        return Vec::new();
    }
    let ybase = m.c * (q - 1) + m.e1 + m.e2;
    let row = binom_row(p, m.v);
    let mut out = Vec::with_capacity(m.v as usize + 1);
    for k in 0..=m.v {
        let mut c = p.mul(scalar, row[k as usize]);
        if (m.v - k) % 2 == 1 {
            c = p.neg(c);
        }
        if c != 0 {
            out.push((ybase + (q - 1) * (m.v - k), m.v + (q - 1) * k, c));
        }
    }
    out
}

/// diag(det g, lambda_i(g)): the matrix induced on A_i by `g` stabilizing it,
/// in the basis (c, ab^i).
pub fn induced_matrix(g: &Mat2, i: SubgroupIndex) -> Mat2 {
    let p = g.prime();
    let [a, b, _, d] = g.entries();
    let lambda = match i {
        SubgroupIndex::Finite(i) => p.add(a, p.mul(i, b)),
        SubgroupIndex::Infinity => d,
    };
    Mat2::diag(p, g.det() as i64, lambda as i64)
}
