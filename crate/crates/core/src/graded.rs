//! Graded rings: H*(BE) on its free Z/p[C,v]-basis, and the polynomial
//! rings Z/p[y,u] (BA) and Z/p[y1,y2] (POLY2).
//!
//! Degrees are topological; internally most code works with the half
//! degree `t = d/2`, in which C has weight p-1, v has weight p and each
//! y-variable weight 1.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Prime;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algebra {
    BE(Prime),
    BA(Prime),
    Poly2(Prime),
}

impl Algebra {
    pub fn prime(self) -> Prime {
        match self {
            Algebra::BE(p) | Algebra::BA(p) | Algebra::Poly2(p) => p,
        }
    }

    /// Parses `BE`, `BA` or `POLY2` (case-insensitive).
    pub fn parse(tag: &str, prime: Prime) -> Result<Self> {
        match tag.to_ascii_uppercase().as_str() {
            "BE" => Ok(Algebra::BE(prime)),
            "BA" => Ok(Algebra::BA(prime)),
            "POLY2" => Ok(Algebra::Poly2(prime)),
            _ => Err(Error::Parse(format!("unknown algebra tag {tag}"))),
        }
    }

    /// Half-degree weight of a monomial.
    pub fn weight(self, m: &Monomial) -> u32 {
        match self {
            Algebra::BE(p) => m.c * (p.get() - 1) + m.v * p.get() + m.e1 + m.e2,
            _ => m.e1 + m.e2,
        }
    }

    pub fn var_names(self) -> (&'static str, &'static str) {
        match self {
            Algebra::BA(_) => ("y", "u"),
            _ => ("y1", "y2"),
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::BE(p) => write!(f, "BE({p})"),
            Algebra::BA(p) => write!(f, "BA({p})"),
            Algebra::Poly2(p) => write!(f, "POLY2({p})"),
        }
    }
}

/// A monomial `v^v C^c x1^e1 x2^e2`. For the polynomial algebras `c = v = 0`
/// and (x1, x2) is (y, u) resp. (y1, y2). In BE, canonical means
/// `e1, e2 < p` and not both equal to `p-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial {
    pub v: u32,
    pub c: u32,
    pub e1: u32,
    pub e2: u32,
}

impl Monomial {
    pub fn y(e1: u32, e2: u32) -> Self {
        Monomial { v: 0, c: 0, e1, e2 }
    }
    pub fn be(c: u32, v: u32, e1: u32, e2: u32) -> Self {
        Monomial { v, c, e1, e2 }
    }
    pub fn is_be_canonical(&self, p: Prime) -> bool {
        let q = p.get();
        self.e1 < q && self.e2 < q && !(self.e1 == q - 1 && self.e2 == q - 1)
    }
}

/// One term of a reduced y-part: `coeff * C^dc * y1^i * y2^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct YTerm {
    pub dc: u32,
    pub i: u32,
    pub j: u32,
    pub coeff: u32,
}

/// Rewriting order used by [`be_reduce_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Exhaust R1, then apply R2 once.
    R1First,
    /// Build the monomial one variable at a time, reducing after each step.
    Interleaved,
    /// Split off Y1*Y2 factors with R2 before using R1.
    R2First,
}

/// Per-prime lookup tables for H*(BE).
pub struct BeRing {
    pub prime: Prime,
    /// Canonical y-monomials (i, j), sorted.
    pub ymons: Vec<(u32, u32)>,
    ymon_index: Vec<usize>,
    /// Reduction of y1^a y2^b for a, b <= 2p-2.
    products: Vec<Vec<YTerm>>,
}

impl BeRing {
    fn build(prime: Prime) -> Self {
        let q = prime.get();
        let mut ymons = Vec::new();
        let mut ymon_index = vec![usize::MAX; (q * q) as usize];
        for i in 0..q {
            for j in 0..q {
                if !(i == q - 1 && j == q - 1) {
                    ymon_index[(i * q + j) as usize] = ymons.len();
                    ymons.push((i, j));
                }
            }
        }
        let side = 2 * q - 1;
        let mut products = Vec::with_capacity((side * side) as usize);
        for a in 0..side {
            for b in 0..side {
                products.push(reduce_r1_first(prime, a, b));
            }
        }
        BeRing { prime, ymons, ymon_index, products }
    }

    pub fn ymon_index(&self, i: u32, j: u32) -> usize {
        self.ymon_index[(i * self.prime.get() + j) as usize]
    }

    /// Reduction of the product of two canonical y-monomials.
    pub fn ymul(&self, i1: u32, j1: u32, i2: u32, j2: u32) -> &[YTerm] {
        let side = 2 * self.prime.get() - 1;
        &self.products[((i1 + i2) * side + j1 + j2) as usize]
    }
}

/// The shared tables for H*(BE) at this prime.
pub fn be_ring(prime: Prime) -> &'static BeRing {
    static RINGS: [OnceLock<BeRing>; 32] = [const { OnceLock::new() }; 32];
    RINGS[prime.get() as usize].get_or_init(|| BeRing::build(prime))
}

fn reduce_r1_first(p: Prime, mut e1: u32, mut e2: u32) -> Vec<YTerm> {
    let q = p.get();
    let mut dc = 0;
    while e1 >= q {
        e1 -= q - 1;
        dc += 1;
    }
    while e2 >= q {
        e2 -= q - 1;
        dc += 1;
    }
    if e1 == q - 1 && e2 == q - 1 {
        vec![
            YTerm { dc: dc + 1, i: q - 1, j: 0, coeff: 1 },
            YTerm { dc: dc + 1, i: 0, j: q - 1, coeff: 1 },
            YTerm { dc: dc + 2, i: 0, j: 0, coeff: q - 1 },
        ]
    } else {
        vec![YTerm { dc, i: e1, j: e2, coeff: 1 }]
    }
}

fn collect(p: Prime, terms: impl IntoIterator<Item = YTerm>) -> Vec<YTerm> {
    let mut acc: BTreeMap<(u32, u32, u32), u32> = BTreeMap::new();
    for t in terms {
        let e = acc.entry((t.dc, t.i, t.j)).or_insert(0);
        *e = p.add(*e, t.coeff);
    }
    acc.into_iter().filter(|&(_, c)| c != 0).map(|((dc, i, j), coeff)| YTerm { dc, i, j, coeff }).collect()
}

fn reduce_interleaved(p: Prime, e1: u32, e2: u32) -> Vec<YTerm> {
    let mut cur = vec![YTerm { dc: 0, i: 0, j: 0, coeff: 1 }];
    let (mut a, mut b) = (e1, e2);
    let mut turn = 0;
    while a > 0 || b > 0 {
        let use_first = (turn % 2 == 0 && a > 0) || b == 0;
        turn += 1;
        if use_first {
            a -= 1;
        } else {
            b -= 1;
        }
        let step = cur.iter().flat_map(|t| {
            let (ni, nj) = if use_first { (t.i + 1, t.j) } else { (t.i, t.j + 1) };
            reduce_r1_first(p, ni, nj).into_iter().map(move |r| YTerm {
                dc: r.dc + t.dc,
                i: r.i,
                j: r.j,
                coeff: p.mul(r.coeff, t.coeff),
            })
        });
        cur = collect(p, step.collect::<Vec<_>>());
    }
    cur
}

fn reduce_r2_first(p: Prime, e1: u32, e2: u32) -> Vec<YTerm> {
    let q = p.get();
    if e1 >= q - 1 && e2 >= q - 1 {
        // Y1*Y2 -> C*Y1 + C*Y2 - C^2
        let parts = [(1, e1, e2 - (q - 1), 1), (1, e1 - (q - 1), e2, 1), (2, e1 - (q - 1), e2 - (q - 1), q - 1)];
        let mut out = Vec::new();
        for (dc, a, b, c) in parts {
            for t in reduce_r2_first(p, a, b) {
                out.push(YTerm { dc: t.dc + dc, i: t.i, j: t.j, coeff: p.mul(t.coeff, c) });
            }
        }
        collect(p, out)
    } else {
        reduce_r1_first(p, e1, e2)
    }
}

/// Canonical form of `C^c v^v y1^e1 y2^e2` with unrestricted exponents.
pub fn be_reduce(p: Prime, raw: Monomial) -> GradedElement {
    be_reduce_with(p, raw, Strategy::R1First)
}

pub fn be_reduce_with(p: Prime, raw: Monomial, strategy: Strategy) -> GradedElement {
    let terms = match strategy {
        Strategy::R1First => reduce_r1_first(p, raw.e1, raw.e2),
        Strategy::Interleaved => reduce_interleaved(p, raw.e1, raw.e2),
        Strategy::R2First => reduce_r2_first(p, raw.e1, raw.e2),
    };
    GradedElement::from_terms(
        Algebra::BE(p),
        terms.into_iter().map(|t| (Monomial::be(raw.c + t.dc, raw.v, t.i, t.j), t.coeff)),
    )
}

/// Sorted basis of the degree-`d` component.
pub fn degree_basis(alg: Algebra, d: u32) -> Vec<Monomial> {
    assert!(d.is_multiple_of(2), "only even degrees are materialized");
    let t = d / 2;
    match alg {
        Algebra::BE(p) => {
            let q = p.get();
            let ring = be_ring(p);
            let mut out = Vec::new();
            for v in 0..=t / q {
                out.extend(r_basis(ring, t - v * q).into_iter().map(|(c, i, j)| Monomial::be(c, v, i, j)));
            }
            out.sort();
            out
        }
        _ => (0..=t).map(|e1| Monomial::y(e1, t - e1)).collect(),
    }
}

/// Basis `(c, i, j)` of the half-degree-`m` part of the subring generated by
/// C and the y's (no v).
pub fn r_basis(ring: &BeRing, m: u32) -> Vec<(u32, u32, u32)> {
    let q = ring.prime.get();
    let mut out = Vec::new();
    for &(i, j) in &ring.ymons {
        let s = i + j;
        if s <= m && (m - s).is_multiple_of(q - 1) {
            out.push(((m - s) / (q - 1), i, j));
        }
    }
    out.sort();
    out
}

/// Dimensions of the degree-2t components for t = 0..=t_max.
pub fn ambient_dims(alg: Algebra, t_max: u32) -> Vec<usize> {
    match alg {
        Algebra::BE(p) => {
            let q = p.get();
            let ring = be_ring(p);
            let r: Vec<usize> = (0..=t_max).map(|m| r_basis(ring, m).len()).collect();
            (0..=t_max).map(|t| (0..=t / q).map(|v| r[(t - v * q) as usize]).sum()).collect()
        }
        _ => (0..=t_max).map(|t| t as usize + 1).collect(),
    }
}

/// An exact F_p-combination of canonical monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedElement {
    alg: Algebra,
    terms: BTreeMap<Monomial, u32>,
}

impl GradedElement {
    pub fn zero(alg: Algebra) -> Self {
        GradedElement { alg, terms: BTreeMap::new() }
    }

    pub fn one(alg: Algebra) -> Self {
        Self::from_terms(alg, [(Monomial::default(), 1)])
    }

    pub fn constant(alg: Algebra, c: i64) -> Self {
        Self::from_terms(alg, [(Monomial::default(), alg.prime().reduce(c))])
    }

    /// Sums the given terms; BE terms are reduced to canonical form.
    pub fn from_terms(alg: Algebra, terms: impl IntoIterator<Item = (Monomial, u32)>) -> Self {
        let p = alg.prime();
        let mut out = GradedElement::zero(alg);
        for (m, c) in terms {
            let c = c % p.get();
            if c == 0 {
                continue;
            }
            if matches!(alg, Algebra::BE(_)) && !m.is_be_canonical(p) {
                let r = be_reduce(p, m);
                for (m2, c2) in r.terms {
                    out.add_term(m2, p.mul(c, c2));
                }
            } else {
                out.add_term(m, c);
            }
        }
        out
    }

    /// Generator by name: `y1, y2, C, v` (BE), `y, u` (BA), `y1, y2` (POLY2).
    pub fn var(alg: Algebra, name: &str) -> Option<Self> {
        let m = match (alg, name) {
            (Algebra::BE(_), "C") => Monomial::be(1, 0, 0, 0),
            (Algebra::BE(_), "v") => Monomial::be(0, 1, 0, 0),
            (Algebra::BE(_) | Algebra::Poly2(_), "y1") | (Algebra::BA(_), "y") => Monomial::y(1, 0),
            (Algebra::BE(_) | Algebra::Poly2(_), "y2") | (Algebra::BA(_), "u") => Monomial::y(0, 1),
            _ => return None,
        };
        Some(Self::from_terms(alg, [(m, 1)]))
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        let p = self.alg.prime();
        let e = self.terms.entry(m).or_insert(0);
        *e = p.add(*e, c);
        if *e == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &u32)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> u32 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Topological degree, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| 2 * self.alg.weight(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Homogeneous components keyed by topological degree.
    pub fn components(&self) -> BTreeMap<u32, GradedElement> {
        let mut out: BTreeMap<u32, GradedElement> = BTreeMap::new();
        for (m, &c) in &self.terms {
            out.entry(2 * self.alg.weight(m)).or_insert_with(|| GradedElement::zero(self.alg)).terms.insert(*m, c);
        }
        out
    }

    fn check(&self, other: &GradedElement) -> Result<()> {
        if self.alg != other.alg {
            return Err(Error::AlgebraMismatch(self.alg.to_string(), other.alg.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedElement) -> Result<GradedElement> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(*m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &GradedElement) -> Result<GradedElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedElement {
        self.scale(self.alg.prime().get() - 1)
    }

    pub fn scale(&self, c: u32) -> GradedElement {
        let p = self.alg.prime();
        let c = c % p.get();
        if c == 0 {
            return GradedElement::zero(self.alg);
        }
        GradedElement { alg: self.alg, terms: self.terms.iter().map(|(m, &x)| (*m, p.mul(x, c))).collect() }
    }

    pub fn mul(&self, other: &GradedElement) -> Result<GradedElement> {
        self.check(other)?;
        let p = self.alg.prime();
        let mut out = GradedElement::zero(self.alg);
        match self.alg {
            Algebra::BE(_) => {
                let ring = be_ring(p);
                for (a, &ca) in &self.terms {
                    for (b, &cb) in &other.terms {
                        let c = p.mul(ca, cb);
                        for t in ring.ymul(a.e1, a.e2, b.e1, b.e2) {
                            let m = Monomial::be(a.c + b.c + t.dc, a.v + b.v, t.i, t.j);
                            out.add_term(m, p.mul(c, t.coeff));
                        }
                    }
                }
            }
            _ => {
                for (a, &ca) in &self.terms {
                    for (b, &cb) in &other.terms {
                        out.add_term(Monomial::y(a.e1 + b.e1, a.e2 + b.e2), p.mul(ca, cb));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u32) -> GradedElement {
        let mut base = self.clone();
        let mut acc = GradedElement::one(self.alg);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same algebra");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same algebra");
            }
        }
        acc
    }

    /// Coordinates against a degree basis; None if a term lies outside it.
    pub fn to_dense(&self, basis: &[Monomial]) -> Option<Vec<u32>> {
        let mut v = vec![0; basis.len()];
        for (m, &c) in &self.terms {
            v[basis.binary_search(m).ok()?] = c;
        }
        Some(v)
    }

    pub fn from_dense(alg: Algebra, basis: &[Monomial], v: &[u32]) -> Self {
        GradedElement {
            alg,
            terms: basis.iter().zip(v).filter(|(_, &c)| c != 0).map(|(m, &c)| (*m, c)).collect(),
        }
    }
}

fn write_pow(f: &mut fmt::Formatter<'_>, first: &mut bool, name: &str, e: u32) -> fmt::Result {
    if e == 0 {
        return Ok(());
    }
    if !*first {
        write!(f, "*")?;
    }
    *first = false;
    if e == 1 {
        write!(f, "{name}")
    } else {
        write!(f, "{name}^{e}")
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let (x1, x2) = self.alg.var_names();
        for (n, (m, &c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let mut first = true;
            if c != 1 || *m == Monomial::default() {
                write!(f, "{c}")?;
                first = false;
            }
            write_pow(f, &mut first, "C", m.c)?;
            write_pow(f, &mut first, "v", m.v)?;
            write_pow(f, &mut first, x1, m.e1)?;
            write_pow(f, &mut first, x2, m.e2)?;
        }
        Ok(())
    }
}

/// The module S^q(A) tensored with det^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleModuleSpec {
    pub q: u32,
    pub k: u32,
}

impl SimpleModuleSpec {
    pub fn dim(&self) -> usize {
        self.q as usize + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn be(p: u32) -> Algebra {
        Algebra::BE(Prime::new(p).unwrap())
    }

    fn var(a: Algebra, n: &str) -> GradedElement {
        GradedElement::var(a, n).unwrap()
    }

    #[test]
    fn r1_rule() {
        let a = be(3);
        let y1 = var(a, "y1");
        assert_eq!(y1.pow(3), var(a, "C").mul(&y1).unwrap());
    }

    #[test]
    fn r2_rule_matches_expansion() {
        // Y1*Y2 computed from C^2 = Y1^2 + Y2^2 - Y1*Y2 with Y_t^2 = C*Y_t.
        for p in [3, 5, 7, 13] {
            let a = be(p);
            let q = p - 1;
            let y1 = var(a, "y1").pow(q);
            let y2 = var(a, "y2").pow(q);
            let c = var(a, "C");
            let lhs = y1.mul(&y2).unwrap();
            let rhs = c.mul(&y1).unwrap().add(&c.mul(&y2).unwrap()).unwrap().sub(&c.pow(2)).unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(y1.pow(2), c.mul(&y1).unwrap());
        }
    }

    #[test]
    fn relation_y1p_y2() {
        for p in [3, 5, 7, 13] {
            let a = be(p);
            let y1 = var(a, "y1");
            let y2 = var(a, "y2");
            let r = y1.pow(p).mul(&y2).unwrap().sub(&y1.mul(&y2.pow(p)).unwrap()).unwrap();
            assert!(r.is_zero());
            // (Y1 - Y2)*y1*y2 = 0 is the same relation; y1^{p+1}y2 - y1y2^{p+1} is not zero.
            let t = y1.mul(&y2).unwrap();
            let r = y1.pow(p - 1).sub(&y2.pow(p - 1)).unwrap().mul(&t).unwrap();
            assert!(r.is_zero());
            let s = y1.pow(p + 1).mul(&y2).unwrap().sub(&y1.mul(&y2.pow(p + 1)).unwrap()).unwrap();
            let c = GradedElement::var(a, "C").unwrap();
            assert_eq!(s, c.mul(&t).unwrap().mul(&y1.sub(&y2).unwrap()).unwrap());
        }
    }

    #[test]
    fn unit_and_canonical() {
        let a = be(5);
        let x = var(a, "y1").mul(&var(a, "y2")).unwrap();
        assert_eq!(x.num_terms(), 1);
        assert_eq!(GradedElement::one(a).mul(&x).unwrap(), x);
        assert!(x.mul(&GradedElement::one(Algebra::BA(Prime::new(5).unwrap()))).is_err());
    }

    #[test]
    fn small_degree_bases() {
        for p in [3, 5, 7, 13] {
            let a = be(p);
            assert_eq!(degree_basis(a, 0).len(), 1);
            assert_eq!(degree_basis(a, 2 * p - 2).len(), p as usize + 1);
            for q in 1..p - 1 {
                assert_eq!(degree_basis(a, 2 * q).len(), q as usize + 1);
            }
        }
    }

    #[test]
    fn display() {
        let a = be(7);
        let x = var(a, "C").mul(&var(a, "y1").pow(2)).unwrap().add(&GradedElement::constant(a, -1)).unwrap();
        assert_eq!(x.to_string(), "6 + C*y1^2");
    }
}
