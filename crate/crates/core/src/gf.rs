//! Prime fields, 2x2 matrices over them, and finite matrix groups.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PRIME: u32 = 31;

/// An odd prime at most [`MAX_PRIME`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Prime(u32);

impl TryFrom<u32> for Prime {
    type Error = Error;
    fn try_from(p: u32) -> Result<Self> {
        Prime::new(p)
    }
}

impl From<Prime> for u32 {
    fn from(p: Prime) -> u32 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Prime {
    pub fn new(p: u32) -> Result<Self> {
        let is_prime = p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
        if !is_prime || p == 2 || p > MAX_PRIME {
            return Err(Error::UnsupportedPrime(p));
        }
        Ok(Prime(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.0
    }

    pub fn pow(self, a: u32, mut e: u64) -> u32 {
        let mut base = a % self.0;
        let mut acc = 1 % self.0;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        assert!(!a.is_multiple_of(self.0), "inverse of zero mod {}", self.0);
        self.pow(a, (self.0 - 2) as u64)
    }

    pub fn reduce(self, a: i64) -> u32 {
        a.rem_euclid(self.0 as i64) as u32
    }

    /// Binomial coefficient mod p by Lucas' theorem.
    pub fn binom(self, mut n: u64, mut k: u64) -> u32 {
        let p = self.0 as u64;
        let mut acc = 1u32;
        while k > 0 {
            let (nd, kd) = (n % p, k % p);
            if kd > nd {
                return 0;
            }
            acc = self.mul(acc, small_binom(nd as u32, kd as u32, self));
            n /= p;
            k /= p;
        }
        acc
    }

    /// Multiplicative order of a nonzero residue.
    pub fn order(self, a: u32) -> u32 {
        let mut x = a % self.0;
        let mut n = 1;
        while x != 1 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// A generator of the cyclic group of units.
    pub fn primitive_root(self) -> u32 {
        (2..self.0).find(|&g| self.order(g) == self.0 - 1).unwrap_or(1)
    }

    /// Order of GL2 over this field.
    pub fn gl2_order(self) -> usize {
        let p = self.0 as usize;
        (p * p - 1) * (p * p - p)
    }
}

fn small_binom(n: u32, k: u32, p: Prime) -> u32 {
    let mut num = 1;
    let mut den = 1;
    for t in 0..k {
        num = p.mul(num, n - t);
        den = p.mul(den, t + 1);
    }
    p.mul(num, p.inv(den))
}

/// An element of the prime field, carrying its modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u32,
    prime: Prime,
}

impl Fp {
    pub fn new(value: i64, prime: Prime) -> Self {
        Fp { value: prime.reduce(value), prime }
    }
    pub fn value(self) -> u32 {
        self.value
    }
    pub fn prime(self) -> Prime {
        self.prime
    }
    pub fn is_zero(self) -> bool {
        self.value == 0
    }
    pub fn inv(self) -> Option<Fp> {
        (self.value != 0).then(|| Fp { value: self.prime.inv(self.value), prime: self.prime })
    }
    pub fn pow(self, e: u64) -> Fp {
        Fp { value: self.prime.pow(self.value, e), prime: self.prime }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! fp_binop {
    ($tr:ident, $method:ident, $op:ident) => {
        impl std::ops::$tr for Fp {
            type Output = Fp;
            fn $method(self, rhs: Fp) -> Fp {
                assert_eq!(self.prime, rhs.prime, "mixed moduli");
                Fp { value: self.prime.$op(self.value, rhs.value), prime: self.prime }
            }
        }
    };
}
fp_binop!(Add, add, add);
fp_binop!(Sub, sub, sub);
fp_binop!(Mul, mul, mul);

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { value: self.prime.neg(self.value), prime: self.prime }
    }
}

/// A 2x2 matrix over F_p, row-major `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    prime: Prime,
    e: [u32; 4],
}

impl Mat2 {
    pub fn new(prime: Prime, a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 { prime, e: [prime.reduce(a), prime.reduce(b), prime.reduce(c), prime.reduce(d)] }
    }
    pub fn identity(prime: Prime) -> Self {
        Mat2::new(prime, 1, 0, 0, 1)
    }
    pub fn diag(prime: Prime, a: i64, d: i64) -> Self {
        Mat2::new(prime, a, 0, 0, d)
    }
    pub fn prime(&self) -> Prime {
        self.prime
    }
    /// Entries `[alpha, beta, gamma, delta]`.
    pub fn entries(&self) -> [u32; 4] {
        self.e
    }
    pub fn det(&self) -> u32 {
        let p = self.prime;
        p.sub(p.mul(self.e[0], self.e[3]), p.mul(self.e[1], self.e[2]))
    }
    pub fn is_invertible(&self) -> bool {
        self.det() != 0
    }
    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let p = self.prime;
        let [a, b, c, d] = self.e;
        let [e, f, g, h] = o.e;
        Mat2 {
            prime: p,
            e: [
                p.add(p.mul(a, e), p.mul(b, g)),
                p.add(p.mul(a, f), p.mul(b, h)),
                p.add(p.mul(c, e), p.mul(d, g)),
                p.add(p.mul(c, f), p.mul(d, h)),
            ],
        }
    }
    pub fn inverse(&self) -> Option<Mat2> {
        let det = self.det();
        if det == 0 {
            return None;
        }
        let p = self.prime;
        let di = p.inv(det);
        let [a, b, c, d] = self.e;
        Some(Mat2 { prime: p, e: [p.mul(d, di), p.mul(p.neg(b), di), p.mul(p.neg(c), di), p.mul(a, di)] })
    }
    pub fn transpose(&self) -> Mat2 {
        let [a, b, c, d] = self.e;
        Mat2 { prime: self.prime, e: [a, c, b, d] }
    }
    pub fn pow(&self, n: u64) -> Mat2 {
        let mut acc = Mat2::identity(self.prime);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }
    pub fn order(&self) -> usize {
        let id = Mat2::identity(self.prime);
        let mut x = *self;
        let mut n = 1;
        while x != id {
            x = x.mul(self);
            n += 1;
        }
        n
    }
    /// Entries as small signed integers in `(-p/2, p/2]`.
    pub fn signed(&self) -> [i64; 4] {
        let p = self.prime.get() as i64;
        self.e.map(|x| {
            let x = x as i64;
            if x > p / 2 {
                x - p
            } else {
                x
            }
        })
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.e;
        write!(f, "({a} {b};{c} {d})")
    }
}

/// A finite subgroup of GL2(F_p) with its full, sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGroup {
    prime: Prime,
    generators: Vec<Mat2>,
    elements: Vec<Mat2>,
    pub name: Option<String>,
}

impl MatrixGroup {
    pub fn prime(&self) -> Prime {
        self.prime
    }
    pub fn generators(&self) -> &[Mat2] {
        &self.generators
    }
    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }
    pub fn order(&self) -> usize {
        self.elements.len()
    }
    pub fn contains(&self, g: &Mat2) -> bool {
        self.elements.binary_search(g).is_ok()
    }
    pub fn is_subgroup_of(&self, other: &MatrixGroup) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }
    /// Builds a group from an element set already known to be a subgroup.
    pub fn from_elements(prime: Prime, mut elements: Vec<Mat2>) -> Self {
        elements.sort();
        elements.dedup();
        MatrixGroup { prime, generators: elements.clone(), elements, name: None }
    }
    /// The subgroup of elements satisfying `pred`; the caller guarantees closure.
    pub fn filter(&self, pred: impl Fn(&Mat2) -> bool) -> MatrixGroup {
        let elements: Vec<Mat2> = self.elements.iter().copied().filter(|g| pred(g)).collect();
        let generators = minimal_generators(self.prime, &elements);
        MatrixGroup { prime: self.prime, generators, elements, name: None }
    }
    pub fn is_transpose_closed(&self) -> bool {
        self.elements.iter().all(|g| self.contains(&g.transpose()))
    }
}

/// Greedy generating set drawn from a subgroup's elements.
fn minimal_generators(prime: Prime, elements: &[Mat2]) -> Vec<Mat2> {
    let mut gens = Vec::new();
    let mut span = vec![Mat2::identity(prime)];
    for g in elements {
        if span.binary_search(g).is_err() {
            gens.push(*g);
            span = closure_elements(prime, &gens);
        }
        if span.len() == elements.len() {
            break;
        }
    }
    gens
}

fn closure_elements(prime: Prime, gens: &[Mat2]) -> Vec<Mat2> {
    let id = Mat2::identity(prime);
    let mut seen = BTreeSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
        assert!(seen.len() <= prime.gl2_order(), "closure exceeds |GL2|");
    }
    seen.into_iter().collect()
}

/// The subgroup generated by `gens`.
pub fn group_closure(prime: Prime, gens: &[Mat2]) -> Result<MatrixGroup> {
    for g in gens {
        if g.prime() != prime {
            return Err(Error::Invalid(format!("generator {g} is not over F_{prime}")));
        }
        if !g.is_invertible() {
            return Err(Error::SingularGenerator(g.to_string()));
        }
    }
    Ok(MatrixGroup { prime, generators: gens.to_vec(), elements: closure_elements(prime, gens), name: None })
}

/// The subgroup {M in GL2 : det M in dets}.
pub fn det_preimage(prime: Prime, dets: &[u32]) -> MatrixGroup {
    let mut gens = vec![Mat2::new(prime, 1, 1, 0, 1), Mat2::new(prime, 1, 0, 1, 1)];
    for &t in dets {
        if t != 1 {
            gens.push(Mat2::diag(prime, 1, t as i64));
        }
    }
    group_closure(prime, &gens).expect("invertible generators")
}

pub fn det_image(g: &MatrixGroup) -> BTreeSet<u32> {
    g.elements().iter().map(Mat2::det).collect()
}

/// Subgroup of F_p^* generated by the given residues.
pub fn unit_subgroup(prime: Prime, gens: &[u32]) -> BTreeSet<u32> {
    let mut set = BTreeSet::from([1]);
    loop {
        let next: BTreeSet<u32> =
            set.iter().flat_map(|&x| gens.iter().map(move |&g| prime.mul(x, g))).chain(set.iter().copied()).collect();
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

struct Named {
    name: &'static str,
    prime: Option<u32>,
    gens: &'static [[i64; 4]],
    order: Option<usize>,
}

// p = 3 elements: l, w, k = l^2, w', m = -1.
const L3: [i64; 4] = [0, 1, 1, -1];
const W3: [i64; 4] = [0, 1, -1, 0];
const K3: [i64; 4] = [1, -1, -1, -1];
const WP3: [i64; 4] = [1, -1, 0, -1];
const M3: [i64; 4] = [-1, 0, 0, -1];

// p = 7 elements.
const W7: [i64; 4] = [0, 1, -1, 0];
const KP7: [i64; 4] = [-1, 1, -1, -1];
const LP7: [i64; 4] = [-1, 3, -3, -1];
const WP7: [i64; 4] = [0, 1, 1, 0];

// p = 13 elements x, y, z.
const X13: [i64; 4] = [3, 0, 0, 9];
const Y13: [i64; 4] = [5, -4, -2, 7];
const Z13: [i64; 4] = [2, 2, 1, -2];

const NAMED: &[Named] = &[
    Named { name: "1", prime: None, gens: &[], order: Some(1) },
    Named { name: "SD16", prime: Some(3), gens: &[L3, W3], order: Some(16) },
    Named { name: "Q8", prime: Some(3), gens: &[W3, K3], order: Some(8) },
    Named { name: "D8", prime: Some(3), gens: &[WP3, K3], order: Some(8) },
    Named { name: "Z8", prime: Some(3), gens: &[L3], order: Some(8) },
    Named { name: "Z4k", prime: Some(3), gens: &[K3], order: Some(4) },
    Named { name: "Z4w", prime: Some(3), gens: &[W3], order: Some(4) },
    Named { name: "Z2m", prime: Some(3), gens: &[M3], order: Some(2) },
    Named { name: "Z2w'", prime: Some(3), gens: &[WP3], order: Some(2) },
    Named { name: "V4", prime: Some(3), gens: &[WP3, M3], order: Some(4) },
    Named { name: "3D8", prime: Some(7), gens: &[[-1, 0, 0, 1], [2, 0, 0, 2], W7], order: Some(24) },
    Named { name: "3SD16", prime: Some(7), gens: &[[-1, 0, 0, 1], [2, 0, 0, 2], W7, KP7], order: Some(48) },
    Named { name: "3SD32", prime: Some(7), gens: &[[-1, 0, 0, 1], [2, 0, 0, 2], W7, LP7], order: Some(96) },
    Named { name: "3S3", prime: Some(7), gens: &[[2, 0, 0, 1], WP7], order: Some(18) },
    Named { name: "6S3", prime: Some(7), gens: &[[2, 0, 0, 1], WP7, [-1, 0, 0, -1]], order: Some(36) },
    Named { name: "6sq2", prime: Some(7), gens: &[[2, 0, 0, 1], WP7, [-1, 0, 0, -1], [3, 0, 0, 1]], order: Some(72) },
    Named { name: "xy", prime: Some(13), gens: &[X13, Y13], order: Some(24) },
    Named { name: "3x4S4", prime: Some(13), gens: &[X13, Y13, Z13], order: Some(288) },
];

/// Named elements used in the descriptor catalog.
pub fn named_element(name: &str, prime: Prime) -> Option<Mat2> {
    let e = match (name, prime.get()) {
        ("l", 3) => L3,
        ("w", 3) | ("w", 7) => W3,
        ("k", 3) => K3,
        ("w'", 3) => WP3,
        ("m", _) => M3,
        ("k'", 7) => KP7,
        ("l'", 7) => LP7,
        ("w'", 7) => WP7,
        ("x", 13) => X13,
        ("y", 13) => Y13,
        ("z", 13) => Z13,
        ("u", _) => [1, 1, 0, 1],
        ("u'", _) => [1, 0, 1, 1],
        _ => return None,
    };
    Some(Mat2::new(prime, e[0], e[1], e[2], e[3]))
}

/// Parses `diag(a,b)` into a diagonal matrix.
fn parse_diag(name: &str, prime: Prime) -> Option<Mat2> {
    let inner = name.strip_prefix("diag(")?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some(Mat2::diag(prime, a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Groups by label: the fixed names above, `U`, `SL2`, `GL2`, and
/// `<diag(a,b),...>` or a single `diag(a,b)` literal.
pub fn named_subgroup(name: &str, prime: Prime) -> Result<MatrixGroup> {
    let unknown = || Error::UnknownGroup(format!("{name} at p={prime}"));
    let group = match name {
        "U" => group_closure(prime, &[Mat2::new(prime, 1, 1, 0, 1)])?,
        "SL2" => det_preimage(prime, &[1]),
        "GL2" => {
            let g = prime.primitive_root();
            det_preimage(prime, &[g])
        }
        _ if name.starts_with("diag(") => group_closure(prime, &[parse_diag(name, prime).ok_or_else(unknown)?])?,
        _ if name.starts_with('<') && name.ends_with('>') => {
            let inner = &name[1..name.len() - 1];
            let mut gens = Vec::new();
            for part in inner.split("),") {
                let part = if part.ends_with(')') { part.to_string() } else { format!("{part})") };
                gens.push(parse_diag(part.trim(), prime).ok_or_else(unknown)?);
            }
            group_closure(prime, &gens)?
        }
        _ => {
            let entry = NAMED.iter().find(|n| n.name == name).ok_or_else(unknown)?;
            if entry.prime.is_some_and(|q| q != prime.get()) {
                return Err(unknown());
            }
            let gens: Vec<Mat2> = entry.gens.iter().map(|e| Mat2::new(prime, e[0], e[1], e[2], e[3])).collect();
            let g = group_closure(prime, &gens)?;
            if let Some(n) = entry.order {
                assert_eq!(g.order(), n, "named group {name} has wrong order");
            }
            g
        }
    };
    Ok(group.with_name(name))
}

/// Labels accepted by [`named_subgroup`] for the given prime (literals excluded).
pub fn named_subgroup_labels(prime: Prime) -> Vec<&'static str> {
    let mut v: Vec<&'static str> =
        NAMED.iter().filter(|n| n.prime.is_none_or(|q| q == prime.get())).map(|n| n.name).collect();
    v.extend(["U", "SL2", "GL2"]);
    v
}
