//! Module presentations ("ring x generator degrees"), their series, the
//! expression language for explicit generators, and expectation records.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::Prime;
use crate::graded::{Algebra, GradedElement};

/// Coefficient ring of a presentation summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ring {
    Named(String),
    Degrees(Vec<u32>),
}

impl Ring {
    /// Free generator degrees of the ring.
    pub fn degrees(&self, p: Prime) -> Result<Vec<u32>> {
        let q = p.get();
        Ok(match self {
            Ring::Degrees(d) => d.clone(),
            Ring::Named(n) => match n.as_str() {
                "DA" | "M" => vec![2 * (q * q - q), 2 * (q * q - 1)],
                "CA" => vec![2 * q - 2, 2 * q * (q - 1)],
                "ZCV" => vec![2 * q - 2, 2 * q],
                "S" if q == 3 => vec![8, 16],
                "F" => vec![],
                _ => return Err(Error::Parse(format!("unknown ring {n} at p={p}"))),
            },
        })
    }

    /// Extra generator shifts: M = DA{1, C, ..., C^{p-1}}.
    pub fn shifts(&self, p: Prime) -> Vec<(u32, u32)> {
        match self {
            Ring::Named(n) if n == "M" => (0..p.get()).map(|j| (j * (2 * p.get() - 2), j)).collect(),
            _ => vec![(0, 0)],
        }
    }

    /// Ring generators as expressions in H*(BE), when known.
    pub fn be_exprs(&self) -> Option<Vec<String>> {
        let v = |xs: &[&str]| Some(xs.iter().map(|s| s.to_string()).collect());
        match self {
            Ring::Named(n) => match n.as_str() {
                "DA" | "M" => v(&["D1", "D2"]),
                "CA" => v(&["C", "V"]),
                "ZCV" => v(&["C", "v"]),
                "F" => Some(vec![]),
                _ => None,
            },
            Ring::Degrees(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Generator {
    Degree(u32),
    Explicit { deg: u32, expr: String },
}

impl Generator {
    pub fn degree(&self) -> u32 {
        match self {
            Generator::Degree(d) | Generator::Explicit { deg: d, .. } => *d,
        }
    }
    /// A degree-0 generator given by degree alone is the unit.
    pub fn expr(&self) -> Option<&str> {
        match self {
            Generator::Degree(0) => Some("1"),
            Generator::Degree(_) => None,
            Generator::Explicit { expr, .. } => Some(expr),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub ring: Ring,
    /// Expressions for the ring generators, overriding the built-in ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring_exprs: Option<Vec<String>>,
    pub gens: Vec<Generator>,
}

/// A direct sum of free modules over polynomial rings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModulePresentation {
    pub summands: Vec<Summand>,
}

impl ModulePresentation {
    pub fn single(ring: Ring, gens: Vec<u32>) -> Self {
        ModulePresentation {
            summands: vec![Summand { ring, ring_exprs: None, gens: gens.into_iter().map(Generator::Degree).collect() }],
        }
    }
}

/// Coefficients of sum t^gen / prod (1 - t^ring) for every degree 0..=d_max.
pub fn expand_all_degrees(pres: &ModulePresentation, p: Prime, d_max: u32) -> Result<Vec<u64>> {
    let n = d_max as usize + 1;
    let mut total = vec![0u64; n];
    for s in &pres.summands {
        let mut ring = vec![0u64; n];
        ring[0] = 1;
        for d in s.ring.degrees(p)? {
            if d == 0 {
                return Err(Error::Parse("ring generator of degree 0".into()));
            }
            let d = d as usize;
            for k in d..n {
                ring[k] += ring[k - d];
            }
        }
        for g in &s.gens {
            for (shift, _) in s.ring.shifts(p) {
                let start = (g.degree() + shift) as usize;
                for k in start..n {
                    total[k] += ring[k - start];
                }
            }
        }
    }
    Ok(total)
}

/// Coefficients in even degrees 0, 2, ..., d_max.
pub fn expand_presentation(pres: &ModulePresentation, p: Prime, d_max: u32) -> Result<Vec<usize>> {
    Ok(expand_all_degrees(pres, p, d_max)?.into_iter().step_by(2).map(|x| x as usize).collect())
}

/// Nonzero coefficients keyed by degree.
pub fn expand_sparse(pres: &ModulePresentation, p: Prime, d_max: u32) -> Result<BTreeMap<u32, usize>> {
    Ok(expand_all_degrees(pres, p, d_max)?
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c != 0)
        .map(|(d, c)| (d as u32, c as usize))
        .collect())
}

/// Expected results for one descriptor.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectationRecord {
    #[serde(default)]
    pub note: String,
    #[serde(default)]
    pub d_max: Option<u32>,
    /// Named elements, evaluated in order; later entries may use earlier ones.
    #[serde(default)]
    pub symbols: Vec<(String, String)>,
    #[serde(default)]
    pub even: Option<ModulePresentation>,
    #[serde(default)]
    pub odd: Option<ModulePresentation>,
    #[serde(default)]
    pub odd_d_max: Option<u32>,
    #[serde(default)]
    pub nilpotent: Option<ModulePresentation>,
    #[serde(default)]
    pub splitting: Option<String>,
    /// Ring identities `lhs = rhs`.
    #[serde(default)]
    pub identities: Vec<(String, String)>,
}

/// Names bound to elements of one algebra.
#[derive(Clone, Debug)]
pub struct Scope {
    alg: Algebra,
    names: BTreeMap<String, GradedElement>,
}

impl Scope {
    /// Built-in names: the variables, `Y1 = y1^(p-1)`, `Y2`, and in BE also
    /// `V = v^(p-1)`, `D1 = C^p + V`, `D2 = C*V`; in BA `Vu = u^p - y^(p-1)*u`.
    pub fn new(alg: Algebra) -> Self {
        let q = alg.prime().get();
        let mut s = Scope { alg, names: BTreeMap::new() };
        let var = |n: &str| GradedElement::var(alg, n).expect("variable");
        match alg {
            Algebra::BE(_) => {
                for n in ["y1", "y2", "C", "v"] {
                    s.names.insert(n.into(), var(n));
                }
                let big_v = var("v").pow(q - 1);
                s.names.insert("Y1".into(), var("y1").pow(q - 1));
                s.names.insert("Y2".into(), var("y2").pow(q - 1));
                s.names.insert("D1".into(), var("C").pow(q).add(&big_v).expect("same algebra"));
                s.names.insert("D2".into(), var("C").mul(&big_v).expect("same algebra"));
                s.names.insert("V".into(), big_v);
            }
            Algebra::Poly2(_) => {
                for n in ["y1", "y2"] {
                    s.names.insert(n.into(), var(n));
                }
                s.names.insert("Y1".into(), var("y1").pow(q - 1));
                s.names.insert("Y2".into(), var("y2").pow(q - 1));
            }
            Algebra::BA(_) => {
                for n in ["y", "u"] {
                    s.names.insert(n.into(), var(n));
                }
                let vu = var("u").pow(q).sub(&var("y").pow(q - 1).mul(&var("u")).expect("same")).expect("same");
                s.names.insert("Vu".into(), vu);
            }
        }
        s
    }

    pub fn algebra(&self) -> Algebra {
        self.alg
    }

    pub fn bind(&mut self, name: &str, value: GradedElement) {
        self.names.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&GradedElement> {
        self.names.get(name)
    }

    /// Evaluates and binds each `(name, expr)` in order.
    pub fn define_all(&mut self, defs: &[(String, String)]) -> Result<()> {
        for (n, e) in defs {
            let v = self.eval(e)?;
            self.bind(n, v);
        }
        Ok(())
    }

    pub fn eval(&self, src: &str) -> Result<GradedElement> {
        let tokens = tokenize(src)?;
        let mut parser = Parser { tokens: &tokens, pos: 0, scope: self };
        let v = parser.expr()?;
        if parser.pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input in {src:?}")));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(format!("bad number {s}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || matches!(chars[i], '_' | '\'' | '~')) {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {src:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Tok],
    pos: usize,
    scope: &'a Scope,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn expr(&mut self) -> Result<GradedElement> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc.add(&rhs)? } else { acc.sub(&rhs)? };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<GradedElement> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op('*')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = acc.mul(&rhs)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<GradedElement> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<GradedElement> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(e)) => {
                    self.pos += 1;
                    return Ok(base.pow(e as u32));
                }
                _ => return Err(Error::Parse("exponent must be a number".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<GradedElement> {
        let alg = self.scope.alg;
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(GradedElement::constant(alg, n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.scope.get(&name).cloned().ok_or_else(|| Error::Parse(format!("unknown name {name} in {alg}")))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(Error::Parse("missing )".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn dickson_series_p3() {
        let s = expand_presentation(&ModulePresentation::single(Ring::Named("DA".into()), vec![0]), p(3), 48).unwrap();
        let nz: Vec<(usize, usize)> = s.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (2 * i, c)).collect();
        assert_eq!(nz, vec![(0, 1), (12, 1), (16, 1), (24, 1), (28, 1), (32, 1), (36, 1), (40, 1), (44, 1), (48, 2)]);
    }

    #[test]
    fn ca_is_da_on_powers_of_c() {
        for q in [3, 5, 7, 11, 13] {
            let pr = p(q);
            let ca = expand_presentation(&ModulePresentation::single(Ring::Named("CA".into()), vec![0]), pr, 2000).unwrap();
            let gens: Vec<u32> = (0..=q).map(|j| j * (2 * q - 2)).collect();
            let da = expand_presentation(&ModulePresentation::single(Ring::Named("DA".into()), gens), pr, 2000).unwrap();
            assert_eq!(ca, da, "p={q}");
        }
    }

    #[test]
    fn empty_is_zero() {
        let s = expand_presentation(&ModulePresentation::default(), p(7), 100).unwrap();
        assert!(s.iter().all(|&c| c == 0));
    }

    #[test]
    fn parser() {
        let scope = Scope::new(Algebra::BE(p(7)));
        let a = scope.eval("(y1^2+y2^2)*v^2").unwrap();
        assert_eq!(a.degree(), Some(32));
        let d = scope.eval("(y1*y2^3-y1^3*y2)*v").unwrap();
        assert_eq!(d.degree(), Some(22));
        assert_eq!(scope.eval("-1 + 8").unwrap(), GradedElement::zero(Algebra::BE(p(7))));
        assert!(scope.eval("y1 +").is_err());
        assert!(scope.eval("q").is_err());
        let poly = Scope::new(Algebra::Poly2(p(7)));
        assert!(poly.eval("C").is_err());
    }

    #[test]
    fn c_squared_identity() {
        for q in [3, 5, 7, 13] {
            let s = Scope::new(Algebra::BE(p(q)));
            assert!(s.eval("C^2 - (Y1^2 + Y2^2 - Y1*Y2)").unwrap().is_zero());
        }
    }
}
