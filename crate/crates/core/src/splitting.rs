//! Stable splitting multiplicities of BG.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::cohomology::engine;
use crate::error::{Error, Result};
use crate::fusion::{weyl_of_class, FusionDescriptor, Sylow};
use crate::gf::Prime;
use crate::graded::SimpleModuleSpec;
use crate::invariants::{averaging_rank, fixed_module_dim};

/// Multiplicities of X_{q,k} (or X~_{q,k}), L(2,k) and L(1,k); only nonzero
/// entries are stored. The L(1, p-1) summand is kept in slot 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SplittingTable {
    pub tilde: bool,
    pub dominant: BTreeMap<(u32, u32), u32>,
    pub l2: BTreeMap<u32, u32>,
    pub l1: BTreeMap<u32, u32>,
}

fn bump<K: Ord>(m: &mut BTreeMap<K, u32>, k: K, n: u32) {
    if n > 0 {
        *m.entry(k).or_insert(0) += n;
    }
}

impl SplittingTable {
    /// Componentwise sum.
    pub fn plus(&self, other: &SplittingTable) -> SplittingTable {
        let mut out = self.clone();
        for (&k, &n) in &other.dominant {
            bump(&mut out.dominant, k, n);
        }
        for (&k, &n) in &other.l2 {
            bump(&mut out.l2, k, n);
        }
        for (&k, &n) in &other.l1 {
            bump(&mut out.l1, k, n);
        }
        out.tilde |= other.tilde;
        out
    }

    /// Same multiplicities, ignoring the X / X~ notation.
    pub fn same_counts(&self, other: &SplittingTable) -> bool {
        self.dominant == other.dominant && self.l2 == other.l2 && self.l1 == other.l1
    }

    /// Wedge string: dominant by (q,k), then M(2), then L(2,k), then L(1,k).
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        let term = |n: u32, s: String| if n == 1 { s } else { format!("{n}{s}") };
        let x = if self.tilde { "X~" } else { "X" };
        for (&(q, k), &n) in &self.dominant {
            parts.push(term(n, format!("{x}({q},{k})")));
        }
        let l20 = self.l2.get(&0).copied().unwrap_or(0);
        let l10 = self.l1.get(&0).copied().unwrap_or(0);
        let m2 = l20.min(l10);
        if m2 > 0 {
            parts.push(term(m2, "M(2)".into()));
        }
        for (&k, &n) in &self.l2 {
            let n = if k == 0 { n - m2 } else { n };
            if n > 0 {
                parts.push(term(n, format!("L(2,{k})")));
            }
        }
        for (&k, &n) in &self.l1 {
            let n = if k == 0 { n - m2 } else { n };
            if n > 0 {
                parts.push(term(n, format!("L(1,{k})")));
            }
        }
        parts.join(" v ")
    }

    /// Parses a wedge string such as `X(0,0) v 2X(4,4) v M(2) v L(2,2)`.
    /// Terms may be separated by ` v ` or `∨`; `X~` marks the A-Sylow notation.
    /// `L(1,p-1)` is folded into slot 0.
    pub fn parse(s: &str, p: Prime) -> Result<SplittingTable> {
        let mut out = SplittingTable::default();
        let bad = |t: &str| Error::Parse(format!("bad summand {t:?} in {s:?}"));
        let normalized = s.replace('∨', " v ");
        for raw in normalized.split(" v ") {
            let t: String = raw.chars().filter(|c| !c.is_whitespace()).collect();
            if t.is_empty() {
                continue;
            }
            let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
            let n: u32 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| bad(&t))? };
            let rest = &t[digits.len()..];
            let open = rest.find('(').ok_or_else(|| bad(&t))?;
            let name = &rest[..open];
            let args: Vec<u32> = rest[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| bad(&t))?
                .split(',')
                .map(|a| a.parse().map_err(|_| bad(&t)))
                .collect::<Result<_>>()?;
            match (name, args.as_slice()) {
                ("X", [q, k]) => bump(&mut out.dominant, (*q, *k), n),
                ("X~", [q, k]) => {
                    out.tilde = true;
                    bump(&mut out.dominant, (*q, *k), n)
                }
                ("M", [2]) => {
                    bump(&mut out.l2, 0, n);
                    bump(&mut out.l1, 0, n);
                }
                ("L", [2, k]) => bump(&mut out.l2, *k, n),
                ("L", [1, k]) => bump(&mut out.l1, if *k == p.get() - 1 { 0 } else { *k }, n),
                _ => return Err(bad(&t)),
            }
        }
        Ok(out)
    }

    /// `[[q,k,n]]`, `[[k,m]]`, `[[k,m]]` for machine-readable output.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dominant": self.dominant.iter().map(|(&(q, k), &n)| [q, k, n]).collect::<Vec<_>>(),
            "l2": self.l2.iter().map(|(&k, &m)| [k, m]).collect::<Vec<_>>(),
            "l1": self.l1.iter().map(|(&k, &m)| [k, m]).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for SplittingTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

pub fn dominant_multiplicities(desc: &FusionDescriptor) -> BTreeMap<(u32, u32), u32> {
    let q = desc.prime.get();
    let mut out = BTreeMap::new();
    for s in 0..q {
        for k in 0..q - 1 {
            let spec = SimpleModuleSpec { q: s, k };
            let n = match desc.sylow {
                Sylow::E => fixed_module_dim(&desc.weyl, spec),
                Sylow::A => averaging_rank(&desc.weyl, spec),
            };
            bump(&mut out, (s, k), n as u32);
        }
    }
    out
}

/// Per-class averaging ranks on M_{p-1,k}: `ranks[class][k]`.
pub fn class_ranks(desc: &FusionDescriptor) -> Result<Vec<Vec<u32>>> {
    let q = desc.prime.get();
    desc.classes
        .iter()
        .map(|c| {
            let w = weyl_of_class(desc, c)?;
            Ok((0..q - 1).map(|k| averaging_rank(&w, SimpleModuleSpec { q: q - 1, k }) as u32).collect())
        })
        .collect()
}

pub fn l2_multiplicities(desc: &FusionDescriptor) -> Result<BTreeMap<u32, u32>> {
    let mut out = BTreeMap::new();
    if desc.sylow == Sylow::A {
        return Ok(out);
    }
    for (c, ranks) in desc.classes.iter().zip(class_ranks(desc)?) {
        if c.radical && ranks.iter().any(|&r| r != 0) {
            return Err(Error::Inconsistent(format!(
                "{}: radical class {:?} has nonzero averaging rank",
                desc.id, c.members
            )));
        }
        for (k, r) in ranks.into_iter().enumerate() {
            bump(&mut out, k as u32, r);
        }
    }
    let nonradical = desc.classes.iter().filter(|c| !c.radical).count() as u32;
    let m0 = out.get(&0).copied().unwrap_or(0);
    if m0 != nonradical {
        return Err(Error::Inconsistent(format!(
            "{}: rank sum gives m(2)_0 = {m0}, class count gives {nonradical}",
            desc.id
        )));
    }
    Ok(out)
}

pub fn l1_multiplicities(desc: &FusionDescriptor, l2: &BTreeMap<u32, u32>) -> Result<BTreeMap<u32, u32>> {
    let q = desc.prime.get();
    let mut out = BTreeMap::new();
    match desc.sylow {
        Sylow::E => {
            let eng = engine(desc)?;
            for k in 1..q - 1 {
                bump(&mut out, k, eng.dim(2 * k)? as u32);
            }
            let slot0 = l2.get(&0).copied().unwrap_or(0);
            let top = eng.dim(2 * (q - 1))? as u32;
            if top != slot0 {
                return Err(Error::Inconsistent(format!(
                    "{}: dim H^{} = {top} but #classes - #radical = {slot0}",
                    desc.id,
                    2 * (q - 1)
                )));
            }
            bump(&mut out, 0, slot0);
        }
        Sylow::A => {
            if desc.weyl.order().is_multiple_of(q as usize) {
                return desc.declared_l1.clone().ok_or_else(|| {
                    Error::OutOfScope(format!("L(1,k) counts for {}: p divides |W| and none are declared", desc.id))
                });
            }
            let eng = engine(desc)?;
            for k in 1..q {
                bump(&mut out, k % (q - 1), eng.dim(2 * k)? as u32);
            }
        }
    }
    Ok(out)
}

pub fn full_splitting(desc: &FusionDescriptor) -> Result<SplittingTable> {
    let dominant = dominant_multiplicities(desc);
    let l2 = l2_multiplicities(desc)?;
    let l1 = l1_multiplicities(desc, &l2)?;
    Ok(SplittingTable { tilde: desc.sylow == Sylow::A, dominant, l2, l1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_render_roundtrip() {
        let p = Prime::new(13).unwrap();
        let s = "X(0,0) v X(12,0) v X(12,6) v X(6,3) v X(8,8) v M(2)";
        let t = SplittingTable::parse(s, p).unwrap();
        assert_eq!(t.dominant.len(), 5);
        assert_eq!(t.render(), "X(0,0) v X(6,3) v X(8,8) v X(12,0) v X(12,6) v M(2)");
        assert_eq!(SplittingTable::parse(&t.render(), p).unwrap(), t);
        let u = SplittingTable::parse("2X~(1,0) ∨ L(1,12) ∨ 3L(2,4)", p).unwrap();
        assert!(u.tilde);
        assert_eq!(u.l1.get(&0), Some(&1));
        assert_eq!(u.render(), "2X~(1,0) v 3L(2,4) v L(1,0)");
        assert!(SplittingTable::parse("Y(1,2)", p).is_err());
    }
}
