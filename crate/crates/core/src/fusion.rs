//! Fusion data: Weyl groups of the Sylow subgroup and of the subgroups A_i.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::action::{induced_matrix, SubgroupIndex};
use crate::error::{Error, Result};
use crate::gf::{det_preimage, group_closure, unit_subgroup, Mat2, MatrixGroup, Prime};
use crate::presentation::ExpectationRecord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sylow {
    /// The extraspecial group p^{1+2}_+.
    E,
    /// The elementary abelian group (Z/p)^2.
    A,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeylRule {
    /// U extended by the induced action of the stabilizer in the Weyl group of E.
    Derived,
    /// All matrices whose determinant lies in the given subgroup of F_p^*.
    DetExtension(BTreeSet<u32>),
    Explicit(MatrixGroup),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AClass {
    pub members: Vec<SubgroupIndex>,
    pub radical: bool,
    pub rule: WeylRule,
}

impl AClass {
    pub fn representative(&self) -> SubgroupIndex {
        self.members[0]
    }
}

#[derive(Clone, Debug)]
pub struct FusionDescriptor {
    pub id: String,
    pub aliases: Vec<String>,
    pub prime: Prime,
    pub sylow: Sylow,
    /// Weyl group of E or of A, according to `sylow`.
    pub weyl: MatrixGroup,
    pub classes: Vec<AClass>,
    /// L(1, k) multiplicities supplied as data when they cannot be computed.
    pub declared_l1: Option<BTreeMap<u32, u32>>,
    /// Entries not stated in the source and filled in by inference.
    pub inferred: bool,
    /// Results for this descriptor are obtained by analogy with the group case.
    pub by_analogy: bool,
    pub note: Option<String>,
    pub expectations: Option<ExpectationRecord>,
}

impl FusionDescriptor {
    pub fn radical_classes(&self) -> impl Iterator<Item = &AClass> {
        self.classes.iter().filter(|c| c.radical)
    }

    pub fn matches(&self, name: &str) -> bool {
        self.id == name || self.aliases.iter().any(|a| a == name)
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Error::Descriptor { id: self.id.clone(), msg };
        let p = self.prime;
        if self.weyl.prime() != p {
            return Err(err("Weyl group over the wrong field".into()));
        }
        match self.sylow {
            Sylow::A => {
                if !self.classes.is_empty() {
                    return Err(err("A-Sylow descriptors carry no A-classes".into()));
                }
            }
            Sylow::E => {
                if self.weyl.order().is_multiple_of(p.get() as usize) {
                    return Err(err(format!("|W| = {} is divisible by p", self.weyl.order())));
                }
                let mut seen = BTreeSet::new();
                for c in &self.classes {
                    if c.members.is_empty() {
                        return Err(err("empty class".into()));
                    }
                    for m in &c.members {
                        if let SubgroupIndex::Finite(i) = m {
                            if *i >= p.get() {
                                return Err(err(format!("index {i} out of range")));
                            }
                        }
                        if !seen.insert(*m) {
                            return Err(err(format!("index {m} listed twice")));
                        }
                    }
                }
                if seen.len() != p.get() as usize + 1 {
                    return Err(err("classes do not cover all p+1 subgroups".into()));
                }
                a_classes(self)?;
                let sl2 = det_preimage(p, &[1]);
                for c in &self.classes {
                    if c.rule == WeylRule::Derived {
                        let stab = stabilizer(&self.weyl, c.representative());
                        let orbit = orbit(&self.weyl, c.representative());
                        if orbit.len() != c.members.len() || orbit.len() * stab.len() != self.weyl.order() {
                            return Err(err(format!("derived class {:?} is not a single Weyl orbit", c.members)));
                        }
                    }
                    if c.radical && !sl2.is_subgroup_of(&weyl_of_class(self, c)?) {
                        return Err(err(format!("radical class {:?} lacks SL2", c.members)));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The index j with g A_i = A_j.
pub fn mobius_image(g: &Mat2, i: SubgroupIndex) -> SubgroupIndex {
    let p = g.prime();
    let [a, b, c, d] = g.entries();
    let (num, den) = match i {
        SubgroupIndex::Finite(i) => (p.add(c, p.mul(i, d)), p.add(a, p.mul(i, b))),
        SubgroupIndex::Infinity => (d, b),
    };
    if den == 0 {
        SubgroupIndex::Infinity
    } else {
        SubgroupIndex::Finite(p.mul(num, p.inv(den)))
    }
}

pub fn orbit(g: &MatrixGroup, i: SubgroupIndex) -> BTreeSet<SubgroupIndex> {
    g.elements().iter().map(|x| mobius_image(x, i)).collect()
}

pub fn stabilizer(g: &MatrixGroup, i: SubgroupIndex) -> Vec<Mat2> {
    g.elements().iter().copied().filter(|x| mobius_image(x, i) == i).collect()
}

/// Weyl orbits on the p+1 subgroups.
pub fn weyl_orbits(g: &MatrixGroup) -> Vec<BTreeSet<SubgroupIndex>> {
    let mut out: Vec<BTreeSet<SubgroupIndex>> = Vec::new();
    for i in SubgroupIndex::all(g.prime()) {
        if !out.iter().any(|o| o.contains(&i)) {
            out.push(orbit(g, i));
        }
    }
    out
}

/// The class partition, recomputed from Weyl orbits and checked against the
/// declared classes (each declared class must be a union of orbits).
pub fn a_classes(desc: &FusionDescriptor) -> Result<Vec<BTreeSet<SubgroupIndex>>> {
    if desc.sylow != Sylow::E {
        return Err(Error::Invalid(format!("{} has no A-subgroup classes", desc.id)));
    }
    let orbits = weyl_orbits(&desc.weyl);
    let mut out = Vec::new();
    for c in &desc.classes {
        let members: BTreeSet<SubgroupIndex> = c.members.iter().copied().collect();
        let merged: BTreeSet<SubgroupIndex> =
            orbits.iter().filter(|o| !o.is_disjoint(&members)).flat_map(|o| o.iter().copied()).collect();
        if merged != members {
            return Err(Error::Descriptor {
                id: desc.id.clone(),
                msg: format!("declared class {members:?} is not a union of Weyl orbits"),
            });
        }
        out.push(merged);
    }
    Ok(out)
}

/// Weyl group of A_i for the class representative, in the basis (c, ab^i).
pub fn weyl_of_class(desc: &FusionDescriptor, class: &AClass) -> Result<MatrixGroup> {
    let p = desc.prime;
    let g = match &class.rule {
        WeylRule::Derived => {
            let i = class.representative();
            let mut gens = vec![Mat2::new(p, 1, 1, 0, 1)];
            let mut induced: Vec<Mat2> = stabilizer(&desc.weyl, i).iter().map(|g| induced_matrix(g, i)).collect();
            induced.sort();
            induced.dedup();
            gens.extend(induced.into_iter().filter(|m| *m != Mat2::identity(p)));
            group_closure(p, &gens)?
        }
        WeylRule::DetExtension(t) => {
            let t: Vec<u32> = unit_subgroup(p, &t.iter().copied().collect::<Vec<_>>()).into_iter().collect();
            det_preimage(p, &t)
        }
        WeylRule::Explicit(g) => g.clone(),
    };
    Ok(g)
}

/// Generators for the membership test: for det-extensions the SL2
/// generators plus one diagonal element per generator of T.
pub fn weyl_generators(desc: &FusionDescriptor, class: &AClass) -> Result<Vec<Mat2>> {
    let p = desc.prime;
    match &class.rule {
        WeylRule::DetExtension(t) => {
            let mut gens = vec![Mat2::new(p, 1, 1, 0, 1), Mat2::new(p, 1, 0, 1, 1)];
            gens.extend(t.iter().filter(|&&x| x != 1).map(|&x| Mat2::diag(p, 1, x as i64)));
            Ok(gens)
        }
        _ => Ok(weyl_of_class(desc, class)?.generators().to_vec()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::named_subgroup;

    fn idx(s: &[&str]) -> BTreeSet<SubgroupIndex> {
        s.iter().map(|x| x.parse().unwrap()).collect()
    }

    #[test]
    fn mobius_examples() {
        let p = Prime::new(13).unwrap();
        let x = Mat2::diag(p, 3, 9);
        let g = group_closure(p, &[x]).unwrap();
        assert_eq!(orbit(&g, SubgroupIndex::Finite(1)), idx(&["1", "3", "9"]));
        for i in SubgroupIndex::all(p) {
            assert_eq!(mobius_image(&Mat2::identity(p), i), i);
        }
    }

    #[test]
    fn he_orbits() {
        let p = Prime::new(7).unwrap();
        let o = weyl_orbits(&named_subgroup("3S3", p).unwrap());
        assert_eq!(o, vec![idx(&["0", "inf"]), idx(&["1", "2", "4"]), idx(&["3", "5", "6"])]);
    }

    #[test]
    fn orbit_is_action() {
        // mobius_image(gh, i) = mobius_image(g, mobius_image(h, i))
        let p = Prime::new(7).unwrap();
        let gl = named_subgroup("GL2", p).unwrap();
        let els = gl.elements();
        for (n, g) in els.iter().enumerate().step_by(37) {
            let h = &els[(n * 11 + 5) % els.len()];
            for i in SubgroupIndex::all(p) {
                assert_eq!(mobius_image(&g.mul(h), i), mobius_image(g, mobius_image(h, i)));
            }
        }
    }
}
