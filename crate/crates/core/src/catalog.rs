//! Descriptor files: one TOML document per group, plus the splitting graphs.
//!
//! The shipped files are compiled in; setting `PLFG_CATALOG_DIR` loads every
//! `*.toml` in that directory instead (a `graphs.toml` there is read as the
//! graph file).

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::action::SubgroupIndex;
use crate::error::{Error, Result};
use crate::fusion::{AClass, FusionDescriptor, Sylow, WeylRule};
use crate::gf::{group_closure, named_subgroup, Mat2, MatrixGroup, Prime};
use crate::presentation::ExpectationRecord;
use crate::splitting::SplittingTable;

macro_rules! shipped {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../catalog/", $name)))),*]
    };
}

const SHIPPED: &[(&str, &str)] = shipped![
    "a3-1.toml", "a3-z2.toml", "a3-z2p.toml", "a3-z4.toml", "a3-z8.toml",
    "a3-q8.toml", "a3-d8.toml", "a3-v4.toml", "a3-sd16.toml",
    "e3-1.toml", "e3-z2.toml", "e3-z2p.toml", "e3-z4.toml", "e3-z8.toml",
    "e3-q8.toml", "e3-d8.toml", "e3-v4.toml", "e3-sd16.toml",
    "j4.toml", "2f4-2.toml", "m24.toml", "m12.toml", "f3sq-gl2.toml", "f3sq-sl2.toml",
    "a7-1.toml", "e7-1.toml",
    "e7-3d8.toml", "e7-3sd16.toml", "e7-3sd32.toml", "e7-3s3.toml", "e7-6s3.toml", "e7-6sq2.toml",
    "on.toml", "on2.toml", "rv1.toml", "rv2.toml", "rv3.toml",
    "he.toml", "he2.toml", "fi24p.toml", "fi24.toml",
    "a13-1.toml", "e13-1.toml", "e13-xy.toml", "e13-3x4s4.toml", "m13.toml",
];

const SHIPPED_GRAPHS: &str = include_str!("../catalog/graphs.toml");

#[derive(Deserialize)]
#[serde(untagged)]
enum RawGroup {
    Label(String),
    Matrices(Vec<[[i64; 2]; 2]>),
}

#[derive(Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
enum RawRule {
    Derived,
    DetExtension(Vec<u32>),
    Explicit(RawGroup),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    members: Vec<SubgroupIndex>,
    #[serde(default)]
    radical: bool,
    #[serde(default = "derived")]
    weyl_rule: RawRule,
}

fn derived() -> RawRule {
    RawRule::Derived
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDescriptor {
    id: String,
    #[serde(default)]
    aliases: Vec<String>,
    prime: u32,
    sylow: Sylow,
    #[serde(rename = "weyl_E")]
    weyl_e: Option<RawGroup>,
    #[serde(rename = "weyl_A")]
    weyl_a: Option<RawGroup>,
    #[serde(default)]
    classes: Vec<RawClass>,
    #[serde(default)]
    declared_l1: Option<BTreeMap<String, u32>>,
    #[serde(default)]
    inferred: bool,
    #[serde(default)]
    by_analogy: bool,
    #[serde(default)]
    note: Option<String>,
    #[serde(default)]
    expectations: Option<ExpectationRecord>,
}

fn build_group(p: Prime, g: &RawGroup) -> Result<MatrixGroup> {
    match g {
        RawGroup::Label(l) => named_subgroup(l, p),
        RawGroup::Matrices(ms) => {
            let gens: Vec<Mat2> = ms.iter().map(|[[a, b], [c, d]]| Mat2::new(p, *a, *b, *c, *d)).collect();
            group_closure(p, &gens)
        }
    }
}

/// Parses one descriptor document and validates it.
pub fn parse_descriptor(src: &str) -> Result<FusionDescriptor> {
    let raw: RawDescriptor = toml::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
    let id = raw.id.clone();
    let bad = |msg: String| Error::Descriptor { id: id.clone(), msg };
    let p = Prime::new(raw.prime)?;
    let weyl = match (raw.sylow, &raw.weyl_e, &raw.weyl_a) {
        (Sylow::E, Some(g), None) | (Sylow::A, None, Some(g)) => build_group(p, g)?,
        _ => return Err(bad("exactly one of weyl_E / weyl_A must match the Sylow type".into())),
    };
    let mut classes = Vec::new();
    for c in &raw.classes {
        let rule = match &c.weyl_rule {
            RawRule::Derived => WeylRule::Derived,
            RawRule::DetExtension(t) => WeylRule::DetExtension(t.iter().map(|&x| x % p.get()).collect::<BTreeSet<_>>()),
            RawRule::Explicit(g) => WeylRule::Explicit(build_group(p, g)?),
        };
        classes.push(AClass { members: c.members.clone(), radical: c.radical, rule });
    }
    let declared_l1 = match raw.declared_l1 {
        None => None,
        Some(m) => Some(
            m.into_iter()
                .map(|(k, n)| k.parse::<u32>().map(|k| (k, n)).map_err(|_| bad(format!("bad declared_l1 key {k:?}"))))
                .collect::<Result<BTreeMap<_, _>>>()?,
        ),
    };
    let desc = FusionDescriptor {
        id: raw.id,
        aliases: raw.aliases,
        prime: p,
        sylow: raw.sylow,
        weyl,
        classes,
        declared_l1,
        inferred: raw.inferred,
        by_analogy: raw.by_analogy,
        note: raw.note,
        expectations: raw.expectations,
    };
    desc.validate()?;
    Ok(desc)
}

/// One labelled edge of a splitting graph; an empty `from` is the root.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphEdge {
    pub graph: String,
    #[serde(default)]
    pub from: String,
    pub to: String,
    pub label: String,
}

#[derive(Deserialize)]
struct RawGraphs {
    #[serde(default)]
    edge: Vec<GraphEdge>,
}

pub fn parse_graphs(src: &str) -> Result<Vec<GraphEdge>> {
    let raw: RawGraphs = toml::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(raw.edge)
}

pub struct Catalog {
    descriptors: Vec<FusionDescriptor>,
    edges: Vec<GraphEdge>,
}

impl Catalog {
    pub fn from_sources<'a>(docs: impl IntoIterator<Item = (&'a str, &'a str)>, graphs: Option<&str>) -> Result<Self> {
        let mut descriptors = Vec::new();
        let mut names = BTreeSet::new();
        for (file, src) in docs {
            let d = parse_descriptor(src).map_err(|e| Error::Parse(format!("{file}: {e}")))?;
            for n in std::iter::once(&d.id).chain(&d.aliases) {
                if !names.insert(n.clone()) {
                    return Err(Error::Parse(format!("{file}: name {n} is used twice")));
                }
            }
            descriptors.push(d);
        }
        descriptors.sort_by(|a, b| (a.prime, &a.id).cmp(&(b.prime, &b.id)));
        let edges = match graphs {
            Some(g) => parse_graphs(g)?,
            None => Vec::new(),
        };
        Ok(Catalog { descriptors, edges })
    }

    pub fn shipped() -> Result<Self> {
        Catalog::from_sources(SHIPPED.iter().copied(), Some(SHIPPED_GRAPHS))
    }

    pub fn from_dir(dir: &Path) -> Result<Self> {
        let mut docs = Vec::new();
        let mut graphs = None;
        let entries = std::fs::read_dir(dir).map_err(|e| Error::Parse(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for path in paths {
            if path.extension().is_none_or(|e| e != "toml") {
                continue;
            }
            let src = std::fs::read_to_string(&path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            if path.file_name().is_some_and(|n| n == "graphs.toml") {
                graphs = Some(src);
            } else {
                docs.push((path.display().to_string(), src));
            }
        }
        Catalog::from_sources(docs.iter().map(|(a, b)| (a.as_str(), b.as_str())), graphs.as_deref())
    }

    pub fn descriptors(&self) -> &[FusionDescriptor] {
        &self.descriptors
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn by_prime(&self, p: u32) -> impl Iterator<Item = &FusionDescriptor> {
        self.descriptors.iter().filter(move |d| d.prime.get() == p)
    }

    /// Lookup by id or alias.
    pub fn get(&self, name: &str) -> Result<&FusionDescriptor> {
        self.descriptors.iter().find(|d| d.matches(name)).ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    pub fn graph_names(&self) -> Vec<String> {
        let s: BTreeSet<String> = self.edges.iter().map(|e| e.graph.clone()).collect();
        s.into_iter().collect()
    }

    /// Cumulative splitting of every node of one graph: the wedge of the
    /// labels along the path from the root.
    pub fn graph_splittings(&self, graph: &str) -> Result<BTreeMap<String, SplittingTable>> {
        let edges: Vec<&GraphEdge> = self.edges.iter().filter(|e| e.graph == graph).collect();
        let mut out: BTreeMap<String, SplittingTable> = BTreeMap::new();
        out.insert(String::new(), SplittingTable::default());
        let mut pending = edges.clone();
        while !pending.is_empty() {
            let before = pending.len();
            let mut rest = Vec::new();
            for e in pending {
                match out.get(&e.from).cloned() {
                    Some(base) => {
                        let p = self.get(&e.to)?.prime;
                        let label = SplittingTable::parse(&e.label, p)?;
                        if out.insert(e.to.clone(), base.plus(&label)).is_some() {
                            return Err(Error::Parse(format!("graph {graph}: node {} reached twice", e.to)));
                        }
                    }
                    None => rest.push(e),
                }
            }
            if rest.len() == before {
                return Err(Error::Parse(format!("graph {graph}: edges not connected to the root")));
            }
            pending = rest;
        }
        out.remove("");
        Ok(out)
    }
}

/// The process-wide catalog, loaded on first use.
pub fn catalog() -> Result<&'static Catalog> {
    static CATALOG: OnceLock<std::result::Result<Catalog, String>> = OnceLock::new();
    CATALOG
        .get_or_init(|| {
            match std::env::var_os("PLFG_CATALOG_DIR") {
                Some(dir) => Catalog::from_dir(Path::new(&dir)),
                None => Catalog::shipped(),
            }
            .map_err(|e| e.to_string())
        })
        .as_ref()
        .map_err(|e| Error::Parse(e.clone()))
}

pub fn lookup(name: &str) -> Result<&'static FusionDescriptor> {
    catalog()?.get(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_catalog_loads() {
        let c = Catalog::shipped().unwrap();
        assert_eq!(c.descriptors().len(), SHIPPED.len());
        assert!(c.get("O'N").is_ok());
        assert!(matches!(c.get("nope"), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn rejects_bad_partition() {
        let src = r#"
            id = "bad"
            prime = 3
            sylow = "E"
            weyl_E = "1"
            classes = [{ members = [0, 1] }]
        "#;
        assert!(matches!(parse_descriptor(src), Err(Error::Descriptor { .. })));
    }

    #[test]
    fn rejects_non_orbit_class() {
        let src = r#"
            id = "bad"
            prime = 3
            sylow = "E"
            weyl_E = "Z2w'"
            classes = [
                { members = [0, 1] },
                { members = [2, "inf"] },
            ]
        "#;
        assert!(parse_descriptor(src).is_err());
    }

    #[test]
    fn explicit_matrices() {
        let src = r#"
            id = "t"
            prime = 7
            sylow = "A"
            weyl_A = [[[0, 1], [1, 0]], [[2, 0], [0, 1]]]
        "#;
        let d = parse_descriptor(src).unwrap();
        assert_eq!(d.weyl.order(), 18);
    }
}
